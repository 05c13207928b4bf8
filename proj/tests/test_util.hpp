#pragma once

#include <random>
#include <vector>

#include "ontic/expr.hpp"

namespace ontic::testutil {

/// Uniform random expression trees over the full grammar. Domains come
/// from `domains` so a config-checked parse accepts the rendering.
class ExprGen {
 public:
  ExprGen(std::uint64_t seed, std::vector<Domain> domains)
      : rng_(seed), domains_(std::move(domains)) {}

  ExprPtr tree(int max_depth) {
    if (max_depth <= 0 || draw(5) == 0) return leaf();
    switch (draw(5)) {
      case 0:
      case 1:
      case 2:
        return make_superpose(1 + static_cast<int>(draw(3)), draw(2) ? +1 : -1,
                              tree(max_depth - 1), tree(max_depth - 1));
      case 3:
        return make_product(tree(max_depth - 1), tree(max_depth - 1));
      default:
        return leaf();
    }
  }

 private:
  ExprPtr leaf() {
    switch (draw(8)) {
      case 0:
        return make_null();
      case 1:
      case 2: {
        const CorrSpelling s{draw(2) ? Parity::C : Parity::A, draw(2) ? +1 : -1,
                             1 + static_cast<int>(draw(2)), domain(), domain()};
        return make_corr(draw(2) ? +1 : -1, s);
      }
      default:
        return make_ket(draw(2) ? +1 : -1, static_cast<int>(draw(2)), domain());
    }
  }

  Domain domain() { return domains_[draw(domains_.size())]; }
  std::uint64_t draw(std::uint64_t n) { return rng_() % n; }

  std::mt19937_64 rng_;
  std::vector<Domain> domains_;
};

}  // namespace ontic::testutil
