#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <string>

#include "ontic/algebra.hpp"
#include "ontic/config.hpp"
#include "ontic/errors.hpp"
#include "ontic/joint.hpp"

namespace ontic {

/// Documented default seed for every randomized entry point. Override
/// per call, or per process with the ONTIC_SEED environment variable
/// (handled by the command-line tool).
inline constexpr std::uint64_t kDefaultSeed = 1729;

/// Deterministic random source: a fixed, portable generator plus
/// rejection sampling, so identical seeds give identical transcripts
/// on every platform.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed = kDefaultSeed) : gen_(seed) {}

  std::uint64_t next() { return gen_(); }

  /// Uniform draw from {0, ..., n-1}, unbiased.
  std::uint32_t uniform(std::uint32_t n) {
    if (n == 0) throw Error("uniform(0)");
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n + 1) % n;
    std::uint64_t v = gen_();
    while (v > limit) v = gen_();
    return static_cast<std::uint32_t>(v % n);
  }

 private:
  std::mt19937_64 gen_;
};

/// What to measure: one system against a domain, or a pair against a
/// correlated domain of disjointness (same local basis on both
/// systems, or the crossed one).
struct MeasurementSpec {
  enum class Scope : std::uint8_t { Local, GlobalSameBasis, GlobalCrossBasis };

  Scope scope = Scope::Local;
  int system = 0;  // 1 or 2 when measuring one side of a pair
  Domain domain = Domain::X;
  Domain pair_first = Domain::X;
  Domain pair_second = Domain::X;

  static MeasurementSpec local(Domain d, int system = 0) {
    MeasurementSpec s;
    s.scope = Scope::Local;
    s.domain = d;
    s.system = system;
    return s;
  }

  static MeasurementSpec global_same(Domain a, Domain b) {
    MeasurementSpec s;
    s.scope = Scope::GlobalSameBasis;
    s.pair_first = a;
    s.pair_second = b;
    return s;
  }

  static MeasurementSpec global_cross(Domain a = Domain::X, Domain b = Domain::Y) {
    MeasurementSpec s;
    s.scope = Scope::GlobalCrossBasis;
    s.pair_first = a;
    s.pair_second = b;
    return s;
  }

  /// Parses the test names accepted on the command line:
  /// Mx | My | Mz | Mt | Mc-ii:ab | Mc-ij.
  static MeasurementSpec from_test_name(const std::string& name, const ModelConfig& config) {
    if (name.size() == 2 && name[0] == 'M') {
      auto d = domain_from_char(name[1]);
      if (d) {
        if (!config.has_domain(*d))
          throw UnknownDomainError("domain '" + std::string(1, name[1]) +
                                   "' is not part of the active config");
        return local(*d);
      }
    }
    if (name.rfind("Mc-ii:", 0) == 0 && name.size() == 8) {
      auto a = domain_from_char(name[6]);
      auto b = domain_from_char(name[7]);
      if (a && b) {
        if (!config.has_domain(*a) || !config.has_domain(*b))
          throw UnknownDomainError("test '" + name + "' uses a domain outside the config");
        if (*a != *b)
          throw Error("Mc-ii takes one domain twice; use Mc-ij for crossed bases");
        return global_same(*a, *b);
      }
    }
    if (name == "Mc-ij") {
      if (!config.has_domain(Domain::X) || !config.has_domain(Domain::Y))
        throw UndefinedForVariantError("Mc-ij needs domains x and y");
      return global_cross(Domain::X, Domain::Y);
    }
    throw Error("unknown test '" + name + "' (expected Mx|My|Mz|Mt|Mc-ii:ab|Mc-ij)");
  }

  std::string name() const {
    switch (scope) {
      case Scope::Local:
        return std::string("M") + domain_char(domain);
      case Scope::GlobalSameBasis:
        return std::string("Mc-ii:") + domain_char(pair_first) + domain_char(pair_second);
      case Scope::GlobalCrossBasis:
        return "Mc-ij";
    }
    return "?";
  }
};

struct SingleMeasurement {
  int outcome;        // basis index answered
  SignedState post;
  bool conclusive;    // true when the pre-measurement state fixed the answer
};

/// Measures one system against a domain. Inside the state's own domain
/// the answer and the post state are the state itself; against any
/// other domain the answer is an unbiased coin and the post state is
/// the answering basis state.
inline SingleMeasurement measure(const SignedState& state, Domain basis, RandomSource& rng,
                                 const ModelConfig& config) {
  if (state.is_null()) throw IllFormedError("the null state cannot be measured");
  if (!config.has_domain(basis))
    throw UnknownDomainError(std::string("domain '") + domain_char(basis) +
                             "' is not part of the active config");
  if (state.body->domain == basis)
    return {state.body->index, state, true};
  const int outcome = static_cast<int>(rng.uniform(2));
  return {outcome, SignedState::of(+1, BasisState{basis, static_cast<std::uint8_t>(outcome)}),
          false};
}

struct JointMeasurement {
  int outcome;                         // index into outcome_classes
  JointCanonical post;
  bool conclusive;
  std::array<int, 4> outcome_classes;  // class ids, order C+,C-,A+,A- at the primary slot
};

/// Measures a pair against a correlated domain of disjointness. A
/// member state answers deterministically and is unchanged; any other
/// pair state answers uniformly over the four members and collapses to
/// the answer.
inline JointMeasurement measure_global(const JointCanonical& state, Domain a, Domain b,
                                       std::optional<int> kind, RandomSource& rng,
                                       const ModelConfig& config) {
  if (state.is_null()) throw IllFormedError("the null state cannot be measured");
  const JointContext& ctx = JointContext::get(config);
  const auto dom = ctx.find_correlated_domain(a, b, kind);
  if (!dom)
    throw NoRepresentationError("no correlated domain over (" +
                                std::string(1, domain_char(a)) + "," +
                                std::string(1, domain_char(b)) + ")");
  const auto& classes = ctx.correlated_domains()[*dom].classes;
  if (state.is_correlated()) {
    const int cls = ctx.class_of(state.as_correlated());
    for (int i = 0; i < 4; ++i)
      if (classes[i] == cls) return {i, state, true, classes};
  }
  const int outcome = static_cast<int>(rng.uniform(4));
  return {outcome, JointCanonical::correlated(+1, ctx.cls(classes[outcome]).rep), false, classes};
}

struct LocalOnJoint {
  int outcome;          // basis index seen on the measured system
  JointCanonical post;  // product; the derivation's sign is kept
  bool conclusive;
};

/// Measures one system of a pair against a domain. A correlated state
/// is first spelled over the pair whose measured side is that domain;
/// the two defining products are the equally likely posts, so the
/// unmeasured system ends correlated with the answer.
inline LocalOnJoint measure_local_on_joint(const JointCanonical& state, int system, Domain basis,
                                           RandomSource& rng, const ModelConfig& config) {
  if (system != 1 && system != 2)
    throw ScopeMismatchError("joint states have systems 1 and 2");
  if (state.is_null()) throw IllFormedError("the null state cannot be measured");
  if (!config.has_domain(basis))
    throw UnknownDomainError(std::string("domain '") + domain_char(basis) +
                             "' is not part of the active config");

  if (state.is_product()) {
    const JointBasisState& p = state.as_product();
    const BasisState& target = system == 1 ? p.first : p.second;
    if (target.domain == basis) return {target.index, state, true};
    const int outcome = static_cast<int>(rng.uniform(2));
    JointBasisState out = p;
    (system == 1 ? out.first : out.second) =
        BasisState{basis, static_cast<std::uint8_t>(outcome)};
    return {outcome, JointCanonical::product(state.sign, out), false};
  }

  const JointContext& ctx = JointContext::get(config);
  const CorrSpelling& rep = state.as_correlated();
  const auto& members = ctx.cls(ctx.class_of(rep)).members;
  const std::pair<CorrSpelling, int>* found = nullptr;
  for (const auto& m : members) {
    const Domain side = system == 1 ? m.first.first : m.first.second;
    if (side == basis) {
      found = &m;
      break;
    }
  }
  if (!found)
    throw NoRepresentationError("no spelling of " + to_string(rep) + " measures system " +
                                std::to_string(system) + " in domain '" +
                                std::string(1, domain_char(basis)) + "'");
  const ProductSet set = expand_spelling(found->first).scaled(state.sign * found->second);
  const int outcome = static_cast<int>(rng.uniform(2));
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      if (set.at(i, j) == 0) continue;
      if ((system == 1 ? i : j) != outcome) continue;
      return {outcome,
              JointCanonical::product(set.at(i, j),
                                      {BasisState{set.first, static_cast<std::uint8_t>(i)},
                                       BasisState{set.second, static_cast<std::uint8_t>(j)}}),
              false};
    }
  }
  throw Error("correlated spelling lacks an answer for the drawn outcome");
}

/// Dispatch by spec scope; local specs with a system index address one
/// side of a pair.
inline JointMeasurement measure(const JointCanonical& state, const MeasurementSpec& spec,
                                RandomSource& rng, const ModelConfig& config) {
  if (spec.scope == MeasurementSpec::Scope::GlobalSameBasis)
    return measure_global(state, spec.pair_first, spec.pair_second, std::nullopt, rng, config);
  if (spec.scope == MeasurementSpec::Scope::GlobalCrossBasis) {
    if (spec.pair_first == spec.pair_second)
      throw Error("crossed-basis measurement takes two different domains");
    return measure_global(state, spec.pair_first, spec.pair_second, std::nullopt, rng, config);
  }
  throw ScopeMismatchError("local specs measure one system; use measure_local_on_joint");
}

}  // namespace ontic
