#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "ontic/config.hpp"
#include "ontic/domain.hpp"
#include "ontic/errors.hpp"
#include "ontic/joint.hpp"

namespace ontic {

/// Reversible map on signed states built from two primitives: swapping
/// the two states of selected domains (with a compensating sign flip
/// on |1> of the complementary domains, which keeps the map consistent
/// with every rewrite edge) and relabeling a domain pair. Composites
/// apply right to left.
class Transformation {
 public:
  static Transformation identity() { return Transformation("I", {}); }

  /// Permutes |0> <-> |1> inside each listed domain and flips the sign
  /// of |1> in each complementary domain.
  static Transformation permutation(std::string name, std::vector<Domain> permuted,
                                    std::vector<Domain> sign_flipped) {
    Step s;
    s.permuted = std::move(permuted);
    s.sign_flipped = std::move(sign_flipped);
    return Transformation(std::move(name), {s});
  }

  /// Relabels two domains into each other, indices and signs kept.
  static Transformation relabel(std::string name, Domain a, Domain b) {
    Step s;
    s.relabel_a = a;
    s.relabel_b = b;
    s.relabels = true;
    return Transformation(std::move(name), {s});
  }

  /// `after * before`: `before` acts first.
  static Transformation compose(const Transformation& after, const Transformation& before) {
    std::vector<Step> steps = after.steps_;
    steps.insert(steps.end(), before.steps_.begin(), before.steps_.end());
    return Transformation(after.name_ + before.name_, std::move(steps));
  }

  /// The transformations defined for a variant, by name. Two-domain:
  /// I, Px, Py, PyPx, T. Four-domain: I, Pxz, Pyt, PytPxz (single
  /// domains cannot permute alone there).
  static Transformation named(const std::string& name, const ModelConfig& config) {
    for (const Transformation& t : defined_for(config))
      if (t.name() == name) return t;
    throw UndefinedForVariantError("transformation '" + name + "' is not defined for the " +
                                   to_string(config.variant()) + " variant");
  }

  static std::vector<Transformation> defined_for(const ModelConfig& config) {
    switch (config.variant()) {
      case Variant::TwoDomain: {
        const Transformation px = permutation("Px", {Domain::X}, {Domain::Y});
        const Transformation py = permutation("Py", {Domain::Y}, {Domain::X});
        return {identity(), px, py, compose(py, px),
                relabel("T", Domain::X, Domain::Y)};
      }
      case Variant::FourDomain: {
        const Transformation pxz =
            permutation("Pxz", {Domain::X, Domain::Z}, {Domain::Y, Domain::T});
        const Transformation pyt =
            permutation("Pyt", {Domain::Y, Domain::T}, {Domain::X, Domain::Z});
        return {identity(), pxz, pyt, compose(pyt, pxz)};
      }
      case Variant::ThreeDomainFrustrated:
        return {identity()};
    }
    throw Error("unknown variant");
  }

  /// The four message encodings used by the pair protocols, in message
  /// order 00, 01, 10, 11.
  static std::vector<Transformation> coding_set(const ModelConfig& config) {
    const std::vector<Transformation> all = defined_for(config);
    if (all.size() < 4)
      throw UndefinedForVariantError("the " + to_string(config.variant()) +
                                     " variant has no coding transformation set");
    return {all[0], all[1], all[2], all[3]};
  }

  const std::string& name() const { return name_; }

  SignedState apply(const SignedState& s, const ModelConfig& config) const {
    if (s.is_null()) return s;
    SignedState out = s;
    for (auto it = steps_.rbegin(); it != steps_.rend(); ++it)
      out = it->apply(out, config);
    return out;
  }

  /// Acts on one system of a joint value. A correlated state is
  /// carried through its representative's defining product set.
  JointCanonical apply_local(const JointCanonical& v, int system, const ModelConfig& config) const {
    if (system != 1 && system != 2)
      throw ScopeMismatchError("joint states have systems 1 and 2");
    if (v.is_null()) return v;
    if (v.is_product()) {
      const JointBasisState& p = v.as_product();
      const SignedState f =
          apply(SignedState::of(+1, system == 1 ? p.first : p.second), config);
      JointBasisState out = p;
      (system == 1 ? out.first : out.second) = *f.body;
      return JointCanonical::product(v.sign * f.sign, out);
    }
    const JointContext& ctx = JointContext::get(config);
    const CorrSpelling& rep = v.as_correlated();
    const ProductSet set = expand_spelling(rep).scaled(v.sign);
    // Transform the chosen side of both defining products, then read
    // the two-product set back as a spelling of the same kind.
    struct Element {
      int sign;
      BasisState first, second;
    };
    std::vector<Element> elems;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        if (set.at(i, j) != 0)
          elems.push_back({set.at(i, j),
                           BasisState{set.first, static_cast<std::uint8_t>(i)},
                           BasisState{set.second, static_cast<std::uint8_t>(j)}});
    ProductSet out{};
    bool first_elem = true;
    for (Element& e : elems) {
      SignedState moved = apply(SignedState::of(+1, system == 1 ? e.first : e.second), config);
      e.sign *= moved.sign;
      (system == 1 ? e.first : e.second) = *moved.body;
      if (first_elem) {
        out.first = e.first.domain;
        out.second = e.second.domain;
        first_elem = false;
      }
      if (e.first.domain != out.first || e.second.domain != out.second)
        throw IllFormedError("transformation split a correlated state across pairs");
      out.put(e.first.index, e.second.index, e.sign);
    }
    const auto [sg, sp] = read_spelling(out, rep.kind);
    return ctx.canonical_of_spelling(sg, sp);
  }

 private:
  struct Step {
    std::vector<Domain> permuted;
    std::vector<Domain> sign_flipped;
    bool relabels = false;
    Domain relabel_a = Domain::X, relabel_b = Domain::Y;

    SignedState apply(const SignedState& s, const ModelConfig& config) const {
      BasisState b = *s.body;
      int sign = s.sign;
      if (relabels) {
        if (!config.has_domain(relabel_a) || !config.has_domain(relabel_b))
          throw UndefinedForVariantError("relabeled domain outside the active config");
        if (b.domain == relabel_a)
          b.domain = relabel_b;
        else if (b.domain == relabel_b)
          b.domain = relabel_a;
        return SignedState::of(sign, b);
      }
      if (std::find(permuted.begin(), permuted.end(), b.domain) != permuted.end())
        b.index ^= 1;
      else if (std::find(sign_flipped.begin(), sign_flipped.end(), b.domain) !=
                   sign_flipped.end() &&
               b.index == 1)
        sign = -sign;
      return SignedState::of(sign, b);
    }
  };

  Transformation(std::string name, std::vector<Step> steps)
      : name_(std::move(name)), steps_(std::move(steps)) {}

  std::string name_;
  std::vector<Step> steps_;
};

}  // namespace ontic
