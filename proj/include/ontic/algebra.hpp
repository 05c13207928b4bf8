#pragma once

#include <optional>
#include <vector>

#include "ontic/config.hpp"
#include "ontic/domain.hpp"
#include "ontic/errors.hpp"
#include "ontic/expr.hpp"

namespace ontic {

/// Superposes two canonical single-system values. Rules, applied in
/// order:
///   - null absorbs: c(null,null) = null, c_op(s,null) = s,
///     c_op(null,s) = (op)s;
///   - operands must share a domain;
///   - signs factor out: (-1)c_op(s,t) = c_op(-s,-t), so the result is
///     lhs.sign * c_{op*sign(l)*sign(r)}(|l|,|r|);
///   - equal bodies: c_+(s,s) = s, c_-(s,s) = null;
///   - opposite bodies in argument order (|1>,|0>): kinds 1 and 2
///     commute up to the sign of the operation (c_- anticommutes);
///     kind 3 swaps into the opposite operation sign with no factor;
///   - the ordered pair (|0>,|1>) rewrites along the map edge of the
///     operation's kind leaving the shared domain.
inline SignedState superpose_single(int kind, int op_sign, const SignedState& lhs,
                                    const SignedState& rhs, const ModelConfig& config) {
  if (lhs.is_null() && rhs.is_null()) return SignedState::null();
  if (rhs.is_null()) return lhs;
  if (lhs.is_null()) return SignedState::of(op_sign * rhs.sign, *rhs.body);

  const BasisState bl = *lhs.body;
  const BasisState br = *rhs.body;
  if (bl.domain != br.domain)
    throw IllFormedError("superposition of states from different domains: " +
                         to_string(bl) + " vs " + to_string(br));

  int overall = lhs.sign;
  int eff = op_sign * lhs.sign * rhs.sign;

  if (bl == br) {
    if (eff > 0) return SignedState::of(overall, bl);
    return SignedState::null();
  }

  // Opposite states of one domain. Normalize to (|0>, |1>).
  if (bl.index == 1) {
    if (kind == 3) {
      eff = -eff;  // c_{+3}(s,t) = c_{-3}(t,s)
    } else if (eff < 0) {
      overall = -overall;  // c_- anticommutes
    }
  }

  const MapEdge* edge = config.edge(kind, bl.domain);
  if (!edge)
    throw UnknownEdgeError("no kind-" + std::to_string(kind) + " edge leaves domain '" +
                           std::string(1, domain_char(bl.domain)) + "'");
  const std::uint8_t image = eff > 0 ? edge->image_plus : edge->image_minus;
  return SignedState::of(overall, BasisState{edge->target, image});
}

inline bool is_joint_expr(const Expr& e) {
  switch (e.node) {
    case Expr::Node::Ket:
    case Expr::Node::Null:
      return false;
    case Expr::Node::Corr:
    case Expr::Node::Product:
      return true;
    case Expr::Node::Superpose:
      return is_joint_expr(*e.lhs) || is_joint_expr(*e.rhs);
  }
  return false;
}

/// Rewrites a single-system expression to its canonical value: a
/// signed basis state or null. Innermost-first; every subexpression is
/// canonical before its parent rewrites.
inline SignedState canonicalize(const Expr& e, const ModelConfig& config) {
  switch (e.node) {
    case Expr::Node::Ket:
      if (!config.has_domain(e.ket.domain))
        throw UnknownDomainError(std::string("domain '") + domain_char(e.ket.domain) +
                                 "' is not part of the active config");
      return SignedState::of(e.sign, e.ket);
    case Expr::Node::Null:
      return SignedState::null();
    case Expr::Node::Corr:
    case Expr::Node::Product:
      throw ScopeMismatchError("joint expression in single-system canonicalization");
    case Expr::Node::Superpose:
      return superpose_single(e.op_kind, e.op_sign, canonicalize(*e.lhs, config),
                              canonicalize(*e.rhs, config), config);
  }
  throw Error("unreachable expression node");
}

inline SignedState canonicalize(const ExprPtr& e, const ModelConfig& config) {
  return canonicalize(*e, config);
}

/// Two ontic states are disjoint exactly when they are the two states
/// of one domain. Null is disjoint from nothing.
inline bool are_disjoint(const SignedState& a, const SignedState& b) {
  if (a.is_null() || b.is_null()) return false;
  return a.body->domain == b.body->domain && a.body->index != b.body->index;
}

/// Probability that a measurement prepared on `a` answers `b`: 1 for
/// the same ontic state, 0 for disjoint states, 1/2 across domains.
inline Fraction overlap_probability(const SignedState& a, const SignedState& b) {
  if (a.is_null() || b.is_null())
    throw IllFormedError("the null state has no overlap probability");
  if (a.body->domain != b.body->domain) return Fraction{1, 2};
  return a.body->index == b.body->index ? Fraction{1, 1} : Fraction{0, 1};
}

/// How |i>_d expands one level down: |i>_d = |0>_s op_k |1>_s along
/// the unique kind-k edge into d.
struct Decomposition {
  Domain source;
  int op_sign;
};

inline std::optional<Decomposition> decompose(const BasisState& s, int kind,
                                              const ModelConfig& config) {
  const MapEdge* e = config.edge_into(kind, s.domain);
  if (!e) return std::nullopt;
  return Decomposition{e->source, s.index == e->image_plus ? +1 : -1};
}

inline std::vector<BasisState> all_basis_states(const ModelConfig& config) {
  std::vector<BasisState> out;
  for (Domain d : config.domains())
    for (std::uint8_t i = 0; i < ModelConfig::kStatesPerDomain; ++i)
      out.push_back(BasisState{d, i});
  return out;
}

}  // namespace ontic
