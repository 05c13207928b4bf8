#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "ontic/domain.hpp"
#include "ontic/errors.hpp"

namespace ontic {

/// Parity of a correlated two-system state: C pairs equal indices
/// {00,11}, A pairs opposite indices {01,10}.
enum class Parity : std::uint8_t { C, A };

/// Spelling of a correlated state: parity, the sign and kind of the
/// defining superposition, and the local domains of the two systems.
/// One correlated state has one spelling per admissible (pair, kind).
struct CorrSpelling {
  Parity parity;
  int op_sign;  // +1 or -1
  int kind;     // 1 or 2
  Domain first;
  Domain second;

  friend auto operator<=>(const CorrSpelling&, const CorrSpelling&) = default;
};

inline std::string to_string(const CorrSpelling& s) {
  std::string out(1, s.parity == Parity::C ? 'C' : 'A');
  out += s.op_sign < 0 ? '-' : '+';
  out += char('0' + s.kind);
  out += '^';
  out += domain_char(s.first);
  out += domain_char(s.second);
  return out;
}

/// Expression tree. Leaves are kets, null, or correlated-state atoms;
/// interior nodes are k-kind superpositions or two-system products.
struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum class Node : std::uint8_t { Ket, Null, Corr, Superpose, Product };

  Node node;
  int sign = +1;            // Ket, Corr: leading minus
  BasisState ket{};         // Ket
  CorrSpelling corr{};      // Corr
  int op_kind = 0;          // Superpose
  int op_sign = +1;         // Superpose
  ExprPtr lhs, rhs;         // Superpose, Product
};

inline ExprPtr make_ket(int sign, BasisState b) {
  auto e = std::make_shared<Expr>();
  e->node = Expr::Node::Ket;
  e->sign = sign;
  e->ket = b;
  return e;
}

inline ExprPtr make_ket(int sign, int index, Domain d) {
  return make_ket(sign, BasisState{d, static_cast<std::uint8_t>(index)});
}

inline ExprPtr make_null() {
  auto e = std::make_shared<Expr>();
  e->node = Expr::Node::Null;
  return e;
}

inline ExprPtr make_corr(int sign, CorrSpelling s) {
  auto e = std::make_shared<Expr>();
  e->node = Expr::Node::Corr;
  e->sign = sign;
  e->corr = s;
  return e;
}

inline ExprPtr make_superpose(int kind, int op_sign, ExprPtr lhs, ExprPtr rhs) {
  auto e = std::make_shared<Expr>();
  e->node = Expr::Node::Superpose;
  e->op_kind = kind;
  e->op_sign = op_sign;
  e->lhs = std::move(lhs);
  e->rhs = std::move(rhs);
  return e;
}

inline ExprPtr make_product(ExprPtr lhs, ExprPtr rhs) {
  auto e = std::make_shared<Expr>();
  e->node = Expr::Node::Product;
  e->lhs = std::move(lhs);
  e->rhs = std::move(rhs);
  return e;
}

inline bool structurally_equal(const Expr& a, const Expr& b) {
  if (a.node != b.node) return false;
  switch (a.node) {
    case Expr::Node::Ket: return a.sign == b.sign && a.ket == b.ket;
    case Expr::Node::Null: return true;
    case Expr::Node::Corr: return a.sign == b.sign && a.corr == b.corr;
    case Expr::Node::Superpose:
      return a.op_kind == b.op_kind && a.op_sign == b.op_sign &&
             structurally_equal(*a.lhs, *b.lhs) && structurally_equal(*a.rhs, *b.rhs);
    case Expr::Node::Product:
      return structurally_equal(*a.lhs, *b.lhs) && structurally_equal(*a.rhs, *b.rhs);
  }
  return false;
}

}  // namespace ontic
