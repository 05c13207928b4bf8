#pragma once

#include <cstdlib>
#include <numeric>
#include <vector>

#include "ontic/domain.hpp"
#include "ontic/errors.hpp"
#include "ontic/expr.hpp"

namespace ontic {

/// Independent model of the two-domain rewrite system in real vectors:
///
///   |0>_x = (1,0)   |1>_x = (0,1)   |0>_y = (1,1)   |1>_y = (1,-1)
///
/// Kind-1 superposition is componentwise addition/subtraction, the
/// product is the tensor product, and every ontic state corresponds to
/// a ray. Each addition is followed by exact ray reduction (divide by
/// the gcd of the components, signs kept), so equal engine values must
/// produce identical integer vectors, including the overall sign.
namespace vec {

using Vec = std::vector<long long>;

inline Vec reduce(Vec v) {
  long long g = 0;
  for (long long c : v) g = std::gcd(g, std::abs(c));
  if (g > 1)
    for (long long& c : v) c /= g;
  return v;
}

inline Vec leaf(const BasisState& s) {
  if (s.domain == Domain::X) return s.index == 0 ? Vec{1, 0} : Vec{0, 1};
  if (s.domain == Domain::Y) return s.index == 0 ? Vec{1, 1} : Vec{1, -1};
  throw Error("vector oracle covers domains x and y only");
}

inline Vec scale(int sign, Vec v) {
  if (sign < 0)
    for (long long& c : v) c = -c;
  return v;
}

inline Vec add(int op_sign, const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw Error("vector oracle: rank mismatch in superposition");
  Vec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    out[i] = a[i] + (op_sign < 0 ? -b[i] : b[i]);
  return reduce(std::move(out));
}

inline Vec tensor(const Vec& a, const Vec& b) {
  Vec out;
  out.reserve(a.size() * b.size());
  for (long long x : a)
    for (long long y : b) out.push_back(x * y);
  return out;
}

inline Vec of_spelling(const CorrSpelling& s) {
  auto pair = [&](int i, int j) {
    return tensor(leaf({s.first, static_cast<std::uint8_t>(i)}),
                  leaf({s.second, static_cast<std::uint8_t>(j)}));
  };
  const Vec first = s.parity == Parity::C ? pair(0, 0) : pair(0, 1);
  const Vec second = s.parity == Parity::C ? pair(1, 1) : pair(1, 0);
  return add(s.op_sign, first, second);
}

/// True when every leaf and operation of the expression lies inside
/// the oracle's model (domains x/y, superposition kind 1).
inline bool models(const Expr& e) {
  switch (e.node) {
    case Expr::Node::Ket:
      return e.ket.domain == Domain::X || e.ket.domain == Domain::Y;
    case Expr::Node::Null:
      return true;
    case Expr::Node::Corr:
      return e.corr.kind == 1 &&
             (e.corr.first == Domain::X || e.corr.first == Domain::Y) &&
             (e.corr.second == Domain::X || e.corr.second == Domain::Y);
    case Expr::Node::Superpose:
      return e.op_kind == 1 && models(*e.lhs) && models(*e.rhs);
    case Expr::Node::Product:
      return models(*e.lhs) && models(*e.rhs);
  }
  return false;
}

/// Evaluates an expression in the vector model. Rank is 2 for a
/// single system and 4 for a pair. Null evaluates to the zero vector
/// of the rank implied by context (rank 2 when standalone).
inline Vec evaluate(const Expr& e) {
  switch (e.node) {
    case Expr::Node::Ket:
      return scale(e.sign, leaf(e.ket));
    case Expr::Node::Null:
      return Vec{0, 0};
    case Expr::Node::Corr:
      return scale(e.sign, of_spelling(e.corr));
    case Expr::Node::Superpose: {
      Vec a = evaluate(*e.lhs);
      Vec b = evaluate(*e.rhs);
      // A null operand adopts the rank of the other side.
      if (a.size() != b.size()) {
        if (a == Vec{0, 0}) a.assign(b.size(), 0);
        if (b == Vec{0, 0}) b.assign(a.size(), 0);
      }
      return add(e.op_sign, a, b);
    }
    case Expr::Node::Product:
      return tensor(evaluate(*e.lhs), evaluate(*e.rhs));
  }
  throw Error("unreachable expression node");
}

inline Vec evaluate(const ExprPtr& e) { return evaluate(*e); }

}  // namespace vec
}  // namespace ontic
