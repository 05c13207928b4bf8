#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>

namespace ontic {

/// A domain of disjointness. Each domain holds two mutually disjoint
/// basis states; states from different domains are never disjoint.
enum class Domain : std::uint8_t { X = 0, Y = 1, Z = 2, T = 3 };

constexpr char domain_char(Domain d) {
  constexpr char names[] = {'x', 'y', 'z', 't'};
  return names[static_cast<int>(d)];
}

constexpr std::optional<Domain> domain_from_char(char c) {
  switch (c) {
    case 'x': return Domain::X;
    case 'y': return Domain::Y;
    case 'z': return Domain::Z;
    case 't': return Domain::T;
    default: return std::nullopt;
  }
}

/// One basis state |i>_d with i in {0,1}.
struct BasisState {
  Domain domain;
  std::uint8_t index;  // 0 or 1

  friend auto operator<=>(const BasisState&, const BasisState&) = default;
};

inline std::string to_string(const BasisState& s) {
  return std::string("|") + char('0' + s.index) + ">_" + domain_char(s.domain);
}

/// A basis state with a sign, or the null state. The null state carries
/// no sign: it is the formal result of cancelling a state against its
/// additive inverse and is not an ontic state of the system.
struct SignedState {
  int sign = +1;  // +1 or -1; always +1 when body is empty
  std::optional<BasisState> body;

  static SignedState null() { return SignedState{+1, std::nullopt}; }
  static SignedState of(int sign, BasisState b) { return SignedState{sign, b}; }

  bool is_null() const { return !body.has_value(); }

  /// Equality of ontic content: the additive inverse -s is not
  /// ontologically distinct from s.
  bool ontic_equal(const SignedState& o) const { return body == o.body; }

  SignedState negated() const {
    if (is_null()) return *this;
    return SignedState{-sign, body};
  }

  friend bool operator==(const SignedState&, const SignedState&) = default;
};

inline std::string to_string(const SignedState& s) {
  if (s.is_null()) return "null";
  return (s.sign < 0 ? "-" : "") + to_string(*s.body);
}

/// Exact probability value; measurement overlaps are 0, 1/2 or 1.
struct Fraction {
  int num = 0;
  int den = 1;

  double value() const { return static_cast<double>(num) / den; }
  friend bool operator==(const Fraction&, const Fraction&) = default;
};

}  // namespace ontic

template <>
struct std::hash<ontic::BasisState> {
  std::size_t operator()(const ontic::BasisState& s) const noexcept {
    return (static_cast<std::size_t>(s.domain) << 1) | s.index;
  }
};
