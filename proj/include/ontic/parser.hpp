#pragma once

#include <cctype>
#include <cstddef>
#include <string>
#include <string_view>

#include "ontic/config.hpp"
#include "ontic/expr.hpp"
#include "ontic/errors.hpp"

namespace ontic {

/// Recursive-descent parser for the expression grammar:
///
///   expr   := term | expr sop term            left associative
///   sop    := ('+'|'-') digit
///   term   := atom | term atom                juxtaposition = product
///   atom   := ['-'] '|' ('0'|'1') '>' '_' domain
///           | 'null'
///           | '(' expr ')'
///           | ['-'] ('C'|'A') sop '^' domain domain
///   domain := 'x'|'y'|'z'|'t'
///
/// Juxtaposition binds tighter than any sop. A '-' followed by a digit
/// is an sop; a '-' followed by an atom start is a leading minus.
class Parser {
 public:
  explicit Parser(std::string_view text, const ModelConfig* config = nullptr)
      : text_(text), config_(config) {}

  ExprPtr parse() {
    ExprPtr e = parse_expr();
    skip_ws();
    if (pos_ != text_.size()) fail("trailing input");
    return e;
  }

 private:
  ExprPtr parse_expr() {
    ExprPtr lhs = parse_term();
    for (;;) {
      skip_ws();
      if (!at_sop()) break;
      const int sign = take() == '+' ? +1 : -1;
      const int kind = take() - '0';
      ExprPtr rhs = parse_term();
      lhs = make_superpose(kind, sign, std::move(lhs), std::move(rhs));
    }
    return lhs;
  }

  ExprPtr parse_term() {
    ExprPtr lhs = parse_atom();
    for (;;) {
      skip_ws();
      if (!at_atom_start()) break;
      ExprPtr rhs = parse_atom();
      lhs = make_product(std::move(lhs), std::move(rhs));
    }
    return lhs;
  }

  ExprPtr parse_atom() {
    skip_ws();
    if (pos_ >= text_.size()) fail("expected atom");
    int sign = +1;
    if (peek() == '-') {
      ++pos_;
      sign = -1;
      if (pos_ >= text_.size()) fail("expected atom after '-'");
    }
    const char c = peek();
    if (c == '|') return parse_ket(sign);
    if (c == 'C' || c == 'A') return parse_corr(sign);
    if (sign < 0) fail("'-' must precede a ket or a correlated atom");
    if (c == 'n') {
      expect_word("null");
      return make_null();
    }
    if (c == '(') {
      ++pos_;
      ExprPtr e = parse_expr();
      skip_ws();
      if (pos_ >= text_.size() || peek() != ')') fail("expected ')'");
      ++pos_;
      return e;
    }
    fail("expected atom");
  }

  ExprPtr parse_ket(int sign) {
    ++pos_;  // '|'
    if (pos_ >= text_.size() || (peek() != '0' && peek() != '1')) fail("expected '0' or '1'");
    const int index = take() - '0';
    if (pos_ >= text_.size() || take() != '>') fail("expected '>'");
    if (pos_ >= text_.size() || take() != '_') fail("expected '_'");
    return make_ket(sign, index, parse_domain());
  }

  ExprPtr parse_corr(int sign) {
    const Parity parity = take() == 'C' ? Parity::C : Parity::A;
    if (pos_ >= text_.size() || (peek() != '+' && peek() != '-')) fail("expected '+' or '-'");
    const int op_sign = take() == '+' ? +1 : -1;
    if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(peek())))
      fail("expected kind digit");
    const int kind = take() - '0';
    if (pos_ >= text_.size() || take() != '^') fail("expected '^'");
    const Domain first = parse_domain();
    const Domain second = parse_domain();
    return make_corr(sign, CorrSpelling{parity, op_sign, kind, first, second});
  }

  Domain parse_domain() {
    if (pos_ >= text_.size()) fail("expected domain label");
    auto d = domain_from_char(peek());
    if (!d) fail("expected domain label");
    ++pos_;
    if (config_ && !config_->has_domain(*d))
      throw UnknownDomainError(std::string("domain '") + domain_char(*d) +
                               "' is not part of the active config");
    return *d;
  }

  bool at_sop() const {
    return pos_ + 1 < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-') &&
           std::isdigit(static_cast<unsigned char>(text_[pos_ + 1]));
  }

  bool at_atom_start() const {
    if (pos_ >= text_.size()) return false;
    const char c = text_[pos_];
    if (c == '|' || c == '(' || c == 'C' || c == 'A' || c == 'n') return true;
    // leading minus of a negative atom, not an sop
    if (c == '-' && pos_ + 1 < text_.size()) {
      const char n = text_[pos_ + 1];
      return n == '|' || n == 'C' || n == 'A';
    }
    return false;
  }

  void expect_word(std::string_view w) {
    if (text_.substr(pos_, w.size()) != w) fail("expected 'null'");
    pos_ += w.size();
  }

  void skip_ws() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  char peek() const { return text_[pos_]; }
  char take() { return text_[pos_++]; }

  [[noreturn]] void fail(const std::string& what) const { throw SyntaxError(what, pos_); }

  std::string_view text_;
  const ModelConfig* config_;
  std::size_t pos_ = 0;
};

inline ExprPtr parse(std::string_view text, const ModelConfig* config = nullptr) {
  return Parser(text, config).parse();
}

/// Renders an expression so that parse(render(e)) is structurally e.
inline std::string render(const Expr& e) {
  switch (e.node) {
    case Expr::Node::Ket:
      return (e.sign < 0 ? "-" : "") + to_string(e.ket);
    case Expr::Node::Null:
      return "null";
    case Expr::Node::Corr:
      return (e.sign < 0 ? "-" : "") + to_string(e.corr);
    case Expr::Node::Superpose: {
      // Left-associative: a right-hand superposition needs parentheses.
      std::string lhs = render(*e.lhs);
      std::string rhs = render(*e.rhs);
      if (e.rhs->node == Expr::Node::Superpose) rhs = "(" + rhs + ")";
      return lhs + " " + (e.op_sign < 0 ? "-" : "+") + std::to_string(e.op_kind) + " " + rhs;
    }
    case Expr::Node::Product: {
      // Juxtaposition is left-associative and binds tighter than sops.
      std::string lhs = render(*e.lhs);
      std::string rhs = render(*e.rhs);
      if (e.lhs->node == Expr::Node::Superpose) lhs = "(" + lhs + ")";
      if (e.rhs->node == Expr::Node::Superpose || e.rhs->node == Expr::Node::Product)
        rhs = "(" + rhs + ")";
      return lhs + rhs;
    }
  }
  throw Error("unreachable expression node");
}

inline std::string render(const ExprPtr& e) { return render(*e); }

}  // namespace ontic
