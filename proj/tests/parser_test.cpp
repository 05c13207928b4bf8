#include "ontic/parser.hpp"

#include <gtest/gtest.h>

#include "ontic/measure.hpp"
#include "test_util.hpp"

namespace ontic {
namespace {

TEST(Parser, Atoms) {
  const ExprPtr k = parse("|0>_x");
  EXPECT_EQ(k->node, Expr::Node::Ket);
  EXPECT_EQ(k->sign, +1);
  EXPECT_EQ(k->ket, (BasisState{Domain::X, 0}));

  const ExprPtr neg = parse("-|1>_t");
  EXPECT_EQ(neg->sign, -1);
  EXPECT_EQ(neg->ket, (BasisState{Domain::T, 1}));

  EXPECT_EQ(parse("null")->node, Expr::Node::Null);

  const ExprPtr c = parse("-A-2^zt");
  EXPECT_EQ(c->node, Expr::Node::Corr);
  EXPECT_EQ(c->sign, -1);
  EXPECT_EQ(c->corr, (CorrSpelling{Parity::A, -1, 2, Domain::Z, Domain::T}));
}

TEST(Parser, SuperpositionsAreLeftAssociative) {
  const ExprPtr e = parse("|0>_x +1 |1>_x -2 |0>_x");
  ASSERT_EQ(e->node, Expr::Node::Superpose);
  EXPECT_EQ(e->op_kind, 2);
  EXPECT_EQ(e->op_sign, -1);
  ASSERT_EQ(e->lhs->node, Expr::Node::Superpose);
  EXPECT_EQ(e->lhs->op_kind, 1);

  const ExprPtr grouped = parse("|0>_x +1 (|1>_x -2 |0>_x)");
  EXPECT_EQ(grouped->op_kind, 1);
  EXPECT_EQ(grouped->rhs->op_kind, 2);
  EXPECT_FALSE(structurally_equal(*e, *grouped));
}

TEST(Parser, ProductsBindTighterThanSuperposition) {
  const ExprPtr e = parse("|0>_x|0>_x +1 |1>_x|1>_x");
  ASSERT_EQ(e->node, Expr::Node::Superpose);
  EXPECT_EQ(e->lhs->node, Expr::Node::Product);
  EXPECT_EQ(e->rhs->node, Expr::Node::Product);

  const ExprPtr grouped = parse("(|0>_x +1 |1>_x)(|0>_y -1 |1>_y)");
  ASSERT_EQ(grouped->node, Expr::Node::Product);
  EXPECT_EQ(grouped->lhs->node, Expr::Node::Superpose);
  EXPECT_EQ(grouped->rhs->node, Expr::Node::Superpose);
}

TEST(Parser, NegativeAtomAfterProductIsNotAnOperator) {
  const ExprPtr e = parse("|0>_x-|1>_y");
  ASSERT_EQ(e->node, Expr::Node::Product);
  EXPECT_EQ(e->rhs->sign, -1);
}

TEST(Parser, SyntaxErrors) {
  EXPECT_THROW(parse(""), SyntaxError);
  EXPECT_THROW(parse("|2>_x"), SyntaxError);
  EXPECT_THROW(parse("|0>_q"), SyntaxError);
  EXPECT_THROW(parse("|0>_x +"), SyntaxError);
  EXPECT_THROW(parse("|0>_x +1"), SyntaxError);
  EXPECT_THROW(parse("(|0>_x +1 |1>_x"), SyntaxError);
  EXPECT_THROW(parse("-(|0>_x +1 |1>_x)"), SyntaxError);
  EXPECT_THROW(parse("-null"), SyntaxError);
  EXPECT_THROW(parse("C+^xx"), SyntaxError);
}

TEST(Parser, JuxtapositionIgnoresWhitespace) {
  EXPECT_TRUE(structurally_equal(*parse("|0>_x |1>_y"), *parse("|0>_x|1>_y")));
}

TEST(Parser, SyntaxErrorCarriesOffset) {
  try {
    parse("|0>_x +1 |2>_x");
    FAIL() << "expected SyntaxError";
  } catch (const SyntaxError& e) {
    EXPECT_NE(std::string(e.what()).find("offset"), std::string::npos);
  }
}

TEST(Parser, ConfigRejectsForeignDomains) {
  const ModelConfig two = ModelConfig::two_domain();
  EXPECT_THROW(parse("|0>_z", &two), UnknownDomainError);
  EXPECT_THROW(parse("C+1^xt", &two), UnknownDomainError);
  EXPECT_NO_THROW(parse("|0>_z", nullptr));
}

TEST(Parser, RenderedFormsReadBack) {
  for (const char* text :
       {"|0>_x", "-|1>_y", "null", "C+1^xx", "-A-2^zt", "|0>_x +1 |1>_x",
        "|0>_x|1>_y", "|0>_x|0>_x +1 |1>_x|1>_x", "(|0>_x +1 |1>_x)(|0>_y -1 |1>_y)",
        "|0>_x +3 (|1>_x -2 |0>_z)"}) {
    const ExprPtr e = parse(text);
    EXPECT_EQ(render(e), text);
    EXPECT_TRUE(structurally_equal(*e, *parse(render(e))));
  }
}

TEST(Parser, RoundTripOnRandomCorpus) {
  testutil::ExprGen gen(kDefaultSeed, ModelConfig::four_domain().domains());
  const ModelConfig four = ModelConfig::four_domain();
  for (int i = 0; i < 10'000; ++i) {
    const ExprPtr e = gen.tree(5);
    const std::string text = render(e);
    const ExprPtr back = parse(text, &four);
    ASSERT_TRUE(structurally_equal(*e, *back)) << "round trip failed for: " << text;
    ASSERT_EQ(render(back), text);
  }
}

}  // namespace
}  // namespace ontic
