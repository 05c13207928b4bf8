#include "ontic/joint.hpp"

#include <gtest/gtest.h>

#include <string>
#include <vector>

#include "ontic/parser.hpp"

namespace ontic {
namespace {

JointCanonical joint(const char* text, const ModelConfig& config) {
  return canonicalize_joint(parse(text, &config), config);
}

std::string slot_string(const JointContext& ctx) {
  std::string out;
  for (const auto& dom : ctx.correlated_domains()) {
    out += "[";
    for (const auto& [a, b, k] : dom.slots)
      out += std::string(1, domain_char(a)) + domain_char(b) + std::to_string(k) + " ";
    out += "]";
  }
  return out;
}

TEST(Joint, ProductFormation) {
  const ModelConfig two = ModelConfig::two_domain();
  const JointCanonical p = joint("|0>_x|1>_y", two);
  ASSERT_TRUE(p.is_product());
  EXPECT_EQ(to_string(p), "|0>_x|1>_y");
  EXPECT_EQ(to_string(joint("-|0>_x(-|1>_y)", two)), "|0>_x|1>_y");
  EXPECT_EQ(to_string(joint("-|0>_x|1>_y", two)), "-|0>_x|1>_y");
  EXPECT_TRUE(joint("|0>_x null", two).is_null());
  EXPECT_TRUE(joint("null", two).is_null());
  // Inner superpositions canonicalize before the product forms.
  EXPECT_EQ(to_string(joint("(|0>_x +1 |1>_x)(|0>_y -1 |1>_y)", two)), "|0>_y|1>_x");
}

TEST(Joint, ProductScopeErrors) {
  const ModelConfig two = ModelConfig::two_domain();
  EXPECT_THROW(joint("|0>_x|1>_y|0>_x", two), IllFormedError);
  EXPECT_THROW(joint("(|0>_x|1>_y)(|0>_x|1>_y)", two), IllFormedError);
  EXPECT_THROW(joint("|0>_x|0>_x +1 |1>_x", two), ScopeMismatchError);
  EXPECT_THROW(joint("|0>_x +1 |1>_x", two), ScopeMismatchError);
}

TEST(Joint, CorrelatedFormationAndOrdering) {
  const ModelConfig two = ModelConfig::two_domain();
  EXPECT_EQ(to_string(joint("|0>_x|0>_x +1 |1>_x|1>_x", two)), "C+1^xx");
  EXPECT_EQ(to_string(joint("|0>_x|0>_x -1 |1>_x|1>_x", two)), "C-1^xx");
  EXPECT_EQ(to_string(joint("|0>_x|1>_x +1 |1>_x|0>_x", two)), "A+1^xx");
  EXPECT_EQ(to_string(joint("|0>_x|1>_x -1 |1>_x|0>_x", two)), "A-1^xx");
  // Re-ordering the operands costs a sign exactly for c_-.
  EXPECT_EQ(to_string(joint("|1>_x|1>_x +1 |0>_x|0>_x", two)), "C+1^xx");
  EXPECT_EQ(to_string(joint("|1>_x|1>_x -1 |0>_x|0>_x", two)), "-C-1^xx");
  EXPECT_EQ(to_string(joint("|1>_x|0>_x -1 |0>_x|1>_x", two)), "-A-1^xx");
  // Cross-domain pairs correlate too.
  EXPECT_EQ(to_string(joint("|0>_x|0>_y +1 |1>_x|1>_y", two)), "C+1^xy");
}

TEST(Joint, SharedFactorReduction) {
  const ModelConfig two = ModelConfig::two_domain();
  EXPECT_EQ(to_string(joint("|0>_x|0>_x +1 |0>_x|1>_x", two)), "|0>_x|0>_y");
  EXPECT_EQ(to_string(joint("|0>_x|0>_x -1 |0>_x|1>_x", two)), "|0>_x|1>_y");
  EXPECT_EQ(to_string(joint("|0>_x|1>_y +1 |1>_x|1>_y", two)), "|0>_y|1>_y");
  EXPECT_TRUE(joint("|0>_x|0>_x -1 |0>_x|0>_x", two).is_null());
  EXPECT_EQ(to_string(joint("|0>_x|0>_x +1 null", two)), "|0>_x|0>_x");
  EXPECT_EQ(to_string(joint("null -1 |0>_x|0>_x", two)), "-|0>_x|0>_x");
}

TEST(Joint, SuperpositionErrors) {
  const ModelConfig two = ModelConfig::two_domain();
  const ModelConfig four = ModelConfig::four_domain();
  EXPECT_THROW(joint("|0>_x|0>_x +1 |0>_y|0>_y", two), MixedParityError);
  EXPECT_THROW(joint("|0>_x|0>_x +1 C+1^xx", two), MixedParityError);
  EXPECT_THROW(joint("C+1^xx +1 C+1^xy", two), MixedParityError);
  EXPECT_THROW(joint("|0>_x|0>_x +2 |1>_x|1>_x", two), UnknownEdgeError);
  EXPECT_THROW(joint("|0>_x|0>_x +3 |1>_x|1>_x", four), IllFormedError);
  EXPECT_THROW(joint("C+1^xy +2 C-1^xy", four), NoRepresentationError);
}

TEST(Joint, CorrelatedAtomsCanonicalizeToClassRepresentatives) {
  const ModelConfig two = ModelConfig::two_domain();
  EXPECT_EQ(to_string(joint("C+1^yy", two)), "C+1^xx");
  EXPECT_EQ(to_string(joint("A+1^yy", two)), "C-1^xx");
  EXPECT_EQ(to_string(joint("C-1^yy", two)), "A+1^xx");
  EXPECT_EQ(to_string(joint("A-1^yy", two)), "-A-1^xx");
  EXPECT_EQ(to_string(joint("-A-1^yy", two)), "A-1^xx");
  EXPECT_EQ(to_string(joint("C+1^yx", two)), "C+1^xy");
}

TEST(Joint, CorrelatedAtomValidation) {
  const ModelConfig two = ModelConfig::two_domain();
  const ModelConfig four = ModelConfig::four_domain();
  EXPECT_THROW(joint("C+3^xx", four), IllFormedError);
  EXPECT_THROW(joint("C+2^xx", two), IllFormedError);  // kind 2 spells nothing here
  EXPECT_THROW(joint("C+1^xz", two), UnknownDomainError);
  EXPECT_THROW(joint("A+2^xy", two), IllFormedError);
  EXPECT_NO_THROW(joint("C+2^xx", four));
  EXPECT_NO_THROW(joint("C+1^zt", four));
}

TEST(Joint, TwoDomainClassStructure) {
  const JointContext& ctx = JointContext::get(ModelConfig::two_domain());
  EXPECT_EQ(ctx.correlated_domains().size(), 2u);
  EXPECT_EQ(slot_string(ctx), "[xx1 yy1 ][xy1 yx1 ]");
  EXPECT_TRUE(ctx.structure_anomalies().empty());
  EXPECT_TRUE(ctx.sign_anomalies().empty());

  std::vector<std::string> reps;
  for (const auto& dom : ctx.correlated_domains())
    for (int c : dom.classes) reps.push_back(to_string(ctx.cls(c).rep));
  EXPECT_EQ(reps, (std::vector<std::string>{"C+1^xx", "C-1^xx", "A+1^xx", "A-1^xx", "C+1^xy",
                                            "C-1^xy", "A+1^xy", "A-1^xy"}));
}

TEST(Joint, FourDomainClassStructure) {
  const JointContext& ctx = JointContext::get(ModelConfig::four_domain());
  EXPECT_EQ(ctx.correlated_domains().size(), 14u);
  int classes = 0;
  for (const auto& dom : ctx.correlated_domains()) classes += static_cast<int>(dom.classes.size());
  EXPECT_EQ(classes, 56);
  EXPECT_TRUE(ctx.structure_anomalies().empty());
  // The sign anomalies are loops of -1 confined to the A- classes of
  // the two same-pair correlated domains.
  EXPECT_EQ(ctx.sign_anomalies().size(), 14u);
  for (const auto& s : ctx.sign_anomalies()) {
    EXPECT_NE(s.find("sign loop of -1"), std::string::npos);
    EXPECT_NE(s.find("A-"), std::string::npos);
  }
  // The same-pair domains split by kind alignment.
  EXPECT_EQ(slot_string(ctx).substr(0, 26), "[xx1 yy1 zz2 tt2 ][xx2 yy2");
}

TEST(Joint, RebaseAcrossPairsAndKinds) {
  const ModelConfig four = ModelConfig::four_domain();
  const JointContext& ctx = JointContext::get(four);
  // One class spells over every slot of its domain.
  const int cls = ctx.class_of(CorrSpelling{Parity::C, +1, 2, Domain::X, Domain::X});
  const auto tt = ctx.spelling_on(cls, Domain::T, Domain::T);
  ASSERT_TRUE(tt.has_value());
  EXPECT_EQ(to_string(tt->first), "C+1^tt");
  EXPECT_EQ(tt->second, +1);
  EXPECT_FALSE(ctx.spelling_on(cls, Domain::X, Domain::Y).has_value());

  EXPECT_EQ(to_string(joint("C+2^xx", four)), to_string(joint("C+1^tt", four)));
  EXPECT_EQ(to_string(joint("C-1^xx", four)), to_string(joint("A+1^yy", four)));
}

TEST(Joint, RebaseCorrelatedReturnsSpellingForm) {
  const ModelConfig two = ModelConfig::two_domain();
  const JointCanonical c = joint("C-1^xx", two);
  const JointCanonical moved = rebase_correlated(c, Domain::Y, Domain::Y, two);
  ASSERT_TRUE(moved.is_correlated());
  EXPECT_EQ(to_string(moved), "A+1^yy");
  EXPECT_EQ(to_string(rebase_correlated(joint("A-1^xx", two), Domain::Y, Domain::Y, two)),
            "-A-1^yy");
}

TEST(Joint, MergeSupportCases) {
  const ModelConfig two = ModelConfig::two_domain();
  const ModelConfig four = ModelConfig::four_domain();
  // Support 1: one product survives the cancellation.
  EXPECT_EQ(to_string(joint("C+1^xx +1 C-1^xx", two)), "|0>_x|0>_x");
  EXPECT_EQ(to_string(joint("C+1^xx -1 C-1^xx", two)), "|1>_x|1>_x");
  // Support 2: the merged set reads as one spelling.
  EXPECT_TRUE(joint("C+1^xx -1 C+1^xx", two).is_null());
  EXPECT_EQ(to_string(joint("C+1^xx -1 -C+1^xx", two)), "C+1^xx");
  // Support 4: regrouping lands on a product of superposition images.
  EXPECT_EQ(to_string(joint("C+1^xx +1 A+1^xx", two)), "|0>_y|0>_y");
  EXPECT_EQ(to_string(joint("C+1^xx -1 A+1^xx", two)), "|1>_y|1>_y");
  // Kind-2 merges run over the kind-2 slots of the domain.
  EXPECT_EQ(to_string(joint("C+1^xx +2 C-1^xx", four)), "|0>_z|0>_z");
}

TEST(Joint, OnticEqualityIgnoresSign) {
  const ModelConfig two = ModelConfig::two_domain();
  const JointCanonical a = joint("C+1^xx", two);
  const JointCanonical b = joint("-C+1^xx", two);
  EXPECT_NE(a, b);
  EXPECT_TRUE(a.ontic_equal(b));
  EXPECT_FALSE(a.ontic_equal(joint("C-1^xx", two)));
}

}  // namespace
}  // namespace ontic
