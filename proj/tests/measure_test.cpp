#include "ontic/measure.hpp"

#include <gtest/gtest.h>

#include <array>
#include <vector>

#include "ontic/parser.hpp"

namespace ontic {
namespace {

SignedState ket(int sign, Domain d, int index) {
  return SignedState::of(sign, BasisState{d, static_cast<std::uint8_t>(index)});
}

JointCanonical joint(const char* text, const ModelConfig& config) {
  return canonicalize_joint(parse(text, &config), config);
}

TEST(Measure, RandomSourceIsDeterministicAndUnbiased) {
  RandomSource a(42), b(42);
  for (int i = 0; i < 64; ++i) EXPECT_EQ(a.next(), b.next());
  RandomSource c(kDefaultSeed);
  std::array<int, 3> counts{};
  for (int i = 0; i < 3000; ++i) ++counts[c.uniform(3)];
  for (int n : counts) EXPECT_NEAR(n, 1000, 150);
  EXPECT_THROW(c.uniform(0), Error);
}

TEST(Measure, InDomainAnswersAreConclusive) {
  const ModelConfig two = ModelConfig::two_domain();
  RandomSource rng(kDefaultSeed);
  const SingleMeasurement m = measure(ket(-1, Domain::X, 1), Domain::X, rng, two);
  EXPECT_TRUE(m.conclusive);
  EXPECT_EQ(m.outcome, 1);
  EXPECT_EQ(m.post, ket(-1, Domain::X, 1));
}

TEST(Measure, CrossDomainAnswersAreUnbiasedCoinFlips) {
  const ModelConfig two = ModelConfig::two_domain();
  RandomSource rng(kDefaultSeed);
  int ones = 0;
  const int trials = 2000;
  for (int i = 0; i < trials; ++i) {
    const SingleMeasurement m = measure(ket(+1, Domain::X, 0), Domain::Y, rng, two);
    EXPECT_FALSE(m.conclusive);
    EXPECT_EQ(m.post, ket(+1, Domain::Y, m.outcome));
    ones += m.outcome;
  }
  EXPECT_NEAR(static_cast<double>(ones) / trials, 0.5, 0.05);
  // Identical seeds give identical transcripts.
  RandomSource r1(7), r2(7);
  for (int i = 0; i < 32; ++i)
    EXPECT_EQ(measure(ket(+1, Domain::X, 0), Domain::Y, r1, two).outcome,
              measure(ket(+1, Domain::X, 0), Domain::Y, r2, two).outcome);
}

TEST(Measure, SingleMeasurementErrors) {
  const ModelConfig two = ModelConfig::two_domain();
  RandomSource rng(kDefaultSeed);
  EXPECT_THROW(measure(SignedState::null(), Domain::X, rng, two), IllFormedError);
  EXPECT_THROW(measure(ket(+1, Domain::X, 0), Domain::Z, rng, two), UnknownDomainError);
}

TEST(Measure, TestNamesParseAndPrint) {
  const ModelConfig two = ModelConfig::two_domain();
  const ModelConfig four = ModelConfig::four_domain();
  EXPECT_EQ(MeasurementSpec::from_test_name("Mx", two).scope, MeasurementSpec::Scope::Local);
  EXPECT_EQ(MeasurementSpec::from_test_name("Mx", two).domain, Domain::X);
  EXPECT_EQ(MeasurementSpec::from_test_name("Mt", four).domain, Domain::T);
  EXPECT_THROW(MeasurementSpec::from_test_name("Mz", two), UnknownDomainError);
  const MeasurementSpec same = MeasurementSpec::from_test_name("Mc-ii:xx", two);
  EXPECT_EQ(same.scope, MeasurementSpec::Scope::GlobalSameBasis);
  EXPECT_EQ(same.pair_first, Domain::X);
  EXPECT_THROW(MeasurementSpec::from_test_name("Mc-ii:xy", two), Error);
  EXPECT_THROW(MeasurementSpec::from_test_name("Mc-ii:zz", two), UnknownDomainError);
  const MeasurementSpec cross = MeasurementSpec::from_test_name("Mc-ij", two);
  EXPECT_EQ(cross.scope, MeasurementSpec::Scope::GlobalCrossBasis);
  EXPECT_THROW(MeasurementSpec::from_test_name("Mq", two), Error);
  for (const char* name : {"Mx", "My", "Mc-ii:xx", "Mc-ij"})
    EXPECT_EQ(MeasurementSpec::from_test_name(name, two).name(), name);
}

TEST(Measure, GlobalSameBasisMembersAnswerDeterministically) {
  const ModelConfig two = ModelConfig::two_domain();
  RandomSource rng(kDefaultSeed);
  const JointCanonical state = joint("C-1^xx", two);
  const JointMeasurement m =
      measure(state, MeasurementSpec::global_same(Domain::X, Domain::X), rng, two);
  EXPECT_TRUE(m.conclusive);
  EXPECT_EQ(m.outcome, 1);  // outcome order C+, C-, A+, A-
  EXPECT_EQ(m.post, state);
  // The reversed sign does not change the class, so still conclusive.
  const JointMeasurement n =
      measure(joint("-A+1^xx", two), MeasurementSpec::global_same(Domain::X, Domain::X), rng, two);
  EXPECT_TRUE(n.conclusive);
  EXPECT_EQ(n.outcome, 2);
}

TEST(Measure, GlobalSameBasisNonMembersAnswerUniformly) {
  const ModelConfig two = ModelConfig::two_domain();
  RandomSource rng(kDefaultSeed);
  const JointCanonical state = joint("|0>_x|0>_x", two);
  const MeasurementSpec spec = MeasurementSpec::global_same(Domain::X, Domain::X);
  std::array<int, 4> counts{};
  const int trials = 4000;
  for (int i = 0; i < trials; ++i) {
    const JointMeasurement m = measure(state, spec, rng, two);
    EXPECT_FALSE(m.conclusive);
    ASSERT_TRUE(m.post.is_correlated());
    EXPECT_EQ(JointContext::get(two).class_of(m.post.as_correlated()),
              m.outcome_classes[m.outcome]);
    ++counts[m.outcome];
  }
  for (int n : counts) EXPECT_NEAR(static_cast<double>(n) / trials, 0.25, 0.03);
}

TEST(Measure, GlobalCrossBasisUsesTheCrossedDomain) {
  const ModelConfig two = ModelConfig::two_domain();
  RandomSource rng(kDefaultSeed);
  const JointMeasurement m =
      measure(joint("A-1^xy", two), MeasurementSpec::global_cross(), rng, two);
  EXPECT_TRUE(m.conclusive);
  EXPECT_EQ(m.outcome, 3);
  // A same-pair member is NOT a member of the crossed domain.
  EXPECT_FALSE(
      measure(joint("C+1^xx", two), MeasurementSpec::global_cross(), rng, two).conclusive);
}

TEST(Measure, GlobalScopeErrors) {
  const ModelConfig two = ModelConfig::two_domain();
  RandomSource rng(kDefaultSeed);
  EXPECT_THROW(measure(JointCanonical::null(),
                       MeasurementSpec::global_same(Domain::X, Domain::X), rng, two),
               IllFormedError);
  EXPECT_THROW(
      measure(joint("C+1^xx", two), MeasurementSpec::local(Domain::X, 1), rng, two),
      ScopeMismatchError);
  MeasurementSpec degenerate = MeasurementSpec::global_cross();
  degenerate.pair_second = Domain::X;
  EXPECT_THROW(measure(joint("C+1^xx", two), degenerate, rng, two), Error);
}

TEST(Measure, LocalOnProductReadsTheAddressedSide) {
  const ModelConfig two = ModelConfig::two_domain();
  RandomSource rng(kDefaultSeed);
  const JointCanonical p = joint("-|0>_x|1>_y", two);
  const LocalOnJoint m1 = measure_local_on_joint(p, 1, Domain::X, rng, two);
  EXPECT_TRUE(m1.conclusive);
  EXPECT_EQ(m1.outcome, 0);
  EXPECT_EQ(m1.post, p);
  const LocalOnJoint m2 = measure_local_on_joint(p, 2, Domain::Y, rng, two);
  EXPECT_TRUE(m2.conclusive);
  EXPECT_EQ(m2.outcome, 1);
  // Measuring against the other domain is a coin; the partner factor
  // and the overall sign survive.
  const LocalOnJoint m3 = measure_local_on_joint(p, 1, Domain::Y, rng, two);
  EXPECT_FALSE(m3.conclusive);
  EXPECT_EQ(m3.post.sign, -1);
  EXPECT_EQ(m3.post.as_product().second, (BasisState{Domain::Y, 1}));
  EXPECT_EQ(m3.post.as_product().first, (BasisState{Domain::Y, static_cast<std::uint8_t>(m3.outcome)}));
  EXPECT_THROW(measure_local_on_joint(p, 0, Domain::X, rng, two), ScopeMismatchError);
}

TEST(Measure, LocalOnCorrelatedCollapsesToADefiningProduct) {
  const ModelConfig two = ModelConfig::two_domain();
  RandomSource rng(kDefaultSeed);
  for (int i = 0; i < 200; ++i) {
    const LocalOnJoint m = measure_local_on_joint(joint("C+1^xx", two), 1, Domain::X, rng, two);
    EXPECT_FALSE(m.conclusive);
    ASSERT_TRUE(m.post.is_product());
    EXPECT_EQ(m.post.sign, +1);
    EXPECT_EQ(m.post.as_product().first.index, m.outcome);
    EXPECT_EQ(m.post.as_product().second.index, m.outcome);  // parity C: XOR 0
  }
  for (int i = 0; i < 200; ++i) {
    const LocalOnJoint m = measure_local_on_joint(joint("A-1^xx", two), 1, Domain::X, rng, two);
    ASSERT_TRUE(m.post.is_product());
    EXPECT_EQ(m.post.as_product().first.index ^ m.post.as_product().second.index, 1);
    // The minus branch of the defining superposition keeps its sign.
    EXPECT_EQ(m.post.sign, m.outcome == 1 ? -1 : +1);
  }
  // Spelling over the other side first: the y-spelling of C+1^xx is C+1^yy.
  const LocalOnJoint my = measure_local_on_joint(joint("C+1^xx", two), 2, Domain::Y, rng, two);
  EXPECT_EQ(my.post.as_product().first.domain, Domain::Y);
  EXPECT_EQ(my.post.as_product().second.domain, Domain::Y);
}

TEST(Measure, LocalOnCorrelatedNeedsASpellingOverTheBasis) {
  const ModelConfig four = ModelConfig::four_domain();
  RandomSource rng(kDefaultSeed);
  // The kind-1 xy cross domain spells only over (x,y) and (y,x).
  EXPECT_THROW(measure_local_on_joint(joint("C+1^xy", four), 1, Domain::Z, rng, four),
               NoRepresentationError);
  EXPECT_THROW(measure_local_on_joint(JointCanonical::null(), 1, Domain::X, rng, four),
               IllFormedError);
  // No correlated domain holds kind-3 spellings.
  EXPECT_THROW(measure_global(joint("C+1^xy", four), Domain::X, Domain::X, 3, rng, four),
               NoRepresentationError);
}

}  // namespace
}  // namespace ontic
