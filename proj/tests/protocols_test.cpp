#include "ontic/protocols.hpp"

#include <gtest/gtest.h>

#include <array>
#include <string>
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

std::vector<std::string> pre_strings(const OutcomeTable::Row& row) {
  std::vector<std::string> out;
  for (const SignedState& s : row.pre) out.push_back(to_string(s));
  return out;
}

TEST(Protocols, CanonicalSharedPair) {
  for (const ModelConfig& config :
       {ModelConfig::two_domain(), ModelConfig::four_domain()}) {
    const JointCanonical shared = canonical_shared_pair(config);
    EXPECT_EQ(shared.sign, +1);
    EXPECT_EQ(to_string(shared), "C+1^xx");
  }
}

TEST(Protocols, CorrectionMapInvertsTheCodingSet) {
  const auto two = correction_map(ModelConfig::two_domain());
  EXPECT_EQ(two[0].name(), "I");
  EXPECT_EQ(two[1].name(), "Py");
  EXPECT_EQ(two[2].name(), "Px");
  EXPECT_EQ(two[3].name(), "PyPx");
  const auto four = correction_map(ModelConfig::four_domain());
  EXPECT_EQ(four[0].name(), "I");
  EXPECT_EQ(four[1].name(), "Pyt");
  EXPECT_EQ(four[2].name(), "Pxz");
  EXPECT_EQ(four[3].name(), "PytPxz");
}

TEST(Protocols, DenseCodingDecodesEveryMessage) {
  for (const ModelConfig& config :
       {ModelConfig::two_domain(), ModelConfig::four_domain()}) {
    const JointCanonical shared = canonical_shared_pair(config);
    for (int m = 0; m < 4; ++m) {
      for (std::uint64_t seed : {kDefaultSeed, std::uint64_t{7}, std::uint64_t{901}}) {
        const DenseCodingRun run =
            dense_coding({m / 2, m % 2}, shared, config, seed);
        EXPECT_TRUE(run.success);
        EXPECT_EQ(run.decoded, run.bits);
        EXPECT_EQ(run.transcript.at("decodedBits"), run.transcript.at("input"));
        EXPECT_EQ(run.transcript.at("events").size(), 3u);
        EXPECT_EQ(run.transcript.at("protocol"), "dense-coding");
      }
    }
  }
}

TEST(Protocols, DenseCodingTablePinsTheEncodings) {
  const DenseCodingTable two = dense_coding_table(ModelConfig::two_domain());
  const std::array<std::string, 4> two_transforms = {"I", "Px", "Py", "PyPx"};
  const std::array<std::string, 4> reps = {"C+1^xx", "A+1^xx", "C-1^xx", "A-1^xx"};
  for (int m = 0; m < 4; ++m) {
    EXPECT_EQ(two.rows[m].bits, (std::array<int, 2>{m / 2, m % 2}));
    EXPECT_EQ(two.rows[m].transform, two_transforms[m]);
    EXPECT_EQ(to_string(two.rows[m].result), reps[m]);
    EXPECT_EQ(two.rows[m].spellings.size(), 2u);
  }
  const DenseCodingTable four = dense_coding_table(ModelConfig::four_domain());
  const std::array<std::string, 4> four_transforms = {"I", "Pxz", "Pyt", "PytPxz"};
  for (int m = 0; m < 4; ++m) {
    EXPECT_EQ(four.rows[m].transform, four_transforms[m]);
    EXPECT_EQ(to_string(four.rows[m].result), reps[m]);
    EXPECT_EQ(four.rows[m].spellings.size(), 4u);
  }
}

TEST(Protocols, DenseCodingRejectsUnusableInputs) {
  const ModelConfig two = ModelConfig::two_domain();
  const JointCanonical shared = canonical_shared_pair(two);
  EXPECT_THROW(dense_coding({0, 2}, shared, two), Error);
  EXPECT_THROW(dense_coding({0, 0}, joint("|0>_x|0>_x", two), two), BadSharedStateError);
  EXPECT_THROW(dense_coding({0, 0}, JointCanonical::null(), two), BadSharedStateError);
}

TEST(Protocols, TeleportBranchesOverTheCanonicalPair) {
  const ModelConfig two = ModelConfig::two_domain();
  const JointCanonical shared = canonical_shared_pair(two);
  const auto branches = teleport_branches(ket(+1, Domain::X, 0), shared, two);
  const std::array<std::string, 4> bell = {"C+1^xx", "C-1^xx", "A+1^xx", "A-1^xx"};
  for (int i = 0; i < 4; ++i) {
    EXPECT_EQ(branches[i].outcome, i);
    EXPECT_EQ(to_string(branches[i].outcome_rep), bell[i]);
  }
  EXPECT_EQ(to_string(branches[0].pre), "|0>_x");
  EXPECT_EQ(to_string(branches[1].pre), "|0>_x");
  EXPECT_EQ(to_string(branches[2].pre), "|1>_x");
  EXPECT_EQ(to_string(branches[3].pre), "|1>_x");
  const auto x1 = teleport_branches(ket(+1, Domain::X, 1), shared, two);
  EXPECT_EQ(to_string(x1[0].pre), "|1>_x");
  EXPECT_EQ(to_string(x1[1].pre), "-|1>_x");
  EXPECT_EQ(to_string(x1[2].pre), "|0>_x");
  EXPECT_EQ(to_string(x1[3].pre), "-|0>_x");
  // Sign of the input rides along every branch.
  const auto neg = teleport_branches(ket(-1, Domain::X, 1), shared, two);
  EXPECT_EQ(to_string(neg[0].pre), "-|1>_x");
}

TEST(Protocols, TeleportationIsTheIdentityOnEveryBranch) {
  for (const ModelConfig& config :
       {ModelConfig::two_domain(), ModelConfig::four_domain()}) {
    const JointCanonical shared = canonical_shared_pair(config);
    const auto corrections = correction_map(config);
    for (Domain d : config.domains()) {
      for (int index = 0; index < 2; ++index) {
        for (int sign : {+1, -1}) {
          const SignedState input = ket(sign, d, index);
          const auto branches = teleport_branches(input, shared, config);
          for (int i = 0; i < 4; ++i) {
            const SignedState out = corrections[i].apply(branches[i].pre, config);
            EXPECT_TRUE(out.ontic_equal(input))
                << to_string(config.variant()) << " " << to_string(input) << " branch " << i
                << " gave " << to_string(out);
          }
        }
      }
    }
  }
}

TEST(Protocols, TeleportRunsAreDeterministicPerSeed) {
  const ModelConfig two = ModelConfig::two_domain();
  const JointCanonical shared = canonical_shared_pair(two);
  const SignedState input = ket(+1, Domain::Y, 1);
  const TeleportRun a = teleport(input, shared, two, 5);
  const TeleportRun b = teleport(input, shared, two, 5);
  EXPECT_EQ(a.outcome, b.outcome);
  EXPECT_EQ(a.output, b.output);
  EXPECT_TRUE(a.success);
  EXPECT_TRUE(a.output.ontic_equal(input));
  EXPECT_EQ(a.transcript.at("protocol"), "teleportation");
  EXPECT_EQ(a.transcript.at("events").size(), 3u);
  EXPECT_EQ(a.transcript.at("events")[1].at("bits").size(), 2u);
}

TEST(Protocols, TeleportRejectsUnusableInputs) {
  const ModelConfig two = ModelConfig::two_domain();
  EXPECT_THROW(teleport_branches(SignedState::null(), canonical_shared_pair(two), two),
               IllFormedError);
  EXPECT_THROW(teleport_branches(ket(+1, Domain::X, 0), joint("|0>_x|0>_x", two), two),
               BadSharedStateError);
}

TEST(Protocols, OutcomeTableMatchesTheBranchMap) {
  const OutcomeTable two = emit_outcome_table(ModelConfig::two_domain());
  EXPECT_EQ(to_string(two.shared), "C+1^xx");
  ASSERT_EQ(two.rows.size(), 4u);
  EXPECT_EQ(pre_strings(two.rows[0]),
            (std::vector<std::string>{"|0>_x", "|0>_x", "|1>_x", "|1>_x"}));
  EXPECT_EQ(pre_strings(two.rows[1]),
            (std::vector<std::string>{"|1>_x", "-|1>_x", "|0>_x", "-|0>_x"}));
  EXPECT_EQ(pre_strings(two.rows[2]),
            (std::vector<std::string>{"|0>_y", "|1>_y", "|0>_y", "|1>_y"}));
  EXPECT_EQ(pre_strings(two.rows[3]),
            (std::vector<std::string>{"|1>_y", "|0>_y", "-|1>_y", "-|0>_y"}));

  const OutcomeTable four = emit_outcome_table(ModelConfig::four_domain());
  ASSERT_EQ(four.rows.size(), 8u);
  EXPECT_EQ(pre_strings(four.rows[4]),
            (std::vector<std::string>{"|0>_z", "|0>_z", "|1>_z", "|1>_z"}));
  EXPECT_EQ(pre_strings(four.rows[5]),
            (std::vector<std::string>{"|1>_z", "-|1>_z", "|0>_z", "-|0>_z"}));
  EXPECT_EQ(pre_strings(four.rows[6]),
            (std::vector<std::string>{"|0>_t", "|1>_t", "|0>_t", "|1>_t"}));
  EXPECT_EQ(pre_strings(four.rows[7]),
            (std::vector<std::string>{"|1>_t", "|0>_t", "-|1>_t", "-|0>_t"}));
}

}  // namespace
}  // namespace ontic
