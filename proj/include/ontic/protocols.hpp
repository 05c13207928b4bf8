#pragma once

#include <array>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ontic/config.hpp"
#include "ontic/errors.hpp"
#include "ontic/joint.hpp"
#include "ontic/measure.hpp"
#include "ontic/transform.hpp"

namespace ontic {

/// The maximally correlated pair C+1^xx that both protocols share.
inline JointCanonical canonical_shared_pair(const ModelConfig& config) {
  const JointContext& ctx = JointContext::get(config);
  return ctx.canonical_of_spelling(+1, CorrSpelling{Parity::C, +1, 1, Domain::X, Domain::X});
}

/// Correction applied by the receiving side per Bell answer, in the
/// answer order C+, C-, A+, A-. Inverse of the coding set: the C-
/// answer undoes the second coding transformation and the A+ answer
/// the first.
inline std::array<Transformation, 4> correction_map(const ModelConfig& config) {
  const std::vector<Transformation> set = Transformation::coding_set(config);
  return {set[0], set[2], set[1], set[3]};
}

// ---------------------------------------------------------------- dense coding

struct DenseCodingRun {
  std::array<int, 2> bits;
  std::array<int, 2> decoded;
  bool success;
  nlohmann::json transcript;
};

/// Sends two classical bits by transforming one system of a shared
/// correlated pair and measuring the pair against its correlated
/// domain. The four encodings land in the four members of the domain,
/// so the answer is deterministic and decodes exactly.
inline DenseCodingRun dense_coding(std::array<int, 2> bits, const JointCanonical& shared,
                                   const ModelConfig& config, std::uint64_t seed = kDefaultSeed) {
  if (bits[0] < 0 || bits[0] > 1 || bits[1] < 0 || bits[1] > 1)
    throw Error("dense coding sends two bits");
  if (!shared.is_correlated())
    throw BadSharedStateError("dense coding needs a shared correlated state");
  const JointContext& ctx = JointContext::get(config);
  RandomSource rng(seed);

  const std::vector<Transformation> set = Transformation::coding_set(config);
  std::array<JointCanonical, 4> encodings;
  for (int m = 0; m < 4; ++m) {
    encodings[m] = set[m].apply_local(shared, 1, config);
    for (int p = 0; p < m; ++p)
      if (encodings[m].ontic_equal(encodings[p]))
        throw BadSharedStateError("shared state does not separate the four messages");
  }

  const int message = bits[0] * 2 + bits[1];
  const JointCanonical encoded = encodings[message];

  const int dom = ctx.correlated_domain_of(ctx.class_of(encoded.as_correlated()));
  const auto [a, b, k] = ctx.correlated_domains()[dom].slots.front();
  const JointMeasurement answer = measure_global(encoded, a, b, k, rng, config);

  int decoded_message = -1;
  for (int m = 0; m < 4; ++m)
    if (ctx.class_of(encodings[m].as_correlated()) == answer.outcome_classes[answer.outcome])
      decoded_message = m;
  const std::array<int, 2> decoded = {decoded_message / 2, decoded_message % 2};

  nlohmann::json transcript = {
      {"schema", 1},
      {"protocol", "dense-coding"},
      {"variant", to_string(config.variant())},
      {"seed", seed},
      {"sharedState", to_string(shared)},
      {"input", bits},
      {"bits", bits},
      {"events",
       nlohmann::json::array(
           {{{"step", "encode"}, {"transform", set[message].name()}, {"state", to_string(encoded)}},
            {{"step", "measure"},
             {"test", MeasurementSpec::global_same(a, b).name()},
             {"outcome", answer.outcome},
             {"outcomeState", to_string(answer.post)},
             {"conclusive", answer.conclusive}},
            {{"step", "decode"}, {"bits", decoded}}})},
      {"output", decoded},
      {"decodedBits", decoded},
      {"success", decoded == bits}};
  return {bits, decoded, decoded == bits, std::move(transcript)};
}

// ---------------------------------------------------------------- teleportation

struct TeleportBranch {
  int outcome;               // index in the correlated domain's answer order
  CorrSpelling outcome_rep;  // Bell answer: class representative
  SignedState pre;           // system-B state before correction
};

/// Decomposes input (x) shared pair over the four Bell answers of the
/// sending pair. The shared state is spelled over the input's domain;
/// each defining product of a Bell answer picks up exactly one of the
/// shared state's products, and the unmeasured system is left in the
/// matching second component.
inline std::array<TeleportBranch, 4> teleport_branches(const SignedState& input,
                                                       const JointCanonical& shared,
                                                       const ModelConfig& config) {
  if (input.is_null()) throw IllFormedError("cannot teleport the null state");
  if (!shared.is_correlated())
    throw BadSharedStateError("teleportation needs a shared correlated state");
  const JointContext& ctx = JointContext::get(config);
  const Domain d = input.body->domain;
  const int cls = ctx.class_of(shared.as_correlated());

  const std::pair<CorrSpelling, int>* spelled = nullptr;
  for (const auto& m : ctx.cls(cls).members)
    if (m.first.first == d) {
      spelled = &m;
      break;
    }
  if (!spelled)
    throw NoRepresentationError("shared state has no spelling with system A2 in domain '" +
                                std::string(1, domain_char(d)) + "'");

  const CorrSpelling& sp = spelled->first;
  const ProductSet set = expand_spelling(sp).scaled(shared.sign * spelled->second);
  const auto& order = ctx.correlated_domains()[ctx.correlated_domain_of(cls)].classes;

  std::array<TeleportBranch, 4> branches;
  const std::array<std::pair<Parity, int>, 4> patterns = {
      {{Parity::C, +1}, {Parity::C, -1}, {Parity::A, +1}, {Parity::A, -1}}};
  for (const auto& [parity, op_sign] : patterns) {
    const CorrSpelling beta{parity, op_sign, sp.kind, d, sp.first};
    const ProductSet beta_set = expand_spelling(beta);
    const int beta_cls = ctx.class_of(beta);
    int outcome = -1;
    for (int i = 0; i < 4; ++i)
      if (order[i] == beta_cls) outcome = i;

    SignedState pre = SignedState::null();
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        const int s_elem = set.at(i, j);
        if (s_elem == 0) continue;
        const int coeff = beta_set.at(input.body->index, i);
        if (coeff == 0) continue;
        if (!pre.is_null()) throw Error("Bell answer met two shared products");
        pre = SignedState::of(input.sign * s_elem * coeff,
                              BasisState{set.second, static_cast<std::uint8_t>(j)});
      }
    }
    if (pre.is_null()) throw Error("Bell answer met no shared product");
    branches[outcome] = {outcome, ctx.cls(beta_cls).rep, pre};
  }
  return branches;
}

struct TeleportRun {
  int outcome;
  SignedState output;
  bool success;
  nlohmann::json transcript;
};

/// One teleportation round: Bell-measure the sending pair (all four
/// answers equally likely), send the two answer bits, apply the
/// correction. The channel is the identity on ontic states.
inline TeleportRun teleport(const SignedState& input, const JointCanonical& shared,
                            const ModelConfig& config, std::uint64_t seed = kDefaultSeed) {
  RandomSource rng(seed);
  const std::array<TeleportBranch, 4> branches = teleport_branches(input, shared, config);
  const int outcome = static_cast<int>(rng.uniform(4));
  const TeleportBranch& branch = branches[outcome];
  const Transformation correction = correction_map(config)[outcome];
  const SignedState output = correction.apply(branch.pre, config);
  const bool success = output.ontic_equal(input);

  nlohmann::json transcript = {
      {"schema", 1},
      {"protocol", "teleportation"},
      {"variant", to_string(config.variant())},
      {"seed", seed},
      {"input", to_string(input)},
      {"sharedState", to_string(shared)},
      {"events",
       nlohmann::json::array(
           {{{"step", "bell-measure"},
             {"outcome", outcome},
             {"outcomeState", to_string(branch.outcome_rep)}},
            {{"step", "classical-send"},
             {"bits", nlohmann::json::array({outcome / 2, outcome % 2})}},
            {{"step", "correct"},
             {"transform", correction.name()},
             {"pre", to_string(branch.pre)}}})},
      {"output", to_string(output)},
      {"success", success}};
  return {outcome, output, success, std::move(transcript)};
}

// ---------------------------------------------------------------- derived tables

struct OutcomeTable {
  CorrSpelling shared;
  std::array<CorrSpelling, 4> columns;  // Bell answers, C+,C-,A+,A- order
  struct Row {
    SignedState input;
    std::array<SignedState, 4> pre;  // system-B state per answer
  };
  std::vector<Row> rows;
};

/// Pre-correction teleportation table over every basis input.
inline OutcomeTable emit_outcome_table(const ModelConfig& config) {
  const JointContext& ctx = JointContext::get(config);
  const JointCanonical shared = canonical_shared_pair(config);
  const int cls = ctx.class_of(shared.as_correlated());
  const auto& order = ctx.correlated_domains()[ctx.correlated_domain_of(cls)].classes;

  OutcomeTable table;
  table.shared = shared.as_correlated();
  for (int i = 0; i < 4; ++i) table.columns[i] = ctx.cls(order[i]).rep;
  for (const BasisState& b : all_basis_states(config)) {
    const SignedState input = SignedState::of(+1, b);
    const auto branches = teleport_branches(input, shared, config);
    OutcomeTable::Row row{input, {}};
    for (int i = 0; i < 4; ++i) row.pre[i] = branches[i].pre;
    table.rows.push_back(row);
  }
  return table;
}

struct DenseCodingTable {
  struct Row {
    std::array<int, 2> bits;
    std::string transform;
    CorrSpelling result;                                // class representative
    std::vector<std::pair<CorrSpelling, int>> spellings;  // with signs vs the rep
  };
  std::array<Row, 4> rows;
};

/// Message-to-state table of dense coding over the canonical shared
/// pair.
inline DenseCodingTable dense_coding_table(const ModelConfig& config) {
  const JointContext& ctx = JointContext::get(config);
  const JointCanonical shared = canonical_shared_pair(config);
  const std::vector<Transformation> set = Transformation::coding_set(config);
  DenseCodingTable table;
  for (int m = 0; m < 4; ++m) {
    const JointCanonical encoded = set[m].apply_local(shared, 1, config);
    const int cls = ctx.class_of(encoded.as_correlated());
    table.rows[m] = {{m / 2, m % 2}, set[m].name(), ctx.cls(cls).rep, ctx.cls(cls).members};
  }
  return table;
}

}  // namespace ontic
