#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include <nlohmann/json.hpp>

#include <ontic/protocols.hpp>

// Derived-table construction and rendering. Every cell is computed by the
// engine; nothing in this header embeds a reference value.

namespace ontic::tables {

inline std::string signed_cell(int sign, const CorrSpelling& s) {
  return (sign < 0 ? "-" : "") + to_string(s);
}

/// Fixed-width text grid. Empty header row is allowed.
inline std::string render_grid(const std::vector<std::vector<std::string>>& grid) {
  std::vector<std::size_t> width;
  for (const auto& row : grid)
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (width.size() <= c) width.resize(c + 1, 0);
      width[c] = std::max(width[c], row[c].size());
    }
  std::string out;
  for (const auto& row : grid) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += "  ";
      out += row[c];
      if (c + 1 < row.size()) out.append(width[c] - row[c].size(), ' ');
    }
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------- map table

struct MapTable {
  struct Row {
    int kind;
    Domain source;
    SignedState plus, minus;
  };
  Variant variant;
  std::vector<Row> rows;
};

/// One row per declared (kind, source) edge; images computed by rewriting.
inline MapTable map_table(const ModelConfig& config) {
  MapTable table{config.variant(), {}};
  for (int k : config.kinds())
    for (Domain d : config.domains())
      for (const MapEdge* e : config.all_edges(k, d)) {
        (void)e;
        const SignedState zero = SignedState::of(+1, BasisState{d, 0});
        const SignedState one = SignedState::of(+1, BasisState{d, 1});
        table.rows.push_back({k, d, superpose_single(k, +1, zero, one, config),
                              superpose_single(k, -1, zero, one, config)});
        break;  // ambiguous graphs still emit a single declared row
      }
  return table;
}

inline nlohmann::json to_json(const MapTable& t) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : t.rows)
    rows.push_back({{"kind", r.kind},
                    {"source", std::string(1, domain_char(r.source))},
                    {"plus", to_string(r.plus)},
                    {"minus", to_string(r.minus)}});
  return {{"schema", 1}, {"table", "map"}, {"variant", to_string(t.variant)}, {"rows", rows}};
}

inline std::string to_text(const MapTable& t) {
  std::vector<std::vector<std::string>> grid{{"kind", "domain", "plus", "minus"}};
  for (const auto& r : t.rows)
    grid.push_back({std::to_string(r.kind), std::string(1, domain_char(r.source)),
                    to_string(r.plus), to_string(r.minus)});
  return render_grid(grid);
}

// ---------------------------------------------------------------- sixteen-state table

struct SixteenStateTable {
  struct Row {
    Domain first, second;
    std::array<JointBasisState, 4> products;  // 00, 01, 10, 11
    std::array<CorrSpelling, 4> classes;      // answers of the pair's correlated domain
  };
  Variant variant;
  std::vector<Row> rows;
};

/// Product domains of two systems with the correlated domain each pair's
/// coherent patterns land in.
inline SixteenStateTable sixteen_state_table(const ModelConfig& config) {
  const JointContext& ctx = JointContext::get(config);
  SixteenStateTable table{config.variant(), {}};
  for (Domain a : config.domains())
    for (Domain b : config.domains()) {
      SixteenStateTable::Row row{a, b, {}, {}};
      for (int i = 0; i < 4; ++i)
        row.products[i] = {BasisState{a, static_cast<uint8_t>(i / 2)},
                           BasisState{b, static_cast<uint8_t>(i % 2)}};
      const auto dom = ctx.find_correlated_domain(a, b, std::nullopt);
      if (!dom) continue;  // pairs outside every correlated domain are skipped
      for (int i = 0; i < 4; ++i)
        row.classes[i] = ctx.cls(ctx.correlated_domains()[*dom].classes[i]).rep;
      table.rows.push_back(row);
    }
  return table;
}

inline nlohmann::json to_json(const SixteenStateTable& t) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : t.rows) {
    nlohmann::json products = nlohmann::json::array();
    for (const auto& p : r.products) products.push_back(to_string(p));
    nlohmann::json classes = nlohmann::json::array();
    for (const auto& c : r.classes) classes.push_back(to_string(c));
    rows.push_back({{"first", std::string(1, domain_char(r.first))},
                    {"second", std::string(1, domain_char(r.second))},
                    {"products", products},
                    {"classes", classes}});
  }
  return {{"schema", 1},
          {"table", "sixteen-state"},
          {"variant", to_string(t.variant)},
          {"rows", rows}};
}

inline std::string to_text(const SixteenStateTable& t) {
  std::vector<std::vector<std::string>> grid{{"pair", "products", "correlated domain"}};
  for (const auto& r : t.rows) {
    std::string prod, cls;
    for (int i = 0; i < 4; ++i) {
      if (i) prod += " ";
      prod += to_string(r.products[i]);
    }
    for (int i = 0; i < 4; ++i) {
      if (i) cls += " ";
      cls += to_string(r.classes[i]);
    }
    grid.push_back({std::string{domain_char(r.first)} + domain_char(r.second), prod, cls});
  }
  return render_grid(grid);
}

// ---------------------------------------------------------------- correlated-domain tables

struct CorrelatedTable {
  Variant variant;
  std::vector<std::tuple<Domain, Domain, int>> slots;  // column headers
  struct Row {
    CorrSpelling rep;
    std::vector<std::pair<CorrSpelling, int>> cells;  // spelling and sign vs the rep
  };
  std::array<Row, 4> rows;
};

/// Spellings of the four answers of the correlated domain holding the
/// (a, b) pair, one column per slot. Cell sign -1 marks an additive
/// inverse relative to the row's representative.
inline CorrelatedTable correlated_table(const ModelConfig& config, Domain a, Domain b) {
  const JointContext& ctx = JointContext::get(config);
  const auto dom = ctx.find_correlated_domain(a, b, std::nullopt);
  if (!dom)
    throw NoRepresentationError(std::string("no correlated domain holds the pair ") +
                                domain_char(a) + domain_char(b));
  const auto& info = ctx.correlated_domains()[*dom];
  CorrelatedTable table{config.variant(), info.slots, {}};
  for (int r = 0; r < 4; ++r) {
    table.rows[r].rep = ctx.cls(info.classes[r]).rep;
    for (const auto& [sa, sb, sk] : info.slots) {
      (void)sk;
      const auto cell = ctx.spelling_on(info.classes[r], sa, sb);
      table.rows[r].cells.push_back(*cell);
    }
  }
  return table;
}

inline CorrelatedTable same_basis_table(const ModelConfig& config) {
  const Domain d = config.domains().front();
  return correlated_table(config, d, d);
}

inline CorrelatedTable cross_basis_table(const ModelConfig& config) {
  return correlated_table(config, config.domains()[0], config.domains()[1]);
}

inline nlohmann::json to_json(const CorrelatedTable& t, const std::string& name) {
  nlohmann::json slots = nlohmann::json::array();
  for (const auto& [a, b, k] : t.slots)
    slots.push_back({{"first", std::string(1, domain_char(a))},
                     {"second", std::string(1, domain_char(b))},
                     {"kind", k}});
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : t.rows) {
    nlohmann::json cells = nlohmann::json::array();
    for (const auto& [sp, sign] : r.cells) cells.push_back(signed_cell(sign, sp));
    rows.push_back({{"rep", to_string(r.rep)}, {"cells", cells}});
  }
  return {{"schema", 1},
          {"table", name},
          {"variant", to_string(t.variant)},
          {"slots", slots},
          {"rows", rows}};
}

inline std::string to_text(const CorrelatedTable& t) {
  std::vector<std::vector<std::string>> grid;
  std::vector<std::string> head{"answer"};
  for (const auto& [a, b, k] : t.slots)
    head.push_back(std::string{domain_char(a)} + domain_char(b) + ":" + std::to_string(k));
  grid.push_back(head);
  for (const auto& r : t.rows) {
    std::vector<std::string> row{to_string(r.rep)};
    for (const auto& [sp, sign] : r.cells) row.push_back(signed_cell(sign, sp));
    grid.push_back(row);
  }
  return render_grid(grid);
}

// ---------------------------------------------------------------- protocol tables

inline nlohmann::json to_json(const DenseCodingTable& t, Variant variant) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : t.rows) {
    nlohmann::json spellings = nlohmann::json::array();
    for (const auto& [sp, sign] : r.spellings) spellings.push_back(signed_cell(sign, sp));
    rows.push_back({{"bits", r.bits},
                    {"transform", r.transform},
                    {"result", to_string(r.result)},
                    {"spellings", spellings}});
  }
  return {{"schema", 1},
          {"table", "dense-coding"},
          {"variant", to_string(variant)},
          {"rows", rows}};
}

inline std::string to_text(const DenseCodingTable& t) {
  std::vector<std::vector<std::string>> grid{{"bits", "transform", "result", "spellings"}};
  for (const auto& r : t.rows) {
    std::string spellings;
    for (const auto& [sp, sign] : r.spellings) {
      if (!spellings.empty()) spellings += " = ";
      spellings += signed_cell(sign, sp);
    }
    grid.push_back({std::to_string(r.bits[0]) + std::to_string(r.bits[1]), r.transform,
                    to_string(r.result), spellings});
  }
  return render_grid(grid);
}

inline nlohmann::json to_json(const OutcomeTable& t, Variant variant) {
  nlohmann::json columns = nlohmann::json::array();
  for (const auto& c : t.columns) columns.push_back(to_string(c));
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : t.rows) {
    nlohmann::json pre = nlohmann::json::array();
    for (const auto& s : r.pre) pre.push_back(to_string(s));
    rows.push_back({{"input", to_string(r.input)}, {"branches", pre}});
  }
  return {{"schema", 1},
          {"table", "outcome"},
          {"variant", to_string(variant)},
          {"shared", to_string(t.shared)},
          {"columns", columns},
          {"rows", rows}};
}

inline std::string to_text(const OutcomeTable& t) {
  std::vector<std::vector<std::string>> grid;
  std::vector<std::string> head{"input"};
  for (const auto& c : t.columns) head.push_back(to_string(c));
  grid.push_back(head);
  for (const auto& r : t.rows) {
    std::vector<std::string> row{to_string(r.input)};
    for (const auto& s : r.pre) row.push_back(to_string(s));
    grid.push_back(row);
  }
  return render_grid(grid);
}

struct CorrectionTable {
  Variant variant;
  std::array<CorrSpelling, 4> outcomes;
  std::array<std::string, 4> transforms;
};

inline CorrectionTable correction_table(const ModelConfig& config) {
  const JointContext& ctx = JointContext::get(config);
  const JointCanonical shared = canonical_shared_pair(config);
  const auto& order =
      ctx.correlated_domains()[ctx.correlated_domain_of(ctx.class_of(shared.as_correlated()))]
          .classes;
  const auto map = correction_map(config);
  CorrectionTable table{config.variant(), {}, {}};
  for (int i = 0; i < 4; ++i) {
    table.outcomes[i] = ctx.cls(order[i]).rep;
    table.transforms[i] = map[i].name();
  }
  return table;
}

inline nlohmann::json to_json(const CorrectionTable& t) {
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < 4; ++i)
    rows.push_back({{"outcome", to_string(t.outcomes[i])}, {"transform", t.transforms[i]}});
  return {{"schema", 1},
          {"table", "correction"},
          {"variant", to_string(t.variant)},
          {"rows", rows}};
}

inline std::string to_text(const CorrectionTable& t) {
  std::vector<std::vector<std::string>> grid{{"outcome", "transform"}};
  for (int i = 0; i < 4; ++i) grid.push_back({to_string(t.outcomes[i]), t.transforms[i]});
  return render_grid(grid);
}

/// Emits the table named by the CLI `--which` flag.
inline std::pair<nlohmann::json, std::string> emit_table(const std::string& which,
                                                         const ModelConfig& config) {
  if (which == "map") {
    const MapTable t = map_table(config);
    return {to_json(t), to_text(t)};
  }
  if (which == "sixteen-state") {
    const SixteenStateTable t = sixteen_state_table(config);
    return {to_json(t), to_text(t)};
  }
  if (which == "same-basis") {
    const CorrelatedTable t = same_basis_table(config);
    return {to_json(t, "same-basis"), to_text(t)};
  }
  if (which == "cross-basis") {
    const CorrelatedTable t = cross_basis_table(config);
    return {to_json(t, "cross-basis"), to_text(t)};
  }
  if (which == "dense-coding") {
    const DenseCodingTable t = dense_coding_table(config);
    return {to_json(t, config.variant()), to_text(t)};
  }
  if (which == "outcome") {
    const OutcomeTable t = emit_outcome_table(config);
    return {to_json(t, config.variant()), to_text(t)};
  }
  if (which == "correction") {
    const CorrectionTable t = correction_table(config);
    return {to_json(t), to_text(t)};
  }
  throw Error("unknown table: " + which +
              " (expected map, sixteen-state, same-basis, cross-basis, dense-coding, "
              "outcome, correction)");
}

inline const std::vector<std::string>& table_names() {
  static const std::vector<std::string> names{
      "map", "sixteen-state", "same-basis", "cross-basis", "dense-coding", "outcome",
      "correction"};
  return names;
}

}  // namespace ontic::tables
