// Command-line front end. Subcommands mirror the library modules:
//   normalize  parse one expression and print its canonical value
//   measure    repeated measurement of one state, outcome histogram
//   apply      named transformation of a state
//   protocol   teleportation and dense-coding transcripts
//   tables     engine-derived reference tables
//   check      bounded consistency check with JSON report
// stdout carries data, stderr carries diagnostics. Exit codes: 0 ok,
// 1 ill-formed input or engine error, 2 check found violations in a
// variant that is expected to be consistent.

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "ontic/checker.hpp"
#include "ontic/measure.hpp"
#include "ontic/protocols.hpp"
#include "ontic/tables.hpp"

namespace {

using namespace ontic;
using nlohmann::json;

// --seed beats ONTIC_SEED beats the built-in constant, so bare
// invocations stay reproducible.
std::uint64_t env_default_seed() {
  if (const char* env = std::getenv("ONTIC_SEED")) {
    char* end = nullptr;
    errno = 0;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (errno == 0 && end != env && *end == '\0') return v;
    std::cerr << "warning: ignoring malformed ONTIC_SEED '" << env << "'\n";
  }
  return kDefaultSeed;
}

std::string ket_string(Domain d, int index) {
  return "|" + std::to_string(index) + ">_" + std::string(1, domain_char(d));
}

// Data goes to stdout unless an output file was named.
void emit(const std::string& payload, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << payload << "\n";
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw Error("cannot open output file: " + out_path);
  out << payload << "\n";
}

struct Options {
  std::string variant = "2d";
  std::string model_path;
  std::string format;
  std::string output;
  std::string expr;
  std::string test;
  std::string transform;
  std::string which;
  std::string protocol;
  std::string input;
  std::string report_path;
  std::uint64_t seed = env_default_seed();
  std::uint64_t budget = 10'000'000;
  int trials = 1;
  int system = 0;
  int depth = 4;
  bool emit_table = false;
};

ModelConfig active_config(const Options& opt) {
  if (!opt.model_path.empty()) {
    std::ifstream in(opt.model_path);
    if (!in) throw Error("cannot open model file: " + opt.model_path);
    json j;
    in >> j;
    return ModelConfig::from_json(j);
  }
  return ModelConfig::standard(variant_from_string(opt.variant));
}

// ------------------------------------------------------------- normalize

int run_normalize(const Options& opt) {
  const ModelConfig config = active_config(opt);
  const ExprPtr parsed = parse(opt.expr, &config);
  const std::string value = is_joint_expr(*parsed)
                                ? to_string(canonicalize_joint(parsed, config))
                                : to_string(canonicalize(parsed, config));
  if (opt.format == "json") {
    const json j = {{"schema", 1},
                    {"variant", to_string(config.variant())},
                    {"input", opt.expr},
                    {"normalized", value}};
    emit(j.dump(2), opt.output);
  } else {
    emit(value, opt.output);
  }
  return 0;
}

// --------------------------------------------------------------- measure

int run_measure(const Options& opt) {
  const ModelConfig config = active_config(opt);
  const ExprPtr parsed = parse(opt.expr, &config);
  const MeasurementSpec spec = MeasurementSpec::from_test_name(opt.test, config);
  const bool joint = is_joint_expr(*parsed);
  if (!joint && spec.scope != MeasurementSpec::Scope::Local)
    throw IllFormedError("test " + opt.test + " measures a pair; the state is single-system");

  RandomSource rng(opt.seed);
  std::vector<std::string> labels;
  std::vector<int> counts;
  int conclusive = 0;

  if (!joint) {
    const SignedState state = canonicalize(parsed, config);
    labels = {ket_string(spec.domain, 0), ket_string(spec.domain, 1)};
    counts.assign(2, 0);
    for (int i = 0; i < opt.trials; ++i) {
      const SingleMeasurement m = measure(state, spec.domain, rng, config);
      ++counts[m.outcome];
      conclusive += m.conclusive;
    }
  } else {
    const JointCanonical state = canonicalize_joint(parsed, config);
    if (spec.scope == MeasurementSpec::Scope::Local) {
      const int system = opt.system == 0 ? 1 : opt.system;
      labels = {ket_string(spec.domain, 0), ket_string(spec.domain, 1)};
      counts.assign(2, 0);
      for (int i = 0; i < opt.trials; ++i) {
        const LocalOnJoint m = measure_local_on_joint(state, system, spec.domain, rng, config);
        ++counts[m.outcome];
        conclusive += m.conclusive;
      }
    } else {
      const JointContext& ctx = JointContext::get(config);
      counts.assign(4, 0);
      std::array<int, 4> classes{};
      for (int i = 0; i < opt.trials; ++i) {
        const JointMeasurement m = measure(state, spec, rng, config);
        ++counts[m.outcome];
        conclusive += m.conclusive;
        classes = m.outcome_classes;
      }
      for (int id : classes) labels.push_back(to_string(ctx.cls(id).rep));
    }
  }

  if (opt.format == "text") {
    std::string lines;
    for (std::size_t i = 0; i < labels.size(); ++i)
      lines += labels[i] + "  " + std::to_string(counts[i]) + "\n";
    lines += "conclusive  " + std::to_string(conclusive);
    emit(lines, opt.output);
    return 0;
  }
  json hist = json::object();
  for (std::size_t i = 0; i < labels.size(); ++i) hist[labels[i]] = counts[i];
  const json j = {{"schema", 1},
                  {"variant", to_string(config.variant())},
                  {"state", opt.expr},
                  {"test", spec.name()},
                  {"system", opt.system},
                  {"trials", opt.trials},
                  {"seed", opt.seed},
                  {"outcomes", labels},
                  {"counts", hist},
                  {"conclusive", conclusive}};
  emit(j.dump(2), opt.output);
  return 0;
}

// ----------------------------------------------------------------- apply

int run_apply(const Options& opt) {
  const ModelConfig config = active_config(opt);
  const Transformation t = Transformation::named(opt.transform, config);
  const ExprPtr parsed = parse(opt.expr, &config);
  std::string value;
  if (is_joint_expr(*parsed)) {
    JointCanonical state = canonicalize_joint(parsed, config);
    if (opt.system == 0)
      state = t.apply_local(t.apply_local(state, 1, config), 2, config);
    else
      state = t.apply_local(state, opt.system, config);
    value = to_string(state);
  } else {
    value = to_string(t.apply(canonicalize(parsed, config), config));
  }
  if (opt.format == "json") {
    const json j = {{"schema", 1},
                    {"variant", to_string(config.variant())},
                    {"transform", opt.transform},
                    {"system", opt.system},
                    {"input", opt.expr},
                    {"result", value}};
    emit(j.dump(2), opt.output);
  } else {
    emit(value, opt.output);
  }
  return 0;
}

// -------------------------------------------------------------- protocol

std::array<int, 2> parse_bits(const std::string& s) {
  if (s.size() != 2 || (s[0] != '0' && s[0] != '1') || (s[1] != '0' && s[1] != '1'))
    throw IllFormedError("dense coding takes two bits, e.g. --input 10");
  return {s[0] - '0', s[1] - '0'};
}

int run_protocol(const Options& opt) {
  const ModelConfig config = active_config(opt);
  const JointCanonical shared = canonical_shared_pair(config);

  if (opt.emit_table) {
    const std::string which = opt.protocol == "teleport" ? "outcome" : "dense-coding";
    const auto [j, text] = tables::emit_table(which, config);
    emit(opt.format == "text" ? text : j.dump(2), opt.output);
    return 0;
  }

  json runs = json::array();
  int successes = 0;
  if (opt.protocol == "teleport") {
    const ExprPtr parsed = parse(opt.input, &config);
    if (is_joint_expr(*parsed))
      throw IllFormedError("teleportation sends one system; --input must be single-system");
    const SignedState input = canonicalize(parsed, config);
    for (int i = 0; i < opt.trials; ++i) {
      TeleportRun r = teleport(input, shared, config, opt.seed + static_cast<std::uint64_t>(i));
      successes += r.success;
      runs.push_back(std::move(r.transcript));
    }
  } else {
    const std::array<int, 2> bits = parse_bits(opt.input);
    for (int i = 0; i < opt.trials; ++i) {
      DenseCodingRun r =
          dense_coding(bits, shared, config, opt.seed + static_cast<std::uint64_t>(i));
      successes += r.success;
      runs.push_back(std::move(r.transcript));
    }
  }
  const json j = {{"schema", 1},
                  {"protocol", opt.protocol == "teleport" ? "teleportation" : "dense-coding"},
                  {"variant", to_string(config.variant())},
                  {"sharedState", to_string(shared)},
                  {"trials", opt.trials},
                  {"seed", opt.seed},
                  {"successes", successes},
                  {"runs", runs}};
  if (opt.format == "text") {
    std::string lines = "protocol " + opt.protocol + ": " + std::to_string(successes) + "/" +
                        std::to_string(opt.trials) + " successful";
    emit(lines, opt.output);
  } else {
    emit(j.dump(2), opt.output);
  }
  return 0;
}

// ---------------------------------------------------------------- tables

int run_tables(const Options& opt) {
  const ModelConfig config = active_config(opt);
  if (opt.which.empty()) {
    const json j = {{"schema", 1}, {"tables", tables::table_names()}};
    emit(opt.format == "text" ? "known tables: map, sixteen-state, same-basis, cross-basis, "
                                "dense-coding, outcome, correction"
                              : j.dump(2),
         opt.output);
    return 0;
  }
  const auto [j, text] = tables::emit_table(opt.which, config);
  emit(opt.format == "text" ? text : j.dump(2), opt.output);
  return 0;
}

// ----------------------------------------------------------------- check

std::string report_text(const ConsistencyReport& rep) {
  std::string out = "variant " + to_string(rep.variant) + ", depth " +
                    std::to_string(rep.depth) + ", " + std::to_string(rep.checked) +
                    " expressions checked\n";
  out += std::to_string(rep.violations.size()) + " violations\n";
  for (const auto& v : rep.violations)
    out += "  " + v.expression + "\n    " + v.path_a + ": " + v.result_a + "\n    " + v.path_b +
           ": " + v.result_b + "\n";
  out += std::to_string(rep.paper_diffs.size()) + " reference diffs\n";
  for (const auto& d : rep.paper_diffs)
    out += "  " + d.location + ": reads " + d.published + ", derivation gives " + d.derived + "\n";
  out += std::to_string(rep.sign_notes.size()) + " sign notes\n";
  for (const auto& s : rep.sign_notes) out += "  " + s + "\n";
  for (const auto& n : rep.notes) out += "note: " + n + "\n";
  if (!out.empty() && out.back() == '\n') out.pop_back();
  return out;
}

int run_check(const Options& opt) {
  const ModelConfig config = active_config(opt);
  const ConsistencyReport rep = confluence_check(config, opt.depth, opt.budget);
  const json j = rep.to_json();
  emit(opt.format == "text" ? report_text(rep) : j.dump(2), opt.output);
  if (!opt.report_path.empty()) {
    std::ofstream out(opt.report_path);
    if (!out) throw Error("cannot open report file: " + opt.report_path);
    out << j.dump(2) << "\n";
  }
  // The frustrated variant exists to be inconsistent; finding its
  // contradiction is the expected result, not a failure.
  if (rep.violations.empty() || config.variant() == Variant::ThreeDomainFrustrated) return 0;
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  Options opt;
  CLI::App app{"ontic state rewriting engine"};
  app.require_subcommand(1);

  const auto add_variant = [&](CLI::App* cmd, std::vector<std::string> allowed) {
    cmd->add_option("--variant", opt.variant, "model variant")
        ->check(CLI::IsMember(allowed))
        ->capture_default_str();
  };
  const auto add_format = [&](CLI::App* cmd, const std::string& def) {
    opt.format = def;
    cmd->add_option("--format", opt.format, "output format")
        ->check(CLI::IsMember({"json", "text"}))
        ->capture_default_str();
    // One Options struct serves every subcommand, so the per-command
    // default must be reasserted when the command actually parses.
    cmd->preparse_callback([&opt, def](std::size_t) { opt.format = def; });
  };
  const auto add_output = [&](CLI::App* cmd) {
    cmd->add_option("--output", opt.output, "write data to this file instead of stdout");
  };
  const auto add_seed = [&](CLI::App* cmd) {
    cmd->add_option("--seed", opt.seed, "random seed")->capture_default_str();
  };

  int rc = 0;

  CLI::App* normalize = app.add_subcommand("normalize", "canonicalize one expression");
  normalize->add_option("expr", opt.expr, "state expression")->required();
  add_variant(normalize, {"2d", "3d", "3d-frustrated", "4d"});
  add_format(normalize, "text");
  add_output(normalize);
  normalize->callback([&] { rc = run_normalize(opt); });

  CLI::App* measure = app.add_subcommand("measure", "measure a state repeatedly");
  measure->add_option("--state", opt.expr, "state expression")->required();
  measure->add_option("--test", opt.test, "Mx|My|Mz|Mt|Mc-ii:ab|Mc-ij")->required();
  measure->add_option("--trials", opt.trials, "number of trials")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  measure->add_option("--system", opt.system, "side of a pair for local tests (default 1)")
      ->check(CLI::IsMember({0, 1, 2}));
  add_variant(measure, {"2d", "3d", "3d-frustrated", "4d"});
  add_format(measure, "json");
  add_output(measure);
  add_seed(measure);
  measure->callback([&] { rc = run_measure(opt); });

  CLI::App* apply = app.add_subcommand("apply", "apply a named transformation");
  apply->add_option("--transform", opt.transform, "transformation name, e.g. Px")->required();
  apply->add_option("--state", opt.expr, "state expression")->required();
  apply->add_option("--system", opt.system, "joint states: 1, 2, or 0 for both")
      ->check(CLI::IsMember({0, 1, 2}));
  add_variant(apply, {"2d", "3d", "3d-frustrated", "4d"});
  add_format(apply, "text");
  add_output(apply);
  apply->callback([&] { rc = run_apply(opt); });

  CLI::App* protocol = app.add_subcommand("protocol", "run a communication protocol");
  protocol->add_option("--protocol", opt.protocol, "teleport or densecode")
      ->check(CLI::IsMember({"teleport", "densecode"}))
      ->required();
  protocol->add_option("--input", opt.input, "state expression (teleport) or two bits (densecode)");
  protocol->add_option("--trials", opt.trials, "number of rounds")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  protocol->add_flag("--emit-table", opt.emit_table, "emit the derived protocol table instead");
  add_variant(protocol, {"2d", "4d"});
  add_format(protocol, "json");
  add_output(protocol);
  add_seed(protocol);
  protocol->callback([&] {
    if (!opt.emit_table && opt.input.empty())
      throw CLI::RequiredError("--input (unless --emit-table)");
    rc = run_protocol(opt);
  });

  CLI::App* tables_cmd = app.add_subcommand("tables", "emit engine-derived reference tables");
  tables_cmd->add_option("--which", opt.which, "table name; omit to list")
      ->check(CLI::IsMember(tables::table_names()));
  add_variant(tables_cmd, {"2d", "3d", "3d-frustrated", "4d"});
  add_format(tables_cmd, "json");
  add_output(tables_cmd);
  tables_cmd->callback([&] { rc = run_tables(opt); });

  CLI::App* check = app.add_subcommand("check", "bounded consistency check");
  add_variant(check, {"2d", "3d", "3d-frustrated", "4d"});
  check->add_option("--model", opt.model_path, "raw config JSON instead of a named variant")
      ->excludes("--variant");
  check->add_option("--depth", opt.depth, "closure depth")
      ->check(CLI::Range(2, 12))
      ->capture_default_str();
  check->add_option("--budget", opt.budget, "expression budget")->capture_default_str();
  check->add_option("--report", opt.report_path, "also write the JSON report to this file");
  add_format(check, "json");
  add_output(check);
  check->callback([&] { rc = run_check(opt); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return rc;
}
