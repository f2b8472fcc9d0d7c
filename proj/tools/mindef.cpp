// mindef: structural analysis and minimal-deficiency realizations of
// mass-action systems. See README.md for usage and docs/formats.md for the
// input formats.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mindef/conjugacy.hpp"
#include "mindef/dynamics.hpp"
#include "mindef/error.hpp"
#include "mindef/report.hpp"
#include "mindef/structure.hpp"
#include "mindef/text_format.hpp"

using namespace mindef;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFalse = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitLimit = 3;
constexpr int kExitUsage = 64;
constexpr int kExitData = 65;
constexpr int kExitNoInput = 66;
constexpr int kExitSoftware = 70;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw InputError("cannot write '" + path + "'");
}

struct LoadedInput {
  Network network;
  std::string kind;  // "network" or "ode"
};

// Network files load as written; ODE files load as their canonical network.
LoadedInput load(const std::string& path) {
  const std::string text = read_file(path);
  if (looks_like_ode(text)) return {canonical_realization(parse_ode(text)), "ode"};
  return {parse_network(text), "network"};
}

std::vector<Rational> parse_c(const std::string& text, std::size_t n) {
  std::vector<Rational> c;
  if (text.empty()) return std::vector<Rational>(n, Rational(1));
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    Rational v = parse_rational(item);
    if (sgn(v) <= 0) throw Error(ErrorKind::InvalidNetwork, "conjugacy constants must be positive");
    c.push_back(v);
  }
  if (c.size() != n)
    throw Error(ErrorKind::InvalidNetwork, "expected " + std::to_string(n) +
                                               " conjugacy constants, got " +
                                               std::to_string(c.size()));
  return c;
}

double default_time_limit() {
  if (const char* env = std::getenv("MINDEF_TIME_LIMIT")) {
    try {
      return std::stod(env);
    } catch (const std::exception&) {
      std::cerr << "mindef: ignoring malformed MINDEF_TIME_LIMIT\n";
    }
  }
  return 60;
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::UnsupportedFormat:
      return kExitUsage;
    case ErrorKind::Parse:
    case ErrorKind::DuplicateComplex:
    case ErrorKind::DuplicateReaction:
    case ErrorKind::InvalidNetwork:
    case ErrorKind::NonKinetic:
    case ErrorKind::SpeciesMismatch:
    case ErrorKind::DegenerateProblem:
    case ErrorKind::RankFailure:
      return kExitData;
    case ErrorKind::VerificationFailure:
    case ErrorKind::Solver:
    case ErrorKind::Internal:
      return kExitSoftware;
  }
  return kExitSoftware;
}

void emit(const Json& report) { std::cout << report.dump(2) << "\n"; }

struct ModelOptions {
  std::string eps = "1/100000";
  std::string big_m;
  std::vector<std::string> extra;
};

ConjugacyMilp build_model(const Network& net, const ModelOptions& opts) {
  std::vector<Complex> extra;
  for (const auto& e : opts.extra) extra.push_back(parse_complex(e, net.species()));
  ProblemSpec spec = make_problem_spec(net, extra, parse_rational(opts.eps));
  if (!opts.big_m.empty()) spec.big_m = parse_rational(opts.big_m);
  return assemble(spec);
}

int cmd_analyze(const std::string& path) {
  LoadedInput in = load(path);
  Json report = report_header("analyze");
  report["input"] = {{"path", path}, {"kind", in.kind}};
  report["network"] = network_json(in.network);
  report["structure"] = structure_json(in.network);
  emit(report);
  return kExitOk;
}

struct MinimizeOptions {
  std::string path;
  ModelOptions model;
  double time_limit = 60;
  std::size_t node_limit = 1'000'000;
  unsigned threads = 1;
  std::string export_path;
  std::string network_out;
};

int cmd_minimize(const MinimizeOptions& opts) {
  LoadedInput in = load(opts.path);
  const ConjugacyMilp milp = build_model(in.network, opts.model);
  if (!opts.export_path.empty()) write_file(opts.export_path, export_model(milp, ModelFormat::Mps));

  MilpConfig base;
  base.time_limit_seconds = opts.time_limit;
  base.node_limit = opts.node_limit;
  base.threads = opts.threads;
  const MilpSolution solution = solve_milp(milp.problem, solver_config(milp, base));

  Json report = report_header("minimize");
  report["input"] = {{"path", opts.path}, {"kind", in.kind}};
  report["source"] = {{"network", network_json(in.network)},
                      {"structure", structure_json(in.network)}};
  report["model"] = model_json(milp);
  report["solver"] = solver_json(solution);

  const int source_deficiency = analyze_structure(in.network).delta;
  int code = kExitOk;
  if (solution.status == MilpStatus::Infeasible) {
    report["realization"] = nullptr;
    report["message"] =
        "no weakly reversible network over the candidate complexes is linearly conjugate to "
        "the source";
    code = kExitInfeasible;
  } else {
    if (solution.status != MilpStatus::Optimal) code = kExitLimit;
    if (solution.has_incumbent()) {
      const ConjugateRealization realization = recover(milp, solution.values);
      const ConjugacyCheck check =
          verify_linear_conjugacy(in.network, realization.network, realization.c);
      const bool reversible = is_weakly_reversible(realization.network);
      report["realization"] = realization_json(realization);
      report["verification"] = {{"linear_conjugacy", check.conjugate},
                                {"weakly_reversible", reversible}};
      if (!check.conjugate || !reversible)
        throw Error(ErrorKind::VerificationFailure, "realization failed verification");
      if (!opts.network_out.empty()) write_file(opts.network_out, print_network(realization.network));
      std::string message;
      if (solution.status != MilpStatus::Optimal)
        message = "search stopped early; the realization is the best found, not proven optimal";
      else if (realization.achieved_deficiency < source_deficiency)
        message = "found a weakly reversible conjugate network of deficiency " +
                  std::to_string(realization.achieved_deficiency);
      else
        message = "no weakly reversible conjugate network over the candidate complexes has a "
                  "lower deficiency";
      report["message"] = message;
    } else {
      report["realization"] = nullptr;
      report["message"] = "search stopped before any realization was found";
    }
  }
  emit(report);
  return code;
}

int cmd_canonical(const std::string& path, const std::string& network_out) {
  const PolySystem system = parse_ode(read_file(path));
  const Network net = canonical_realization(system);
  if (!network_out.empty()) write_file(network_out, print_network(net));
  Json report = report_header("canonical");
  report["input"] = {{"path", path}, {"kind", "ode"}};
  report["network"] = network_json(net);
  report["structure"] = structure_json(net);
  emit(report);
  return kExitOk;
}

int cmd_verify(const std::string& source_path, const std::string& target_path,
               const std::string& c_text) {
  const LoadedInput source = load(source_path);
  const LoadedInput target = load(target_path);
  const std::vector<Rational> c = parse_c(c_text, source.network.species_count());
  const ConjugacyCheck check = verify_linear_conjugacy(source.network, target.network, c);
  Json report = report_header("verify");
  report["source"] = source_path;
  report["target"] = target_path;
  report["verdict"] = conjugacy_json(check, source.network.species(), c);
  emit(report);
  return check.conjugate ? kExitOk : kExitFalse;
}

int cmd_export(const std::string& path, const ModelOptions& model, const std::string& format,
               const std::string& out_path) {
  const ModelFormat fmt = parse_model_format(format);
  const ConjugacyMilp milp = build_model(load(path).network, model);
  const std::string text = export_model(milp, fmt);
  if (out_path.empty())
    std::cout << text;
  else
    write_file(out_path, text);
  return kExitOk;
}

void add_model_options(CLI::App* cmd, ModelOptions& opts) {
  cmd->add_option("--eps", opts.eps, "Positivity threshold (exact rational or decimal)")
      ->capture_default_str();
  cmd->add_option("--big-m", opts.big_m,
                  "Constant for the separation and coupling rows (default 1/eps)");
  cmd->add_option("--extra-complexes", opts.extra,
                  "Additional candidate complex, e.g. \"2 A + B\" (repeatable)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Minimal-deficiency weakly reversible realizations of mass-action systems"};
  app.require_subcommand(1);

  std::string path, path_b, c_text, network_out, format = "mps", out_path;

  auto* analyze = app.add_subcommand("analyze", "Structural report of a network or ODE file");
  analyze->add_option("file", path, "Network or ODE file")->required();

  MinimizeOptions mopts;
  mopts.time_limit = default_time_limit();
  auto* minimize = app.add_subcommand(
      "minimize", "Find a linearly conjugate weakly reversible network of least deficiency");
  minimize->add_option("file", mopts.path, "Network or ODE file")->required();
  add_model_options(minimize, mopts.model);
  minimize->add_option("--time-limit", mopts.time_limit,
                       "Seconds before the search stops (env MINDEF_TIME_LIMIT)")
      ->capture_default_str();
  minimize->add_option("--node-limit", mopts.node_limit, "Branch-and-bound node limit")
      ->capture_default_str();
  minimize->add_option("--threads", mopts.threads, "Solver threads")->capture_default_str();
  minimize->add_option("--export", mopts.export_path, "Also write the model as MPS to this path");
  minimize->add_option("-o,--network-out", mopts.network_out,
                       "Write the realization as a network file");

  auto* canonical =
      app.add_subcommand("canonical", "Canonical network of a polynomial ODE system");
  canonical->add_option("file", path, "ODE file")->required();
  canonical->add_option("-o,--network-out", network_out, "Write the network file here");

  auto* verify = app.add_subcommand(
      "verify", "Exact linear conjugacy check: target(y) = diag(c)^-1 source(diag(c) y)");
  verify->add_option("source", path, "Source network or ODE file")->required();
  verify->add_option("target", path_b, "Target network or ODE file")->required();
  verify->add_option("--c", c_text, "Comma-separated conjugacy constants (default all 1)");

  ModelOptions eopts;
  auto* exp = app.add_subcommand("export", "Write the optimization model");
  exp->add_option("file", path, "Network or ODE file")->required();
  add_model_options(exp, eopts);
  exp->add_option("--format", format, "mps or algebraic")->capture_default_str();
  exp->add_option("-o,--output", out_path, "Output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }
  if (mopts.threads == 0) {
    std::cerr << "mindef: --threads must be at least 1\n";
    return kExitUsage;
  }

  try {
    if (*analyze) return cmd_analyze(path);
    if (*minimize) return cmd_minimize(mopts);
    if (*canonical) return cmd_canonical(path, network_out);
    if (*verify) return cmd_verify(path, path_b, c_text);
    if (*exp) return cmd_export(path, eopts, format, out_path);
  } catch (const InputError& e) {
    std::cerr << "mindef: " << e.what() << "\n";
    return kExitNoInput;
  } catch (const Error& e) {
    std::cerr << "mindef: " << to_string(e.kind()) << ": " << e.what() << "\n";
    return exit_code(e.kind());
  }
  return kExitUsage;
}
