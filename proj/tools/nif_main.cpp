// nif: min-cost multicast with correlated sources, Wardrop equilibria of
// the distributed compression game, and price-of-anarchy measurement.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "nif/anarchy.hpp"
#include "nif/equilibrium.hpp"
#include "nif/io.hpp"
#include "nif/kkt.hpp"

namespace {

using namespace nif;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitNoConvergence = 2;
constexpr int kExitCheckFailed = 3;

struct CommonOpts {
  std::string instance_path;
  std::string example;
  int ns = 2, nt = 2;
  double h = 1.0, c1 = 4.0, c2 = 8.0;
  std::string split = "uniform";
  int n = 0, m = 0;  // 0 = leave as configured
  bool limit_mode = false;
  double tol = 1e-4;
  double gap = 1e-8;
  int max_iters = 20000;
  std::string step = "linesearch";
  std::string format = "human";
  std::string out_path;
  std::string trace_path;
  std::string flow_rate_path;
  std::string candidate;
  bool assert_mode = false;
};

void add_instance_flags(CLI::App* cmd, CommonOpts& o) {
  cmd->set_help_flag("--help", "print help");  // frees -h for the entropy flag
  cmd->add_option("--instance", o.instance_path, "instance JSON file");
  cmd->add_option("--example", o.example, "bundled example: fig1 or fig2");
  cmd->add_option("--ns", o.ns, "fig1: number of sources");
  cmd->add_option("--nt", o.nt, "fig1: number of terminals");
  cmd->add_option("--h", o.h, "fig1: per-source entropy");
  cmd->add_option("--c1", o.c1, "example: first cost coefficient");
  cmd->add_option("--c2", o.c2, "example: second cost coefficient");
  cmd->add_option("--split", o.split, "source split: uniform or power");
  cmd->add_option("--n", o.n, "edge aggregation exponent");
  cmd->add_option("--m", o.m, "source aggregation exponent");
  cmd->add_flag("--limit-mode", o.limit_mode,
                "exact-max aggregation (n, m -> infinity)");
}

void add_solver_flags(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--gap", o.gap, "Frank-Wolfe duality gap tolerance")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--max-iters", o.max_iters, "iteration cap")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--step", o.step, "step rule: linesearch or diminishing");
  cmd->add_option("--trace", o.trace_path, "write per-iteration CSV trace");
}

void add_output_flags(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--format", o.format, "human, csv or json");
  cmd->add_option("--out", o.out_path, "write the report to a file");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ReportFormat parse_format(const std::string& f) {
  if (f == "human") return ReportFormat::Human;
  if (f == "csv") return ReportFormat::Csv;
  if (f == "json") return ReportFormat::Json;
  throw SchemaError("unknown format '" + f + "'");
}

AggregatorConfig aggregator_from(const CommonOpts& o, AggregatorConfig base) {
  if (o.limit_mode) return {Exponent::limit(), Exponent::limit()};
  if (o.n > 0) base.edge = Exponent::finite(o.n);
  if (o.m > 0) base.source = Exponent::finite(o.m);
  return base;
}

SourceSplit split_from(const CommonOpts& o) {
  if (o.split == "uniform") return SourceSplit::Uniform;
  if (o.split == "power") return SourceSplit::Power;
  throw SchemaError("unknown source split '" + o.split + "'");
}

struct Loaded {
  Instance instance;
  std::optional<Fig1Example> fig1;  // candidates, when --example fig1
};

Loaded load_instance(const CommonOpts& o) {
  // Default exponents: n = m = 16 (smooth), overridable per flags.
  const AggregatorConfig dflt{Exponent::finite(16), Exponent::finite(16)};
  if (!o.instance_path.empty()) {
    Instance inst = parse_instance(read_file(o.instance_path));
    AggregatorConfig agg = aggregator_from(o, inst.aggregator);
    if (!(agg == inst.aggregator)) inst = inst.with_aggregator(agg);
    return {std::move(inst), std::nullopt};
  }
  if (o.example == "fig1") {
    Fig1Example ex = make_fig1_instance(o.ns, o.nt, o.h, o.c1, o.c2,
                                        aggregator_from(o, dflt));
    Instance inst = ex.instance;
    return {std::move(inst), std::move(ex)};
  }
  if (o.example == "fig2") {
    return {make_fig2_instance(o.c1, o.c2, aggregator_from(o, dflt),
                               split_from(o)),
            std::nullopt};
  }
  throw SchemaError("select an instance with --instance or --example");
}

void emit(const CommonOpts& o, const std::string& text) {
  if (o.out_path.empty())
    std::cout << text;
  else
    write_file_atomic(o.out_path, text);
}

SolverConfig solver_config(const CommonOpts& o) {
  SolverConfig cfg;
  cfg.gap_tolerance = o.gap;
  cfg.max_iterations = o.max_iters;
  if (o.step == "diminishing")
    cfg.step_rule = StepRule::Diminishing;
  else if (o.step == "linesearch")
    cfg.step_rule = StepRule::LineSearch;
  else
    throw SchemaError("unknown step rule '" + o.step + "'");
  if (!o.trace_path.empty()) cfg.trace_stride = 1;
  return cfg;
}

int run_solve(const CommonOpts& o, bool wardrop) {
  const Loaded loaded = load_instance(o);
  const SolverConfig cfg = solver_config(o);
  SolveResult res = wardrop ? solve_wardrop(loaded.instance, cfg)
                            : solve_opt(loaded.instance, cfg);
  // For equilibrium solves report the instance's own cost at the returned
  // point, not the transformed objective the reduction minimized.
  if (wardrop) res.cost = social_cost(loaded.instance, res.flow_rate);
  if (!o.trace_path.empty())
    write_file_atomic(o.trace_path, emit_trace_csv(res.trace));
  emit(o, emit_report(res, parse_format(o.format)));
  if (!res.converged) {
    std::cerr << "solver did not reach the gap tolerance (gap " << res.gap
              << " after " << res.iterations << " iterations)\n";
    return kExitNoConvergence;
  }
  return kExitOk;
}

int run_solve_to_file(const CommonOpts& o, bool wardrop,
                      const std::string& flow_out) {
  const Loaded loaded = load_instance(o);
  const SolverConfig cfg = solver_config(o);
  const SolveResult res = wardrop ? solve_wardrop(loaded.instance, cfg)
                                  : solve_opt(loaded.instance, cfg);
  write_file_atomic(flow_out, serialize_flow_rate(res.flow_rate,
                                                  loaded.instance));
  if (!res.converged) return kExitNoConvergence;
  return kExitOk;
}

FlowRate point_for_check(const CommonOpts& o, const Loaded& loaded,
                         const std::string& checker) {
  if (!o.flow_rate_path.empty())
    return parse_flow_rate(read_file(o.flow_rate_path), loaded.instance);
  if (!o.candidate.empty()) {
    if (loaded.fig1) {
      if (o.candidate == "wardrop") return loaded.fig1->wardrop;
      if (o.candidate == "opt") return loaded.fig1->opt_candidate;
      throw SchemaError("fig1 candidates: wardrop or opt");
    }
    if (o.example == "fig2") {
      const Fig2Analytic an = fig2_analytic(o.c1, o.c2);
      const double h = o.candidate == "wardrop" ? an.h
                       : o.candidate == "opt"
                           ? an.h_star
                           : throw SchemaError("fig2 candidates: wardrop or opt");
      FlowRate fr = zero_flow_rate(loaded.instance);
      for (int t = 0; t < 2; ++t) {
        fr.rates(0, t) = h;
        fr.rates(1, t) = 1.0 - h;
      }
      for (int p = 0; p < loaded.instance.paths.num_paths(); ++p) {
        const Path& path = loaded.instance.paths.path(p);
        fr.path_flows[p] = fr.rates(path.source, path.terminal);
      }
      return fr;
    }
    throw SchemaError("--candidate requires --example fig1 or fig2");
  }
  // No point given: solve for one (at finite exponents when the checked
  // instance is configured in limit mode).
  AggregatorConfig agg = loaded.instance.aggregator;
  if (agg.edge.is_limit) agg.edge = Exponent::finite(64);
  if (agg.source.is_limit) agg.source = Exponent::finite(64);
  const Instance solve_inst = agg == loaded.instance.aggregator
                                  ? loaded.instance
                                  : loaded.instance.with_aggregator(agg);
  const SolverConfig cfg = solver_config(o);
  const SolveResult res = checker == "wardrop"
                              ? solve_wardrop(solve_inst, cfg)
                              : solve_opt(solve_inst, cfg);
  return res.flow_rate;
}

int run_check(const CommonOpts& o, const std::string& checker) {
  const Loaded loaded = load_instance(o);
  const FlowRate fr = point_for_check(o, loaded, checker);
  ConditionReport rep;
  if (checker == "opt")
    rep = check_opt_conditions(loaded.instance, fr, o.tol);
  else if (checker == "wardrop")
    rep = check_wardrop_conditions(loaded.instance, fr, o.tol);
  else
    rep = check_nash_conditions(loaded.instance, fr, o.tol);
  emit(o, emit_report(rep, parse_format(o.format)));
  if (o.assert_mode && !rep.passed()) {
    std::cerr << "check failed: worst residuals";
    for (int k = 0; k < 4; ++k) std::cerr << " " << rep.residual[k];
    std::cerr << "\n";
    return kExitCheckFailed;
  }
  return kExitOk;
}

int run_poa(const CommonOpts& o) {
  const Loaded loaded = load_instance(o);
  const PoaResult res = price_of_anarchy(loaded.instance, solver_config(o));
  emit(o, emit_report(res, parse_format(o.format)));
  return kExitOk;
}

int run_example(const CommonOpts& o, const std::string& wardrop_out,
                const std::string& opt_out) {
  const Loaded loaded = load_instance(o);
  emit(o, serialize_instance(loaded.instance));
  if (loaded.fig1) {
    if (!wardrop_out.empty())
      write_file_atomic(wardrop_out, serialize_flow_rate(
                                         loaded.fig1->wardrop,
                                         loaded.instance));
    if (!opt_out.empty())
      write_file_atomic(
          opt_out,
          serialize_flow_rate(loaded.fig1->opt_candidate, loaded.instance));
  }
  return kExitOk;
}

int run_sweep(const CommonOpts& o, const std::string& family, int count,
              std::uint64_t seed, int nt_from, int nt_to, int solve_exp) {
  SweepSpec spec;
  if (family == "fig1")
    spec.family = SweepSpec::Family::Fig1;
  else if (family == "fig2")
    spec.family = SweepSpec::Family::Fig2;
  else if (family == "independent")
    spec.family = SweepSpec::Family::RandomIndependent;
  else if (family == "uniform-degree")
    spec.family = SweepSpec::Family::RandomUniformDegree;
  else
    throw SchemaError("unknown sweep family '" + family + "'");
  spec.nt_from = nt_from;
  spec.nt_to = nt_to;
  spec.count = count;
  spec.seed = seed;
  spec.solve_exponent = solve_exp;
  spec.c_pairs = {{o.c1, o.c2}};
  spec.solver = solver_config(o);
  emit(o, emit_sweep_csv(sweep(spec)));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "min-cost multicast with correlated sources: social optima, Wardrop "
      "equilibria, and price of anarchy"};
  app.require_subcommand(1);

  CommonOpts o;
  std::string flow_out, wardrop_out, opt_out;
  std::string family = "fig2";
  int count = 20, nt_from = 5, nt_to = 10, solve_exp = 64;
  std::uint64_t seed = 1;

  auto* solve_opt_cmd = app.add_subcommand("solve-opt", "solve the min-cost program");
  auto* solve_war_cmd =
      app.add_subcommand("solve-wardrop", "solve for a Wardrop flow-rate");
  for (auto* cmd : {solve_opt_cmd, solve_war_cmd}) {
    add_instance_flags(cmd, o);
    add_solver_flags(cmd, o);
    add_output_flags(cmd, o);
    cmd->add_option("--flow-out", flow_out, "write the flow-rate JSON here");
  }

  auto* check_opt_cmd =
      app.add_subcommand("check-opt", "check the four optimality conditions");
  auto* check_war_cmd = app.add_subcommand(
      "check-wardrop", "check the four equilibrium conditions");
  auto* check_nash_cmd = app.add_subcommand(
      "check-nash", "check the exact-best-response conditions");
  for (auto* cmd : {check_opt_cmd, check_war_cmd, check_nash_cmd}) {
    add_instance_flags(cmd, o);
    add_solver_flags(cmd, o);
    add_output_flags(cmd, o);
    cmd->add_option("--tol", o.tol, "condition residual tolerance")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--flow-rate", o.flow_rate_path,
                    "flow-rate JSON to check");
    cmd->add_option("--candidate", o.candidate,
                    "check a bundled closed-form point: wardrop or opt");
    cmd->add_flag("--assert", o.assert_mode, "exit 3 when the check fails");
  }

  auto* poa_cmd = app.add_subcommand("poa", "price of anarchy of an instance");
  add_instance_flags(poa_cmd, o);
  add_solver_flags(poa_cmd, o);
  add_output_flags(poa_cmd, o);

  auto* sweep_cmd = app.add_subcommand("sweep", "price of anarchy over a family");
  add_instance_flags(sweep_cmd, o);
  add_solver_flags(sweep_cmd, o);
  add_output_flags(sweep_cmd, o);
  sweep_cmd->add_option("--family", family,
                        "fig1, fig2, independent or uniform-degree");
  sweep_cmd->add_option("--count", count, "random instances to draw");
  sweep_cmd->add_option("--seed", seed, "random seed");
  sweep_cmd->add_option("--nt-from", nt_from, "fig1: first N_T");
  sweep_cmd->add_option("--nt-to", nt_to, "fig1: last N_T");
  sweep_cmd->add_option("--solve-exponent", solve_exp,
                        "aggregation exponent used for the solves");

  auto* example_cmd =
      app.add_subcommand("example", "emit a bundled example instance");
  add_instance_flags(example_cmd, o);
  add_output_flags(example_cmd, o);
  example_cmd->add_option("--wardrop-out", wardrop_out,
                          "fig1: write the equilibrium candidate");
  example_cmd->add_option("--opt-out", opt_out,
                          "fig1: write the optimum candidate");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (solve_opt_cmd->parsed())
      return flow_out.empty() ? run_solve(o, false)
                              : run_solve_to_file(o, false, flow_out);
    if (solve_war_cmd->parsed())
      return flow_out.empty() ? run_solve(o, true)
                              : run_solve_to_file(o, true, flow_out);
    if (check_opt_cmd->parsed()) return run_check(o, "opt");
    if (check_war_cmd->parsed()) return run_check(o, "wardrop");
    if (check_nash_cmd->parsed()) return run_check(o, "nash");
    if (poa_cmd->parsed()) return run_poa(o);
    if (sweep_cmd->parsed())
      return run_sweep(o, family, count, seed, nt_from, nt_to, solve_exp);
    if (example_cmd->parsed()) return run_example(o, wardrop_out, opt_out);
  } catch (const SchemaError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const SolverError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return kExitNoConvergence;
  } catch (const UnsupportedConfig& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const UnsupportedTransform& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitValidation;
}
