// Copyright 2026 The tkq Authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

// tkq command line: gen, build, exact, solve, stats, sweep, report.
//
// Exit codes: 0 success, 2 usage or bad input, 3 resource guard,
// 4 infeasible or undefined result, 5 I/O.

#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "tkq.hpp"

namespace {

enum Exit { kOk = 0, kUsage = 2, kGuard = 3, kUndefined = 4, kIo = 5 };

struct Options {
  bool json = false;

  // gen
  std::size_t toolkits = 3;
  std::size_t machines = 2;
  unsigned capacity_bits = 8;
  std::uint64_t seed = 1;
  std::string output;

  // build
  std::string input;
  std::string variant = "raw";
  std::string lm = "1e3";
  std::string lt = "1e7";
  std::string ls = "1";

  // solve
  std::string solver = "sa";
  std::size_t steps = 1280;
  std::size_t restarts = 500;
  std::optional<double> t_start;
  std::optional<double> t_end;
  std::size_t shots = 1000;
  std::size_t p = 1;
  double dg = 0.9;
  double db = 0.6;
  bool postprocess = false;

  // stats
  std::vector<std::size_t> layers{1};

  // sweep / report
  std::size_t workers = 1;
  bool timings = false;
  bool select_best = false;
  std::string ratio = "opt-over-best";
};

void emit(const Options& opt, const nlohmann::json& summary, const std::string& human) {
  if (opt.json)
    std::cout << summary.dump() << '\n';
  else
    std::cout << human << '\n';
}

tkq::VariantSpec parse_variant(const Options& opt) {
  if (opt.variant == "raw") return tkq::RawPenalty{tkq::parse_rational(opt.lm), tkq::parse_rational(opt.lt)};
  if (opt.variant == "scaled") return tkq::ScaledPenalty{tkq::parse_rational(opt.ls)};
  if (opt.variant == "rounded") return tkq::RoundedCost{};
  throw tkq::InputError("--variant must be raw, scaled or rounded");
}

int cmd_gen(const Options& opt) {
  auto inst = tkq::sanitize_instance(tkq::generate_instance(opt.toolkits, opt.machines, opt.capacity_bits, opt.seed));
  tkq::save_instance(inst, opt.output);
  const auto vm = tkq::variable_map(inst);
  emit(opt,
       {{"path", opt.output}, {"id", inst.id}, {"toolkits", inst.toolkit_count()},
        {"machines", inst.machine_count()}, {"variables", vm.n}},
       "wrote " + opt.output + ": " + std::to_string(inst.toolkit_count()) + " toolkits, " +
           std::to_string(inst.machine_count()) + " machines, " + std::to_string(vm.n) + " QUBO variables");
  return kOk;
}

int cmd_build(const Options& opt) {
  const auto variant = parse_variant(opt);
  if (!tkq::on_default_grid(variant))
    std::cerr << "warning: " << tkq::penalty_label(variant) << " is not on the default penalty grid\n";
  const auto inst = tkq::sanitize_instance(tkq::load_instance(opt.input));
  const auto q = tkq::build_qubo(inst, variant);
  tkq::save_qubo(q, opt.output);
  emit(opt,
       {{"path", opt.output}, {"variant", tkq::penalty_label(variant)}, {"variables", q.n},
        {"entries", q.coeffs.size()}, {"offset", tkq::to_string(q.offset)}},
       "wrote " + opt.output + " (+ .varmap.json): " + tkq::penalty_label(variant) + ", " + std::to_string(q.n) +
           " variables, " + std::to_string(q.coeffs.size()) + " entries");
  return kOk;
}

int cmd_exact(const Options& opt) {
  const auto inst = tkq::sanitize_instance(tkq::load_instance(opt.input));
  const auto sol = tkq::exact_solve(inst);
  nlohmann::json choice;
  std::string human = "optimal cost " + tkq::to_string(sol.cost) + ":";
  for (std::size_t t = 0; t < inst.toolkit_count(); ++t) {
    const auto& machine = inst.machines[sol.assignment.machine_of[t]];
    choice[inst.toolkits[t]] = machine;
    human += " " + inst.toolkits[t] + "->" + machine;
  }
  emit(opt, {{"cost", tkq::to_string(sol.cost)}, {"assignment", choice}}, human);
  return kOk;
}

int cmd_solve(const Options& opt) {
  const auto q = tkq::load_qubo(opt.input);
  tkq::SolverSpec spec{opt.solver, {}};
  if (opt.solver == "sa") {
    spec.params = {{"steps", std::to_string(opt.steps)}, {"restarts", std::to_string(opt.restarts)}};
    if (opt.t_start) spec.params["t_start"] = tkq::format_double(*opt.t_start);
    if (opt.t_end) spec.params["t_end"] = tkq::format_double(*opt.t_end);
  } else if (opt.solver == "random") {
    spec.params = {{"shots", std::to_string(opt.shots)}};
  } else if (opt.solver == "lrqaoa") {
    spec.params = {{"p", std::to_string(opt.p)},
                   {"dg", tkq::format_double(opt.dg)},
                   {"db", tkq::format_double(opt.db)},
                   {"shots", std::to_string(opt.shots)}};
  }
  auto samples = tkq::run_solver(q, spec, opt.seed);
  if (opt.postprocess) samples = tkq::postprocess(q, samples);
  const auto csv = tkq::samples_to_csv(samples);
  if (opt.output.empty()) {
    std::cout << csv;
    return kOk;
  }
  tkq::write_text_file(opt.output, csv);
  const auto& best = samples.entries.front();
  emit(opt,
       {{"path", opt.output}, {"solver", opt.solver}, {"distinct", samples.entries.size()},
        {"total", samples.total()}, {"best_bits", tkq::to_string(best.bits)},
        {"best_energy", tkq::to_string(best.energy)}},
       "wrote " + opt.output + ": " + std::to_string(samples.total()) + " samples, best energy " +
           tkq::to_string(best.energy));
  return kOk;
}

int cmd_stats(const Options& opt) {
  const auto q = tkq::load_qubo(opt.input);
  std::cout << "qubits,edges,colors,p,two_qubit_interactions,cost_layer_depth\n";
  for (auto p : opt.layers) {
    const auto s = tkq::circuit_stats(q, p);
    std::cout << s.qubits << ',' << s.edges << ',' << s.colors << ',' << s.p << ',' << s.two_qubit_interactions << ','
              << s.cost_layer_depth << '\n';
  }
  return kOk;
}

int cmd_sweep(Options opt) {
  if (opt.output.empty()) {
    if (const char* dir = std::getenv("TKQ_OUT_DIR")) opt.output = dir;
  }
  if (opt.output.empty()) throw tkq::InputError("sweep: -o is required (or set TKQ_OUT_DIR)");
  auto plan = tkq::load_plan(opt.input);
  if (opt.workers > 1) plan.workers = opt.workers;
  const auto records = tkq::sweep(plan);
  const auto metrics = tkq::compute_metrics(records);
  tkq::export_report(records, metrics, opt.output, opt.timings);
  std::size_t failed = 0;
  for (const auto& r : records) failed += r.error.empty() ? 0 : 1;
  emit(opt, {{"dir", opt.output}, {"records", records.size()}, {"failed", failed}, {"groups", metrics.size()}},
       "wrote " + opt.output + ": " + std::to_string(records.size()) + " runs (" + std::to_string(failed) +
           " failed), " + std::to_string(metrics.size()) + " metric groups");
  return kOk;
}

std::string cell(const std::optional<tkq::Rational>& v) {
  if (!v) return "-";
  std::ostringstream s;
  s << std::fixed << std::setprecision(4) << tkq::to_double(*v);
  return s.str();
}

int cmd_report(const Options& opt) {
  const auto records = tkq::load_report_records(opt.input);
  const auto convention = opt.ratio == "best-over-opt" ? tkq::RatioConvention::BestOverOptimum
                                                       : tkq::RatioConvention::OptimumOverBest;
  if (opt.ratio != "best-over-opt" && opt.ratio != "opt-over-best")
    throw tkq::InputError("--ratio must be opt-over-best or best-over-opt");
  const auto metrics = tkq::compute_metrics(records, convention);

  if (!opt.select_best) {
    if (opt.json) {
      nlohmann::json rows = nlohmann::json::array();
      for (const auto& m : metrics) rows.push_back(tkq::metrics_to_json(m));
      std::cout << rows.dump(2) << '\n';
    } else {
      std::cout << tkq::metrics_csv(metrics);
    }
    return kOk;
  }

  const auto best = tkq::select_best_penalty(metrics);
  if (opt.json) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& b : best) {
      auto row = tkq::metrics_to_json(b.row);
      row["variant_family"] = b.variant;
      rows.push_back(row);
    }
    std::cout << rows.dump(2) << '\n';
    return kOk;
  }
  std::cout << std::left << std::setw(24) << "instance" << std::setw(9) << "toolkits" << std::setw(9) << "variant"
            << std::setw(30) << "best penalty" << std::setw(34) << "solver" << std::setw(9) << "valid"
            << std::setw(9) << "near-opt" << "ratio\n";
  for (const auto& b : best)
    std::cout << std::left << std::setw(24) << b.instance_id << std::setw(9) << b.toolkits << std::setw(9)
              << b.variant << std::setw(30) << tkq::penalty_label(b.row.variant) << std::setw(34) << b.solver
              << std::setw(9) << cell(b.row.percent_valid) << std::setw(9) << cell(b.row.percent_near_opt)
              << cell(b.row.best_cost_ratio) << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tkq: toolkit assignment QUBO compilation, solving and benchmarking"};
  app.require_subcommand(1);
  Options opt;
  app.add_flag("--json", opt.json, "Machine-readable JSON summaries on stdout");

  auto* gen = app.add_subcommand("gen", "Generate a seeded synthetic instance");
  gen->add_option("--toolkits", opt.toolkits, "Number of toolkits")->check(CLI::PositiveNumber);
  gen->add_option("--machines", opt.machines, "Number of machines")->check(CLI::PositiveNumber);
  gen->add_option("--capacity-bits", opt.capacity_bits, "Binary digits of each capacity")->check(CLI::PositiveNumber);
  gen->add_option("--seed", opt.seed, "Generator seed");
  gen->add_option("-o,--output", opt.output, "Instance JSON to write")->required();

  auto* build = app.add_subcommand("build", "Compile an instance into a QUBO");
  build->add_option("instance", opt.input, "Instance JSON")->required();
  build->add_option("--variant", opt.variant, "raw | scaled | rounded")
      ->check(CLI::IsMember({"raw", "scaled", "rounded"}));
  build->add_option("--lm", opt.lm, "raw: capacity penalty factor");
  build->add_option("--lt", opt.lt, "raw: exactly-once penalty factor");
  build->add_option("--ls", opt.ls, "scaled: exactly-once row multiplier");
  build->add_option("-o,--output", opt.output, "QUBO file to write (sidecar <file>.varmap.json)")->required();

  auto* exact = app.add_subcommand("exact", "Solve an instance exactly by enumeration");
  exact->add_option("instance", opt.input, "Instance JSON")->required();

  auto* solve = app.add_subcommand("solve", "Sample a QUBO");
  solve->add_option("qubo", opt.input, "QUBO file")->required();
  solve->add_option("--solver", opt.solver, "sa | random | brute | lrqaoa")
      ->check(CLI::IsMember({"sa", "random", "brute", "lrqaoa"}));
  solve->add_option("--steps", opt.steps, "sa: flips per restart")->check(CLI::PositiveNumber);
  solve->add_option("--restarts", opt.restarts, "sa: independent chains")->check(CLI::PositiveNumber);
  solve->add_option("--t-start", opt.t_start, "sa: initial temperature (default max |coefficient|)");
  solve->add_option("--t-end", opt.t_end, "sa: final temperature (default 1e-3 * t-start)");
  solve->add_option("--shots", opt.shots, "random / lrqaoa: samples")->check(CLI::PositiveNumber);
  solve->add_option("--p", opt.p, "lrqaoa: layers")->check(CLI::PositiveNumber);
  solve->add_option("--dg", opt.dg, "lrqaoa: gamma slope");
  solve->add_option("--db", opt.db, "lrqaoa: beta slope");
  solve->add_option("--seed", opt.seed, "Sampler seed");
  solve->add_flag("--postprocess", opt.postprocess, "Apply single-bit-flip post-processing");
  solve->add_option("-o,--output", opt.output, "Sample CSV to write (stdout if omitted)");

  auto* stats = app.add_subcommand("stats", "Logical LR-QAOA circuit shape");
  stats->add_option("qubo", opt.input, "QUBO file")->required();
  stats->add_option("--p", opt.layers, "Layer counts")->check(CLI::PositiveNumber);

  auto* sweep = app.add_subcommand("sweep", "Run an experiment plan");
  sweep->add_option("plan", opt.input, "Plan JSON")->required();
  sweep->add_option("-o,--output", opt.output, "Report directory (default $TKQ_OUT_DIR)");
  sweep->add_option("--workers", opt.workers, "Parallel grid cells")->check(CLI::PositiveNumber);
  sweep->add_flag("--timings", opt.timings, "Add wall-clock times to the reports (not reproducible)");

  auto* report = app.add_subcommand("report", "Summarize a sweep report directory");
  report->add_option("dir", opt.input, "Directory written by sweep")->required();
  report->add_flag("--select-best", opt.select_best, "Best penalty per (instance, variant, solver)");
  report->add_option("--ratio", opt.ratio, "opt-over-best | best-over-opt");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return kUsage;
  }

  try {
    if (*gen) return cmd_gen(opt);
    if (*build) return cmd_build(opt);
    if (*exact) return cmd_exact(opt);
    if (*solve) return cmd_solve(opt);
    if (*stats) return cmd_stats(opt);
    if (*sweep) return cmd_sweep(opt);
    if (*report) return cmd_report(opt);
  } catch (const tkq::InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const tkq::TooLarge& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kGuard;
  } catch (const tkq::Overflow& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kGuard;
  } catch (const tkq::Infeasible& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUndefined;
  } catch (const tkq::Undefined& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUndefined;
  } catch (const tkq::GenerationFailed& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUndefined;
  } catch (const tkq::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIo;
  }
  return kUsage;
}
