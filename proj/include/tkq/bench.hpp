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

/// @file bench.hpp
/// Experiment grid execution and scoring.
///
/// A sweep runs every (instance, variant, solver, seed) cell, scores the
/// returned samples against the exact optimum and aggregates the scores per
/// (instance, variant, solver) over seeds:
///
///  - percent_valid:    share of samples that decode to a feasible assignment
///  - percent_near_opt: share of the valid samples within (1 + tol) of the
///                      optimum (undefined without valid samples)
///  - best_cost_ratio:  optimum / lowest valid cost (undefined without valid
///                      samples)
///
/// All fractions are exact rationals until they are written out.

#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "json.hpp"
#include "tkq/errors.hpp"
#include "tkq/instance_io.hpp"
#include "tkq/io.hpp"
#include "tkq/lrqaoa.hpp"
#include "tkq/model.hpp"
#include "tkq/qubo.hpp"
#include "tkq/solvers.hpp"

namespace tkq {

// ---------------------------------------------------------------------------
// Per-sample-set scores

struct SampleScore {
  std::size_t total = 0;
  std::size_t valid = 0;
  std::size_t near_opt = 0;
  std::optional<Rational> best_energy;
  std::optional<Rational> best_valid_cost;
};

/// Decodes every entry; a sample is valid when it selects exactly one machine
/// per toolkit and respects every capacity.
inline SampleScore score_samples(const SampleSet& samples, const Instance& inst, const Qubo& q,
                                 const std::optional<Rational>& opt_cost, const Rational& tol = Rational(1, 100)) {
  if (q.varmap.toolkits != inst.toolkit_count() || q.varmap.machines != inst.machine_count())
    throw InputError("samples: QUBO layout does not match the instance");
  SampleScore s;
  for (const auto& e : samples.entries) {
    s.total += e.multiplicity;
    if (!s.best_energy || e.energy < *s.best_energy) s.best_energy = e.energy;
    const auto decoded = decode(q, e.bits);
    const auto a = decoded.assignment();
    if (!a || !validate_assignment(inst, *a).feasible) continue;
    s.valid += e.multiplicity;
    const Rational cost = solution_cost(inst, *a);
    if (!s.best_valid_cost || cost < *s.best_valid_cost) s.best_valid_cost = cost;
    if (opt_cost && cost <= (1 + tol) * *opt_cost) s.near_opt += e.multiplicity;
  }
  return s;
}

inline Rational percent_valid(const SampleSet& samples, const Instance& inst, const Qubo& q) {
  const auto s = score_samples(samples, inst, q, std::nullopt);
  if (s.total == 0) throw InputError("percent_valid: empty sample set");
  return Rational(s.valid, s.total);
}

/// Share of the valid samples with cost <= (1 + tol) * opt_cost.
inline std::optional<Rational> percent_near_opt(const SampleSet& samples, const Instance& inst, const Qubo& q,
                                                const Rational& opt_cost, const Rational& tol = Rational(1, 100)) {
  const auto s = score_samples(samples, inst, q, opt_cost, tol);
  if (s.valid == 0) return std::nullopt;
  return Rational(s.near_opt, s.valid);
}

enum class RatioConvention { OptimumOverBest, BestOverOptimum };

inline std::optional<Rational> cost_ratio(const Rational& opt_cost, const std::optional<Rational>& best_valid,
                                          RatioConvention convention = RatioConvention::OptimumOverBest) {
  if (!best_valid) return std::nullopt;
  if (*best_valid == 0 || opt_cost == 0) return *best_valid == opt_cost ? std::optional<Rational>(1) : std::nullopt;
  return convention == RatioConvention::OptimumOverBest ? opt_cost / *best_valid : *best_valid / opt_cost;
}

inline std::optional<Rational> best_cost_ratio(const SampleSet& samples, const Instance& inst, const Qubo& q,
                                               const Rational& opt_cost) {
  return cost_ratio(opt_cost, score_samples(samples, inst, q, opt_cost).best_valid_cost);
}

/// Product-moment correlation coefficient.
inline double pearson_r(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw InputError("pearson_r: series lengths differ");
  if (xs.size() < 2) throw InputError("pearson_r: need at least two points");
  const double n = static_cast<double>(xs.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx, dy = ys[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0 || syy == 0) throw Undefined("pearson_r: zero variance");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

// ---------------------------------------------------------------------------
// Records and metrics

struct SolverSpec {
  std::string name;
  std::map<std::string, std::string> params;

  /// "sa(restarts=500,steps=1280)"
  std::string key() const {
    std::string s = name + "(";
    bool first = true;
    for (const auto& [k, v] : params) {
      s += (first ? "" : ",") + k + "=" + v;
      first = false;
    }
    return s + ")";
  }

  friend bool operator==(const SolverSpec&, const SolverSpec&) = default;
};

struct RunRecord {
  std::string instance_id;
  std::size_t toolkits = 0;
  std::size_t variables = 0;
  VariantSpec variant;
  SolverSpec solver;
  std::uint64_t seed = 0;
  SampleScore score;
  std::optional<Rational> opt_cost;
  std::string error;      // empty when the cell ran
  double wall_time = 0;   // seconds; not part of the deterministic exports
};

struct MetricsRow {
  std::string instance_id;
  std::size_t toolkits = 0;
  VariantSpec variant;
  std::string solver;  // SolverSpec::key()
  std::size_t runs = 0;
  std::size_t samples = 0;
  std::size_t valid = 0;
  std::size_t near_opt = 0;
  std::optional<Rational> percent_valid;
  std::optional<Rational> percent_near_opt;
  std::optional<Rational> best_cost_ratio;
};

/// One row per (instance, variant, solver) over all successful seeds, in
/// first-appearance order of the records.
inline std::vector<MetricsRow> compute_metrics(const std::vector<RunRecord>& records,
                                               RatioConvention convention = RatioConvention::OptimumOverBest) {
  std::vector<MetricsRow> rows;
  std::map<std::tuple<std::string, std::string, std::string>, std::size_t> index;
  std::vector<std::optional<Rational>> best_valid;
  std::vector<std::optional<Rational>> opt;
  for (const auto& r : records) {
    if (!r.error.empty()) continue;
    auto key = std::make_tuple(r.instance_id, penalty_label(r.variant), r.solver.key());
    auto [it, inserted] = index.try_emplace(key, rows.size());
    if (inserted) {
      MetricsRow row;
      row.instance_id = r.instance_id;
      row.toolkits = r.toolkits;
      row.variant = r.variant;
      row.solver = r.solver.key();
      rows.push_back(std::move(row));
      best_valid.emplace_back();
      opt.push_back(r.opt_cost);
    }
    auto& row = rows[it->second];
    ++row.runs;
    row.samples += r.score.total;
    row.valid += r.score.valid;
    row.near_opt += r.score.near_opt;
    auto& bv = best_valid[it->second];
    if (r.score.best_valid_cost && (!bv || *r.score.best_valid_cost < *bv)) bv = r.score.best_valid_cost;
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    auto& row = rows[i];
    if (row.samples > 0) row.percent_valid = Rational(row.valid, row.samples);
    if (row.valid > 0 && opt[i]) row.percent_near_opt = Rational(row.near_opt, row.valid);
    if (opt[i]) row.best_cost_ratio = cost_ratio(*opt[i], best_valid[i], convention);
  }
  return rows;
}

struct BestPenalty {
  std::string instance_id;
  std::size_t toolkits = 0;
  std::string variant;  // family
  std::string solver;
  MetricsRow row;
};

namespace detail {

/// Strict "a ranks before b": higher percent_valid, then higher
/// best_cost_ratio (undefined lowest), then smaller penalty parameters.
inline bool better_penalty(const MetricsRow& a, const MetricsRow& b) {
  const Rational pa = a.percent_valid.value_or(Rational(-1)), pb = b.percent_valid.value_or(Rational(-1));
  if (pa != pb) return pa > pb;
  const Rational ra = a.best_cost_ratio.value_or(Rational(-1)), rb = b.best_cost_ratio.value_or(Rational(-1));
  if (ra != rb) return ra > rb;
  return penalty_parameters(a.variant) < penalty_parameters(b.variant);
}

}  // namespace detail

/// Best penalty configuration per (instance, variant family, solver).
inline std::vector<BestPenalty> select_best_penalty(const std::vector<MetricsRow>& rows) {
  std::vector<BestPenalty> out;
  std::map<std::tuple<std::string, std::string, std::string>, std::size_t> index;
  for (const auto& row : rows) {
    auto key = std::make_tuple(row.instance_id, variant_family(row.variant), row.solver);
    auto [it, inserted] = index.try_emplace(key, out.size());
    if (inserted) {
      out.push_back({row.instance_id, row.toolkits, variant_family(row.variant), row.solver, row});
    } else if (detail::better_penalty(row, out[it->second].row)) {
      out[it->second].row = row;
    }
  }
  return out;
}

inline std::vector<BestPenalty> select_best_penalty(const std::vector<RunRecord>& records) {
  return select_best_penalty(compute_metrics(records));
}

struct Correlation {
  std::string variant;
  std::string metric;
  std::string solver_a;
  std::string solver_b;
  std::size_t points = 0;
  std::optional<double> r;
};

/// Pearson r between the best-penalty series of every pair of solvers, per
/// variant family and metric, over the instances where both are defined.
inline std::vector<Correlation> cross_solver_correlations(const std::vector<BestPenalty>& best) {
  using Getter = std::optional<Rational> (*)(const MetricsRow&);
  const std::pair<const char*, Getter> metrics[] = {
      {"percent_valid", [](const MetricsRow& r) { return r.percent_valid; }},
      {"percent_near_opt", [](const MetricsRow& r) { return r.percent_near_opt; }},
      {"best_cost_ratio", [](const MetricsRow& r) { return r.best_cost_ratio; }},
  };
  std::vector<std::string> families, solvers;
  for (const auto& b : best) {
    if (std::find(families.begin(), families.end(), b.variant) == families.end()) families.push_back(b.variant);
    if (std::find(solvers.begin(), solvers.end(), b.solver) == solvers.end()) solvers.push_back(b.solver);
  }
  std::vector<Correlation> out;
  for (const auto& family : families)
    for (const auto& [metric, get] : metrics)
      for (std::size_t a = 0; a < solvers.size(); ++a)
        for (std::size_t b = a + 1; b < solvers.size(); ++b) {
          std::vector<double> xs, ys;
          for (const auto& ba : best) {
            if (ba.variant != family || ba.solver != solvers[a]) continue;
            for (const auto& bb : best) {
              if (bb.variant != family || bb.solver != solvers[b] || bb.instance_id != ba.instance_id) continue;
              auto x = get(ba.row), y = get(bb.row);
              if (x && y) {
                xs.push_back(to_double(*x));
                ys.push_back(to_double(*y));
              }
            }
          }
          Correlation c{family, metric, solvers[a], solvers[b], xs.size(), std::nullopt};
          if (xs.size() >= 2) {
            try {
              c.r = pearson_r(xs, ys);
            } catch (const Undefined&) {
            }
          }
          out.push_back(std::move(c));
        }
  return out;
}

// ---------------------------------------------------------------------------
// Sweep

struct SweepPlan {
  std::vector<std::string> instances;  // resolved paths
  std::vector<VariantSpec> variants;
  std::vector<SolverSpec> solvers;
  std::vector<std::uint64_t> seeds;
  bool postprocess = true;
  Rational tol = Rational(1, 100);
  std::size_t workers = 1;
};

namespace detail {

inline std::string param_text(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return v.dump();
  if (v.is_number_float()) return format_double(v.get<double>());
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  throw InputError("solver parameter values must be scalars");
}

inline const std::map<std::string, std::vector<std::string>>& solver_parameter_names() {
  static const std::map<std::string, std::vector<std::string>> names = {
      {"sa", {"steps", "restarts", "t_start", "t_end"}},
      {"random", {"shots"}},
      {"brute", {}},
      {"lrqaoa", {"p", "dg", "db", "shots"}},
  };
  return names;
}

}  // namespace detail

inline SolverSpec solver_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("name") || !j["name"].is_string())
    throw InputError("solver entry needs a string 'name'");
  SolverSpec s;
  s.name = j["name"].get<std::string>();
  const auto& names = detail::solver_parameter_names();
  auto known = names.find(s.name);
  if (known == names.end()) throw InputError("unknown solver '" + s.name + "'");
  if (j.contains("params")) {
    if (!j["params"].is_object()) throw InputError("solver 'params' must be an object");
    for (const auto& [k, v] : j["params"].items()) {
      if (std::find(known->second.begin(), known->second.end(), k) == known->second.end())
        throw InputError("solver '" + s.name + "' has no parameter '" + k + "'");
      s.params[k] = detail::param_text(v);
    }
  }
  return s;
}

inline nlohmann::json solver_to_json(const SolverSpec& s) { return {{"name", s.name}, {"params", s.params}}; }

/// Plan document: { "instances": [path], "variants": [...], "solvers":
/// [{name, params}], "seeds": [int] } with optional "postprocess", "tol" and
/// "workers". A variant is "raw" / "scaled" / "rounded" (the default grid of
/// that family) or an explicit object {"kind": ..., "lm", "lt" | "ls"}.
/// Relative instance paths resolve against `base_dir`.
inline SweepPlan plan_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {}) {
  if (!j.is_object()) throw InputError("plan must be a JSON object");
  SweepPlan plan;
  try {
    for (const auto& p : j.at("instances")) {
      std::filesystem::path path = p.get<std::string>();
      plan.instances.push_back((path.is_absolute() || base_dir.empty() ? path : base_dir / path).string());
    }
    for (const auto& v : j.at("variants")) {
      if (v.is_string()) {
        const auto family = v.get<std::string>();
        std::vector<VariantSpec> grid;
        if (family == "raw")
          grid = raw_grid();
        else if (family == "scaled")
          grid = scaled_grid();
        else if (family == "rounded")
          grid = rounded_grid();
        else
          throw InputError("unknown variant family '" + family + "'");
        plan.variants.insert(plan.variants.end(), grid.begin(), grid.end());
      } else {
        plan.variants.push_back(variant_from_json(v));
      }
    }
    for (const auto& s : j.at("solvers")) plan.solvers.push_back(solver_from_json(s));
    for (const auto& s : j.at("seeds")) plan.seeds.push_back(s.get<std::uint64_t>());
    plan.postprocess = j.value("postprocess", true);
    if (j.contains("tol")) plan.tol = detail::json_number(j["tol"], "tol");
    plan.workers = j.value("workers", std::size_t{1});
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("plan: ") + e.what());
  }
  if (plan.tol < 0) throw InputError("plan: tol must be non-negative");
  return plan;
}

inline SweepPlan load_plan(const std::string& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_text_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(std::string("plan JSON: ") + e.what());
  }
  return plan_from_json(j, std::filesystem::path(path).parent_path());
}

namespace detail {

inline std::size_t param_count(const SolverSpec& s, const char* key, std::size_t fallback) {
  auto it = s.params.find(key);
  if (it == s.params.end()) return fallback;
  try {
    long long v = std::stoll(it->second);
    if (v < 0) throw InputError("");
    return static_cast<std::size_t>(v);
  } catch (const std::exception&) {
    throw InputError("solver parameter '" + std::string(key) + "' must be a non-negative integer");
  }
}

inline std::optional<double> param_real(const SolverSpec& s, const char* key) {
  auto it = s.params.find(key);
  if (it == s.params.end()) return std::nullopt;
  return to_double(parse_rational(it->second));
}

}  // namespace detail

/// Runs one solver on q. Unknown solver names are input errors.
inline SampleSet run_solver(const Qubo& q, const SolverSpec& s, std::uint64_t seed) {
  if (s.name == "sa") {
    SaConfig cfg;
    cfg.steps = detail::param_count(s, "steps", 1280);
    cfg.restarts = detail::param_count(s, "restarts", 500);
    cfg.t_start = detail::param_real(s, "t_start");
    cfg.t_end = detail::param_real(s, "t_end");
    cfg.seed = seed;
    return simulated_anneal(q, cfg);
  }
  if (s.name == "random") return random_sample(q, detail::param_count(s, "shots", 1000), seed);
  if (s.name == "brute") {
    auto best = brute_force_qubo(q);
    SampleSet set;
    set.meta = SampleMeta{"brute", {}, seed};
    set.entries.push_back(Sample{std::move(best.bits), best.energy, 1});
    return set;
  }
  if (s.name == "lrqaoa") {
    const auto sched = lr_schedule(detail::param_count(s, "p", 1), detail::param_real(s, "dg").value_or(0.9),
                                   detail::param_real(s, "db").value_or(0.6));
    return run_lrqaoa(q, sched, detail::param_count(s, "shots", 1000), seed);
  }
  throw InputError("unknown solver '" + s.name + "'");
}

/// Executes every grid cell, ordered by (instance, variant, solver, seed).
/// A failing cell yields a record with `error` set; the sweep continues.
inline std::vector<RunRecord> sweep(const SweepPlan& plan) {
  struct Prepared {
    std::optional<Instance> inst;
    std::optional<Rational> opt;
    std::string error;
  };
  std::vector<Prepared> prepared(plan.instances.size());
  for (std::size_t i = 0; i < plan.instances.size(); ++i) {
    try {
      prepared[i].inst = sanitize_instance(load_instance(plan.instances[i]));
    } catch (const std::exception& e) {
      throw InputError("plan instance '" + plan.instances[i] + "': " + e.what());
    }
    try {
      prepared[i].opt = exact_solve(*prepared[i].inst).cost;
    } catch (const std::exception& e) {
      prepared[i].error = std::string("exact_solve: ") + e.what();
    }
  }

  struct Cell {
    std::size_t instance, variant, solver, seed;
  };
  std::vector<Cell> cells;
  for (std::size_t i = 0; i < plan.instances.size(); ++i)
    for (std::size_t v = 0; v < plan.variants.size(); ++v)
      for (std::size_t s = 0; s < plan.solvers.size(); ++s)
        for (std::size_t k = 0; k < plan.seeds.size(); ++k) cells.push_back({i, v, s, k});

  std::vector<RunRecord> records(cells.size());
  std::map<std::pair<std::size_t, std::size_t>, std::shared_ptr<const Qubo>> qubos;
  std::mutex qubo_mutex;

  auto run_cell = [&](std::size_t c) {
    const Cell& cell = cells[c];
    const auto& prep = prepared[cell.instance];
    RunRecord& r = records[c];
    r.instance_id = prep.inst->id;
    r.toolkits = prep.inst->toolkit_count();
    r.variant = plan.variants[cell.variant];
    r.solver = plan.solvers[cell.solver];
    r.seed = plan.seeds[cell.seed];
    r.opt_cost = prep.opt;
    const auto started = std::chrono::steady_clock::now();
    try {
      std::shared_ptr<const Qubo> q;
      {
        std::lock_guard lock(qubo_mutex);
        auto& slot = qubos[{cell.instance, cell.variant}];
        if (!slot) slot = std::make_shared<const Qubo>(build_qubo(*prep.inst, r.variant));
        q = slot;
      }
      r.variables = q->n;
      if (!prep.error.empty()) throw Infeasible(prep.error);
      SampleSet samples = run_solver(*q, r.solver, r.seed);
      if (plan.postprocess) samples = postprocess(*q, samples);
      r.score = score_samples(samples, *prep.inst, *q, prep.opt, plan.tol);
    } catch (const std::exception& e) {
      r.error = e.what();
    }
    r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  };

  const std::size_t workers = std::max<std::size_t>(1, std::min(plan.workers, cells.size()));
  if (workers == 1) {
    for (std::size_t c = 0; c < cells.size(); ++c) run_cell(c);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t c = next++; c < cells.size(); c = next++) run_cell(c);
      });
    for (auto& t : pool) t.join();
  }
  return records;
}

// ---------------------------------------------------------------------------
// Reports

namespace detail {

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string opt_text(const std::optional<Rational>& v) { return v ? to_string(*v) : ""; }
inline std::string opt_real(const std::optional<Rational>& v) { return v ? format_double(to_double(*v)) : ""; }

inline nlohmann::json opt_json(const std::optional<Rational>& v) {
  return v ? nlohmann::json(to_string(*v)) : nlohmann::json(nullptr);
}
inline nlohmann::json opt_json_real(const std::optional<Rational>& v) {
  return v ? nlohmann::json(to_double(*v)) : nlohmann::json(nullptr);
}
inline std::optional<Rational> opt_from_json(const nlohmann::json& j) {
  if (j.is_null()) return std::nullopt;
  return json_number(j, "report");
}

}  // namespace detail

inline constexpr const char* kRunsHeader =
    "instance,toolkits,variables,variant,penalty,solver,seed,samples,valid,near_opt,best_energy,best_valid_cost,"
    "opt_cost,error";
inline constexpr const char* kMetricsHeader =
    "instance,toolkits,variant,penalty,solver,runs,samples,percent_valid,percent_near_opt,best_cost_ratio";

inline std::string runs_csv(const std::vector<RunRecord>& records, bool include_timings = false) {
  using detail::csv_field;
  std::ostringstream out;
  out << kRunsHeader << (include_timings ? ",wall_time" : "") << '\n';
  for (const auto& r : records) {
    out << csv_field(r.instance_id) << ',' << r.toolkits << ',' << r.variables << ',' << variant_family(r.variant)
        << ',' << csv_field(penalty_label(r.variant)) << ',' << csv_field(r.solver.key()) << ',' << r.seed << ','
        << r.score.total << ',' << r.score.valid << ',' << r.score.near_opt << ','
        << detail::opt_text(r.score.best_energy) << ',' << detail::opt_text(r.score.best_valid_cost) << ','
        << detail::opt_text(r.opt_cost) << ',' << csv_field(r.error);
    if (include_timings) out << ',' << format_double(r.wall_time);
    out << '\n';
  }
  return out.str();
}

/// Undefined metrics are empty cells.
inline std::string metrics_csv(const std::vector<MetricsRow>& rows) {
  using detail::csv_field;
  std::ostringstream out;
  out << kMetricsHeader << '\n';
  for (const auto& m : rows)
    out << csv_field(m.instance_id) << ',' << m.toolkits << ',' << variant_family(m.variant) << ','
        << csv_field(penalty_label(m.variant)) << ',' << csv_field(m.solver) << ',' << m.runs << ',' << m.samples
        << ',' << detail::opt_real(m.percent_valid) << ',' << detail::opt_real(m.percent_near_opt) << ','
        << detail::opt_real(m.best_cost_ratio) << '\n';
  return out.str();
}

inline nlohmann::json record_to_json(const RunRecord& r, bool include_timings = false) {
  nlohmann::json j;
  j["instance"] = r.instance_id;
  j["toolkits"] = r.toolkits;
  j["variables"] = r.variables;
  j["variant"] = variant_to_json(r.variant);
  j["solver"] = solver_to_json(r.solver);
  j["seed"] = r.seed;
  j["samples"] = r.score.total;
  j["valid"] = r.score.valid;
  j["near_opt"] = r.score.near_opt;
  j["best_energy"] = detail::opt_json(r.score.best_energy);
  j["best_valid_cost"] = detail::opt_json(r.score.best_valid_cost);
  j["opt_cost"] = detail::opt_json(r.opt_cost);
  j["error"] = r.error;
  if (include_timings) j["wall_time"] = r.wall_time;
  return j;
}

inline RunRecord record_from_json(const nlohmann::json& j) {
  RunRecord r;
  try {
    r.instance_id = j.at("instance").get<std::string>();
    r.toolkits = j.at("toolkits").get<std::size_t>();
    r.variables = j.at("variables").get<std::size_t>();
    r.variant = variant_from_json(j.at("variant"));
    r.solver = solver_from_json(j.at("solver"));
    r.seed = j.at("seed").get<std::uint64_t>();
    r.score.total = j.at("samples").get<std::size_t>();
    r.score.valid = j.at("valid").get<std::size_t>();
    r.score.near_opt = j.at("near_opt").get<std::size_t>();
    r.score.best_energy = detail::opt_from_json(j.at("best_energy"));
    r.score.best_valid_cost = detail::opt_from_json(j.at("best_valid_cost"));
    r.opt_cost = detail::opt_from_json(j.at("opt_cost"));
    r.error = j.value("error", std::string{});
    r.wall_time = j.value("wall_time", 0.0);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("report record: ") + e.what());
  }
  return r;
}

inline nlohmann::json metrics_to_json(const MetricsRow& m) {
  return {{"instance", m.instance_id},
          {"toolkits", m.toolkits},
          {"variant", variant_to_json(m.variant)},
          {"penalty", penalty_label(m.variant)},
          {"solver", m.solver},
          {"runs", m.runs},
          {"samples", m.samples},
          {"valid", m.valid},
          {"near_opt", m.near_opt},
          {"percent_valid", detail::opt_json_real(m.percent_valid)},
          {"percent_near_opt", detail::opt_json_real(m.percent_near_opt)},
          {"best_cost_ratio", detail::opt_json_real(m.best_cost_ratio)}};
}

inline nlohmann::json report_json(const std::vector<RunRecord>& records, const std::vector<MetricsRow>& metrics,
                                  bool include_timings = false) {
  nlohmann::json doc;
  doc["records"] = nlohmann::json::array();
  for (const auto& r : records) doc["records"].push_back(record_to_json(r, include_timings));
  doc["metrics"] = nlohmann::json::array();
  for (const auto& m : metrics) doc["metrics"].push_back(metrics_to_json(m));
  const auto best = select_best_penalty(metrics);
  doc["best_penalty"] = nlohmann::json::array();
  for (const auto& b : best)
    doc["best_penalty"].push_back({{"instance", b.instance_id},
                                   {"toolkits", b.toolkits},
                                   {"variant", b.variant},
                                   {"solver", b.solver},
                                   {"penalty", penalty_label(b.row.variant)},
                                   {"percent_valid", detail::opt_json_real(b.row.percent_valid)},
                                   {"percent_near_opt", detail::opt_json_real(b.row.percent_near_opt)},
                                   {"best_cost_ratio", detail::opt_json_real(b.row.best_cost_ratio)}});
  doc["correlations"] = nlohmann::json::array();
  for (const auto& c : cross_solver_correlations(best))
    doc["correlations"].push_back({{"variant", c.variant},
                                   {"metric", c.metric},
                                   {"solver_a", c.solver_a},
                                   {"solver_b", c.solver_b},
                                   {"points", c.points},
                                   {"r", c.r ? nlohmann::json(*c.r) : nlohmann::json(nullptr)}});
  return doc;
}

/// Writes runs.csv, metrics.csv and report.json into `dir` (created if
/// needed). Output is a pure function of the inputs unless timings are on.
inline void export_report(const std::vector<RunRecord>& records, const std::vector<MetricsRow>& metrics,
                          const std::filesystem::path& dir, bool include_timings = false) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create '" + dir.string() + "': " + ec.message());
  write_text_file((dir / "runs.csv").string(), runs_csv(records, include_timings));
  write_text_file((dir / "metrics.csv").string(), metrics_csv(metrics));
  write_text_file((dir / "report.json").string(), report_json(records, metrics, include_timings).dump(2) + "\n");
}

inline std::vector<RunRecord> load_report_records(const std::filesystem::path& dir) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(read_text_file((dir / "report.json").string()));
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(std::string("report.json: ") + e.what());
  }
  std::vector<RunRecord> records;
  if (!doc.contains("records") || !doc["records"].is_array()) throw InputError("report.json: missing 'records'");
  for (const auto& r : doc["records"]) records.push_back(record_from_json(r));
  return records;
}

}  // namespace tkq
