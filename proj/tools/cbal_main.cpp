// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: configure and run active-learning experiment
// grids, sweep the balance regularizer, run the built-in self checks, and
// solve one-off selections from an ingested probability matrix.
//
// Exit codes: 0 success, 1 config error, 2 run failure, 3 verification
// failure.

#include <iostream>
#include <optional>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"
#include "cbal/balance.hpp"
#include "cbal/experiment.hpp"
#include "cbal/io.hpp"
#include "cbal/scoring.hpp"
#include "cbal/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitRun = 2;
constexpr int kExitVerify = 3;

int exit_code_for(const cbal::Error& e) {
  switch (e.code()) {
    case cbal::ErrorCode::ConfigParse:
    case cbal::ErrorCode::ConfigInvalid:
      return kExitConfig;
    default:
      return kExitRun;
  }
}

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<std::string> method;
  std::optional<double> lambda;
  std::optional<double> imbalance_factor;
  std::optional<int> budget;
  std::optional<int> budget_per_cycle;
  std::optional<int> initial_size;
};

void apply_overrides(cbal::ExperimentConfig& cfg, const Overrides& ov) {
  if (ov.seed) cfg.seeds = {*ov.seed};
  if (ov.out_dir) cfg.out_dir = *ov.out_dir;
  if (ov.method) cfg.methods = {cbal::method_from_string(*ov.method)};
  if (ov.lambda) cfg.sim.lambda = *ov.lambda;
  if (ov.imbalance_factor) cfg.imbalance_factors = {*ov.imbalance_factor};
  if (ov.budget) cfg.sim.total_budget = *ov.budget;
  if (ov.budget_per_cycle) cfg.sim.budget_per_cycle = *ov.budget_per_cycle;
  if (ov.initial_size) cfg.sim.initial_size = *ov.initial_size;
}

std::vector<double> parse_omega_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string field;
  while (std::getline(ss, field, ',')) {
    try {
      out.push_back(std::stod(field));
    } catch (const std::exception&) {
      cbal::fail(cbal::ErrorCode::ConfigParse, "bad omega entry '" + field + "'");
    }
  }
  if (out.empty()) cbal::fail(cbal::ErrorCode::ConfigParse, "empty omega list");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"class-balanced batch active learning toolkit"};
  app.require_subcommand(1);

  int threads = 0;
  app.add_option("--threads", threads, "worker threads for parallel kernels (0 = default)");

  std::string config_path;
  Overrides ov;

  CLI::App* run = app.add_subcommand("run", "run the configured experiment grid");
  run->add_option("--config", config_path, "JSON config or run manifest")->required();
  run->add_option("--seed", ov.seed, "override: single seed");
  run->add_option("--out-dir", ov.out_dir, "override: output directory");
  run->add_option("--method", ov.method, "override: single method");
  run->add_option("--lambda", ov.lambda, "override: balance weight");
  run->add_option("--imbalance-factor", ov.imbalance_factor, "override: single IF");
  run->add_option("--budget", ov.budget, "override: total budget B");
  run->add_option("--budget-per-cycle", ov.budget_per_cycle, "override: per-cycle budget b");
  run->add_option("--initial-size", ov.initial_size, "override: initial labeled size b0");

  CLI::App* sweep = app.add_subcommand("sweep-lambda", "sweep the balance regularizer");
  sweep->add_option("--config", config_path, "JSON config or run manifest")->required();
  sweep->add_option("--out-dir", ov.out_dir, "override: output directory");
  sweep->add_option("--seed", ov.seed, "override: single seed");

  bool inject_fault = false;
  CLI::App* verify = app.add_subcommand("verify", "run the built-in oracle checks");
  verify->add_flag("--inject-fault", inject_fault,
                   "perturb one check to exercise the failure path");

  std::string probs_path, select_out, omega_text, scores_path, solver_name = "branch_and_bound";
  int select_budget = 0;
  double select_lambda_v = 1.0;
  CLI::App* select = app.add_subcommand(
      "select", "solve one balanced selection from an ingested probability CSV");
  select->add_option("--probs", probs_path, "headerless N x C probability CSV")->required();
  select->add_option("--budget", select_budget, "selection size b")->required();
  select->add_option("--lambda", select_lambda_v, "balance weight (default 1)");
  select->add_option("--omega", omega_text, "comma-separated target counts (default uniform b/C)");
  select->add_option("--scores", scores_path,
                     "optional single-column score CSV (default: negative entropies)");
  select->add_option("--solver", solver_name, "enumeration | branch_and_bound | local_search");
  select->add_option("--out", select_out, "output CSV of selected indices")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? kExitOk : kExitConfig;
  }

#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#endif

  try {
    if (*run) {
      cbal::ExperimentConfig cfg = cbal::load_config_file(config_path);
      apply_overrides(cfg, ov);
      const int failures = cbal::run_grid(cfg, std::cout);
      if (failures > 0) {
        std::cerr << failures << " run(s) failed\n";
        return kExitRun;
      }
      return kExitOk;
    }
    if (*sweep) {
      cbal::ExperimentConfig cfg = cbal::load_config_file(config_path);
      apply_overrides(cfg, ov);
      const std::vector<cbal::SweepRow> rows = cbal::run_sweep(cfg, std::cout);
      try {
        const double rec = cbal::select_lambda(rows, cfg.plateau_tol);
        std::cout << "recommended_lambda=" << cbal::format_double(rec) << "\n";
      } catch (const cbal::Error& e) {
        if (e.code() != cbal::ErrorCode::NoPlateau) throw;
        std::cout << "recommended_lambda=none (no plateau within the grid)\n";
      }
      return kExitOk;
    }
    if (*verify) {
      return cbal::run_verification(std::cout, inject_fault) ? kExitOk : kExitVerify;
    }
    if (*select) {
      const cbal::ProbabilityMatrix p = cbal::load_probability_csv(probs_path);
      std::vector<double> scores;
      if (scores_path.empty()) {
        scores = cbal::batch_negative_entropy(p);
      } else {
        // Single-column CSV, one score per probability row.
        const std::string text = cbal::read_text_file(scores_path);
        std::stringstream ss(text);
        std::string line;
        while (std::getline(ss, line)) {
          if (line.empty()) continue;
          scores.push_back(std::stod(line));
        }
        if (static_cast<int>(scores.size()) != p.samples())
          cbal::fail(cbal::ErrorCode::DimensionMismatch,
                     "score rows do not match probability rows");
      }
      std::vector<double> omega;
      if (omega_text.empty()) {
        omega.assign(p.classes(), static_cast<double>(select_budget) / p.classes());
      } else {
        omega = parse_omega_list(omega_text);
        if (static_cast<int>(omega.size()) != p.classes())
          cbal::fail(cbal::ErrorCode::DimensionMismatch, "omega length must equal C");
      }
      cbal::SelectorConfig scfg;
      scfg.lambda = select_lambda_v;
      scfg.budget = select_budget;
      scfg.solver = cbal::solver_from_string(solver_name);
      const cbal::SolveResult res =
          cbal::solve_cbal(scores, p, cbal::BalanceTarget::validated(omega), scfg);
      std::ostringstream out;
      out << "index\n";
      for (int idx : res.selection.indices()) out << idx << "\n";
      cbal::write_text_file(select_out, out.str());
      std::cout << "objective=" << cbal::format_double(res.objective)
                << " linear=" << cbal::format_double(res.linear_term)
                << " balance=" << cbal::format_double(res.balance_term)
                << " proof=" << cbal::to_string(res.proof) << "\n";
      return kExitOk;
    }
  } catch (const cbal::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRun;
  }
  return kExitConfig;
}
