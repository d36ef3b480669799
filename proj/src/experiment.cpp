// SPDX-License-Identifier: Apache-2.0
#include "cbal/experiment.hpp"

#include <cstdio>
#include <filesystem>

#include "cbal/io.hpp"

namespace cbal {

namespace {

using nlohmann::json;

// Strict object reader: every key must be known so typos surface as errors
// instead of silently applied defaults.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string scope) : j_(j), scope_(std::move(scope)) {
    if (!j.is_object()) fail(ErrorCode::ConfigParse, scope_ + " must be a JSON object");
  }

  ~ObjectReader() = default;

  template <typename T>
  void read(const char* key, T& out) {
    seen_.push_back(key);
    auto it = j_.find(key);
    if (it == j_.end()) return;
    try {
      out = it->get<T>();
    } catch (const json::exception&) {
      fail(ErrorCode::ConfigParse, "bad value for key '" + scope_ + "." + key + "'");
    }
  }

  const json* sub(const char* key) {
    seen_.push_back(key);
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      bool known = false;
      for (const auto& k : seen_)
        if (k == it.key()) {
          known = true;
          break;
        }
      if (!known)
        fail(ErrorCode::ConfigParse, "unknown key '" + scope_ + "." + it.key() + "'");
    }
  }

 private:
  const json& j_;
  std::string scope_;
  std::vector<std::string> seen_;
};

DatasetSpec dataset_from_json(const json& j) {
  DatasetSpec spec;
  ObjectReader r(j, "dataset");
  r.read("n_classes", spec.n_classes);
  r.read("samples_per_class", spec.samples_per_class);
  r.read("feature_dim", spec.feature_dim);
  r.read("class_separation", spec.class_separation);
  r.read("imbalance_factor", spec.imbalance_factor);
  r.read("imbalanced_fraction", spec.imbalanced_fraction);
  r.read("seed", spec.seed);
  r.read("test_per_class", spec.test_per_class);
  r.read("init_reserve_per_class", spec.init_reserve_per_class);
  r.finish();
  return spec;
}

SimConfig sim_from_json(const json& j) {
  SimConfig cfg;
  ObjectReader r(j, "run");
  r.read("initial_size", cfg.initial_size);
  r.read("budget_per_cycle", cfg.budget_per_cycle);
  r.read("total_budget", cfg.total_budget);
  r.read("lambda", cfg.lambda);
  std::string solver = to_string(cfg.solver);
  r.read("solver", solver);
  cfg.solver = solver_from_string(solver);
  r.read("solver_time_limit_s", cfg.solver_time_limit);
  r.read("solver_gap_tolerance", cfg.solver_gap_tolerance);
  r.read("bald_passes", cfg.bald_passes);
  r.read("record_timings", cfg.record_timings);
  if (const json* learner = r.sub("learner")) {
    ObjectReader lr(*learner, "run.learner");
    lr.read("epochs", cfg.learner.epochs);
    lr.read("learning_rate", cfg.learner.learning_rate);
    lr.read("l2", cfg.learner.l2);
    lr.finish();
  }
  r.finish();
  return cfg;
}

}  // namespace

ExperimentConfig config_from_json(const json& j) {
  ExperimentConfig cfg;
  ObjectReader r(j, "config");
  if (const json* ds = r.sub("dataset")) cfg.dataset = dataset_from_json(*ds);
  std::string csv;
  r.read("dataset_csv", csv);
  if (!csv.empty()) cfg.dataset_csv = csv;
  if (const json* run = r.sub("run")) cfg.sim = sim_from_json(*run);

  std::vector<std::string> method_names{"entropy"};
  r.read("methods", method_names);
  cfg.methods.clear();
  for (const auto& name : method_names) cfg.methods.push_back(method_from_string(name));

  cfg.imbalance_factors = {cfg.dataset.imbalance_factor};
  r.read("imbalance_factors", cfg.imbalance_factors);
  cfg.seeds = {1};
  r.read("seeds", cfg.seeds);
  cfg.lambda_grid = {0.0, 0.5, 1.0, 2.0, 3.0};
  r.read("lambda_grid", cfg.lambda_grid);
  r.read("plateau_tol", cfg.plateau_tol);
  r.read("out_dir", cfg.out_dir);
  r.finish();

  if (cfg.methods.empty()) fail(ErrorCode::ConfigParse, "key 'methods' must not be empty");
  if (cfg.seeds.empty()) fail(ErrorCode::ConfigParse, "key 'seeds' must not be empty");
  if (cfg.imbalance_factors.empty())
    fail(ErrorCode::ConfigParse, "key 'imbalance_factors' must not be empty");
  return cfg;
}

json config_to_json(const ExperimentConfig& cfg) {
  json j;
  j["dataset"] = {
      {"n_classes", cfg.dataset.n_classes},
      {"samples_per_class", cfg.dataset.samples_per_class},
      {"feature_dim", cfg.dataset.feature_dim},
      {"class_separation", cfg.dataset.class_separation},
      {"imbalance_factor", cfg.dataset.imbalance_factor},
      {"imbalanced_fraction", cfg.dataset.imbalanced_fraction},
      {"seed", cfg.dataset.seed},
      {"test_per_class", cfg.dataset.test_per_class},
      {"init_reserve_per_class", cfg.dataset.init_reserve_per_class},
  };
  if (cfg.dataset_csv) j["dataset_csv"] = *cfg.dataset_csv;
  j["run"] = {
      {"initial_size", cfg.sim.initial_size},
      {"budget_per_cycle", cfg.sim.budget_per_cycle},
      {"total_budget", cfg.sim.total_budget},
      {"lambda", cfg.sim.lambda},
      {"solver", to_string(cfg.sim.solver)},
      {"solver_time_limit_s", cfg.sim.solver_time_limit},
      {"solver_gap_tolerance", cfg.sim.solver_gap_tolerance},
      {"bald_passes", cfg.sim.bald_passes},
      {"record_timings", cfg.sim.record_timings},
      {"learner",
       {{"epochs", cfg.sim.learner.epochs},
        {"learning_rate", cfg.sim.learner.learning_rate},
        {"l2", cfg.sim.learner.l2}}},
  };
  std::vector<std::string> method_names;
  for (Method m : cfg.methods) method_names.emplace_back(to_string(m));
  j["methods"] = method_names;
  j["imbalance_factors"] = cfg.imbalance_factors;
  j["seeds"] = cfg.seeds;
  j["lambda_grid"] = cfg.lambda_grid;
  j["plateau_tol"] = cfg.plateau_tol;
  j["out_dir"] = cfg.out_dir;
  return j;
}

ExperimentConfig load_config_file(const std::string& path) {
  json j;
  try {
    j = json::parse(read_text_file(path));
  } catch (const json::exception& e) {
    fail(ErrorCode::ConfigParse, "invalid JSON in '" + path + "': " + e.what());
  }
  if (j.is_object() && j.contains("config")) j = j["config"];  // manifest wrapper
  return config_from_json(j);
}

Dataset build_dataset(const ExperimentConfig& cfg, double imbalance_factor, std::uint64_t seed) {
  if (cfg.dataset_csv) {
    FeatureTable table = load_feature_csv(*cfg.dataset_csv);
    return dataset_from_arrays(std::move(table.features), std::move(table.labels),
                               cfg.dataset.test_per_class, seed);
  }
  DatasetSpec spec = cfg.dataset;
  spec.imbalance_factor = imbalance_factor;
  spec.seed = seed;
  return make_longtail_dataset(spec);
}

std::string run_basename(Method method, double imbalance_factor, std::uint64_t seed) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), "%s_if%.2f_seed%llu", to_string(method), imbalance_factor,
                static_cast<unsigned long long>(seed));
  return buf;
}

RunPaths run_single(const ExperimentConfig& cfg, Method method, double imbalance_factor,
                    std::uint64_t seed) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(cfg.out_dir, ec);
  if (ec) fail(ErrorCode::OutputUnwritable, "cannot create out dir '" + cfg.out_dir + "'");

  const Dataset ds = build_dataset(cfg, imbalance_factor, seed);
  const auto t0 = std::chrono::steady_clock::now();
  const ExperimentRecord record = run_al_loop(ds, method, cfg.sim, seed);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  const std::string base = run_basename(method, imbalance_factor, seed);
  RunPaths paths;
  paths.metrics = (fs::path(cfg.out_dir) / (base + ".metrics.csv")).string();
  paths.manifest = (fs::path(cfg.out_dir) / (base + ".manifest.json")).string();

  write_metrics_csv(paths.metrics, record, ds.n_classes);

  // The manifest pins this cell: re-running it reproduces the metrics CSV
  // byte for byte. Diagnostics are informational and excluded from that
  // contract (wall clock is not reproducible).
  ExperimentConfig cell = cfg;
  cell.methods = {method};
  cell.imbalance_factors = {imbalance_factor};
  cell.seeds = {seed};
  json manifest;
  manifest["config"] = config_to_json(cell);
  manifest["seed"] = seed;
  manifest["version"] = kVersion;
  manifest["metrics_csv"] = base + ".metrics.csv";
  manifest["diagnostics"] = {{"wall_time_s", wall}};
  write_text_file(paths.manifest, manifest.dump(2) + "\n");
  return paths;
}

int run_grid(const ExperimentConfig& cfg, std::ostream& log) {
  int failures = 0;
  for (Method method : cfg.methods) {
    for (double imbalance : cfg.imbalance_factors) {
      for (std::uint64_t seed : cfg.seeds) {
        try {
          const RunPaths paths = run_single(cfg, method, imbalance, seed);
          log << "ok   " << paths.metrics << "\n";
        } catch (const Error& e) {
          ++failures;
          log << "fail " << run_basename(method, imbalance, seed) << ": " << e.what() << "\n";
        }
      }
    }
  }
  return failures;
}

std::vector<SweepRow> run_sweep(const ExperimentConfig& cfg, std::ostream& log,
                                std::string* csv_path) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(cfg.out_dir, ec);
  if (ec) fail(ErrorCode::OutputUnwritable, "cannot create out dir '" + cfg.out_dir + "'");

  const double imbalance = cfg.imbalance_factors.front();
  const std::uint64_t seed = cfg.seeds.front();
  const Dataset ds = build_dataset(cfg, imbalance, seed);
  const std::vector<SweepRow> rows = lambda_sweep(ds, cfg.lambda_grid, cfg.sim, seed);

  const std::string path = (fs::path(cfg.out_dir) / "sweep.csv").string();
  write_sweep_csv(path, rows);
  if (csv_path) *csv_path = path;
  log << "wrote " << path << "\n";
  return rows;
}

}  // namespace cbal
