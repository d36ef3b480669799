// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "cbal/dataset.hpp"
#include "cbal/simulator.hpp"

#include "json.hpp"

namespace cbal {

inline constexpr const char* kVersion = "0.1.0";

// Full experiment description: a (method x imbalance factor x seed) grid over
// one dataset family. Parsed from a JSON config file; flags may override
// individual values.
struct ExperimentConfig {
  DatasetSpec dataset;
  std::optional<std::string> dataset_csv;  // ingested features instead of synthetic
  SimConfig sim;
  std::vector<Method> methods;
  std::vector<double> imbalance_factors;  // grid axis; overrides dataset.imbalance_factor
  std::vector<std::uint64_t> seeds;
  std::vector<double> lambda_grid;  // for the sweep command
  double plateau_tol = 0.02;
  std::string out_dir = "out";
};

// Parses a config object. Unknown keys and unknown enum values raise
// ConfigParse with the offending key named.
ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& cfg);

// Loads a config file; a run manifest (object with a "config" key) is
// accepted and unwrapped, so any run can be reproduced from its manifest.
ExperimentConfig load_config_file(const std::string& path);

struct RunPaths {
  std::string manifest;
  std::string metrics;
};

// Executes one grid cell and writes its metrics CSV plus manifest JSON.
RunPaths run_single(const ExperimentConfig& cfg, Method method, double imbalance_factor,
                    std::uint64_t seed);

// Executes the whole grid; returns the number of failed cells.
int run_grid(const ExperimentConfig& cfg, std::ostream& log);

// Lambda sweep over cfg.lambda_grid; writes sweep.csv in out_dir and returns
// the table.
std::vector<SweepRow> run_sweep(const ExperimentConfig& cfg, std::ostream& log,
                                std::string* csv_path = nullptr);

// Builds the dataset for one grid cell (synthetic or ingested CSV).
Dataset build_dataset(const ExperimentConfig& cfg, double imbalance_factor, std::uint64_t seed);

std::string run_basename(Method method, double imbalance_factor, std::uint64_t seed);

}  // namespace cbal
