// SPDX-License-Identifier: Apache-2.0
//
// End-to-end checks of the command-line binary: exit codes, output files,
// flag overrides, and manifest reruns. Takes the binary path as argv[1].

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

int g_failures = 0;
std::string g_binary;

void expect(bool ok, const std::string& what) {
  if (!ok) {
    ++g_failures;
    std::cerr << "FAILED: " << what << "\n";
  }
}

int run_cmd(const std::string& args, const std::string& log_name) {
  const std::string cmd = g_binary + " " + args + " >" + log_name + ".out 2>" + log_name + ".err";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

const char* kTinyConfig = R"({
  "dataset": {
    "n_classes": 4,
    "samples_per_class": 40,
    "feature_dim": 4,
    "class_separation": 2.5,
    "init_reserve_per_class": 4
  },
  "run": {
    "initial_size": 8,
    "budget_per_cycle": 8,
    "total_budget": 24,
    "lambda": 1.0,
    "solver": "local_search",
    "learner": {"epochs": 40}
  },
  "methods": ["entropy_cb"],
  "imbalance_factors": [0.3],
  "seeds": [5],
  "lambda_grid": [0.0, 0.5, 1.0, 2.0, 3.0],
  "out_dir": "OUTDIR"
})";

std::string config_with_outdir(const std::string& out_dir) {
  std::string text = kTinyConfig;
  const auto pos = text.find("OUTDIR");
  text.replace(pos, 6, out_dir);
  return text;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: cbal_cli_tests <path-to-cbal>\n";
    return 2;
  }
  g_binary = argv[1];

  const fs::path work = fs::path("cli_test_tmp");
  fs::remove_all(work);
  fs::create_directories(work);
  const auto in_work = [&](const std::string& name) { return (work / name).string(); };

  // Minimal run: one method, one seed -> one manifest + one metrics CSV.
  write_file(work / "config.json", config_with_outdir(in_work("out1")));
  expect(run_cmd("run --config " + in_work("config.json"), in_work("run1")) == 0,
         "minimal run exits 0");
  expect(fs::exists(work / "out1" / "entropy_cb_if0.30_seed5.metrics.csv"),
         "metrics CSV written");
  expect(fs::exists(work / "out1" / "entropy_cb_if0.30_seed5.manifest.json"),
         "manifest written");

  // Re-running from the manifest reproduces the metrics byte for byte.
  expect(run_cmd("run --config " + in_work("out1/entropy_cb_if0.30_seed5.manifest.json") +
                     " --out-dir " + in_work("out1b"),
                 in_work("rerun")) == 0,
         "manifest rerun exits 0");
  expect(slurp(in_work("out1/entropy_cb_if0.30_seed5.metrics.csv")) ==
             slurp(in_work("out1b/entropy_cb_if0.30_seed5.metrics.csv")),
         "manifest rerun reproduces metrics bytes");

  // Flag overrides: every stable flag at once, grid collapsed to one cell.
  expect(run_cmd("run --config " + in_work("config.json") + " --method random --seed 9" +
                     " --imbalance-factor 1.0 --lambda 0.5 --budget 16 --budget-per-cycle 8" +
                     " --initial-size 8 --out-dir " + in_work("out2"),
                 in_work("run2")) == 0,
         "override run exits 0");
  expect(fs::exists(work / "out2" / "random_if1.00_seed9.metrics.csv"),
         "override run writes the overridden cell");

  // Grid: 3 methods x 2 imbalance factors x 3 seeds -> 18 outputs.
  {
    std::string grid = config_with_outdir(in_work("out3"));
    grid.replace(grid.find("[\"entropy_cb\"]"), 14,
                 "[\"random\", \"entropy\", \"entropy_l1_pseudo\"]");
    grid.replace(grid.find("[0.3]"), 5, "[0.3, 1.0]");
    grid.replace(grid.find("[5]"), 3, "[1, 2, 3]");
    write_file(work / "grid.json", grid);
    expect(run_cmd("run --config " + in_work("grid.json"), in_work("run3")) == 0,
           "grid run exits 0");
    int metrics = 0;
    for (const auto& entry : fs::directory_iterator(work / "out3"))
      if (entry.path().string().find(".metrics.csv") != std::string::npos) ++metrics;
    expect(metrics == 18, "grid produces 18 metrics files");
  }

  // Config errors exit 1 and name the offending value.
  write_file(work / "bad_method.json", R"({"methods": ["entropy_surfing"]})");
  expect(run_cmd("run --config " + in_work("bad_method.json"), in_work("bad1")) == 1,
         "unknown method exits 1");
  expect(slurp(in_work("bad1.err")).find("entropy_surfing") != std::string::npos,
         "unknown method named in the error");
  expect(run_cmd("run --config " + in_work("missing.json"), in_work("bad2")) == 1,
         "missing config exits 1");

  // Lambda sweep: CSV plus a recommendation line.
  expect(run_cmd("sweep-lambda --config " + in_work("config.json") + " --out-dir " +
                     in_work("sweep_out"),
                 in_work("sweep")) == 0,
         "sweep exits 0");
  expect(fs::exists(work / "sweep_out" / "sweep.csv"), "sweep CSV written");
  expect(slurp(in_work("sweep.out")).find("recommended_lambda=") != std::string::npos,
         "sweep prints a recommendation");

  // Verification: clean pass, and the injected fault flips the exit code.
  expect(run_cmd("verify", in_work("verify")) == 0, "verify exits 0");
  expect(slurp(in_work("verify.out")).find("[PASS]") != std::string::npos,
         "verify prints pass lines");
  expect(run_cmd("verify --inject-fault", in_work("verify_bad")) == 3,
         "fault injection exits 3");

  // One-off selection from an ingested probability matrix.
  write_file(work / "probs.csv", "0.9,0.1\n0.5,0.5\n0.1,0.9\n0.6,0.4\n");
  expect(run_cmd("select --probs " + in_work("probs.csv") + " --budget 2 --lambda 1.0 --out " +
                     in_work("sel.csv"),
                 in_work("select")) == 0,
         "select exits 0");
  expect(slurp(in_work("sel.csv")).rfind("index\n", 0) == 0, "selection CSV has a header");
  write_file(work / "bad_probs.csv", "0.9,0.9\n0.5,0.5\n");
  expect(run_cmd("select --probs " + in_work("bad_probs.csv") + " --budget 1 --out " +
                     in_work("sel2.csv"),
                 in_work("select_bad")) == 2,
         "invalid probability matrix exits 2");

  if (g_failures == 0) {
    std::cout << "cli tests passed\n";
    return 0;
  }
  std::cerr << g_failures << " cli test(s) failed\n";
  return 1;
}
