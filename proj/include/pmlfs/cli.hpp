#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace pmlfs {

/// Everything a command needs; a run is reproducible from this alone.
struct RunConfig {
  std::string x;
  std::string y;
  std::string truth;
  std::string out_dir = ".";
  std::string dataset;  // report label; defaults to the stem of `x`
  double radius = 1.0;
  std::size_t min_pts = 5;
  double alpha = 1.0;
  double beta = 1.0;
  double gamma = 1.0;
  std::size_t max_iter = 500;
  double rel_tol = 1e-6;
  std::vector<double> fractions;  // empty: default budgets for the dataset width
  std::size_t folds = 10;
  std::uint64_t seed = 0;
  double noise_rate = 0.0;
  std::string method = "both";  // qr | q-only | both
  bool trace = false;
  bool plain_frobenius_penalty = false;
  bool grid = false;
};

std::string to_json(const RunConfig& cfg);
/// Overlays the keys present in `json` onto `cfg`.
void merge_json(RunConfig& cfg, const std::string& json);

enum ExitCode : int { kExitOk = 0, kExitConfig = 1, kExitData = 2, kExitNumeric = 3 };

/// Entry point of the `pmlfs` tool; returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Convenience overload taking arguments without the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pmlfs
