// harness.hpp
//
// Experiment driver: window averages against their main terms, moment and
// kernel-integral grids, the I1/I2/I3 decomposition, identity fuzzing,
// Laplace-integral sweeps, and smoothed power sums.  Emits deterministic
// CSV (stable formatting, fixed reduction orders) plus optional SVG plots.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "waring/arith.hpp"
#include "waring/represent.hpp"

namespace waring::harness {

inline constexpr const char* kVersion = "waring 0.1.0";

enum class ExperimentKind {
  WindowAverage,
  Moments,
  Decomposition,
  IdentityFuzz,
  LaplaceSweep,
  SmoothedPowerSum,
};

const char* kind_name(ExperimentKind kind);

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::WindowAverage;
  unsigned k = 2;
  represent::Variant variant = represent::Variant::KPlusOne;
  std::vector<uint64_t> n_grid;  // empty = per-experiment default
  double theta = 0.0;            // H = floor(N^theta); 0 = default (0.7 / 0.8)
  uint64_t h_abs = 0;            // absolute H, overrides theta when nonzero
  double b_exponent = 0.0;       // B = N^{b_exponent} when nonzero
  std::vector<double> b_list;    // explicit B values for the decomposition
  uint64_t seed = 42;
  uint64_t trials = 10000;  // identity fuzz
  std::string out_path;     // CSV file; empty writes to stdout only
  std::string counts_out;   // per-n window counts CSV (window experiment)
  std::string cache_dir;    // Lambda sieve cache; empty disables
  unsigned threads = 0;     // 0 = hardware concurrency
  bool svg = false;

  void validate() const;
  uint64_t h_for(uint64_t N) const;
  std::vector<uint64_t> grid_or_default() const;
};

struct Verdict {
  std::string criterion;  // acceptance criterion id, e.g. "AC5"
  std::string detail;
  bool pass = false;
  double margin = 0.0;  // threshold minus achieved; positive iff pass
};

struct ExperimentReport {
  std::vector<std::string> metadata;             // echoed config, versions
  std::vector<std::string> header;               // CSV column names
  std::vector<std::vector<std::string>> rows;    // preformatted cells
  std::vector<Verdict> verdicts;
  double runtime_seconds = 0.0;

  bool all_pass() const;
};

// Counter-based generator: word(i) is the SplitMix64 finalizer applied to
// seed + i * 0x9E3779B97F4A7C15, so any draw is addressable by index and
// runs are reproducible across implementations.
struct CounterRng {
  uint64_t seed = 0;
  uint64_t word(uint64_t counter) const;
  double uniform01(uint64_t counter) const;  // [0, 1), 53 mantissa bits
};

struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // RMS of log-deviations
};

// Least-squares line through (log x, log y).  Requires >= 3 points with
// positive coordinates and pairwise distinct x.
FitResult fit_exponent(const std::vector<std::pair<double, double>>& points);

// Runs one experiment; throws std::invalid_argument with the guardrail
// named when the requested size is out of the desk-scale envelope.
ExperimentReport run(const ExperimentConfig& config);

// '#'-prefixed metadata lines, one header row, then data rows.
void write_csv(const ExperimentReport& report, std::ostream& os);

// Standalone log-log SVG scatter/polyline plot.
struct PlotSeries {
  std::string label;
  std::vector<std::pair<double, double>> points;
};
void write_loglog_svg(const std::vector<PlotSeries>& series, const std::string& x_label,
                      const std::string& y_label, std::ostream& os);

// Sieve with a binary cache keyed by the limit (used when cache_dir != "").
arith::LambdaTable cached_sieve(uint64_t limit, const std::string& cache_dir);

}  // namespace waring::harness
