// waring: command-line front end for the experiment harness.
//
// Subcommands: window, moments, decompose, fuzz-identity, laplace,
// power-sum.  Exit code 0 iff every verdict passes.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "waring/harness.hpp"

namespace {

using waring::harness::ExperimentConfig;
using waring::harness::ExperimentKind;

struct CliOptions {
  ExperimentConfig config;
  std::string variant = "kplusone";
  uint64_t n_single = 0;
};

void add_common_options(CLI::App* cmd, CliOptions& opt) {
  cmd->add_option("--k", opt.config.k, "power k (>= 2)")->check(CLI::Range(2u, 12u));
  cmd->add_option("--variant", opt.variant, "kplusone (k+1 summands) or kexactly (k summands)")
      ->check(CLI::IsMember({"kplusone", "kexactly"}));
  cmd->add_option("--n", opt.n_single, "single window base N");
  cmd->add_option("--n-grid", opt.config.n_grid, "comma-separated N grid")->delimiter(',');
  cmd->add_option("--theta", opt.config.theta, "H = floor(N^theta), theta in (0,1)");
  cmd->add_option("--h-abs", opt.config.h_abs, "absolute window length H (overrides --theta)");
  cmd->add_option("--b-exponent", opt.config.b_exponent, "B = N^exp for the decomposition split");
  cmd->add_option("--b", opt.config.b_list, "explicit B values")->delimiter(',');
  cmd->add_option("--trials", opt.config.trials, "fuzz trial count");
  cmd->add_option("--out", opt.config.out_path, "CSV output path (default: stdout)");
  cmd->add_option("--dump-counts", opt.config.counts_out,
                  "write per-n window counts as n,count CSV (window only; "
                  "suffixed with .<N> when the grid has several N)");
  cmd->add_option("--cache", opt.config.cache_dir, "sieve cache directory");
  cmd->add_option("--seed", opt.config.seed, "64-bit seed for the counter generator");
  cmd->add_option("--threads", opt.config.threads, "worker threads (0 = hardware)");
  cmd->add_flag("--svg", opt.config.svg, "emit a log-log SVG plot next to the CSV");
}

std::vector<waring::harness::PlotSeries> plot_series(const ExperimentConfig& config,
                                                     const waring::harness::ExperimentReport& r,
                                                     std::string& xl, std::string& yl) {
  using waring::harness::PlotSeries;
  std::vector<PlotSeries> out;
  auto col = [&](const std::string& name) -> int {
    for (size_t i = 0; i < r.header.size(); ++i) {
      if (r.header[i] == name) return static_cast<int>(i);
    }
    return -1;
  };
  auto grab = [&](int cx, int cy, auto pred) {
    PlotSeries s;
    for (const auto& row : r.rows) {
      if (!pred(row)) continue;
      const double x = std::strtod(row[cx].c_str(), nullptr);
      const double y = std::strtod(row[cy].c_str(), nullptr);
      s.points.emplace_back(x, y);
    }
    return s;
  };
  switch (config.kind) {
    case ExperimentKind::WindowAverage: {
      xl = "N";
      yl = "relative deviation";
      auto s = grab(col("N"), col("rel_dev"), [](const auto&) { return true; });
      s.label = "|sum - main| / main";
      out.push_back(std::move(s));
      break;
    }
    case ExperimentKind::Moments: {
      xl = "xi";
      yl = "error moment";
      const int q = col("quantity");
      auto s = grab(col("param"), col("value"),
                    [q](const auto& row) { return row[q] == "l2_error"; });
      s.label = "l2 error moment";
      out.push_back(std::move(s));
      break;
    }
    case ExperimentKind::Decomposition: {
      xl = "B";
      yl = "closure residual";
      auto s = grab(col("B"), col("closure_rel"), [](const auto&) { return true; });
      s.label = "closure";
      out.push_back(std::move(s));
      break;
    }
    case ExperimentKind::LaplaceSweep: {
      xl = "X";
      yl = "fitted constant";
      auto s = grab(col("X"), col("fit"), [](const auto&) { return true; });
      s.label = "|integral - predicted| / bound";
      out.push_back(std::move(s));
      break;
    }
    case ExperimentKind::SmoothedPowerSum: {
      xl = "N";
      yl = "fitted constant";
      auto s = grab(col("N"), col("fit"), [](const auto&) { return true; });
      s.label = "|exact - approx| / scale";
      out.push_back(std::move(s));
      break;
    }
    case ExperimentKind::IdentityFuzz:
      break;
  }
  return out;
}

int run_experiment(CliOptions& opt, ExperimentKind kind) {
  opt.config.kind = kind;
  opt.config.variant = opt.variant == "kexactly" ? waring::represent::Variant::KExactly
                                                 : waring::represent::Variant::KPlusOne;
  if (opt.n_single > 0) opt.config.n_grid = {opt.n_single};

  waring::harness::ExperimentReport report;
  try {
    report = waring::harness::run(opt.config);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  if (opt.config.out_path.empty()) {
    waring::harness::write_csv(report, std::cout);
  } else {
    std::ofstream os(opt.config.out_path, std::ios::binary);
    if (!os) {
      std::cerr << "error: cannot open " << opt.config.out_path << "\n";
      return 2;
    }
    waring::harness::write_csv(report, os);
  }

  if (opt.config.svg) {
    std::string xl, yl;
    const auto series = plot_series(opt.config, report, xl, yl);
    if (!series.empty()) {
      const std::string path =
          opt.config.out_path.empty() ? "waring-plot.svg" : opt.config.out_path + ".svg";
      std::ofstream os(path, std::ios::binary);
      if (os) waring::harness::write_loglog_svg(series, xl, yl, os);
    }
  }

  for (const auto& v : report.verdicts) {
    std::fprintf(stderr, "[%s] %s: %s (margin %.3g)\n", v.pass ? "PASS" : "FAIL",
                 v.criterion.c_str(), v.detail.c_str(), v.margin);
  }
  std::fprintf(stderr, "runtime: %.2fs, rows: %zu, verdicts: %zu\n", report.runtime_seconds,
               report.rows.size(), report.verdicts.size());
  return report.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"workbench for weighted prime-power representation counts in short intervals"};
  app.require_subcommand(1);
  app.set_config("--config")->configurable(false);

  CliOptions opt;
  struct Sub {
    const char* name;
    const char* desc;
    ExperimentKind kind;
  };
  const std::vector<Sub> subs = {
      {"window", "weighted counts over [N+1, N+H] vs. the main term", ExperimentKind::WindowAverage},
      {"moments", "Parseval, fourth-power and error-moment grids", ExperimentKind::Moments},
      {"decompose", "I1/I2/I3 split of the window integral", ExperimentKind::Decomposition},
      {"fuzz-identity", "randomized power-difference identity checks", ExperimentKind::IdentityFuzz},
      {"laplace", "z^{-mu} kernel integrals vs. closed form", ExperimentKind::LaplaceSweep},
      {"power-sum", "smoothed power sums vs. H N^lambda / e", ExperimentKind::SmoothedPowerSum},
  };
  for (const auto& s : subs) {
    CLI::App* cmd = app.add_subcommand(s.name, s.desc);
    add_common_options(cmd, opt);
    const ExperimentKind kind = s.kind;
    cmd->callback([&opt, kind] {
      const int rc = run_experiment(opt, kind);
      if (rc != 0) std::exit(rc);
    });
  }

  CLI11_PARSE(app, argc, argv);
  return 0;
}
