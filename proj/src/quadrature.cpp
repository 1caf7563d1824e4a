#include "waring/quadrature.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>

#include "waring/analytic.hpp"
#include "waring/util.hpp"

namespace waring::quadrature {

namespace {

constexpr uint64_t kMaxTrapezoidNodes = uint64_t(1) << 27;
constexpr uint64_t kTrapezoidChunk = 4096;

// 15-point Kronrod rule with embedded 7-point Gauss rule (positive nodes).
constexpr double kXgk[8] = {
    0.9914553711208126, 0.9491079123427585, 0.8648644233597691, 0.7415311855993944,
    0.5860872354676911, 0.4058451513773972, 0.2077849550078985, 0.0,
};
constexpr double kWgk[8] = {
    0.02293532201052922, 0.06309209262997855, 0.1047900103222502, 0.1406532597155259,
    0.1690047266392679,  0.1903505780647854,  0.2044329400752989, 0.2094821410847278,
};
constexpr double kWg[4] = {
    0.1294849661688697, 0.2797053914892767, 0.3818300505051189, 0.4179591836734694,
};

struct Panel {
  double a;
  double b;
  std::complex<double> value;
  double err;
  bool fresh;  // true until the Gauss-Kronrod pass fills value/err
};

Panel eval_panel(const Integrand& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const std::complex<double> fc = f(c);
  std::complex<double> k15 = kWgk[7] * fc;
  std::complex<double> g7 = kWg[3] * fc;
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    const std::complex<double> f1 = f(c - dx);
    const std::complex<double> f2 = f(c + dx);
    k15 += kWgk[j] * (f1 + f2);
    if (j % 2 == 1) g7 += kWg[(j - 1) / 2] * (f1 + f2);
  }
  k15 *= h;
  g7 *= h;
  return {a, b, k15, std::abs(k15 - g7), false};
}

// Evaluates every fresh panel in place; work is pulled through an atomic
// index, but each slot is written by exactly one thread with inputs that do
// not depend on scheduling, so results are bit-stable for any thread count.
// Returns the number of panels evaluated.
size_t eval_fresh_panels(const Integrand& f, std::vector<Panel>& panels, unsigned threads) {
  std::vector<size_t> todo;
  for (size_t i = 0; i < panels.size(); ++i) {
    if (panels[i].fresh) todo.push_back(i);
  }
  const unsigned workers = resolve_threads(threads);
  if (workers <= 1 || todo.size() < 32) {
    for (size_t i : todo) panels[i] = eval_panel(f, panels[i].a, panels[i].b);
    return todo.size();
  }
  std::atomic<size_t> next{0};
  auto work = [&] {
    while (true) {
      const size_t j = next.fetch_add(1);
      if (j >= todo.size()) break;
      const size_t i = todo[j];
      panels[i] = eval_panel(f, panels[i].a, panels[i].b);
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  return todo.size();
}

}  // namespace

QuadratureResult periodic_trapezoid(const Integrand& f, uint64_t M, unsigned threads) {
  if (M < 16) throw std::invalid_argument("periodic_trapezoid: need M >= 16");
  const uint64_t chunks = (M + kTrapezoidChunk - 1) / kTrapezoidChunk;
  std::vector<std::complex<double>> part(chunks), part_half(chunks);

  const double inv_m = 1.0 / static_cast<double>(M);
  std::atomic<uint64_t> next{0};
  auto work = [&] {
    while (true) {
      const uint64_t c = next.fetch_add(1);
      if (c >= chunks) break;
      const uint64_t begin = c * kTrapezoidChunk;
      const uint64_t end = std::min(M, begin + kTrapezoidChunk);
      KahanComplexSum sum, sum_half;
      for (uint64_t j = begin; j < end; ++j) {
        const std::complex<double> v = f(-0.5 + static_cast<double>(j) * inv_m);
        sum.add(v);
        if ((j & 1u) == 0) sum_half.add(v);
      }
      part[c] = sum.value();
      part_half[c] = sum_half.value();
    }
  };
  const unsigned workers = resolve_threads(threads);
  if (workers <= 1 || chunks < 2) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
  }

  KahanComplexSum total, total_half;
  for (uint64_t c = 0; c < chunks; ++c) {
    total.add(part[c]);
    total_half.add(part_half[c]);
  }
  QuadratureResult r;
  r.method = Method::PeriodicTrapezoid;
  r.nodes = M;
  r.value = total.value() * inv_m;
  if (M % 2 == 0) {
    const std::complex<double> half = total_half.value() * (2.0 * inv_m);
    r.est_error = std::abs(r.value - half);
  }
  return r;
}

QuadratureResult adaptive_integrate(const Integrand& f, double a, double b,
                                    const AdaptiveOptions& opts) {
  if (!(a < b)) throw std::invalid_argument("adaptive_integrate: need a < b");

  // Initial mesh: forced breakpoints, then a uniform split fine enough for
  // the declared oscillation.
  std::vector<double> cuts{a, b};
  for (double x : opts.breakpoints) {
    if (x > a && x < b) cuts.push_back(x);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  const double span = b - a;
  const double max_width =
      opts.max_frequency_hint > 0.0 ? 0.25 / opts.max_frequency_hint : span / 8.0;

  std::vector<Panel> panels;
  for (size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double lo = cuts[i];
    const double hi = cuts[i + 1];
    const uint64_t parts = std::max<uint64_t>(
        1, static_cast<uint64_t>(std::ceil((hi - lo) / std::max(max_width, 1e-300))));
    if (parts > opts.max_panels) {
      throw ConvergenceError("adaptive_integrate: initial mesh exceeds panel budget", HUGE_VAL);
    }
    for (uint64_t p = 0; p < parts; ++p) {
      const double pa = lo + (hi - lo) * static_cast<double>(p) / static_cast<double>(parts);
      const double pb =
          p + 1 == parts ? hi : lo + (hi - lo) * static_cast<double>(p + 1) / static_cast<double>(parts);
      panels.push_back({pa, pb, {0, 0}, 0, true});
    }
  }

  uint64_t nodes = 15 * eval_fresh_panels(f, panels, opts.threads);

  while (true) {
    std::sort(panels.begin(), panels.end(),
              [](const Panel& x, const Panel& y) { return x.a < y.a; });
    KahanComplexSum vsum;
    KahanSum esum;
    for (const Panel& p : panels) {
      vsum.add(p.value);
      esum.add(p.err);
    }
    const std::complex<double> total = vsum.value();
    const double err = esum.value();
    const double tol = std::max(opts.abs_tol, opts.rel_tol * std::abs(total));
    if (err <= tol) {
      QuadratureResult r;
      r.method = Method::AdaptiveSubdivision;
      r.value = total;
      r.est_error = err;
      r.nodes = nodes;
      return r;
    }

    // Equidistribution: split every panel holding more than its share.
    const double share = tol / static_cast<double>(panels.size());
    std::vector<Panel> kept;
    kept.reserve(panels.size() * 2);
    size_t split_count = 0;
    for (const Panel& p : panels) {
      if (p.err > share && (p.b - p.a) > 2.0 * opts.min_panel_width) {
        const double mid = 0.5 * (p.a + p.b);
        kept.push_back({p.a, mid, {0, 0}, 0, true});
        kept.push_back({mid, p.b, {0, 0}, 0, true});
        ++split_count;
      } else {
        kept.push_back(p);
      }
    }
    if (split_count == 0 || kept.size() > opts.max_panels) {
      char msg[160];
      std::snprintf(msg, sizeof msg,
                    "adaptive_integrate: tolerance %.3g not reached (achieved %.3g, %zu panels)",
                    tol, err, panels.size());
      throw ConvergenceError(msg, err);
    }
    nodes += 15 * eval_fresh_panels(f, kept, opts.threads);
    panels.swap(kept);
  }
}

namespace {

// Shared by integral_basic_identity and decompose_window.
Integrand window_integrand(const expsum::SmoothedSumEvaluator& ev, uint64_t N, uint64_t H,
                           unsigned k) {
  return [&ev, N, H, k](double alpha) {
    const std::complex<double> s = ev.s_tilde(alpha);
    const std::complex<double> u = expsum::u_sum(-alpha, H);
    const std::complex<double> ph = expsum::unit_phase(-expsum::reduced_phase(N, alpha));
    return cpow_uint(s, k + 1) * u * ph;
  };
}

uint64_t nyquist_nodes(uint64_t max_abs_frequency) {
  uint64_t m = 2 * max_abs_frequency + 2;
  if (m % 2 == 1) ++m;
  return std::max<uint64_t>(m, 16);
}

void require_trapezoid_budget(uint64_t m, const char* what) {
  if (m > kMaxTrapezoidNodes) {
    char msg[160];
    std::snprintf(msg, sizeof msg, "%s: required node count %llu exceeds budget %llu", what,
                  static_cast<unsigned long long>(m),
                  static_cast<unsigned long long>(kMaxTrapezoidNodes));
    throw std::invalid_argument(msg);
  }
}

}  // namespace

QuadratureResult integral_basic_identity(uint64_t N, uint64_t H, unsigned k,
                                         const arith::LambdaTable& table,
                                         expsum::TruncationPolicy policy, unsigned threads) {
  if (k < 2) throw std::invalid_argument("integral_basic_identity: k must be >= 2");
  expsum::SmoothedSumEvaluator ev(N, k, table, policy);
  const uint64_t max_freq = (k + 1) * ev.max_pow() + H + N;
  const uint64_t m = nyquist_nodes(max_freq);
  require_trapezoid_budget(m, "integral_basic_identity");
  QuadratureResult r = periodic_trapezoid(window_integrand(ev, N, H, k), m, threads);
  r.est_error += std::abs(r.value.imag());
  r.value = {r.value.real(), 0.0};
  return r;
}

LaplaceCheck laplace_check(uint64_t N, uint64_t n, double mu, double X, unsigned threads) {
  if (N < 1 || n < 1) throw std::invalid_argument("laplace_check: need N, n >= 1");
  if (!(mu > 0.0)) throw std::invalid_argument("laplace_check: mu must be > 0");
  if (!(X > 0.0) || X > 0.5) throw std::invalid_argument("laplace_check: X must be in (0, 1/2]");

  const double big_n = static_cast<double>(N);
  Integrand f = [big_n, n, mu](double alpha) {
    return expsum::z_inverse_power(alpha, big_n, mu) *
           expsum::unit_phase(-expsum::reduced_phase(n, alpha));
  };
  AdaptiveOptions opts;
  opts.threads = threads;
  opts.max_frequency_hint = static_cast<double>(n);
  opts.breakpoints = {-4.0 / big_n, 4.0 / big_n};
  const QuadratureResult q = adaptive_integrate(f, -X, X, opts);

  LaplaceCheck out;
  out.integral = q.value.real();
  out.predicted = std::exp(-static_cast<double>(n) / big_n) *
                  std::pow(static_cast<double>(n), mu - 1.0) / analytic::gamma_fn(mu);
  out.bound = 1.0 / (static_cast<double>(n) * std::pow(X, mu));
  out.nodes = q.nodes;
  out.est_error = q.est_error + std::abs(q.value.imag());
  return out;
}

MomentPair l2_moment_full(const expsum::SmoothedSumEvaluator& ev, unsigned threads) {
  const uint64_t m = nyquist_nodes(ev.max_pow());
  require_trapezoid_budget(m, "l2_moment_full");
  Integrand f = [&ev](double alpha) {
    return std::complex<double>(std::norm(ev.s_tilde(alpha)), 0.0);
  };
  const QuadratureResult q = periodic_trapezoid(f, m, threads);

  KahanSum parseval;
  for (double w : ev.weights()) parseval.add(w * w);

  MomentPair out;
  out.quadrature = q.value.real();
  out.parseval = parseval.value();
  out.nodes = q.nodes;
  return out;
}

namespace {

// Two-sided moment of an even non-negative integrand: 2 * int_0^limit.
double even_moment(const expsum::SmoothedSumEvaluator& ev, double limit,
                   const Integrand& f, unsigned threads) {
  AdaptiveOptions opts;
  opts.threads = threads;
  opts.max_frequency_hint = static_cast<double>(ev.max_pow());
  const double peak = 4.0 / static_cast<double>(ev.N());
  if (peak < limit) opts.breakpoints = {peak};
  const QuadratureResult q = adaptive_integrate(f, 0.0, limit, opts);
  return 2.0 * q.value.real();
}

}  // namespace

double l2_error_moment(const expsum::SmoothedSumEvaluator& ev, double xi, unsigned threads) {
  if (!(xi > 0.0) || xi > 0.5) throw std::invalid_argument("l2_error_moment: xi in (0, 1/2]");
  Integrand f = [&ev](double alpha) {
    return std::complex<double>(std::norm(ev.e_tilde(alpha)), 0.0);
  };
  return even_moment(ev, xi, f, threads);
}

double l4_moment(const expsum::SmoothedSumEvaluator& ev, double tau, unsigned threads) {
  if (!(tau > 0.0) || tau > 0.5) throw std::invalid_argument("l4_moment: tau in (0, 1/2]");
  if (tau == 0.5) {
    // |S|^4 is a trigonometric polynomial with frequencies below 2 n_max^k:
    // the full-period integral is a finite exact computation.
    const uint64_t m = nyquist_nodes(2 * ev.max_pow());
    require_trapezoid_budget(m, "l4_moment");
    Integrand f = [&ev](double alpha) {
      const double n2 = std::norm(ev.s_tilde(alpha));
      return std::complex<double>(n2 * n2, 0.0);
    };
    return periodic_trapezoid(f, m, threads).value.real();
  }
  Integrand f = [&ev](double alpha) {
    const double n2 = std::norm(ev.s_tilde(alpha));
    return std::complex<double>(n2 * n2, 0.0);
  };
  return even_moment(ev, tau, f, threads);
}

double l4_weighted(const expsum::SmoothedSumEvaluator& ev, double tau, unsigned threads) {
  const double n_floor = std::pow(static_cast<double>(ev.N()), -2.0);
  if (!(tau >= n_floor) || tau > 0.5) {
    throw std::invalid_argument("l4_weighted: tau must be in [N^{-2}, 1/2]");
  }
  if (tau == 0.5) return 0.0;
  Integrand f = [&ev](double alpha) {
    const double n2 = std::norm(ev.s_tilde(alpha));
    return std::complex<double>(n2 * n2 / alpha, 0.0);
  };
  AdaptiveOptions opts;
  opts.threads = threads;
  opts.max_frequency_hint = static_cast<double>(ev.max_pow());
  const QuadratureResult q = adaptive_integrate(f, tau, 0.5, opts);
  return q.value.real();
}

double tolev_l2(const expsum::SmoothedSumEvaluator& ev, double tau, unsigned threads) {
  if (!(tau > 0.0) || tau > 0.5) throw std::invalid_argument("tolev_l2: tau in (0, 1/2]");
  if (tau == 0.5) return l2_moment_full(ev, threads).quadrature;
  Integrand f = [&ev](double alpha) {
    return std::complex<double>(std::norm(ev.s_tilde(alpha)), 0.0);
  };
  return even_moment(ev, tau, f, threads);
}

Decomposition decompose_window(uint64_t N, uint64_t H, unsigned k, double B,
                               const arith::LambdaTable& table, unsigned threads) {
  if (k < 2) throw std::invalid_argument("decompose_window: k must be >= 2");
  if (H < 1) throw std::invalid_argument("decompose_window: H must be >= 1");
  if (!(B >= 1.0)) throw std::invalid_argument("decompose_window: B must be >= 1");
  const double split = B / static_cast<double>(H);
  if (split > 0.5) throw std::invalid_argument("decompose_window: B/H must be <= 1/2");

  expsum::SmoothedSumEvaluator ev(N, k, table);
  const double big_n = static_cast<double>(N);
  const double mu = (k + 1.0) / k;
  const double gamma_k = ev.gamma_k();
  const double gamma_pow = std::pow(gamma_k, static_cast<double>(k + 1));

  const uint64_t m_nodes = nyquist_nodes((k + 1) * ev.max_pow() + H + N);
  require_trapezoid_budget(m_nodes, "decompose_window");
  const Integrand whole = window_integrand(ev, N, H, k);
  const QuadratureResult full = periodic_trapezoid(whole, m_nodes, threads);

  Integrand kernel = [big_n, H, N, mu](double alpha) {
    return expsum::u_sum(-alpha, H) * expsum::z_inverse_power(alpha, big_n, mu) *
           expsum::unit_phase(-expsum::reduced_phase(N, alpha));
  };
  Integrand secondary = [&ev, big_n, H, N, mu, gamma_pow, k](double alpha) {
    const std::complex<double> s = cpow_uint(ev.s_tilde(alpha), k + 1);
    const std::complex<double> zk = gamma_pow * expsum::z_inverse_power(alpha, big_n, mu);
    return (s - zk) * expsum::u_sum(-alpha, H) *
           expsum::unit_phase(-expsum::reduced_phase(N, alpha));
  };

  AdaptiveOptions smooth_opts;
  smooth_opts.threads = threads;
  smooth_opts.max_frequency_hint = static_cast<double>(N + H);
  smooth_opts.breakpoints = {-4.0 / big_n, 4.0 / big_n};

  AdaptiveOptions osc_opts = smooth_opts;
  osc_opts.max_frequency_hint = static_cast<double>(ev.max_pow() + H + N);

  Decomposition out;
  out.gamma_k = gamma_k;
  out.full = full.value.real();
  out.nodes = full.nodes;

  const QuadratureResult q1 = adaptive_integrate(kernel, -split, split, smooth_opts);
  out.i1 = q1.value;
  out.nodes += q1.nodes;

  const QuadratureResult q2 = adaptive_integrate(secondary, -split, split, osc_opts);
  out.i2 = q2.value;
  out.nodes += q2.nodes;

  if (split == 0.5) {
    out.i3 = {0.0, 0.0};
  } else {
    const QuadratureResult mid = adaptive_integrate(whole, -split, split, osc_opts);
    out.i3 = full.value - mid.value;
    out.nodes += mid.nodes;
  }

  const double h = static_cast<double>(H);
  out.i1_error_bound = h * h * std::pow(big_n, 1.0 / k - 1.0) +
                       (h / big_n) * std::pow(h / B, (k + 1.0) / k);
  out.i2_bound = h * std::pow(big_n, 1.0 / k) * analytic::a_envelope(N, -0.5);
  out.i3_bound = std::pow(big_n, 1.0 / k + 0.05) * h / B;
  return out;
}

}  // namespace waring::quadrature
