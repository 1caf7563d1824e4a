#include <doctest.h>

#include <cmath>
#include <complex>

#include "waring/analytic.hpp"
#include "waring/harness.hpp"
#include "waring/quadrature.hpp"
#include "waring/represent.hpp"
#include "waring/util.hpp"

using namespace waring;
using expsum::SmoothedSumEvaluator;

namespace {

std::complex<double> e_of(double t) { return expsum::unit_phase(t); }

}  // namespace

TEST_CASE("periodic trapezoid pinned cases") {
  auto one = [](double) { return std::complex<double>{1.0, 0.0}; };
  CHECK(quadrature::periodic_trapezoid(one, 64).value.real() == doctest::Approx(1.0));

  auto osc = [](double a) { return e_of(3.0 * a); };
  CHECK(std::abs(quadrature::periodic_trapezoid(osc, 16).value) <= 1e-14);

  auto unit = [](double a) { return e_of(2.0 * a) * e_of(-2.0 * a); };
  CHECK(quadrature::periodic_trapezoid(unit, 32).value.real() == doctest::Approx(1.0));

  CHECK_THROWS_AS(quadrature::periodic_trapezoid(one, 8), std::invalid_argument);
}

TEST_CASE("periodic trapezoid recovers the mean of random trig polynomials") {
  harness::CounterRng rng{31};
  for (int trial = 0; trial < 20; ++trial) {
    const int max_freq = 40;
    std::vector<std::complex<double>> coeff(2 * max_freq + 1);
    for (int m = -max_freq; m <= max_freq; ++m) {
      coeff[m + max_freq] = {rng.uniform01(100 * trial + 2 * (m + max_freq)) - 0.5,
                             rng.uniform01(100 * trial + 2 * (m + max_freq) + 1) - 0.5};
    }
    auto poly = [&](double a) {
      std::complex<double> acc{0, 0};
      for (int m = -max_freq; m <= max_freq; ++m) acc += coeff[m + max_freq] * e_of(m * a);
      return acc;
    };
    const auto got = quadrature::periodic_trapezoid(poly, 2 * max_freq + 2).value;
    const auto want = coeff[max_freq];  // mean = DC coefficient
    CHECK(std::abs(got - want) <= 1e-12 * (1.0 + std::abs(want)));
  }
}

TEST_CASE("trapezoid reductions are thread-count independent") {
  auto f = [](double a) { return e_of(5.0 * a) + std::complex<double>{0.25, 0.0}; };
  const auto q1 = quadrature::periodic_trapezoid(f, 20000, 1);
  const auto q4 = quadrature::periodic_trapezoid(f, 20000, 4);
  CHECK(q1.value.real() == q4.value.real());
  CHECK(q1.value.imag() == q4.value.imag());
}

TEST_CASE("adaptive integration of smooth references") {
  // int_0^1 x^2 = 1/3
  auto sq = [](double x) { return std::complex<double>{x * x, 0.0}; };
  const auto q = quadrature::adaptive_integrate(sq, 0.0, 1.0);
  CHECK(q.value.real() == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(q.value.imag() == 0.0);
  CHECK(q.est_error >= 0.0);

  // a narrow Lorentzian-style peak with a seeded breakpoint
  const double w = 1e-4;
  auto peak = [w](double x) { return std::complex<double>{w / (w * w + x * x), 0.0}; };
  quadrature::AdaptiveOptions opts;
  opts.breakpoints = {-4 * w, 4 * w};
  const auto p = quadrature::adaptive_integrate(peak, -0.5, 0.5, opts);
  const double want = 2.0 * std::atan(0.5 / w);
  CHECK(p.value.real() == doctest::Approx(want).epsilon(1e-10));
}

TEST_CASE("adaptive failure reports the achieved error") {
  // |x|^{-1/2} has an integrable singularity the panel floor cannot resolve
  auto rough = [](double x) {
    return std::complex<double>{1.0 / std::sqrt(std::abs(x) + 1e-300), 0.0};
  };
  quadrature::AdaptiveOptions opts;
  opts.abs_tol = 1e-300;
  opts.rel_tol = 1e-16;
  opts.max_panels = 256;
  CHECK_THROWS_AS(quadrature::adaptive_integrate(rough, -1.0, 1.0, opts),
                  quadrature::ConvergenceError);
  try {
    quadrature::adaptive_integrate(rough, -1.0, 1.0, opts);
  } catch (const quadrature::ConvergenceError& e) {
    CHECK(e.achieved_error() > 0.0);
  }
}

TEST_CASE("l2 moment: quadrature equals the spectral sum") {
  const auto t = arith::sieve_lambda(700);
  SmoothedSumEvaluator ev(1, 2, t);
  const auto pair1 = quadrature::l2_moment_full(ev);
  CHECK(pair1.parseval == doctest::Approx(1.6119241244699256e-4).epsilon(1e-12));
  CHECK(std::abs(pair1.quadrature - pair1.parseval) <= 1e-10 * pair1.parseval);

  SmoothedSumEvaluator ev2(1000, 2, t);
  const auto pair2 = quadrature::l2_moment_full(ev2);
  CHECK(std::abs(pair2.quadrature - pair2.parseval) <= 1e-10 * pair2.parseval);
}

TEST_CASE("l2 moment with a single-frequency table") {
  arith::LambdaTable t;
  t.limit = 20;
  t.values.assign(21, 0.0);
  t.values[2] = std::log(2.0);
  t.support_index = {2};
  t.prime_base = {2};
  t.psi_prefix = {std::log(2.0)};
  SmoothedSumEvaluator ev(1, 3, t);  // single term at frequency 8
  const double want = std::log(2.0) * std::log(2.0) * std::exp(-16.0);
  const auto pair = quadrature::l2_moment_full(ev);
  CHECK(pair.parseval == doctest::Approx(want).epsilon(1e-14));
  CHECK(pair.quadrature == doctest::Approx(want).epsilon(1e-10));
}

TEST_CASE("laplace kernel against the closed form") {
  const auto lc = quadrature::laplace_check(1000, 1000, 1.0, 0.5);
  CHECK(lc.predicted == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
  CHECK(lc.bound == doctest::Approx(2e-3).epsilon(1e-14));
  CHECK(std::abs(lc.integral - lc.predicted) <= 10.0 * lc.bound);

  // mu = 1 collapses the prediction to the bare exponential weight
  const auto flat = quadrature::laplace_check(1000, 1010, 1.0, 0.25);
  CHECK(flat.predicted == doctest::Approx(std::exp(-1.01)).epsilon(1e-13));

  // larger X shrinks the truncation error (up to quadrature noise)
  const auto at8 = quadrature::laplace_check(1000, 1000, 1.5, 0.125);
  const auto at2 = quadrature::laplace_check(1000, 1000, 1.5, 0.5);
  CHECK(std::abs(at2.integral - at2.predicted) <=
        std::abs(at8.integral - at8.predicted) + 1e-8);

  CHECK_THROWS_AS(quadrature::laplace_check(1000, 1000, 0.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(quadrature::laplace_check(1000, 1000, 1.0, 0.6), std::invalid_argument);
}

TEST_CASE("error moment is monotone in the cutoff") {
  const auto t = arith::sieve_lambda(700);
  SmoothedSumEvaluator ev(1000, 2, t);
  const double m1 = quadrature::l2_error_moment(ev, 1e-3);
  const double m2 = quadrature::l2_error_moment(ev, 3e-3);
  const double m3 = quadrature::l2_error_moment(ev, 1e-2);
  CHECK(m1 >= 0.0);
  CHECK(m2 >= m1 - 1e-12);
  CHECK(m3 >= m2 - 1e-12);
}

TEST_CASE("fourth moment: full period equals the pair spectrum") {
  const auto t = arith::sieve_lambda(700);
  SmoothedSumEvaluator ev(500, 2, t);
  const double quad = quadrature::l4_moment(ev, 0.5);
  const auto spectrum = represent::pair_spectrum(t, 2, ev.n_max(), 500.0);
  KahanSum sum;
  for (const auto& [m, r] : spectrum) sum.add(r * r);
  CHECK(std::abs(quad - sum.value()) <= 1e-8 * sum.value());
}

TEST_CASE("fourth moment is monotone in tau") {
  const auto t = arith::sieve_lambda(700);
  SmoothedSumEvaluator ev(200, 2, t);
  const double a = quadrature::l4_moment(ev, 1e-2);
  const double b = quadrature::l4_moment(ev, 1e-1);
  const double c = quadrature::l4_moment(ev, 0.5);
  CHECK(a >= 0.0);
  CHECK(b >= a - 1e-12);
  CHECK(c >= b - 1e-12);
}

TEST_CASE("decomposition closes for k = 3") {
  const auto t = arith::sieve_lambda(100);
  const uint64_t n = 200, h = 10;
  represent::WindowSpec spec{n, h, 3, represent::Variant::KPlusOne};
  const auto wc = represent::count_window(spec, t);
  const double smoothed = represent::smoothed_window_sum(wc);
  const auto d = quadrature::decompose_window(n, h, 3, 2.0, t);
  const double gpow = std::pow(d.gamma_k, 4.0);
  const std::complex<double> recon = gpow * d.i1 + d.i2 + d.i3;
  CHECK(std::abs(recon - smoothed) <= 1e-5 * (1.0 + std::abs(smoothed)));
  CHECK(std::abs(d.full - smoothed) <= 1e-6 * (1.0 + std::abs(smoothed)));
}

TEST_CASE("weighted fourth moment shrinks with tau") {
  const auto t = arith::sieve_lambda(700);
  SmoothedSumEvaluator ev(200, 2, t);
  const double a = quadrature::l4_weighted(ev, 1e-3);
  const double b = quadrature::l4_weighted(ev, 1e-2);
  const double c = quadrature::l4_weighted(ev, 1e-1);
  CHECK(a >= b);
  CHECK(b >= c);
  CHECK(c >= 0.0);
  CHECK_THROWS_AS(quadrature::l4_weighted(ev, 1e-12), std::invalid_argument);
}

TEST_CASE("tolev moment endpoints") {
  const auto t = arith::sieve_lambda(700);
  SmoothedSumEvaluator ev(1000, 2, t);
  const auto pair = quadrature::l2_moment_full(ev);
  CHECK(quadrature::tolev_l2(ev, 0.5) == pair.quadrature);
  const double small = quadrature::tolev_l2(ev, 1e-2);
  CHECK(small <= pair.quadrature);
  CHECK(small >= 0.0);
}

TEST_CASE("window integral equals the smoothed window sum") {
  const auto t = arith::sieve_lambda(200);
  // N = 100, H = 5: counts from the brute-force oracle path
  represent::WindowSpec spec{100, 5, 2, represent::Variant::KPlusOne};
  const auto wc = represent::count_window(spec, t);
  for (uint64_t i = 0; i < 5; ++i) {
    CHECK(wc.counts[i] ==
          doctest::Approx(represent::count_bruteforce(101 + i, 2, 3, t)).epsilon(1e-12));
  }
  const double smoothed = represent::smoothed_window_sum(wc);
  const auto q = quadrature::integral_basic_identity(100, 5, 2, t);
  CHECK(std::abs(q.value.real() - smoothed) <= 1e-6 * (1.0 + std::abs(smoothed)));
  CHECK(q.value.imag() == 0.0);

  const auto empty = quadrature::integral_basic_identity(100, 0, 2, t);
  CHECK(std::abs(empty.value.real()) <= 1e-12);
}

TEST_CASE("window integral refuses infeasible node counts with the requirement named") {
  const auto t = arith::sieve_lambda(400);
  CHECK_THROWS_WITH_AS(quadrature::integral_basic_identity(1000000, 10, 3, t),
                       doctest::Contains("node count"), std::invalid_argument);
}

TEST_CASE("window decomposition closes and handles the edge split") {
  const auto t = arith::sieve_lambda(300);
  const uint64_t n = 1000, h = 20;
  represent::WindowSpec spec{n, h, 2, represent::Variant::KPlusOne};
  const auto wc = represent::count_window(spec, t);
  const double smoothed = represent::smoothed_window_sum(wc);

  const auto d = quadrature::decompose_window(n, h, 2, 2.0, t);
  const double gpow = std::pow(d.gamma_k, 3.0);
  const std::complex<double> recon = gpow * d.i1 + d.i2 + d.i3;
  CHECK(std::abs(recon - smoothed) <= 1e-5 * std::abs(smoothed));
  CHECK(std::abs(d.full - smoothed) <= 1e-8 * std::abs(smoothed));

  // gamma_k * I1 tracks the smoothed power sum within the variable-endpoint
  // error scale (H/N)(H/B)^{(k+1)/k}
  const auto psum = analytic::smoothed_power_sum(n, h, 0.5);
  const double prep_scale = (double(h) / double(n)) * std::pow(double(h) / 2.0, 1.5);
  CHECK(std::abs(d.gamma_k * d.i1.real() - psum.exact) <= 10.0 * prep_scale);

  // B = H/2 puts the split at the period boundary: no complement left
  const auto edge = quadrature::decompose_window(n, h, 2, 10.0, t);
  CHECK(edge.i3 == std::complex<double>{0.0, 0.0});

  CHECK_THROWS_AS(quadrature::decompose_window(n, h, 2, 11.0, t), std::invalid_argument);
  CHECK_THROWS_AS(quadrature::decompose_window(n, h, 2, 0.5, t), std::invalid_argument);
}
