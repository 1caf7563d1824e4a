#include <doctest.h>

#include <cmath>
#include <complex>

#include "waring/expsum.hpp"
#include "waring/harness.hpp"

using namespace waring;
using expsum::SmoothedSumEvaluator;
using expsum::TruncationPolicy;

namespace {

// Exact fractional part of m * alpha via 128-bit dyadic arithmetic: every
// double is a dyadic rational, so m * alpha mod 1 is exactly computable.
long double phase_oracle(uint64_t m, double alpha) {
  int e;
  const double mant = std::frexp(alpha, &e);  // alpha = mant * 2^e
  const auto a = static_cast<long long>(std::ldexp(mant, 53));
  const int shift = 53 - e;  // alpha = a / 2^shift
  REQUIRE(shift >= 0);
  REQUIRE(shift < 127);
  unsigned __int128 prod = static_cast<unsigned __int128>(m) *
                           static_cast<unsigned __int128>(a < 0 ? -a : a);
  const unsigned __int128 mask = (static_cast<unsigned __int128>(1) << shift) - 1;
  long double frac = static_cast<long double>(prod & mask) / std::ldexp(1.0L, shift);
  if (a < 0) frac = -frac;
  if (frac >= 0.5L) frac -= 1.0L;
  if (frac < -0.5L) frac += 1.0L;
  return frac;
}

}  // namespace

TEST_CASE("phase reduction is exact") {
  harness::CounterRng rng{11};
  for (uint64_t i = 0; i < 20000; ++i) {
    const uint64_t m = 1 + rng.word(2 * i) % ((uint64_t(1) << 29));
    double alpha = rng.uniform01(2 * i + 1) - 0.5;
    if (alpha == 0.0) alpha = 0.25;
    const double got = expsum::reduced_phase(m, alpha);
    long double want = phase_oracle(m, alpha);
    long double diff = std::abs(static_cast<long double>(got) - want);
    if (diff > 0.5L) diff = 1.0L - diff;  // equivalent representatives at +-1/2
    CHECK(diff <= 2e-16L);
  }
}

TEST_CASE("truncation policy") {
  TruncationPolicy policy;
  // n_max = ceil((N log 1e16)^{1/k})
  CHECK(policy.n_max(1, 2) == 7);
  CHECK(policy.n_max(1000, 2) == 192);
  CHECK(policy.n_max(10000, 2) == 607);
  CHECK(policy.n_max(1000, 3) == 34);

  // discarded tail below tolerance * psi(2 n_max)
  const auto t = arith::sieve_lambda(1300);
  const uint64_t n_max = policy.n_max(1000, 2);
  double tail = 0.0;
  for (uint64_t n = n_max + 1; n <= 2 * n_max; ++n) {
    tail += t.values[n] * std::exp(-double(n) * double(n) / 1000.0);
  }
  CHECK(tail <= policy.tail_tolerance * psi(t, 2.0 * n_max));
}

TEST_CASE("evaluator construction and invariants") {
  const auto t = arith::sieve_lambda(700);
  const SmoothedSumEvaluator ev(10000, 2, t);
  CHECK(ev.n_max() == 607);
  REQUIRE(ev.term_count() > 0);
  uint64_t prev = 0;
  for (size_t i = 0; i < ev.term_count(); ++i) {
    CHECK(ev.frequencies()[i] > prev);
    CHECK(ev.weights()[i] > 0.0);
    prev = ev.frequencies()[i];
  }
  const auto tiny = arith::sieve_lambda(100);
  CHECK_THROWS_AS(SmoothedSumEvaluator(10000, 2, tiny), std::invalid_argument);
}

TEST_CASE("s_tilde at zero: frozen small case and positivity") {
  const auto t = arith::sieve_lambda(10);
  const SmoothedSumEvaluator ev(1, 2, t);
  // log2 e^{-4} + log3 e^{-9} + log2 e^{-16} + log5 e^{-25} + log7 e^{-49}
  CHECK(ev.s_tilde(0.0).real() == doctest::Approx(0.012831091008982791).epsilon(1e-12));
  CHECK(ev.s_tilde(0.0).imag() == 0.0);
  CHECK(ev.s_tilde_zero() == doctest::Approx(0.012831091008982791).epsilon(1e-12));
}

TEST_CASE("s_tilde conjugate symmetry and grid maximum at zero") {
  const auto t = arith::sieve_lambda(2000);
  for (unsigned k : {2u, 3u}) {
    for (uint64_t n : {1000ull, 10000ull, 100000ull}) {
      const TruncationPolicy policy;
      if (policy.n_max(n, k) > t.limit) continue;
      const SmoothedSumEvaluator ev(n, k, t);
      const double peak = ev.s_tilde_zero();
      // crude partial-summation bound: the peak is of order N^{1/k}
      CHECK(peak <= 2.0 * std::pow(double(n), 1.0 / k));
      double grid_max = 0.0;
      for (int i = 0; i <= 2000; ++i) {
        const double alpha = -0.5 + double(i) / 2000.0;
        const auto v = ev.s_tilde(alpha);
        const auto w = ev.s_tilde(-alpha);
        CHECK(std::abs(v - std::conj(w)) <= 1e-12 * (1.0 + std::abs(v)));
        grid_max = std::max(grid_max, std::abs(v));
      }
      CHECK(grid_max <= peak * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("doubling the truncation horizon changes nothing") {
  const auto t = arith::sieve_lambda(3000);
  const SmoothedSumEvaluator ev(10000, 2, t);
  TruncationPolicy doubled;
  doubled.tail_tolerance = 1e-64;  // quadruples log(1/tol): doubles n_max for k = 2
  const SmoothedSumEvaluator ev2(10000, 2, t, doubled);
  CHECK(ev2.n_max() >= 2 * ev.n_max() - 2);
  for (int i = 0; i <= 100; ++i) {
    const double alpha = -0.5 + double(i) / 100.0;
    CHECK(std::abs(ev.s_tilde(alpha) - ev2.s_tilde(alpha)) <= 1e-12 * ev.s_tilde_zero());
  }
}

TEST_CASE("u_sum pinned values") {
  CHECK(expsum::u_sum(0.0, 17).real() == doctest::Approx(17.0).epsilon(1e-15));
  CHECK(expsum::u_sum(0.0, 17).imag() == 0.0);
  CHECK(std::abs(expsum::u_sum(0.5, 2)) <= 1e-12);
  CHECK(std::abs(expsum::u_sum(0.25, 4)) <= 1e-12);
  CHECK(std::abs(expsum::u_sum(0.123, 0)) == 0.0);
}

TEST_CASE("u_sum closed form matches direct summation") {
  harness::CounterRng rng{23};
  for (int i = 0; i < 200; ++i) {
    const double alpha = rng.uniform01(2 * i) - 0.5;
    const uint64_t h = 1 + rng.word(2 * i + 1) % 300;
    std::complex<double> direct{0, 0};
    for (uint64_t m = 1; m <= h; ++m) direct += expsum::unit_phase(expsum::reduced_phase(m, alpha));
    const auto closed = expsum::u_sum(alpha, h);
    CHECK(std::abs(closed - direct) <= 1e-10 * (1.0 + std::abs(direct)));
  }
}

TEST_CASE("u_sum satisfies the kernel bound") {
  for (uint64_t h : {1ull, 10ull, 1000ull, 100000ull}) {
    for (int i = 1; i <= 997; ++i) {
      const double alpha = -0.5 + double(i) / 997.0;
      if (alpha == 0.0) continue;
      const double bound = std::min(double(h), 0.5 / std::abs(alpha));
      CHECK(std::abs(expsum::u_sum(alpha, h)) <= bound + 1e-9);
    }
  }
}

TEST_CASE("z and its inverse powers") {
  const auto z0 = expsum::z_of(0.0, 100.0);
  CHECK(z0.real() == 0.01);
  CHECK(z0.imag() == 0.0);
  const auto p0 = expsum::z_inverse_power(0.0, 100.0, 0.5);
  CHECK(p0.real() == doctest::Approx(10.0).epsilon(1e-14));
  CHECK(p0.imag() == doctest::Approx(0.0));

  // alpha = 1/(2 pi N): z = (1 - i)/N, z^{-1} = N (1 + i)/2
  const double n = 1000.0;
  const auto p1 = expsum::z_inverse_power(1.0 / (2.0 * M_PI * n), n, 1.0);
  CHECK(p1.real() == doctest::Approx(n / 2.0).epsilon(1e-12));
  CHECK(p1.imag() == doctest::Approx(n / 2.0).epsilon(1e-12));

  // |z|^{-1} <= min{N, (2 pi |alpha|)^{-1}} holds with constant 1
  for (int i = 0; i <= 100; ++i) {
    const double alpha = -0.5 + double(i) / 100.0;
    const double inv_mod = 1.0 / std::abs(expsum::z_of(alpha, n));
    CHECK(inv_mod <= n * 1.0000001);
    if (alpha != 0.0) {
      CHECK(inv_mod <= 1.01 * std::min(n, 1.0 / (2.0 * M_PI * std::abs(alpha))));
    }
  }
  CHECK_THROWS_AS(expsum::z_inverse_power(0.1, 100.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(expsum::z_inverse_power(0.1, 100.0, -1.0), std::invalid_argument);
}

TEST_CASE("e_tilde symmetry and size at the center") {
  const auto t = arith::sieve_lambda(700);
  const SmoothedSumEvaluator ev(10000, 2, t);
  for (double alpha : {0.001, 0.01, 0.1, 0.4}) {
    const auto v = ev.e_tilde(alpha);
    const auto w = ev.e_tilde(-alpha);
    CHECK(std::abs(v - std::conj(w)) <= 1e-10 * (1.0 + std::abs(v)));
  }
  const auto at0 = ev.e_tilde(0.0);
  CHECK(at0.imag() == doctest::Approx(0.0));
  CHECK(std::abs(at0) <= 0.05 * std::sqrt(10000.0));
}
