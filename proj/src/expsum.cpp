#include "waring/expsum.hpp"

#include <cmath>
#include <stdexcept>

#include "waring/analytic.hpp"
#include "waring/util.hpp"

namespace waring::expsum {

uint64_t TruncationPolicy::n_max(uint64_t N, unsigned k) const {
  if (!(tail_tolerance > 0.0) || tail_tolerance >= 1.0) {
    throw std::invalid_argument("TruncationPolicy: tail_tolerance must be in (0, 1)");
  }
  const long double x = static_cast<long double>(N) * std::log(1.0L / tail_tolerance);
  return static_cast<uint64_t>(std::ceil(std::pow(x, 1.0L / k)));
}

SmoothedSumEvaluator::SmoothedSumEvaluator(uint64_t N, unsigned k,
                                           const arith::LambdaTable& table,
                                           TruncationPolicy policy)
    : n_(N), k_(k) {
  if (N < 1) throw std::invalid_argument("SmoothedSumEvaluator: N must be >= 1");
  if (k < 2) throw std::invalid_argument("SmoothedSumEvaluator: k must be >= 2");
  n_max_ = policy.n_max(N, k);
  if (table.limit < n_max_) {
    throw std::invalid_argument("SmoothedSumEvaluator: LambdaTable limit below n_max");
  }
  auto np = arith::checked_pow_u64(n_max_, k);
  if (!np || *np >= (uint64_t(1) << 53)) {
    throw std::overflow_error("SmoothedSumEvaluator: n_max^k exceeds exact double range");
  }
  n_max_pow_ = *np;

  const double big_n = static_cast<double>(N);
  KahanSum zero;
  for (uint64_t m : table.support_index) {
    if (m > n_max_) break;
    const uint64_t f = *arith::checked_pow_u64(m, k);
    const double w = table.values[m] * std::exp(-static_cast<double>(f) / big_n);
    freq_.push_back(f);
    weight_.push_back(w);
    zero.add(w);
  }
  s_zero_ = zero.value();
  gamma_k_ = analytic::gamma_fn(1.0 + 1.0 / k);
}

double reduced_phase(uint64_t m, double alpha) {
  const double md = static_cast<double>(m);  // exact: m < 2^53 enforced upstream
  double p, e;
  two_prod(md, alpha, p, e);
  const double r = (p - std::nearbyint(p)) + e;
  if (r >= 0.5) return r - 1.0;
  if (r < -0.5) return r + 1.0;
  return r;
}

std::complex<double> unit_phase(double t) {
  const double a = 2.0 * M_PI * t;
  return {std::cos(a), std::sin(a)};
}

std::complex<double> SmoothedSumEvaluator::s_tilde(double alpha) const {
  double re = 0.0, im = 0.0;
  const size_t n = freq_.size();
  for (size_t i = 0; i < n; ++i) {
    const double r = reduced_phase(freq_[i], alpha);
    const double a = 2.0 * M_PI * r;
    re += weight_[i] * std::cos(a);
    im += weight_[i] * std::sin(a);
  }
  return {re, im};
}

std::complex<double> SmoothedSumEvaluator::e_tilde(double alpha) const {
  return s_tilde(alpha) -
         gamma_k_ * z_inverse_power(alpha, static_cast<double>(n_), 1.0 / k_);
}

std::complex<double> u_sum(double alpha, uint64_t H) {
  if (H == 0) return {0.0, 0.0};
  const double r = alpha - std::nearbyint(alpha);
  const double s = std::sin(M_PI * r);
  // |e(alpha) - 1| = 2|sin(pi alpha)|
  if (2.0 * std::abs(s) <= 1e-8) {
    KahanComplexSum acc;
    for (uint64_t m = 1; m <= H; ++m) {
      acc.add(unit_phase(reduced_phase(m, r)));
    }
    return acc.value();
  }
  const double rh = reduced_phase(H, r);
  const double sh = std::sin(M_PI * rh);
  // e(x) - 1 = 2 sin(pi x) * (-sin(pi x) + i cos(pi x))
  const std::complex<double> num =
      2.0 * sh * std::complex<double>(-sh, std::cos(M_PI * rh));
  const std::complex<double> den =
      2.0 * s * std::complex<double>(-s, std::cos(M_PI * r));
  return unit_phase(r) * num / den;
}

std::complex<double> z_of(double alpha, double N) {
  return {1.0 / N, -2.0 * M_PI * alpha};
}

std::complex<double> z_inverse_power(double alpha, double N, double mu) {
  if (!(mu > 0.0)) throw std::invalid_argument("z_inverse_power: mu must be > 0");
  const double re = 1.0 / N;
  const double im = -2.0 * M_PI * alpha;
  const double log_mod = 0.5 * std::log(re * re + im * im);
  const double theta = std::atan2(im, re);  // in (-pi/2, pi/2): principal branch
  const double mag = std::exp(-mu * log_mod);
  return {mag * std::cos(-mu * theta), mag * std::sin(-mu * theta)};
}

}  // namespace waring::expsum
