// expsum.hpp
//
// Smoothed exponential sums over the Lambda support: the series
// sum_n Lambda(n) e^{-n^k/N} e(n^k alpha), the short-interval kernel
// U(alpha, H) = sum_{m<=H} e(m alpha), powers of z = 1/N - 2*pi*i*alpha,
// and the major-arc error E(alpha) = S(alpha) - Gamma(1+1/k) z^{-1/k}.

#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "waring/arith.hpp"

namespace waring::expsum {

// The infinite sum is truncated at the smallest n with e^{-n^k/N} below
// tail_tolerance, i.e. n_max = ceil((N log(1/tol))^{1/k}); the discarded
// tail is bounded by tail_tolerance * psi(2 n_max).
struct TruncationPolicy {
  double tail_tolerance = 1e-16;
  uint64_t n_max(uint64_t N, unsigned k) const;
};

// Immutable (frequency, weight) pairs for one (N, k); evaluation at any
// alpha reuses them, so grid sweeps cost one pass over the support each.
class SmoothedSumEvaluator {
 public:
  // Requires table.limit >= n_max.  Throws std::invalid_argument otherwise.
  SmoothedSumEvaluator(uint64_t N, unsigned k, const arith::LambdaTable& table,
                       TruncationPolicy policy = {});

  // sum of weight * e(freq * alpha); phases reduced mod 1 exactly.
  std::complex<double> s_tilde(double alpha) const;
  // s_tilde(alpha) - Gamma(1+1/k) * z^{-1/k}.
  std::complex<double> e_tilde(double alpha) const;

  uint64_t N() const { return n_; }
  unsigned k() const { return k_; }
  uint64_t n_max() const { return n_max_; }
  uint64_t max_pow() const { return n_max_pow_; }  // n_max^k, Nyquist bound
  double s_tilde_zero() const { return s_zero_; }  // sum of all weights
  double gamma_k() const { return gamma_k_; }
  size_t term_count() const { return freq_.size(); }
  const std::vector<uint64_t>& frequencies() const { return freq_; }
  const std::vector<double>& weights() const { return weight_; }

 private:
  uint64_t n_;
  unsigned k_;
  uint64_t n_max_;
  uint64_t n_max_pow_;
  double s_zero_;
  double gamma_k_;
  std::vector<uint64_t> freq_;   // n^k over the Lambda support, increasing
  std::vector<double> weight_;   // Lambda(n) e^{-n^k/N}, all positive
};

// Fractional part of m * alpha in [-1/2, 1/2], exact splitting so no low
// bits are lost even for m near 2^53.
double reduced_phase(uint64_t m, double alpha);

// e(t) = exp(2 pi i t).
std::complex<double> unit_phase(double t);

// Geometric sum e(alpha) + ... + e(H alpha); closed form away from integer
// alpha, direct summation inside the |e(alpha) - 1| <= 1e-8 sliver.
// U(alpha, 0) = 0.  Satisfies |U| <= min{H, 1/(2 |alpha|)} on [-1/2, 1/2].
std::complex<double> u_sum(double alpha, uint64_t H);

// z = 1/N - 2 pi i alpha and principal-branch z^{-mu} (Re z > 0 always, so
// the branch choice never bites).  mu must be positive.
std::complex<double> z_of(double alpha, double N);
std::complex<double> z_inverse_power(double alpha, double N, double mu);

}  // namespace waring::expsum
