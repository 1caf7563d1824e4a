// analytic.hpp
//
// Main terms and error envelopes for the windowed averages, the elementary
// power-difference identity (complex and exact-integer forms), the smoothed
// power-sum approximation, and the de-smoothing correction.

#pragma once

#include <complex>
#include <cstdint>
#include <utility>

#include "waring/represent.hpp"
#include "waring/util.hpp"

namespace waring::analytic {

using represent::Variant;

struct MainTermParams {
  uint64_t N = 0;
  uint64_t H = 0;
  unsigned k = 2;
  double L = 0.0;        // log N
  double gamma_k = 0.0;  // Gamma(1 + 1/k)

  static MainTermParams make(uint64_t N, uint64_t H, unsigned k);
};

enum class EnvelopeKind { UncondA, CondPhi, CondPhiPrime };

struct ErrorEnvelope {
  EnvelopeKind kind;
  double value;
};

// Gamma via the 15-term Lanczos expansion (g = 607/128); relative error
// well under 1e-12 on [0.5, 20].  Throws std::invalid_argument for x <= 0.
double gamma_fn(double x);

// Gamma(1+1/k)^k * H * N^{1/k} for KPlusOne, Gamma(1+1/k)^k * H for KExactly.
double main_term(const MainTermParams& params, Variant variant);

// The four-monomial envelopes for the conditional window averages, and the
// sub-power envelope exp{c (log N / log log N)^{1/3}} scaled by the main
// term shape for the unconditional one.  The decay constant c only enters
// kind UncondA; the implied comparison constants are always fitted by
// callers, never asserted.
ErrorEnvelope error_envelope(const MainTermParams& params, EnvelopeKind kind,
                             Variant variant = Variant::KPlusOne, double c = -1.0);

// exp{c * (log N / log log N)^{1/3}}; requires N >= 16 so log log N > 0.
double a_envelope(uint64_t N, double c);

// x^{k+1} - y^{k+1} and its expansion
//   (x-y)^2 * sum_{j=1..k} j x^{k-j} y^{j-1} + (k+1)(x-y) y^k,
// which agree identically for integral k >= 1.
std::complex<double> identity_lhs(std::complex<double> x, std::complex<double> y, unsigned k);
std::complex<double> identity_rhs(std::complex<double> x, std::complex<double> y, unsigned k);

// Exact-integer twins; throw std::overflow_error instead of wrapping.
int128 identity_lhs_exact(int64_t x, int64_t y, unsigned k);
int128 identity_rhs_exact(int64_t x, int64_t y, unsigned k);

struct PowerSumResult {
  double exact;   // sum of e^{-n/N} n^lambda over the window, compensated
  double approx;  // H N^lambda / e
};

// Smoothed power sum over [N+1, N+H]; the approximation error is
// O(H^2 N^{lambda-1}) with a modest constant.
PowerSumResult smoothed_power_sum(uint64_t N, uint64_t H, double lambda);

struct UnsmoothResult {
  double estimate;      // e * smoothed_total
  double error_budget;  // (H/N) * estimate, first-order de-smoothing error
};

// Removes the e^{-n/N} weight from a smoothed window total using
// e^{-n/N} = e^{-1} + O(H/N) over the window.
UnsmoothResult unsmooth_correction(double smoothed_total, uint64_t N, uint64_t H);

}  // namespace waring::analytic
