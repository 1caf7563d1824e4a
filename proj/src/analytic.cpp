#include "waring/analytic.hpp"

#include <cmath>
#include <stdexcept>

namespace waring::analytic {

namespace {

// Lanczos coefficients for g = 607/128, 15 terms (Godfrey's set).
constexpr double kLanczosG = 4.7421875;
constexpr double kLanczosCoeff[15] = {
    0.99999999999999709182,     57.156235665862923517,     -59.597960355475491248,
    14.136097974741747174,      -0.49191381609762019978,   3.3994649984811888699e-5,
    4.6523628927048575665e-5,   -9.8374475304879564677e-5, 1.5808870322491248884e-4,
    -2.1026444172410488319e-4,  2.1743961811521264320e-4,  -1.6431810653676389022e-4,
    8.4418223983852743293e-5,   -2.6190838401581408670e-5, 3.6899182659531622704e-6,
};

double lanczos_gamma(double x) {
  // series is for Gamma(z) with z >= 0.5; reflect below that
  if (x < 0.5) {
    return M_PI / (std::sin(M_PI * x) * lanczos_gamma(1.0 - x));
  }
  const double z = x - 1.0;
  double a = kLanczosCoeff[0];
  for (int i = 1; i < 15; ++i) a += kLanczosCoeff[i] / (z + i);
  const double t = z + kLanczosG + 0.5;
  return std::sqrt(2.0 * M_PI) * std::pow(t, z + 0.5) * std::exp(-t) * a;
}

}  // namespace

MainTermParams MainTermParams::make(uint64_t N, uint64_t H, unsigned k) {
  if (N < 2) throw std::invalid_argument("MainTermParams: N must be >= 2");
  if (k < 2) throw std::invalid_argument("MainTermParams: k must be >= 2");
  MainTermParams p;
  p.N = N;
  p.H = H;
  p.k = k;
  p.L = std::log(static_cast<double>(N));
  p.gamma_k = gamma_fn(1.0 + 1.0 / k);
  return p;
}

double gamma_fn(double x) {
  if (!(x > 0.0)) throw std::invalid_argument("gamma_fn: x must be > 0");
  return lanczos_gamma(x);
}

double main_term(const MainTermParams& params, Variant variant) {
  const double h = static_cast<double>(params.H);
  const double scale = std::pow(params.gamma_k, static_cast<double>(params.k));
  if (variant == Variant::KExactly) return scale * h;
  return scale * h * std::pow(static_cast<double>(params.N), 1.0 / params.k);
}

ErrorEnvelope error_envelope(const MainTermParams& params, EnvelopeKind kind, Variant variant,
                             double c) {
  const double n = static_cast<double>(params.N);
  const double h = static_cast<double>(params.H);
  const double L = params.L;
  const double k = static_cast<double>(params.k);
  double v = 0.0;
  switch (kind) {
    case EnvelopeKind::UncondA: {
      const double shape = variant == Variant::KPlusOne ? h * std::pow(n, 1.0 / k) : h;
      v = shape * a_envelope(params.N, c);
      break;
    }
    case EnvelopeKind::CondPhi:
      v = n * L * L * L + h * h * std::pow(n, 1.0 / k - 1.0) +
          std::sqrt(h) * std::pow(n, 0.5 + 1.0 / (2.0 * k)) * L +
          h * std::pow(n, 1.0 / (2.0 * k)) * std::pow(L, 1.5);
      break;
    case EnvelopeKind::CondPhiPrime:
      v = std::pow(n, 1.0 - 1.0 / k) * L * L * L + h * h / n +
          std::sqrt(h) * std::pow(n, 0.5 - 1.0 / (2.0 * k)) * L +
          std::pow(h, 1.0 - 1.0 / k) * std::pow(n, 1.0 / (2.0 * k)) * std::pow(L, 1.5);
      break;
  }
  return {kind, v};
}

double a_envelope(uint64_t N, double c) {
  if (N < 16) throw std::invalid_argument("a_envelope: N must be >= 16");
  const double logn = std::log(static_cast<double>(N));
  return std::exp(c * std::cbrt(logn / std::log(logn)));
}

std::complex<double> identity_lhs(std::complex<double> x, std::complex<double> y, unsigned k) {
  return cpow_uint(x, k + 1) - cpow_uint(y, k + 1);
}

std::complex<double> identity_rhs(std::complex<double> x, std::complex<double> y, unsigned k) {
  std::complex<double> sum{0.0, 0.0};
  for (unsigned j = 1; j <= k; ++j) {
    sum += static_cast<double>(j) * cpow_uint(x, k - j) * cpow_uint(y, j - 1);
  }
  const std::complex<double> d = x - y;
  return d * d * sum + static_cast<double>(k + 1) * d * cpow_uint(y, k);
}

int128 identity_lhs_exact(int64_t x, int64_t y, unsigned k) {
  return checked_add_i128(checked_pow_i128(x, k + 1), -checked_pow_i128(y, k + 1));
}

int128 identity_rhs_exact(int64_t x, int64_t y, unsigned k) {
  int128 sum = 0;
  for (unsigned j = 1; j <= k; ++j) {
    const int128 term =
        checked_mul_i128(static_cast<int128>(j),
                         checked_mul_i128(checked_pow_i128(x, k - j), checked_pow_i128(y, j - 1)));
    sum = checked_add_i128(sum, term);
  }
  const int128 d = static_cast<int128>(x) - static_cast<int128>(y);
  const int128 head = checked_mul_i128(checked_mul_i128(d, d), sum);
  const int128 tail = checked_mul_i128(checked_mul_i128(static_cast<int128>(k + 1), d),
                                       checked_pow_i128(y, k));
  return checked_add_i128(head, tail);
}

PowerSumResult smoothed_power_sum(uint64_t N, uint64_t H, double lambda) {
  if (N < 1 || H < 1 || H > N) {
    throw std::invalid_argument("smoothed_power_sum: need 1 <= H <= N");
  }
  const double n0 = static_cast<double>(N);
  KahanSum acc;
  for (uint64_t j = 1; j <= H; ++j) {
    const double n = static_cast<double>(N + j);
    acc.add(std::exp(-n / n0) * std::pow(n, lambda));
  }
  const double approx = static_cast<double>(H) * std::pow(n0, lambda) / std::exp(1.0);
  return {acc.value(), approx};
}

UnsmoothResult unsmooth_correction(double smoothed_total, uint64_t N, uint64_t H) {
  if (smoothed_total < 0.0) {
    throw std::invalid_argument("unsmooth_correction: smoothed_total must be >= 0");
  }
  const double estimate = std::exp(1.0) * smoothed_total;
  const double budget = (static_cast<double>(H) / static_cast<double>(N)) * estimate;
  return {estimate, budget};
}

}  // namespace waring::analytic
