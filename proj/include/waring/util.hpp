// util.hpp
//
// Shared low-level helpers: compensated summation, checked 128-bit
// integer arithmetic, exact double-double products, and a tiny
// deterministic fork-join loop.

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <thread>
#include <vector>

namespace waring {

using int128 = __int128;

// ---------------------------------------------------------------------------
// Compensated (Kahan) summation.  Windows can hold 10^5+ terms of mixed
// magnitude; plain accumulation is not good enough for the totals.
// ---------------------------------------------------------------------------
class KahanSum {
 public:
  void add(double x) {
    const double y = x - comp_;
    const double t = sum_ + y;
    comp_ = (t - sum_) - y;
    sum_ = t;
  }
  double value() const { return sum_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

class KahanComplexSum {
 public:
  void add(std::complex<double> z) {
    re_.add(z.real());
    im_.add(z.imag());
  }
  std::complex<double> value() const { return {re_.value(), im_.value()}; }

 private:
  KahanSum re_, im_;
};

// ---------------------------------------------------------------------------
// Checked integer arithmetic.  Powers m^k grow fast; silent wraparound
// would corrupt counts, so every wide product goes through these.
// ---------------------------------------------------------------------------
inline int128 checked_mul_i128(int128 a, int128 b) {
  int128 r;
  if (__builtin_mul_overflow(a, b, &r)) {
    throw std::overflow_error("128-bit multiply overflow");
  }
  return r;
}

inline int128 checked_add_i128(int128 a, int128 b) {
  int128 r;
  if (__builtin_add_overflow(a, b, &r)) {
    throw std::overflow_error("128-bit add overflow");
  }
  return r;
}

inline int128 checked_pow_i128(int128 base, unsigned exp) {
  int128 r = 1;
  while (exp > 0) {
    if (exp & 1u) r = checked_mul_i128(r, base);
    exp >>= 1u;
    if (exp > 0) base = checked_mul_i128(base, base);
  }
  return r;
}

inline std::complex<double> cpow_uint(std::complex<double> base, unsigned exp) {
  std::complex<double> r{1.0, 0.0};
  while (exp > 0) {
    if (exp & 1u) r *= base;
    exp >>= 1u;
    if (exp > 0) base *= base;
  }
  return r;
}

// Exact product a*b = p + e via Veltkamp splitting (no FMA dependency,
// bit-identical on every target).
inline void two_prod(double a, double b, double& p, double& e) {
  constexpr double kSplit = 134217729.0;  // 2^27 + 1
  p = a * b;
  const double a1 = kSplit * a;
  const double ah = a1 - (a1 - a);
  const double al = a - ah;
  const double b1 = kSplit * b;
  const double bh = b1 - (b1 - b);
  const double bl = b - bh;
  e = ((ah * bh - p) + ah * bl + al * bh) + al * bl;
}

// ---------------------------------------------------------------------------
// Minimal deterministic fork-join: one contiguous block per worker.
// ---------------------------------------------------------------------------
inline unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1u;
}

// Calls fn(worker, begin, end) for worker = 0..workers-1 over contiguous
// blocks of [0, n).  fn must not touch shared mutable state.
inline void parallel_blocks(uint64_t n, unsigned threads,
                            const std::function<void(unsigned, uint64_t, uint64_t)>& fn) {
  const unsigned workers =
      static_cast<unsigned>(std::min<uint64_t>(resolve_threads(threads), std::max<uint64_t>(n, 1)));
  if (workers <= 1) {
    fn(0, 0, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    const uint64_t begin = n * w / workers;
    const uint64_t end = n * (w + 1) / workers;
    pool.emplace_back([&fn, w, begin, end] { fn(w, begin, end); });
  }
  for (auto& t : pool) t.join();
}

}  // namespace waring
