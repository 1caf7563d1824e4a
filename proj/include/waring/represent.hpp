// represent.hpp
//
// Exact Lambda-weighted counts of representations of n as an ordered sum
// of s k-th powers over a window [N+1, N+H], with s = k+1 or s = k, plus
// a deliberately naive brute-force oracle and a pair-convolution spectrum.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

#include "waring/arith.hpp"

namespace waring::represent {

// s = k+1 summands (KPlusOne) or s = k summands (KExactly).
enum class Variant { KPlusOne, KExactly };

struct WindowSpec {
  uint64_t N = 0;
  uint64_t H = 0;
  unsigned k = 2;
  Variant variant = Variant::KPlusOne;

  unsigned summands() const { return variant == Variant::KPlusOne ? k + 1 : k; }
  // Throws std::invalid_argument unless 1 <= H <= N and k >= 2.
  void validate() const;
  // Whether N^{1-5/(6k)+eps} < H < N^{1-eps}; reported, never enforced.
  bool inside_asymptotic_range(double eps = 0.05) const;
};

struct WindowCounts {
  WindowSpec spec;
  std::vector<double> counts;  // counts[i] is the weighted count at n = N+1+i
  double total = 0.0;          // compensated sum of counts
  double smoothed_total = 0.0; // compensated sum of e^{-n/N} * counts
};

// Weighted count of ordered tuples (m_1,...,m_s) of prime powers with
// m_1^k + ... + m_s^k landing in the window.  The first s-1 coordinates are
// enumerated over the Lambda support; the last is recovered by exact k-th
// roots over the residual range.  Requires table.limit >= floor((N+H)^{1/k}).
WindowCounts count_window(const WindowSpec& spec, const arith::LambdaTable& table,
                          unsigned threads = 0);

// Full s-deep nested loop over all ordered tuples with every m in
// [1, floor(n^{1/k})]; no shortcuts, so it stays an independent oracle.
// Refuses n > 10^6.  Requires table.limit >= n.
double count_bruteforce(uint64_t n, unsigned k, unsigned s, const arith::LambdaTable& table);

// Sum of e^{-n/N} * counts over the window (compensated).
double smoothed_window_sum(const WindowCounts& counts);

// Coefficients of the squared smoothed sum: for every representable
// m = n1^k + n2^k with n1, n2 prime powers <= n_limit, the weight
// e^{-m/big_n} * sum of Lambda(n1)*Lambda(n2) over ordered pairs.
// Returned sorted by m.
std::vector<std::pair<uint64_t, double>> pair_spectrum(const arith::LambdaTable& table,
                                                       unsigned k, uint64_t n_limit,
                                                       double big_n);

// CSV export: header "n,count", one row per n, 17 significant digits.
void write_counts_csv(const WindowCounts& counts, std::ostream& os);

}  // namespace waring::represent
