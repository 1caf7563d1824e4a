#include "waring/represent.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <stdexcept>

#include "waring/util.hpp"

namespace waring::represent {

void WindowSpec::validate() const {
  if (k < 2) throw std::invalid_argument("WindowSpec: k must be >= 2");
  if (H < 1 || H > N) throw std::invalid_argument("WindowSpec: need 1 <= H <= N");
}

bool WindowSpec::inside_asymptotic_range(double eps) const {
  const double n = static_cast<double>(N);
  const double h = static_cast<double>(H);
  const double lo = std::pow(n, 1.0 - 5.0 / (6.0 * k) + eps);
  const double hi = std::pow(n, 1.0 - eps);
  return h > lo && h < hi;
}

namespace {

struct SupportEntry {
  uint64_t m;
  uint64_t mk;  // m^k
  double lambda;
};

// Lambda support up to root, with k-th powers precomputed.
std::vector<SupportEntry> support_powers(const arith::LambdaTable& table, unsigned k,
                                         uint64_t root) {
  std::vector<SupportEntry> out;
  for (uint64_t m : table.support_index) {
    if (m > root) break;
    auto p = arith::checked_pow_u64(m, k);
    if (!p) throw std::overflow_error("count_window: m^k overflows 64 bits");
    out.push_back({m, *p, table.values[m]});
  }
  return out;
}

// Adds to counts[] every completion of the prefix (sigma, weight) by one
// more prime-power k-th power landing in [N+1, N+H].
void scan_residual(const WindowSpec& spec, const arith::LambdaTable& table, uint64_t sigma,
                   double weight, uint64_t window_lo, uint64_t window_hi,
                   std::vector<double>& counts) {
  const uint64_t lo = sigma >= window_lo ? 1 : window_lo - sigma;
  const uint64_t hi = window_hi - sigma;  // sigma <= window_hi by the caller's prune
  uint64_t m = arith::ceil_kth_root(lo, spec.k);
  if (m < 2) m = 2;
  for (;; ++m) {
    auto p = arith::checked_pow_u64(m, spec.k);
    if (!p || *p > hi) break;
    const double lam = table.values[m];
    if (lam > 0.0) {
      const uint64_t n = sigma + *p;
      counts[n - window_lo] += weight * lam;
    }
  }
}

// Depth-first enumeration of prefix coordinates depth..s-2 over the support.
void enumerate_prefix(const WindowSpec& spec, const arith::LambdaTable& table,
                      const std::vector<SupportEntry>& sup, unsigned depth, uint64_t sigma,
                      double weight, uint64_t window_lo, uint64_t window_hi, uint64_t min_pow,
                      std::vector<double>& counts) {
  const unsigned s = spec.summands();
  const unsigned remaining = s - 1 - depth;  // coordinates still open after this one, incl. final
  for (const auto& e : sup) {
    const uint64_t next = sigma + e.mk;
    // every open coordinate contributes at least min_pow = 2^k
    if (next + remaining * min_pow > window_hi) break;
    if (depth + 1 == s - 1) {
      scan_residual(spec, table, next, weight * e.lambda, window_lo, window_hi, counts);
    } else {
      enumerate_prefix(spec, table, sup, depth + 1, next, weight * e.lambda, window_lo,
                       window_hi, min_pow, counts);
    }
  }
}

}  // namespace

WindowCounts count_window(const WindowSpec& spec, const arith::LambdaTable& table,
                          unsigned threads) {
  spec.validate();
  const uint64_t window_lo = spec.N + 1;
  const uint64_t window_hi = spec.N + spec.H;
  const uint64_t root = arith::floor_kth_root(window_hi, spec.k);
  if (table.limit < root) {
    throw std::invalid_argument("count_window: LambdaTable limit below floor((N+H)^{1/k})");
  }

  const auto sup = support_powers(table, spec.k, root);
  const unsigned s = spec.summands();
  const uint64_t min_pow = *arith::checked_pow_u64(2, spec.k);

  WindowCounts wc;
  wc.spec = spec;
  wc.counts.assign(spec.H, 0.0);

  // Feasible first coordinates: leading power plus (s-1) minimal powers must fit.
  uint64_t first_count = 0;
  while (first_count < sup.size() &&
         sup[first_count].mk + (s - 1) * min_pow <= window_hi) {
    ++first_count;
  }

  const unsigned workers = resolve_threads(threads);
  if (workers <= 1 || first_count < 2) {
    for (uint64_t i = 0; i < first_count; ++i) {
      const auto& e = sup[i];
      if (s == 2) {
        scan_residual(spec, table, e.mk, e.lambda, window_lo, window_hi, wc.counts);
      } else {
        enumerate_prefix(spec, table, sup, 1, e.mk, e.lambda, window_lo, window_hi, min_pow,
                         wc.counts);
      }
    }
  } else {
    // One contiguous block of leading coordinates per worker; private count
    // vectors merged in worker order so the reduction order is fixed.
    std::vector<std::vector<double>> partial(workers);
    parallel_blocks(first_count, workers, [&](unsigned w, uint64_t begin, uint64_t end) {
      auto& mine = partial[w];
      mine.assign(spec.H, 0.0);
      for (uint64_t i = begin; i < end; ++i) {
        const auto& e = sup[i];
        if (s == 2) {
          scan_residual(spec, table, e.mk, e.lambda, window_lo, window_hi, mine);
        } else {
          enumerate_prefix(spec, table, sup, 1, e.mk, e.lambda, window_lo, window_hi, min_pow,
                           mine);
        }
      }
    });
    for (const auto& part : partial) {
      if (part.empty()) continue;
      for (uint64_t i = 0; i < spec.H; ++i) wc.counts[i] += part[i];
    }
  }

  KahanSum total;
  for (double c : wc.counts) total.add(c);
  wc.total = total.value();
  wc.smoothed_total = smoothed_window_sum(wc);
  return wc;
}

double smoothed_window_sum(const WindowCounts& counts) {
  const double n0 = static_cast<double>(counts.spec.N);
  KahanSum acc;
  for (uint64_t i = 0; i < counts.counts.size(); ++i) {
    const double n = static_cast<double>(counts.spec.N + 1 + i);
    acc.add(std::exp(-n / n0) * counts.counts[i]);
  }
  return acc.value();
}

namespace {

double brute_recurse(uint64_t n, unsigned depth, uint64_t sigma, double weight,
                     const std::vector<uint64_t>& pows, const std::vector<double>& lam) {
  const uint64_t r = pows.size() - 1;
  double acc = 0.0;
  if (depth == 1) {
    for (uint64_t m = 1; m <= r; ++m) {
      if (sigma + pows[m] == n) acc += weight * lam[m];
    }
    return acc;
  }
  for (uint64_t m = 1; m <= r; ++m) {
    acc += brute_recurse(n, depth - 1, sigma + pows[m], weight * lam[m], pows, lam);
  }
  return acc;
}

}  // namespace

double count_bruteforce(uint64_t n, unsigned k, unsigned s, const arith::LambdaTable& table) {
  if (n == 0 || k == 0 || s == 0) {
    throw std::invalid_argument("count_bruteforce: need n, k, s >= 1");
  }
  if (n > 1000000) {
    throw std::invalid_argument("count_bruteforce: refusing n > 10^6 (oracle scope guard)");
  }
  if (table.limit < n) {
    throw std::invalid_argument("count_bruteforce: LambdaTable limit below n");
  }
  const uint64_t r = arith::floor_kth_root(n, k);
  std::vector<uint64_t> pows(r + 1);
  std::vector<double> lam(r + 1);
  for (uint64_t m = 0; m <= r; ++m) {
    pows[m] = *arith::checked_pow_u64(m, k);
    lam[m] = table.values[m];
  }
  return brute_recurse(n, s, 0, 1.0, pows, lam);
}

std::vector<std::pair<uint64_t, double>> pair_spectrum(const arith::LambdaTable& table,
                                                       unsigned k, uint64_t n_limit,
                                                       double big_n) {
  std::map<uint64_t, double> coeff;
  std::vector<SupportEntry> sup = support_powers(table, k, n_limit);
  for (const auto& a : sup) {
    for (const auto& b : sup) {
      coeff[a.mk + b.mk] += a.lambda * b.lambda;
    }
  }
  std::vector<std::pair<uint64_t, double>> out;
  out.reserve(coeff.size());
  for (const auto& [m, c] : coeff) {
    out.emplace_back(m, c * std::exp(-static_cast<double>(m) / big_n));
  }
  return out;
}

void write_counts_csv(const WindowCounts& counts, std::ostream& os) {
  os << "n,count\n";
  char buf[64];
  for (uint64_t i = 0; i < counts.counts.size(); ++i) {
    const unsigned long long n = counts.spec.N + 1 + i;
    std::snprintf(buf, sizeof buf, "%llu,%.17g\n", n, counts.counts[i]);
    os << buf;
  }
}

}  // namespace waring::represent
