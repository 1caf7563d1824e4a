// arith.hpp
//
// Number-theoretic groundwork: von Mangoldt sieve, Chebyshev psi,
// exact integer k-th roots, and a small binary cache for sieve output.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

namespace waring::arith {

// Lambda(n) for 0 <= n <= limit, natural-log units.
// Lambda(p^m) = log p for prime p and m >= 1; zero elsewhere.
struct LambdaTable {
  uint64_t limit = 0;
  std::vector<double> values;           // size limit+1; values[0] = values[1] = 0
  std::vector<uint64_t> support_index;  // n with values[n] > 0, ascending
  std::vector<uint64_t> prime_base;     // p with support_index[i] = p^m
  std::vector<double> psi_prefix;       // psi(support_index[i]), compensated
};

// Smallest-prime-factor sieve; O(limit) construction, O(1) Lambda lookup.
// Throws std::invalid_argument for limit < 2 (or limit too large to address).
LambdaTable sieve_lambda(uint64_t limit);

// Chebyshev psi(x) = sum of Lambda(n) over n <= x.
// Throws std::out_of_range unless 0 <= x <= limit.
double psi(const LambdaTable& table, double x);

// Returns m iff m^k = n exactly; integer verification only, no floating
// rounding can produce false results.  n = 0 has no positive root.
std::optional<uint64_t> kth_root_exact(uint64_t n, unsigned k);

// Largest m with m^k <= n (n >= 1).
uint64_t floor_kth_root(uint64_t n, unsigned k);

// Smallest m with m^k >= n (n >= 1).
uint64_t ceil_kth_root(uint64_t n, unsigned k);

// m^k, or nullopt if it does not fit in 64 bits.
std::optional<uint64_t> checked_pow_u64(uint64_t m, unsigned k);

// Binary cache: "LMBD" magic, version, limit, then the support index as
// delta-encoded varints with a parallel varint array of prime bases.
// Lambda values are recomputed as log(base) on load, so a round trip is
// bit-identical to the sieve output.
void save_lambda_cache(const LambdaTable& table, const std::filesystem::path& path);
LambdaTable load_lambda_cache(const std::filesystem::path& path);

}  // namespace waring::arith
