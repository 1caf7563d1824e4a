#include "waring/arith.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "waring/util.hpp"

namespace waring::arith {

namespace {

constexpr uint64_t kMaxSieveLimit = uint64_t(1) << 31;

// LEB128.
void put_varint(std::ostream& os, uint64_t v) {
  while (v >= 0x80) {
    os.put(static_cast<char>((v & 0x7f) | 0x80));
    v >>= 7;
  }
  os.put(static_cast<char>(v));
}

uint64_t get_varint(std::istream& is) {
  uint64_t v = 0;
  unsigned shift = 0;
  while (true) {
    const int c = is.get();
    if (c == EOF) throw std::runtime_error("lambda cache: truncated varint");
    v |= (uint64_t(c) & 0x7f) << shift;
    if ((c & 0x80) == 0) break;
    shift += 7;
    if (shift >= 64) throw std::runtime_error("lambda cache: varint too long");
  }
  return v;
}

void rebuild_psi_prefix(LambdaTable& t) {
  t.psi_prefix.resize(t.support_index.size());
  KahanSum acc;
  for (size_t i = 0; i < t.support_index.size(); ++i) {
    acc.add(t.values[t.support_index[i]]);
    t.psi_prefix[i] = acc.value();
  }
}

}  // namespace

LambdaTable sieve_lambda(uint64_t limit) {
  if (limit < 2) throw std::invalid_argument("sieve_lambda: limit must be >= 2");
  if (limit >= kMaxSieveLimit) {
    throw std::invalid_argument("sieve_lambda: limit exceeds addressable sieve size (2^31)");
  }

  const size_t n = static_cast<size_t>(limit);
  std::vector<uint32_t> spf(n + 1, 0);
  std::vector<uint32_t> primes;
  primes.reserve(n / 12 + 16);
  for (size_t i = 2; i <= n; ++i) {
    if (spf[i] == 0) {
      spf[i] = static_cast<uint32_t>(i);
      primes.push_back(static_cast<uint32_t>(i));
    }
    for (uint32_t p : primes) {
      if (p > spf[i] || i * p > n) break;
      spf[i * p] = p;
    }
  }

  LambdaTable t;
  t.limit = limit;
  t.values.assign(n + 1, 0.0);
  for (size_t i = 2; i <= n; ++i) {
    const uint32_t p = spf[i];
    size_t q = i;
    while (q % p == 0) q /= p;
    if (q == 1) {
      t.values[i] = std::log(static_cast<double>(p));
      t.support_index.push_back(i);
      t.prime_base.push_back(p);
    }
  }
  rebuild_psi_prefix(t);
  return t;
}

double psi(const LambdaTable& table, double x) {
  if (!(x >= 0.0) || x > static_cast<double>(table.limit)) {
    throw std::out_of_range("psi: x outside [0, limit]");
  }
  const uint64_t ix = static_cast<uint64_t>(x);
  auto it = std::upper_bound(table.support_index.begin(), table.support_index.end(), ix);
  if (it == table.support_index.begin()) return 0.0;
  return table.psi_prefix[static_cast<size_t>(it - table.support_index.begin()) - 1];
}

std::optional<uint64_t> checked_pow_u64(uint64_t m, unsigned k) {
  uint64_t r = 1;
  for (unsigned i = 0; i < k; ++i) {
    if (m != 0 && r > UINT64_MAX / m) return std::nullopt;
    r *= m;
  }
  return r;
}

uint64_t floor_kth_root(uint64_t n, unsigned k) {
  if (k == 0) throw std::invalid_argument("floor_kth_root: k must be >= 1");
  if (n == 0) return 0;
  if (k == 1) return n;
  if (k >= 64) return 1;

  double seed = std::pow(static_cast<double>(n), 1.0 / static_cast<double>(k));
  uint64_t m = seed <= 1.0 ? 1 : static_cast<uint64_t>(seed);
  // Fix the floating seed by exact integer comparison.
  while (m > 1) {
    auto p = checked_pow_u64(m, k);
    if (p && *p <= n) break;
    --m;
  }
  while (true) {
    auto p = checked_pow_u64(m + 1, k);
    if (!p || *p > n) break;
    ++m;
  }
  return m;
}

uint64_t ceil_kth_root(uint64_t n, unsigned k) {
  if (n <= 1) return n;
  const uint64_t f = floor_kth_root(n, k);
  auto p = checked_pow_u64(f, k);
  return (p && *p == n) ? f : f + 1;
}

std::optional<uint64_t> kth_root_exact(uint64_t n, unsigned k) {
  if (k == 0) throw std::invalid_argument("kth_root_exact: k must be >= 1");
  if (n == 0) return std::nullopt;
  const uint64_t m = floor_kth_root(n, k);
  auto p = checked_pow_u64(m, k);
  if (p && *p == n) return m;
  return std::nullopt;
}

void save_lambda_cache(const LambdaTable& table, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("lambda cache: cannot open " + path.string() + " for writing");
  os.write("LMBD", 4);
  const uint32_t version = 1;
  os.write(reinterpret_cast<const char*>(&version), sizeof version);
  os.write(reinterpret_cast<const char*>(&table.limit), sizeof table.limit);
  put_varint(os, table.support_index.size());
  uint64_t prev = 0;
  for (size_t i = 0; i < table.support_index.size(); ++i) {
    put_varint(os, table.support_index[i] - prev);
    prev = table.support_index[i];
    put_varint(os, table.prime_base[i]);
  }
  if (!os) throw std::runtime_error("lambda cache: write failed for " + path.string());
}

LambdaTable load_lambda_cache(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("lambda cache: cannot open " + path.string());
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, "LMBD", 4) != 0) {
    throw std::runtime_error("lambda cache: bad magic in " + path.string());
  }
  uint32_t version = 0;
  is.read(reinterpret_cast<char*>(&version), sizeof version);
  if (!is || version != 1) throw std::runtime_error("lambda cache: unsupported version");
  LambdaTable t;
  is.read(reinterpret_cast<char*>(&t.limit), sizeof t.limit);
  if (!is) throw std::runtime_error("lambda cache: truncated header");
  const uint64_t count = get_varint(is);
  t.values.assign(static_cast<size_t>(t.limit) + 1, 0.0);
  t.support_index.reserve(count);
  t.prime_base.reserve(count);
  uint64_t prev = 0;
  for (uint64_t i = 0; i < count; ++i) {
    prev += get_varint(is);
    const uint64_t base = get_varint(is);
    if (prev > t.limit || base < 2 || base > prev) {
      throw std::runtime_error("lambda cache: corrupt entry");
    }
    t.support_index.push_back(prev);
    t.prime_base.push_back(base);
    t.values[prev] = std::log(static_cast<double>(base));
  }
  rebuild_psi_prefix(t);
  return t;
}

}  // namespace waring::arith
