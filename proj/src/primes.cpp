#include "repulse/primes.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numeric>

namespace repulse::primes {

u64 powmod(u64 base, u64 exp, u64 m) {
  u64 result = 1 % m;
  base %= m;
  while (exp) {
    if (exp & 1) result = mulmod(result, base, m);
    base = mulmod(base, base, m);
    exp >>= 1;
  }
  return result;
}

bool is_prime(u64 n) {
  if (n < 2) return false;
  static constexpr u64 bases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (u64 p : bases) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (u64 a : bases) {
    u64 x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

u64 pollard_brent(u64 n) {
  if (n % 2 == 0) return 2;
  // Fixed sequence of (seed, increment) pairs keeps factor() deterministic.
  for (u64 c = 1;; ++c) {
    u64 y = 2 + c, x = y, g = 1, q = 1, ys = y;
    const u64 m = 128;
    u64 r = 1;
    auto f = [&](u64 v) { return (mulmod(v, v, n) + c) % n; };
    do {
      x = y;
      for (u64 i = 0; i < r; ++i) y = f(y);
      u64 k = 0;
      do {
        ys = y;
        for (u64 i = 0; i < std::min(m, r - k); ++i) {
          y = f(y);
          q = mulmod(q, x > y ? x - y : y - x, n);
        }
        g = std::gcd(q, n);
        k += m;
      } while (k < r && g == 1);
      r <<= 1;
    } while (g == 1);
    if (g == n) {
      do {
        ys = f(ys);
        g = std::gcd(x > ys ? x - ys : ys - x, n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

namespace {

std::vector<std::uint32_t> sieve_table(std::uint32_t limit) {
  std::vector<bool> composite(static_cast<std::size_t>(limit) + 1, false);
  std::vector<std::uint32_t> out;
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    out.push_back(static_cast<std::uint32_t>(i));
    for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
  }
  return out;
}

}  // namespace

std::span<const std::uint32_t> small_primes(std::uint32_t limit) {
  static std::mutex mu;
  static std::vector<std::uint32_t> table;
  static std::uint32_t table_limit = 0;
  std::lock_guard lock(mu);
  if (limit > table_limit) {
    table_limit = std::max<std::uint32_t>(limit, 1u << 20);
    table = sieve_table(table_limit);
  }
  auto end = std::upper_bound(table.begin(), table.end(), limit);
  return {table.data(), static_cast<std::size_t>(end - table.begin())};
}

u64 isqrt(u64 n) {
  u64 r = static_cast<u64>(std::sqrt(static_cast<long double>(n)));
  while (r > 0 && static_cast<u128>(r) * r > n) --r;
  while (static_cast<u128>(r + 1) * (r + 1) <= n) ++r;
  return r;
}

void for_each_prime(u64 lo, u64 hi, const std::function<void(u64)>& fn) {
  if (hi < 2 || lo > hi) return;
  lo = std::max<u64>(lo, 2);
  const u64 root = isqrt(hi);
  auto base = small_primes(static_cast<std::uint32_t>(std::max<u64>(root, 2)));
  constexpr u64 segment = 1u << 18;
  std::vector<char> mark(segment);
  for (u64 low = lo; low <= hi; low += segment) {
    const u64 high = std::min(hi, low + segment - 1);
    std::fill(mark.begin(), mark.end(), 1);
    for (std::uint32_t p : base) {
      const u64 pp = static_cast<u64>(p) * p;
      if (pp > high) break;
      u64 start = std::max(pp, (low + p - 1) / p * p);
      for (u64 j = start; j <= high; j += p) mark[j - low] = 0;
    }
    for (u64 n = low; n <= high; ++n) {
      if (mark[n - low]) fn(n);
    }
    if (high == hi) break;
  }
}

std::vector<u64> primes_in(u64 lo, u64 hi) {
  std::vector<u64> out;
  for_each_prime(lo, hi, [&](u64 p) { out.push_back(p); });
  return out;
}

std::vector<std::uint32_t> spf_table(std::uint32_t limit) {
  std::vector<std::uint32_t> spf(static_cast<std::size_t>(limit) + 1, 0);
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (spf[i]) continue;
    for (std::uint64_t j = i; j <= limit; j += i) {
      if (!spf[j]) spf[j] = static_cast<std::uint32_t>(i);
    }
  }
  return spf;
}

}  // namespace repulse::primes
