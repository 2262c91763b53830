#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace repulse::primes {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

inline u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }
u64 powmod(u64 base, u64 exp, u64 m);

// Deterministic Miller-Rabin for the whole 64-bit range (first twelve prime bases).
bool is_prime(u64 n);

// Nontrivial factor of an odd composite n (Brent's variant of Pollard rho).
u64 pollard_brent(u64 n);

// Primes <= limit from a cached Eratosthenes table. Intended for limit <= 10^7.
std::span<const std::uint32_t> small_primes(std::uint32_t limit);

// Segmented sieve: calls fn(p) for every prime p in [lo, hi], ascending.
void for_each_prime(u64 lo, u64 hi, const std::function<void(u64)>& fn);

std::vector<u64> primes_in(u64 lo, u64 hi);

u64 isqrt(u64 n);

// Smallest-prime-factor table on [0, limit]; spf[0] = spf[1] = 0.
std::vector<std::uint32_t> spf_table(std::uint32_t limit);

}  // namespace repulse::primes
