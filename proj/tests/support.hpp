#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "repulse/largesieve.hpp"
#include "repulse/primes.hpp"

namespace testsupport {

using u64 = std::uint64_t;

// Random sieve system: interval of length <= max_len placed anywhere in
// [-max_len, 10 max_len], and for every prime p <= max_w a random Omega_p with
// 1 <= rho(p) < p. Every other system uses the default classes of a random U.
struct RandomSystem {
  repulse::largesieve::SieveSystem sys;
  double w = 1;
};

inline RandomSystem random_sieve_system(std::mt19937_64& rng, std::int64_t max_len, u64 max_w) {
  RandomSystem r;
  std::uniform_int_distribution<std::int64_t> len(0, max_len);
  std::uniform_int_distribution<std::int64_t> start(-max_len, 10 * max_len);
  std::uniform_int_distribution<u64> wd(1, max_w);
  r.w = static_cast<double>(wd(rng));
  const std::int64_t first = start(rng);
  const std::int64_t last = first + len(rng);
  if (rng() % 2 == 0) {
    std::vector<u64> u;
    for (u64 p : repulse::primes::primes_in(3, max_w)) {
      if (rng() % 3 == 0) u.push_back(p);
    }
    r.sys = repulse::largesieve::from_prime_set(first, last, u, max_w);
    return r;
  }
  r.sys.first = first;
  r.sys.last = last;
  for (u64 p : repulse::primes::primes_in(2, max_w)) {
    std::vector<u64> classes(p);
    for (u64 i = 0; i < p; ++i) classes[i] = i;
    std::shuffle(classes.begin(), classes.end(), rng);
    const u64 rho = 1 + rng() % (p - 1);
    classes.resize(rho);
    std::sort(classes.begin(), classes.end());
    r.sys.omega[p] = classes;
  }
  return r;
}

// Exact (x_len + w^2) / M_g(w) compared with the survivor count.
inline bool survivors_within_bound(const RandomSystem& r) {
  const u64 z = repulse::largesieve::survivor_count(r.sys, r.w);
  const mpq_class bound = repulse::largesieve::survivor_bound_exact(r.sys.x_len(), r.w, r.sys);
  return mpq_class(mpz_class(std::to_string(z))) <= bound;
}

}  // namespace testsupport
