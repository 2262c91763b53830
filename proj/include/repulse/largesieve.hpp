#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <vector>

#include "repulse/repulsive.hpp"

namespace repulse::largesieve {

using u64 = std::uint64_t;

/// Integers A = [first, last] together with residue classes Omega_p to avoid
/// for each listed prime p. The interval length is last - first.
struct SieveSystem {
  std::int64_t first = 1;
  std::int64_t last = 1;
  std::map<u64, std::vector<u64>> omega;

  double x_len() const { return static_cast<double>(last - first); }
  unsigned rho(u64 p) const;
};

/// Omega_p = {0, 1 mod p} for p in u and {0 mod p} otherwise, for every prime
/// p <= level.
SieveSystem from_prime_set(std::int64_t first, std::int64_t last, const std::vector<u64>& u, u64 level);

/// rho(p) >= p for some prime p that the operation needs.
class DomainViolation : public std::domain_error {
 public:
  explicit DomainViolation(u64 prime);
  u64 prime() const { return prime_; }

 private:
  u64 prime_;
};

/// g(n) = prod_{p | n} rho(p)/(p - rho(p)) for squarefree n, 0 otherwise.
mpq_class g_value(u64 n, const SieveSystem& sys);

/// M_g(z) = sum_{n <= z} g(n), exact.
mpq_class mg_sum(double z, const SieveSystem& sys);

/// (x_len + w^2) / M_g(w).
double survivor_bound(double x_len, double w, const SieveSystem& sys);
mpq_class survivor_bound_exact(double x_len, double w, const SieveSystem& sys);

/// Number of n in A with n mod p outside Omega_p for every listed p <= w.
u64 survivor_count(const SieveSystem& sys, double w);

struct PiUInequality {
  u64 pi_u = 0;       // lhs
  u64 survivors = 0;  // Z(A, w, Omega)
  double rhs = 0.0;   // Z + w
  bool holds = false;
};

/// pi_U(x) <= Z(A, w, Omega) + w with A = [1, x] and the default classes.
PiUInequality pi_u_sieve_inequality(double x, double w, const repulsive::PrimeSet& u);

/// A nonnegative multiplicative function given on prime powers. `series(p)`
/// returns sum_{e >= 0} f(p^e); a non-finite value marks a divergent series.
struct PrimePowerFunction {
  std::function<long double(u64 p, unsigned e)> value;
  std::function<long double(u64 p)> series;
};

/// sum_{n <= x, gcd(n, prod U) = 1} f(n).
long double restricted_sum(const PrimePowerFunction& f, std::vector<u64> u, double x);

struct Lemma21Check {
  long double restricted = 0;   // M_{f,U}(x)
  long double full = 0;         // M_f(x)
  long double denominator = 1;  // prod_{p in U} sum_e f(p^e)
  long double rhs = 0;
  bool holds = false;
};

/// Throws std::domain_error when some series over U diverges.
Lemma21Check lemma21_check(const PrimePowerFunction& f, const std::vector<u64>& u, double x);

/// f(p^e) = u r_p^e with u uniform in [0, 2] and r_p uniform in [1/4, 1/2),
/// f(p^e) = 0 for e > 40. Values depend only on (seed, p, e).
PrimePowerFunction random_multiplicative(std::uint64_t seed);

struct Lemma21Trial {
  std::uint64_t f_seed = 0;
  std::vector<u64> u;
  double x = 0;
  Lemma21Check check;
};

/// Seeded trials: x uniform in [1, x_max], |U| <= 4 drawn from primes <= 50.
std::vector<Lemma21Trial> lemma21_random_trials(std::uint64_t seed, unsigned trials, double x_max);

/// D(w) = sum_{n <= w} tau(n) by the hyperbola method.
u64 divisor_summatory(u64 w);

/// Calls fn(n, tau(n)) for n in [lo, hi] ascending (segmented divisor counting).
void for_each_tau(u64 lo, u64 hi, const std::function<void(u64, unsigned)>& fn);

/// sum_{n <= y} tau(n)/n. Exact rational for y <= 10^4, otherwise the
/// hyperbola identity with asymptotic harmonic numbers.
long double tau_harmonic_sum(u64 y);
mpq_class tau_harmonic_sum_exact(u64 y);

/// Named constants of the M_g lower-bound chain.
inline constexpr double kLemma22Constant = 0.4;
inline constexpr double kMgLemmaConstant = 0.1;
inline constexpr double kTheoremConstant = 0.12;

/// sum_{m <= y} tau(m)/m - (log^2 y / 2 + 2 gamma log y + 0.4).
double lemma22_margin(double y);

/// sum_{n <= y} tau(n)/n - log^2 y / 2 - 2 gamma log y.
double b0_estimate(u64 y);

struct Lemma22Sweep {
  u64 from = 0;
  u64 to = 0;
  u64 checked = 0;
  u64 violations = 0;
  double min_margin = 0.0;
  u64 argmin = 0;
  double error_bound = 0.0;  // bound on accumulated rounding in the running sum
};

/// Margins at y = from, from + step, ... <= to, from one running sum.
Lemma22Sweep lemma22_sweep(u64 from, u64 to, u64 step = 1,
                           const std::function<void(u64, double)>& on_margin = {});

}  // namespace repulse::largesieve
