#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "json.hpp"
#include "repulse/arith.hpp"

namespace repulse::repulsive {

/// A candidate a-self-repulsive set: primes strictly increasing, all <= cutoff.
struct PrimeSet {
  long a = 1;
  std::vector<std::uint64_t> primes;
  double cutoff = 2.0;
  bool validated = false;  // set once is_self_repulsive confirmed the pair condition
};

struct SetStats {
  long double p_u = 1.0L;     // prod (1 - 1/p)^{-1}
  long double s_u = 0.0L;     // sum 1/p
  long double theta_u = 0.0L; // sum log p
  std::uint64_t pi_u = 0;
  std::optional<mpq_class> p_u_exact;  // only when at most 64 primes contribute
};

class NotPrimeError : public std::invalid_argument {
 public:
  explicit NotPrimeError(std::uint64_t v);
  std::uint64_t value() const { return value_; }

 private:
  std::uint64_t value_;
};

/// Ordered pair (p, q) of distinct members with q == a (mod p).
struct Witness {
  std::uint64_t p = 0;
  std::uint64_t q = 0;
  bool operator==(const Witness&) const = default;
};

struct RepulsionCheck {
  bool repulsive = true;
  std::optional<Witness> witness;  // smallest violating q, then smallest p
};

/// Throws NotPrimeError on a non-prime element. Duplicates are ignored.
RepulsionCheck is_self_repulsive(std::vector<std::uint64_t> primes, long a, unsigned jobs = 1);

struct SupportDiagnostics {
  PrimeSet set;
  mpz_class phi_a;
  bool gcd_is_one = false;    // gcd(N, |phi_a(N)|) == 1
  bool coprime_to_a = false;  // gcd(N, a) == 1
  bool squarefree = false;
  bool self_repulsive = false;
  std::optional<Witness> witness;
};

SupportDiagnostics set_of_integer(const arith::Factorization& f, long a);

/// Ascending greedy over primes in [start, x]: each prime is admitted when the
/// set stays a-self-repulsive.
PrimeSet greedy_construct(double x, long a, std::uint64_t start);

/// Statistics over members not exceeding x. Requires x <= u.cutoff.
SetStats stats(const PrimeSet& u, double x);

nlohmann::json to_json(const PrimeSet& u);
PrimeSet prime_set_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SetStats& s);

}  // namespace repulse::repulsive
