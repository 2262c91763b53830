#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <vector>

#include "json.hpp"

namespace repulse::arith {

struct PrimePower {
  std::uint64_t p = 0;
  unsigned e = 0;
  auto operator<=>(const PrimePower&) const = default;
};

/// Canonical factorization of a positive integer: primes strictly increasing,
/// exponents >= 1. The empty sequence represents 1.
///
/// Values are arbitrary precision so externally supplied factorizations
/// (products of large primes) are not limited to 64 bits.
class Factorization {
 public:
  Factorization() = default;

  /// Validates ordering, exponents and (optionally) primality of each p.
  /// Throws std::invalid_argument on a malformed sequence.
  static Factorization from_pairs(std::vector<PrimePower> pairs, bool check_primality = true);

  const std::vector<PrimePower>& pairs() const { return pairs_; }
  std::size_t size() const { return pairs_.size(); }
  bool is_one() const { return pairs_.empty(); }
  bool squarefree() const;
  mpz_class value() const;

  bool operator==(const Factorization&) const = default;

 private:
  explicit Factorization(std::vector<PrimePower> pairs) : pairs_(std::move(pairs)) {}
  std::vector<PrimePower> pairs_;

  friend Factorization factor(std::uint64_t n);
};

/// Trial division by primes up to 10^6, then Pollard-Brent with deterministic
/// Miller-Rabin on the cofactor. Throws std::invalid_argument for n = 0.
Factorization factor(std::uint64_t n);

mpz_class euler_phi(const Factorization& f);
mpz_class unitary_phi(const Factorization& f);
mpz_class dedekind_psi(const Factorization& f);
mpz_class unitary_sigma(const Factorization& f);

/// prod (p - a) p^{e-1}; signed, not clamped (may be <= 0 when a >= p).
mpz_class phi_a(const Factorization& f, long a);

struct ArithProfile {
  Factorization factorization;
  mpz_class n;
  mpz_class phi;
  mpz_class uphi;
  mpz_class psi;
  mpz_class usigma;
  unsigned omega = 0;
  unsigned big_omega = 0;
  mpz_class n1;   // product of primes dividing n exactly once
  mpz_class rad;
};

ArithProfile profile(const Factorization& f);

nlohmann::json to_json(const Factorization& f);
Factorization factorization_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ArithProfile& p);

}  // namespace repulse::arith
