#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "repulse/arith.hpp"
#include "repulse/bounds.hpp"

namespace repulse::search {

using bounds::Variant;
using u64 = std::uint64_t;

enum class Classification { prime, prime_power, composite_squarefree, composite_nonsquarefree };

const char* to_string(Classification c);
Classification classify(const arith::Factorization& f);

/// Totient variants: m f(n) = n + sign. psi / usigma: f(n) = m n + sign.
struct Solution {
  mpz_class n;
  mpz_class m;
  Variant variant = Variant::phi;
  int sign = 1;
  arith::Factorization factorization;
  Classification cls = Classification::prime;
};

std::optional<mpz_class> solve_m(const arith::ArithProfile& profile, Variant variant, int sign);

/// Re-checks the defining equation from the factorization.
bool verify(const Solution& s);

struct ScanOptions {
  u64 lo = 2;
  u64 hi = 2;
  Variant variant = Variant::phi;
  int sign = 1;
  u64 min_m = 0;  // 0 picks the default: 2 for totient variants, 1 otherwise
  unsigned jobs = 1;
};

u64 default_min_m(Variant v);

/// Emits every solution with m >= min_m in increasing n. Blocks of 2^20 are
/// sieved independently and emitted in order whatever the worker count.
void scan(const ScanOptions& opt, const std::function<void(const Solution&)>& emit);
std::vector<Solution> scan(const ScanOptions& opt);

struct AuditReport {
  std::string name;
  u64 hi = 0;
  u64 hits = 0;
  u64 prime_hits = 0;
  u64 prime_power_hits = 0;
  std::vector<Solution> counterexamples;
  std::vector<u64> missing;  // expected hits that were not found
  double seconds = 0;
  bool passed() const { return counterexamples.empty() && missing.empty(); }
};

/// No composite n <= hi with phi(n) | n - 1.
AuditReport lehmer_audit(u64 hi, unsigned jobs = 1);
/// Every n <= hi with uphi(n) | n - 1 is a prime power.
AuditReport subbarao_audit(u64 hi, unsigned jobs = 1);
/// usigma(n) = n + 1 exactly for the prime powers n <= hi.
AuditReport usigma_audit(u64 hi, unsigned jobs = 1);

/// The product of the first k Fermat primes solves n + 1 = 2 phi(n).
Solution fermat_family(unsigned k);

nlohmann::json to_json(const Solution& s);
std::string csv_header();
std::string to_csv(const Solution& s);
nlohmann::json to_json(const AuditReport& r);

}  // namespace repulse::search
