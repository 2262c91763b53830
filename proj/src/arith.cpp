#include "repulse/arith.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "repulse/primes.hpp"

namespace repulse::arith {

namespace {

constexpr std::uint32_t kTrialLimit = 1'000'000;

mpz_class from_u64(std::uint64_t v) {
  mpz_class z;
  mpz_import(z.get_mpz_t(), 1, 1, sizeof(v), 0, 0, &v);
  return z;
}

mpz_class prime_power(std::uint64_t p, unsigned e) {
  mpz_class r;
  mpz_pow_ui(r.get_mpz_t(), from_u64(p).get_mpz_t(), e);
  return r;
}

void split(std::uint64_t n, std::vector<std::uint64_t>& out) {
  if (n == 1) return;
  if (primes::is_prime(n)) {
    out.push_back(n);
    return;
  }
  const std::uint64_t d = primes::pollard_brent(n);
  split(d, out);
  split(n / d, out);
}

}  // namespace

Factorization Factorization::from_pairs(std::vector<PrimePower> pairs, bool check_primality) {
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& [p, e] = pairs[i];
    if (e == 0) throw std::invalid_argument("exponent must be positive for prime " + std::to_string(p));
    if (i > 0 && pairs[i - 1].p >= p) throw std::invalid_argument("primes must be strictly increasing");
    if (check_primality && !primes::is_prime(p)) {
      throw std::invalid_argument("not a prime: " + std::to_string(p));
    }
  }
  return Factorization(std::move(pairs));
}

bool Factorization::squarefree() const {
  return std::all_of(pairs_.begin(), pairs_.end(), [](const PrimePower& pp) { return pp.e == 1; });
}

mpz_class Factorization::value() const {
  mpz_class v = 1;
  for (const auto& [p, e] : pairs_) v *= prime_power(p, e);
  return v;
}

Factorization factor(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("factor: n must be positive");
  std::vector<PrimePower> out;
  for (std::uint32_t p : primes::small_primes(kTrialLimit)) {
    if (static_cast<std::uint64_t>(p) * p > n) break;
    if (n % p) continue;
    unsigned e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.push_back({p, e});
  }
  if (n > 1) {
    std::vector<std::uint64_t> rest;
    split(n, rest);
    std::sort(rest.begin(), rest.end());
    for (std::uint64_t q : rest) {
      if (!out.empty() && out.back().p == q) {
        ++out.back().e;
      } else {
        out.push_back({q, 1});
      }
    }
  }
  return Factorization(std::move(out));
}

mpz_class euler_phi(const Factorization& f) {
  mpz_class r = 1;
  for (const auto& [p, e] : f.pairs()) r *= prime_power(p, e - 1) * (from_u64(p) - 1);
  return r;
}

mpz_class unitary_phi(const Factorization& f) {
  mpz_class r = 1;
  for (const auto& [p, e] : f.pairs()) r *= prime_power(p, e) - 1;
  return r;
}

mpz_class dedekind_psi(const Factorization& f) {
  mpz_class r = 1;
  for (const auto& [p, e] : f.pairs()) r *= prime_power(p, e - 1) * (from_u64(p) + 1);
  return r;
}

mpz_class unitary_sigma(const Factorization& f) {
  mpz_class r = 1;
  for (const auto& [p, e] : f.pairs()) r *= prime_power(p, e) + 1;
  return r;
}

mpz_class phi_a(const Factorization& f, long a) {
  mpz_class r = 1;
  for (const auto& [p, e] : f.pairs()) r *= (from_u64(p) - a) * prime_power(p, e - 1);
  return r;
}

ArithProfile profile(const Factorization& f) {
  ArithProfile out;
  out.factorization = f;
  out.n = f.value();
  out.phi = euler_phi(f);
  out.uphi = unitary_phi(f);
  out.psi = dedekind_psi(f);
  out.usigma = unitary_sigma(f);
  out.omega = static_cast<unsigned>(f.size());
  out.n1 = 1;
  out.rad = 1;
  for (const auto& [p, e] : f.pairs()) {
    out.big_omega += e;
    out.rad *= from_u64(p);
    if (e == 1) out.n1 *= from_u64(p);
  }
  return out;
}

nlohmann::json to_json(const Factorization& f) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& [p, e] : f.pairs()) arr.push_back({p, e});
  return arr;
}

Factorization factorization_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw std::invalid_argument("factorization must be a JSON array of [p, e] pairs");
  std::vector<PrimePower> pairs;
  for (const auto& item : j) {
    if (!item.is_array() || item.size() != 2 || !item[0].is_number_unsigned() ||
        !item[1].is_number_unsigned()) {
      throw std::invalid_argument("factorization entries must be [p, e] with non-negative integers");
    }
    pairs.push_back({item[0].get<std::uint64_t>(), item[1].get<unsigned>()});
  }
  return Factorization::from_pairs(std::move(pairs));
}

nlohmann::json to_json(const ArithProfile& p) {
  return {
      {"n", p.n.get_str()},       {"phi", p.phi.get_str()},       {"uphi", p.uphi.get_str()},
      {"psi", p.psi.get_str()},   {"usigma", p.usigma.get_str()}, {"omega", p.omega},
      {"big_omega", p.big_omega}, {"n1", p.n1.get_str()},         {"rad", p.rad.get_str()},
  };
}

}  // namespace repulse::arith
