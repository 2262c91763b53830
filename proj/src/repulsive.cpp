#include "repulse/repulsive.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <thread>

#include "repulse/primes.hpp"

namespace repulse::repulsive {

namespace {

using u64 = std::uint64_t;

u64 residue(long a, u64 p) {
  const long long m = static_cast<long long>(p);
  long long r = a % m;
  if (r < 0) r += m;
  return static_cast<u64>(r);
}

// Neumaier's variant of Kahan summation.
struct CompensatedSum {
  long double sum = 0.0L;
  long double comp = 0.0L;
  void add(long double v) {
    const long double t = sum + v;
    if (std::fabs(sum) >= std::fabs(v)) {
      comp += (sum - t) + v;
    } else {
      comp += (v - t) + sum;
    }
    sum = t;
  }
  long double value() const { return sum + comp; }
};

// First violation among members[begin, end) acting as the larger element q:
// the primes dividing |q - a| that are also members.
std::optional<Witness> scan_range(const std::vector<u64>& members, std::size_t begin, std::size_t end,
                                  long a) {
  for (std::size_t i = begin; i < end; ++i) {
    const u64 q = members[i];
    const long long diff = static_cast<long long>(q) - a;
    if (diff == 0) {
      for (u64 p : members) {
        if (p != q) return Witness{p, q};
      }
      continue;
    }
    const u64 mag = static_cast<u64>(diff < 0 ? -diff : diff);
    const auto fm = arith::factor(mag);
    for (const auto& [p, e] : fm.pairs()) {
      if (p != q && std::binary_search(members.begin(), members.end(), p)) return Witness{p, q};
    }
  }
  return std::nullopt;
}

}  // namespace

NotPrimeError::NotPrimeError(std::uint64_t v)
    : std::invalid_argument("not a prime: " + std::to_string(v)), value_(v) {}

RepulsionCheck is_self_repulsive(std::vector<std::uint64_t> primes, long a, unsigned jobs) {
  std::sort(primes.begin(), primes.end());
  primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
  for (u64 p : primes) {
    if (!primes::is_prime(p)) throw NotPrimeError(p);
  }
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(primes.size() / 256 + 1)));
  std::vector<std::optional<Witness>> found(jobs);
  const std::size_t chunk = (primes.size() + jobs - 1) / jobs;
  std::vector<std::thread> pool;
  for (unsigned j = 0; j < jobs; ++j) {
    const std::size_t b = std::min(primes.size(), j * chunk);
    const std::size_t e = std::min(primes.size(), b + chunk);
    pool.emplace_back([&, j, b, e] { found[j] = scan_range(primes, b, e, a); });
  }
  for (auto& t : pool) t.join();
  // Chunks are ascending in q, so the first hit is the smallest violating q.
  for (const auto& w : found) {
    if (w) return {false, w};
  }
  return {true, std::nullopt};
}

SupportDiagnostics set_of_integer(const arith::Factorization& f, long a) {
  SupportDiagnostics d;
  d.set.a = a;
  for (const auto& [p, e] : f.pairs()) d.set.primes.push_back(p);
  d.set.cutoff = d.set.primes.empty() ? 2.0 : static_cast<double>(d.set.primes.back());
  const mpz_class n = f.value();
  d.phi_a = arith::phi_a(f, a);
  mpz_class g;
  mpz_class abs_phi = abs(d.phi_a);
  mpz_gcd(g.get_mpz_t(), n.get_mpz_t(), abs_phi.get_mpz_t());
  d.gcd_is_one = (g == 1);
  mpz_class ga;
  mpz_class abs_a = std::labs(a);
  mpz_gcd(ga.get_mpz_t(), n.get_mpz_t(), abs_a.get_mpz_t());
  d.coprime_to_a = (ga == 1);
  d.squarefree = f.squarefree();
  const auto check = is_self_repulsive(d.set.primes, a);
  d.self_repulsive = check.repulsive;
  d.witness = check.witness;
  d.set.validated = check.repulsive;
  return d;
}

PrimeSet greedy_construct(double x, long a, std::uint64_t start) {
  if (!(x >= static_cast<double>(start)) || start < 2) {
    throw std::invalid_argument("greedy_construct requires x >= start >= 2");
  }
  PrimeSet out;
  out.a = a;
  out.cutoff = x;
  const u64 hi = static_cast<u64>(std::floor(x));
  constexpr u64 block = 1u << 18;
  std::vector<char> excluded(block);
  std::vector<u64> block_primes;

  auto mark = [&](u64 p, u64 low, u64 high) {
    const u64 r = residue(a, p);
    u64 from = std::max(low, p + 1);
    u64 n = from + (r + p - from % p) % p;
    for (; n <= high; n += p) excluded[n - low] = 1;
  };

  // Reverse direction: an earlier member p with p == a (mod q). Only members
  // with |p - a| >= q or p == a can satisfy it.
  auto reverse_conflict = [&](u64 q) {
    const auto& m = out.primes;
    const long long sq = static_cast<long long>(q);
    if (a >= 2 && std::binary_search(m.begin(), m.end(), static_cast<u64>(a))) return true;
    if (a >= 0) {
      for (u64 p : m) {
        const long long d = static_cast<long long>(p) - a;
        if (-d < sq) break;
        if (d % sq == 0) return true;
      }
    } else {
      for (auto it = m.rbegin(); it != m.rend(); ++it) {
        const long long d = static_cast<long long>(*it) - a;
        if (d < sq) break;
        if (d % sq == 0) return true;
      }
    }
    return false;
  };

  for (u64 low = start; low <= hi; low += block) {
    const u64 high = std::min(hi, low + block - 1);
    std::fill(excluded.begin(), excluded.end(), 0);
    for (u64 p : out.primes) mark(p, low, high);
    block_primes.clear();
    primes::for_each_prime(low, high, [&](u64 q) { block_primes.push_back(q); });
    for (u64 q : block_primes) {
      if (excluded[q - low] || reverse_conflict(q)) continue;
      out.primes.push_back(q);
      mark(q, low, high);
    }
    if (high == hi) break;
  }
  out.validated = true;
  return out;
}

SetStats stats(const PrimeSet& u, double x) {
  if (x > u.cutoff) throw std::invalid_argument("stats: x exceeds the set cutoff");
  SetStats s;
  CompensatedSum recip, logs;
  long double prod = 1.0L, err = 0.0L;
  std::vector<u64> used;
  for (u64 p : u.primes) {
    if (static_cast<double>(p) > x) break;
    const long double lp = static_cast<long double>(p);
    const long double factor = lp / (lp - 1.0L);
    const long double next = prod * factor;
    // Compensated product: carry the rounding error of each multiplication.
    err = err * factor + std::fmal(prod, factor, -next);
    prod = next;
    recip.add(1.0L / lp);
    logs.add(std::log(lp));
    used.push_back(p);
  }
  s.p_u = prod + err;
  s.s_u = recip.value();
  s.theta_u = logs.value();
  s.pi_u = used.size();
  if (used.size() <= 64) {
    mpq_class q = 1;
    for (u64 p : used) {
      q *= mpq_class(mpz_class(static_cast<unsigned long>(p)), mpz_class(static_cast<unsigned long>(p - 1)));
    }
    q.canonicalize();
    s.p_u_exact = q;
  }
  return s;
}

nlohmann::json to_json(const PrimeSet& u) {
  return {{"a", u.a}, {"primes", u.primes}, {"cutoff", u.cutoff}};
}

PrimeSet prime_set_from_json(const nlohmann::json& j) {
  PrimeSet u;
  u.a = j.at("a").get<long>();
  u.primes = j.at("primes").get<std::vector<u64>>();
  u.cutoff = j.at("cutoff").get<double>();
  if (!std::is_sorted(u.primes.begin(), u.primes.end()) ||
      std::adjacent_find(u.primes.begin(), u.primes.end()) != u.primes.end()) {
    throw std::invalid_argument("prime set must be strictly increasing");
  }
  for (u64 p : u.primes) {
    if (!primes::is_prime(p)) throw NotPrimeError(p);
    if (static_cast<double>(p) > u.cutoff) throw std::invalid_argument("prime set member exceeds cutoff");
  }
  return u;
}

nlohmann::json to_json(const SetStats& s) {
  nlohmann::json j = {{"p_u", static_cast<double>(s.p_u)},
                      {"s_u", static_cast<double>(s.s_u)},
                      {"theta_u", static_cast<double>(s.theta_u)},
                      {"pi_u", s.pi_u}};
  if (s.p_u_exact) j["p_u_exact"] = s.p_u_exact->get_str();
  return j;
}

}  // namespace repulse::repulsive
