#include "repulse/largesieve.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <random>
#include <set>
#include <string>
#include <thread>

#include "repulse/bounds.hpp"
#include "repulse/primes.hpp"

namespace repulse::largesieve {

namespace {

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

long double to_long_double(const mpq_class& q) {
  mpf_class f(q, 192);
  const double hi = f.get_d();
  f -= hi;
  return static_cast<long double>(hi) + static_cast<long double>(f.get_d());
}

mpz_class from_u64(u64 v) {
  mpz_class z;
  mpz_import(z.get_mpz_t(), 1, 1, sizeof(v), 0, 0, &v);
  return z;
}

u64 floor_arg(double z) {
  if (!(z >= 0.0)) return 0;
  return static_cast<u64>(std::floor(z));
}

std::uint32_t table_limit(u64 n) {
  if (n > 50'000'000) throw std::invalid_argument("argument too large for direct summation: " + std::to_string(n));
  return static_cast<std::uint32_t>(std::max<u64>(n, 2));
}

// g(p) for every prime p <= z, zero when p carries no classes.
std::vector<mpq_class> prime_weights(u64 z, const SieveSystem& sys) {
  std::vector<mpq_class> w(z + 1);
  for (const auto& [p, cls] : sys.omega) {
    if (p > z) break;
    const unsigned r = sys.rho(p);
    if (r >= p) throw DomainViolation(p);
    w[p] = mpq_class(r, static_cast<unsigned long>(p - r));
    w[p].canonicalize();
  }
  return w;
}

mpq_class tree_sum(std::vector<mpq_class> parts) {
  if (parts.empty()) return 0;
  while (parts.size() > 1) {
    std::vector<mpq_class> next;
    for (std::size_t i = 0; i + 1 < parts.size(); i += 2) next.push_back(parts[i] + parts[i + 1]);
    if (parts.size() % 2) next.push_back(parts.back());
    parts = std::move(next);
  }
  return parts.front();
}

long double harmonic(u64 m) {
  static const std::vector<long double> table = [] {
    std::vector<long double> t(257);
    CompensatedSum s;
    for (unsigned k = 1; k <= 256; ++k) {
      s.add(1.0L / k);
      t[k] = s.value();
    }
    return t;
  }();
  if (m <= 256) return table[m];
  const long double x = static_cast<long double>(m);
  const long double x2 = x * x;
  return std::log(x) + static_cast<long double>(bounds::kGamma) + 1.0L / (2.0L * x) -
         1.0L / (12.0L * x2) + 1.0L / (120.0L * x2 * x2) - 1.0L / (252.0L * x2 * x2 * x2);
}

}  // namespace

unsigned SieveSystem::rho(u64 p) const {
  const auto it = omega.find(p);
  if (it == omega.end()) return 0;
  std::set<u64> distinct;
  for (u64 r : it->second) distinct.insert(r % p);
  return static_cast<unsigned>(distinct.size());
}

DomainViolation::DomainViolation(u64 prime)
    : std::domain_error("rho(p) >= p at p = " + std::to_string(prime)), prime_(prime) {}

SieveSystem from_prime_set(std::int64_t first, std::int64_t last, const std::vector<u64>& u, u64 level) {
  if (last < first) throw std::invalid_argument("sieve interval is empty");
  SieveSystem sys;
  sys.first = first;
  sys.last = last;
  for (u64 p : primes::primes_in(2, level)) {
    if (std::binary_search(u.begin(), u.end(), p)) {
      sys.omega[p] = {0, 1 % p};
    } else {
      sys.omega[p] = {0};
    }
  }
  return sys;
}

mpq_class g_value(u64 n, const SieveSystem& sys) {
  if (n == 0) throw std::invalid_argument("g_value: n must be positive");
  mpq_class g = 1;
  const auto f = arith::factor(n);
  for (const auto& [p, e] : f.pairs()) {
    const unsigned r = sys.rho(p);
    if (r >= p) throw DomainViolation(p);
    if (e > 1) return 0;
    g *= mpq_class(r, static_cast<unsigned long>(p - r));
  }
  g.canonicalize();
  return g;
}

mpq_class mg_sum(double z, const SieveSystem& sys) {
  const u64 top = floor_arg(z);
  if (top < 1) throw std::invalid_argument("mg_sum requires z >= 1");
  const auto spf = primes::spf_table(table_limit(top));
  const auto weight = prime_weights(top, sys);

  const unsigned jobs = std::max(1u, std::min(std::thread::hardware_concurrency(), static_cast<unsigned>(top / 4096 + 1)));
  std::vector<mpq_class> parts(jobs);
  const u64 chunk = (top + jobs - 1) / jobs;
  auto work = [&](unsigned j) {
    const u64 lo = 1 + j * chunk;
    const u64 hi = std::min(top, lo + chunk - 1);
    mpq_class acc = 0;
    for (u64 n = lo; n <= hi; ++n) {
      mpq_class g = 1;
      u64 m = n;
      bool zero = false;
      while (m > 1) {
        const u64 p = spf[m];
        m /= p;
        if (m % p == 0 || weight[p] == 0) {
          zero = true;
          break;
        }
        g *= weight[p];
      }
      if (!zero) acc += g;
    }
    parts[j] = acc;
  };
  std::vector<std::thread> pool;
  for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(work, j);
  work(0);
  for (auto& t : pool) t.join();
  return tree_sum(std::move(parts));
}

mpq_class survivor_bound_exact(double x_len, double w, const SieveSystem& sys) {
  if (!(w >= 1.0)) throw std::invalid_argument("survivor_bound requires w >= 1");
  for (const auto& [p, cls] : sys.omega) {
    if (static_cast<double>(p) > w) break;
    if (sys.rho(p) >= p) throw DomainViolation(p);
  }
  const mpq_class xw = mpq_class(x_len) + mpq_class(w) * mpq_class(w);
  return xw / mg_sum(w, sys);
}

double survivor_bound(double x_len, double w, const SieveSystem& sys) {
  return survivor_bound_exact(x_len, w, sys).get_d();
}

u64 survivor_count(const SieveSystem& sys, double w) {
  if (sys.last < sys.first) return 0;
  const u64 len = static_cast<u64>(sys.last - sys.first) + 1;
  std::vector<char> hit(len, 0);
  for (const auto& [p, cls] : sys.omega) {
    if (static_cast<double>(p) > w) break;
    const auto sp = static_cast<std::int64_t>(p);
    for (u64 r0 : cls) {
      const auto r = static_cast<std::int64_t>(r0 % p);
      std::int64_t off = (r - sys.first) % sp;
      if (off < 0) off += sp;
      for (u64 i = static_cast<u64>(off); i < len; i += p) hit[i] = 1;
    }
  }
  return static_cast<u64>(std::count(hit.begin(), hit.end(), 0));
}

PiUInequality pi_u_sieve_inequality(double x, double w, const repulsive::PrimeSet& u) {
  const u64 top = floor_arg(x);
  if (top < 1) throw std::invalid_argument("pi_u_sieve_inequality requires x >= 1");
  const auto sys = from_prime_set(1, static_cast<std::int64_t>(top), u.primes, floor_arg(w));
  PiUInequality out;
  out.pi_u = static_cast<u64>(std::upper_bound(u.primes.begin(), u.primes.end(), top) - u.primes.begin());
  out.survivors = survivor_count(sys, w);
  out.rhs = static_cast<double>(out.survivors) + w;
  out.holds = static_cast<double>(out.pi_u) <= out.rhs;
  return out;
}

long double restricted_sum(const PrimePowerFunction& f, std::vector<u64> u, double x) {
  std::sort(u.begin(), u.end());
  const u64 top = floor_arg(x);
  if (top < 1) return 0.0L;
  const auto spf = primes::spf_table(table_limit(top));
  CompensatedSum acc;
  for (u64 n = 1; n <= top; ++n) {
    long double v = 1.0L;
    u64 m = n;
    bool excluded = false;
    while (m > 1) {
      const u64 p = spf[m];
      if (std::binary_search(u.begin(), u.end(), p)) {
        excluded = true;
        break;
      }
      unsigned e = 0;
      while (m % p == 0) {
        m /= p;
        ++e;
      }
      v *= f.value(p, e);
    }
    if (!excluded) acc.add(v);
  }
  return acc.value();
}

Lemma21Check lemma21_check(const PrimePowerFunction& f, const std::vector<u64>& u, double x) {
  Lemma21Check c;
  for (u64 p : u) {
    const long double s = f.series(p);
    if (!std::isfinite(s) || s < 1.0L) {
      throw std::domain_error("prime-power series diverges or is invalid at p = " + std::to_string(p));
    }
    c.denominator *= s;
  }
  c.restricted = restricted_sum(f, u, x);
  c.full = restricted_sum(f, {}, x);
  c.rhs = c.full / c.denominator;
  c.holds = c.restricted >= c.rhs;
  return c;
}

PrimePowerFunction random_multiplicative(std::uint64_t seed) {
  auto mix = [seed](u64 p, u64 e) {
    u64 z = seed ^ (p * 0x9E3779B97F4A7C15ULL) ^ (e * 0xC2B2AE3D27D4EB4FULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return static_cast<long double>((z ^ (z >> 31)) >> 11) * 0x1.0p-53L;
  };
  auto value = [mix](u64 p, unsigned e) -> long double {
    if (e == 0) return 1.0L;
    if (e > 40) return 0.0L;
    const long double r = 0.5L * (0.5L + 0.5L * mix(p, 0));  // in [1/4, 1/2)
    return 2.0L * mix(p, e) * std::pow(r, static_cast<long double>(e));
  };
  PrimePowerFunction f;
  f.value = value;
  f.series = [value](u64 p) {
    CompensatedSum s;
    for (unsigned e = 0; e <= 40; ++e) s.add(value(p, e));
    return s.value();
  };
  return f;
}

std::vector<Lemma21Trial> lemma21_random_trials(std::uint64_t seed, unsigned trials, double x_max) {
  std::mt19937_64 rng(seed);
  const auto pool = primes::primes_in(2, 50);
  std::vector<Lemma21Trial> out;
  for (unsigned i = 0; i < trials; ++i) {
    Lemma21Trial t;
    t.x = static_cast<double>(std::uniform_int_distribution<u64>(1, floor_arg(x_max))(rng));
    const unsigned k = std::uniform_int_distribution<unsigned>(0, 4)(rng);
    auto shuffled = pool;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    t.u.assign(shuffled.begin(), shuffled.begin() + k);
    std::sort(t.u.begin(), t.u.end());
    t.f_seed = rng();
    t.check = lemma21_check(random_multiplicative(t.f_seed), t.u, t.x);
    out.push_back(std::move(t));
  }
  return out;
}

u64 divisor_summatory(u64 w) {
  if (w == 0) return 0;
  const u64 s = primes::isqrt(w);
  u64 acc = 0;
  for (u64 i = 1; i <= s; ++i) acc += w / i;
  return 2 * acc - s * s;
}

void for_each_tau(u64 lo, u64 hi, const std::function<void(u64, unsigned)>& fn) {
  lo = std::max<u64>(lo, 1);
  constexpr u64 block = 1u << 16;
  std::vector<unsigned> cnt(block);
  for (u64 b = lo; b <= hi; b += block) {
    const u64 e = std::min(hi, b + block - 1);
    std::fill(cnt.begin(), cnt.end(), 0);
    const u64 root = primes::isqrt(e);
    for (u64 d = 1; d <= root; ++d) {
      const u64 sq = d * d;
      u64 m = std::max(sq, (b + d - 1) / d * d);
      for (; m <= e; m += d) cnt[m - b] += (m == sq) ? 1 : 2;
    }
    for (u64 n = b; n <= e; ++n) fn(n, cnt[n - b]);
    if (e == hi) break;
  }
}

mpq_class tau_harmonic_sum_exact(u64 y) {
  if (y == 0) return 0;
  mpz_class l = 1;
  for (u64 k = 2; k <= y; ++k) {
    const mpz_class kk = from_u64(k);
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), kk.get_mpz_t());
  }
  mpz_class num = 0;
  for_each_tau(1, y, [&](u64 n, unsigned t) {
    mpz_class share;
    mpz_divexact_ui(share.get_mpz_t(), l.get_mpz_t(), static_cast<unsigned long>(n));
    num += share * t;
  });
  mpq_class q(num, l);
  q.canonicalize();
  return q;
}

long double tau_harmonic_sum(u64 y) {
  if (y <= 10'000) return to_long_double(tau_harmonic_sum_exact(y));
  const u64 s = primes::isqrt(y);
  CompensatedSum acc;
  for (u64 a = 1; a <= s; ++a) acc.add(2.0L * harmonic(y / a) / static_cast<long double>(a));
  const long double hs = harmonic(s);
  acc.add(-hs * hs);
  return acc.value();
}

double lemma22_margin(double y) {
  if (!(y >= 2.0)) throw std::invalid_argument("lemma22_margin requires y >= 2");
  const long double l = std::log(static_cast<long double>(y));
  const long double main = l * l / 2.0L + 2.0L * static_cast<long double>(bounds::kGamma) * l + kLemma22Constant;
  return static_cast<double>(tau_harmonic_sum(floor_arg(y)) - main);
}

double b0_estimate(u64 y) {
  if (y < 1000) throw std::invalid_argument("b0_estimate requires y >= 1000");
  const long double l = std::log(static_cast<long double>(y));
  return static_cast<double>(tau_harmonic_sum(y) - l * l / 2.0L -
                             2.0L * static_cast<long double>(bounds::kGamma) * l);
}

Lemma22Sweep lemma22_sweep(u64 from, u64 to, u64 step, const std::function<void(u64, double)>& on_margin) {
  if (from < 2 || to < from || step == 0) throw std::invalid_argument("lemma22 sweep needs 2 <= from <= to, step >= 1");
  Lemma22Sweep out;
  out.from = from;
  out.to = to;
  out.min_margin = INFINITY;
  const long double g2 = 2.0L * static_cast<long double>(bounds::kGamma);
  const long double u = LDBL_EPSILON / 2;
  CompensatedSum s;
  u64 next = from;
  for_each_tau(1, to, [&](u64 n, unsigned t) {
    s.add(static_cast<long double>(t) / static_cast<long double>(n));
    if (n != next) return;
    next += step;
    const long double l = std::log(static_cast<long double>(n));
    const double m = static_cast<double>(s.value() - (l * l / 2.0L + g2 * l + kLemma22Constant));
    ++out.checked;
    if (!(m > 0.0) && n >= 60) ++out.violations;
    if (m < out.min_margin) {
      out.min_margin = m;
      out.argmin = n;
    }
    if (on_margin) on_margin(n, m);
  });
  const long double total = s.value();
  const long double terms = static_cast<long double>(to);
  const long double lt = std::log(terms);
  out.error_bound = static_cast<double>((2.0L * u + terms * u * u) * total + 8.0L * u * (lt * lt + g2 * lt));
  return out;
}

}  // namespace repulse::largesieve
