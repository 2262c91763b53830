#include "repulse/search.hpp"

#include <algorithm>
#include <chrono>
#include <thread>

#include "repulse/primes.hpp"

namespace repulse::search {

namespace {

constexpr u64 kBlock = 1u << 20;

mpz_class from_u64(u64 v) {
  mpz_class z;
  mpz_import(z.get_mpz_t(), 1, 1, sizeof(v), 0, 0, &v);
  return z;
}

mpz_class variant_value(const arith::Factorization& f, Variant v) {
  switch (v) {
    case Variant::phi: return arith::euler_phi(f);
    case Variant::uphi: return arith::unitary_phi(f);
    case Variant::psi: return arith::dedekind_psi(f);
    case Variant::usigma: return arith::unitary_sigma(f);
  }
  return 0;
}

u64 local_factor(Variant v, u64 p, unsigned e, u64 pe) {
  switch (v) {
    case Variant::phi: return pe / p * (p - 1);
    case Variant::uphi: return pe - 1;
    case Variant::psi: return pe / p * (p + 1);
    case Variant::usigma: return pe + 1;
  }
  (void)e;
  return 0;
}

struct Hit {
  u64 n;
  u64 m;
};

// f(n) for every n in [lo, lo + len) by dividing out each prime <= sqrt(hi).
std::vector<Hit> scan_block(u64 lo, u64 len, u64 hi, const ScanOptions& opt, u64 min_m) {
  std::vector<u64> rem(len);
  std::vector<u64> f(len, 1);
  for (u64 i = 0; i < len; ++i) rem[i] = lo + i;
  const u64 root = primes::isqrt(hi);
  for (std::uint32_t p32 : primes::small_primes(static_cast<std::uint32_t>(std::max<u64>(root, 2)))) {
    const u64 p = p32;
    if (p > root) break;
    for (u64 n = (lo + p - 1) / p * p; n < lo + len; n += p) {
      const u64 i = n - lo;
      u64 r = rem[i];
      unsigned e = 0;
      u64 pe = 1;
      do {
        r /= p;
        pe *= p;
        ++e;
      } while (r % p == 0);
      rem[i] = r;
      f[i] *= local_factor(opt.variant, p, e, pe);
    }
  }
  std::vector<Hit> hits;
  const bool totient = bounds::is_totient(opt.variant);
  for (u64 i = 0; i < len; ++i) {
    const u64 n = lo + i;
    if (n < 2) continue;
    u64 fv = f[i];
    if (rem[i] > 1) fv *= local_factor(opt.variant, rem[i], 1, rem[i]);
    if (totient) {
      const u64 num = opt.sign > 0 ? n + 1 : n - 1;
      if (num % fv == 0 && num / fv >= min_m) hits.push_back({n, num / fv});
    } else {
      const u64 num = opt.sign > 0 ? fv - 1 : fv + 1;
      if (num % n == 0 && num / n >= std::max<u64>(min_m, 1)) hits.push_back({n, num / n});
    }
  }
  return hits;
}

Solution make_solution(u64 n, u64 m, const ScanOptions& opt) {
  Solution s;
  s.n = from_u64(n);
  s.m = from_u64(m);
  s.variant = opt.variant;
  s.sign = opt.sign;
  s.factorization = arith::factor(n);
  s.cls = classify(s.factorization);
  return s;
}

}  // namespace

const char* to_string(Classification c) {
  switch (c) {
    case Classification::prime: return "prime";
    case Classification::prime_power: return "prime-power";
    case Classification::composite_squarefree: return "composite-squarefree";
    case Classification::composite_nonsquarefree: return "composite-nonsquarefree";
  }
  return "?";
}

Classification classify(const arith::Factorization& f) {
  if (f.size() == 1) return f.pairs()[0].e == 1 ? Classification::prime : Classification::prime_power;
  return f.squarefree() ? Classification::composite_squarefree : Classification::composite_nonsquarefree;
}

std::optional<mpz_class> solve_m(const arith::ArithProfile& profile, Variant variant, int sign) {
  if (sign != 1 && sign != -1) throw std::invalid_argument("sign must be +1 or -1");
  if (profile.n < 2) return std::nullopt;
  const mpz_class f = variant_value(profile.factorization, variant);
  mpz_class num;
  mpz_class den;
  if (bounds::is_totient(variant)) {
    num = profile.n + sign;
    den = f;
  } else {
    num = f - sign;
    den = profile.n;
  }
  if (num <= 0 || num % den != 0) return std::nullopt;
  mpz_class m = num / den;
  if (m < 1) return std::nullopt;
  return m;
}

bool verify(const Solution& s) {
  if (s.factorization.value() != s.n || s.m < 1) return false;
  const mpz_class f = variant_value(s.factorization, s.variant);
  return bounds::is_totient(s.variant) ? s.m * f == s.n + s.sign : f == s.m * s.n + s.sign;
}

u64 default_min_m(Variant v) { return bounds::is_totient(v) ? 2 : 1; }

void scan(const ScanOptions& opt, const std::function<void(const Solution&)>& emit) {
  if (opt.sign != 1 && opt.sign != -1) throw std::invalid_argument("sign must be +1 or -1");
  if (opt.hi > 1'000'000'000'000ULL) throw std::invalid_argument("scan range limited to 10^12");
  const u64 lo = std::max<u64>(opt.lo, 2);
  if (opt.hi < lo) return;
  const u64 min_m = opt.min_m == 0 ? default_min_m(opt.variant) : opt.min_m;
  primes::small_primes(static_cast<std::uint32_t>(std::max<u64>(primes::isqrt(opt.hi), 2)));

  const u64 blocks = (opt.hi - lo) / kBlock + 1;
  const unsigned jobs = std::max(1u, opt.jobs);
  for (u64 first = 0; first < blocks; first += jobs) {
    const u64 wave = std::min<u64>(jobs, blocks - first);
    std::vector<std::vector<Hit>> out(wave);
    auto run = [&](u64 k) {
      const u64 b = lo + (first + k) * kBlock;
      const u64 len = std::min(kBlock, opt.hi - b + 1);
      out[k] = scan_block(b, len, opt.hi, opt, min_m);
    };
    std::vector<std::thread> pool;
    for (u64 k = 1; k < wave; ++k) pool.emplace_back(run, k);
    run(0);
    for (auto& t : pool) t.join();
    for (const auto& hits : out) {
      for (const auto& h : hits) emit(make_solution(h.n, h.m, opt));
    }
  }
}

std::vector<Solution> scan(const ScanOptions& opt) {
  std::vector<Solution> out;
  scan(opt, [&](const Solution& s) { out.push_back(s); });
  return out;
}

namespace {

template <class Check>
AuditReport audit(const std::string& name, u64 hi, unsigned jobs, Variant v, int sign, Check&& check) {
  const auto start = std::chrono::steady_clock::now();
  AuditReport r;
  r.name = name;
  r.hi = hi;
  if (hi >= 2) {
    ScanOptions opt{2, hi, v, sign, 1, jobs};
    scan(opt, [&](const Solution& s) {
      ++r.hits;
      if (s.cls == Classification::prime) ++r.prime_hits;
      if (s.cls == Classification::prime || s.cls == Classification::prime_power) ++r.prime_power_hits;
      if (!check(s)) r.counterexamples.push_back(s);
    });
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace

AuditReport lehmer_audit(u64 hi, unsigned jobs) {
  return audit("lehmer", hi, jobs, Variant::phi, -1,
               [](const Solution& s) { return s.cls == Classification::prime && s.m == 1; });
}

AuditReport subbarao_audit(u64 hi, unsigned jobs) {
  return audit("subbarao", hi, jobs, Variant::uphi, -1, [](const Solution& s) {
    return s.cls == Classification::prime || s.cls == Classification::prime_power;
  });
}

AuditReport usigma_audit(u64 hi, unsigned jobs) {
  std::vector<u64> found;
  AuditReport r = audit("usigma", hi, jobs, Variant::usigma, 1, [&](const Solution& s) {
    if (s.m != 1) return true;
    found.push_back(s.n.get_ui());
    return s.cls == Classification::prime || s.cls == Classification::prime_power;
  });
  const auto t0 = std::chrono::steady_clock::now();
  // Every prime power up to hi must appear among the m = 1 hits.
  std::vector<u64> powers;
  if (hi >= 2) {
    for (u64 p : primes::primes_in(2, hi)) {
      for (u64 q = p; q <= hi; q *= p) {
        powers.push_back(q);
        if (q > hi / p) break;
      }
    }
  }
  std::sort(powers.begin(), powers.end());
  std::set_difference(powers.begin(), powers.end(), found.begin(), found.end(), std::back_inserter(r.missing));
  r.seconds += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

Solution fermat_family(unsigned k) {
  static constexpr u64 kFermat[] = {3, 5, 17, 257, 65537};
  if (k < 1 || k > 5) throw std::invalid_argument("fermat_family needs 1 <= k <= 5");
  u64 n = 1;
  for (unsigned i = 0; i < k; ++i) n *= kFermat[i];
  Solution s;
  s.n = from_u64(n);
  s.variant = Variant::phi;
  s.sign = 1;
  s.factorization = arith::factor(n);
  s.cls = classify(s.factorization);
  const auto m = solve_m(arith::profile(s.factorization), Variant::phi, 1);
  if (!m || *m != 2) throw std::logic_error("Fermat product does not solve n + 1 = 2 phi(n)");
  s.m = *m;
  return s;
}

nlohmann::json to_json(const Solution& s) {
  return {{"n", s.n.get_str()},
          {"m", s.m.get_str()},
          {"variant", bounds::to_string(s.variant)},
          {"sign", s.sign > 0 ? "+1" : "-1"},
          {"factorization", arith::to_json(s.factorization)},
          {"class", to_string(s.cls)}};
}

std::string csv_header() { return "n,m,variant,sign,factorization,class"; }

std::string to_csv(const Solution& s) {
  std::string fac;
  for (const auto& [p, e] : s.factorization.pairs()) {
    if (!fac.empty()) fac += '*';
    fac += std::to_string(p);
    if (e > 1) fac += '^' + std::to_string(e);
  }
  return s.n.get_str() + ',' + s.m.get_str() + ',' + bounds::to_string(s.variant) + ',' + (s.sign > 0 ? "+1" : "-1") +
         ',' + fac + ',' + to_string(s.cls);
}

nlohmann::json to_json(const AuditReport& r) {
  nlohmann::json ce = nlohmann::json::array();
  for (const auto& s : r.counterexamples) ce.push_back(to_json(s));
  return {{"audit", r.name},
          {"to", r.hi},
          {"hits", r.hits},
          {"prime_hits", r.prime_hits},
          {"prime_power_hits", r.prime_power_hits},
          {"counterexamples", ce},
          {"missing", r.missing},
          {"passed", r.passed()},
          {"seconds", r.seconds}};
}

}  // namespace repulse::search
