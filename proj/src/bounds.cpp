#include "repulse/bounds.hpp"

#include <algorithm>

namespace repulse::bounds {

namespace {

using ld = long double;

ld log_of(const mpz_class& z) {
  long exp2 = 0;
  const double mant = mpz_get_d_2exp(&exp2, z.get_mpz_t());
  return std::log(static_cast<ld>(mant)) + static_cast<ld>(exp2) * std::log(2.0L);
}

// Shared shape of delta and eta; `corr` is the numerator of the last factor's
// subtracted term before division by t log t.
ld delta_shape(ld t, ld corr) {
  if (!(t > std::exp(1.0L))) throw BoundsDomainError("delta/eta need t > e");
  const ld lt = std::log(t);
  const ld num = (1 + 1 / t) * (1 + 1 / (2 * t * t * t));
  const ld f1 = 1 - (lt - 8 * kGamma) / t;
  const ld f2 = 1 - lt / t;
  const ld f3 = 1 - corr / (t * lt);
  if (!(f1 > 0) || !(f2 > 0) || !(f3 > 0)) throw BoundsDomainError("delta/eta denominator factor is not positive");
  return num / (f1 * f1 * f2 * f3);
}

struct TheoremConstants {
  double lll;
  double omega;
  bool kernel;  // measured on N1 rather than N
};

TheoremConstants theorem_constants(Variant v) {
  switch (v) {
    case Variant::phi: return {15.76515, 16.03235, false};
    case Variant::uphi: return {19.44947, 19.77911, true};
    case Variant::psi: return {15.52051, 15.72775, false};
    case Variant::usigma: return {18.87067, 19.40333, true};
  }
  return {0, 0, false};
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

}  // namespace

const char* to_string(Variant v) {
  switch (v) {
    case Variant::phi: return "phi";
    case Variant::uphi: return "uphi";
    case Variant::psi: return "psi";
    case Variant::usigma: return "usigma";
  }
  return "?";
}

Variant variant_from_string(const std::string& s) {
  if (s == "phi") return Variant::phi;
  if (s == "uphi") return Variant::uphi;
  if (s == "psi") return Variant::psi;
  if (s == "usigma") return Variant::usigma;
  throw std::invalid_argument("unknown variant: " + s);
}

bool is_totient(Variant v) { return v == Variant::phi || v == Variant::uphi; }

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::not_applicable: return "not-applicable";
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
  }
  return "?";
}

void BoundContext::validate() const {
  if (!std::isnan(x1) && !std::isnan(x2) && x1 < x2) throw std::invalid_argument("bound context needs x1 >= x2");
  if (r != 0 && r < 4) throw std::invalid_argument("bound context needs r >= 4");
}

double BoundContext::one_plus_epsilon(double t, double log_r) {
  const ld tt = t;
  return static_cast<double>(
      std::exp(1 / (tt * std::log(tt)) + 1 / static_cast<ld>(log_r) + 1 / (2 * std::expm1(tt))));
}

double delta(double t, double c) {
  const ld tt = t;
  return static_cast<double>(delta_shape(tt, c * std::log(std::log(tt))));
}

double eta(double t, double c) {
  const ld tt = t;
  const ld lt = std::log(tt);
  return static_cast<double>(delta_shape(tt, c * (lt + std::log(lt))));
}

double delta1(double t) {
  const ld tt = t;
  const ld lt = std::log(tt);
  const ld a = lt - 8 * kGamma;
  return static_cast<double>(a * a / (tt * tt * (1 - std::fabs(a / tt))) + lt * lt / (2 * tt * tt * (1 - lt / tt)));
}

Delta1Check delta1_check(double t) {
  Delta1Check c;
  const ld tt = t;
  const ld lt = std::log(tt);
  const ld a = lt - 8 * kGamma;
  c.value = delta1(t);
  c.intermediate = static_cast<double>((1.06245L * a * a + 0.53123L * lt * lt) / (tt * tt));
  c.terminal = 0.13552 / t;
  c.intermediate_holds = c.value <= c.intermediate;
  c.terminal_holds = c.intermediate <= c.terminal;
  return c;
}

long double thm21_pi_bound(long double x, double p_u, Thm21Form form) {
  if (!(p_u > 0)) throw BoundsDomainError("P_U must be positive");
  const ld l = std::log(x);
  if (!(l > std::exp(1.0L))) throw BoundsDomainError("thm21_pi_bound needs x > e^e");
  const ld ll = std::log(l);
  const ld cube = form == Thm21Form::statement ? 1 / (2 * l * l * l) : 0.49L / (l * l * l);
  const ld num = 8 * std::exp(kGamma) * x * (1 + 1 / l) * (1 + cube);
  const ld f1 = 1 - (ll - 8 * kGamma) / l;
  const ld den = static_cast<ld>(p_u) * l * f1 * f1 * (1 - ll / l);
  return num / den;
}

double pu_upper_from_theta(long double x, long double theta_u) {
  if (!(theta_u > std::exp(1.0L))) throw BoundsDomainError("log log theta_U is not positive");
  const ld lx = std::log(x);
  return static_cast<double>(8 * std::exp(kGamma) * static_cast<ld>(delta(static_cast<double>(lx))) *
                             std::log(std::log(theta_u)));
}

mpq_class assemble_M(const arith::ArithProfile& profile, Variant variant, int sign) {
  if (sign != 1 && sign != -1) throw std::invalid_argument("sign must be +1 or -1");
  if (profile.n <= 1) throw std::invalid_argument("assemble_M needs N >= 2");
  mpq_class ratio = 1;
  mpq_class extra = 1;
  for (const auto& [p64, e] : profile.factorization.pairs()) {
    const mpz_class p = mpz_class(std::to_string(p64));
    if (e == 1) {
      ratio *= is_totient(variant) ? mpq_class(p, p - 1) : mpq_class(p + 1, p);
      continue;
    }
    switch (variant) {
      case Variant::phi: extra *= mpq_class(p, p - 1); break;
      case Variant::uphi: extra *= mpq_class(p * p, p * p - 1); break;
      case Variant::psi: extra *= mpq_class(p + 1, p); break;
      case Variant::usigma: extra *= mpq_class(p * p + 1, p * p); break;
    }
  }
  mpq_class additive;
  if (variant == Variant::phi) {
    additive = mpq_class(1, 1) / mpq_class(profile.phi);
  } else if (variant == Variant::uphi) {
    additive = mpq_class(1, 1) / mpq_class(profile.uphi);
  } else {
    additive = mpq_class(1, 1) / mpq_class(profile.n);
  }
  mpq_class out = additive + ratio * extra;
  out.canonicalize();
  return out;
}

Verdict judge(const mpz_class& m, double lll_bound, double omega_bound) {
  const double md = m.get_d();
  bool any_pass = false;
  bool any_fail = false;
  for (double b : {lll_bound, omega_bound}) {
    if (std::isnan(b)) continue;
    if (md < b) {
      any_pass = true;
    } else {
      any_fail = true;
    }
  }
  // The proofs assume M >= 2; the trivial M = 1 families sit outside them.
  if (any_fail) return m == 1 ? Verdict::not_applicable : Verdict::fail;
  return any_pass ? Verdict::pass : Verdict::not_applicable;
}

TheoremCheck theorem_check(const arith::ArithProfile& profile, const mpz_class& m, Variant variant, int sign) {
  if (sign != 1 && sign != -1) throw std::invalid_argument("sign must be +1 or -1");
  if (m < 1) throw std::invalid_argument("M must be positive");
  const mpz_class f = variant_value(profile.factorization, variant);
  const bool solves = is_totient(variant) ? (m * f == profile.n + sign) : (f == m * profile.n + sign);
  if (!solves) throw std::invalid_argument("(N, M) does not solve the " + std::string(to_string(variant)) + " equation");

  const auto k = theorem_constants(variant);
  const mpz_class& base = k.kernel ? profile.n1 : profile.n;
  unsigned omega = 0;
  for (const auto& pp : profile.factorization.pairs()) {
    if (!k.kernel || pp.e == 1) ++omega;
  }

  TheoremCheck out;
  if (base > 1) {
    const ld l = log_of(base);
    if (l > std::exp(1.0L)) {
      const ld lll = std::log(std::log(l));
      if (lll > 0) out.lll_bound = static_cast<double>(k.lll * lll);
    }
  }
  if (omega >= 4) out.omega_bound = k.omega * std::log(std::log(static_cast<double>(omega)));
  out.verdict = judge(m, out.lll_bound, out.omega_bound);
  return out;
}

std::vector<ChainParams> standard_chains() {
  return {
      {"delta", false, kDeltaCoef, 73, 7.75695, 7.55957, 0.07007},
      {"delta_psi", false, kDeltaCoefPsi, 95, 7.78512, 7.59129, 0.06186},
      {"eta", true, kEtaCoef, 72, 7.05655, 6.80452, 0.08019},
      {"eta_psi", true, kEtaCoefPsi, 93, 7.08521, 6.8383, 0.07003},
  };
}

std::vector<ChainLink> check_chain(const ChainParams& chain, double hi) {
  std::vector<ChainLink> links(3);
  const std::string f = chain.use_eta ? "eta" : "delta";
  links[0].name = chain.name + ": log " + f + "(t) < (3 log t - c1)/t";
  links[1].name = chain.name + ": " + f + "(t) < 1 + (3 log t - c2)/t";
  links[2].name = chain.name + ": (3 log t - c1)/t < c3";
  for (auto& l : links) l.worst = -INFINITY;
  auto visit = [&](double t) {
    const ld tt = t;
    const ld v = chain.use_eta ? eta(t, chain.coef) : delta(t, chain.coef);
    const ld lt = std::log(tt);
    const double d[3] = {
        static_cast<double>(tt * std::log(v) - 3 * lt + chain.c1),
        static_cast<double>(tt * (v - 1) - 3 * lt + chain.c2),
        static_cast<double>((3 * lt - chain.c1) / tt - chain.c3),
    };
    for (int i = 0; i < 3; ++i) {
      if (d[i] > links[i].worst) {
        links[i].worst = d[i];
        links[i].at = t;
      }
    }
  };
  // Fine uniform steps where the functions move, then geometric steps.
  const double knee = std::min(hi, 2000.0);
  const long steps = static_cast<long>(std::ceil((knee - chain.lo) / 0.01));
  for (long i = 0; i <= steps; ++i) visit(std::min(knee, chain.lo + 0.01 * static_cast<double>(i)));
  for (double t = knee; t < hi; t *= 1.00001) visit(t);
  visit(hi);
  for (auto& l : links) l.holds = l.worst < 0;
  return links;
}

double mg_chain_constant(double log_y) {
  const ld l = log_y;
  const ld g2 = 2 * kGamma;
  const ld prod = (l / 2 + g2 + 0.4L / l) * (1 - 1 / (2 * l * l));
  return static_cast<double>(l * (prod - l / 2 - g2));
}

ConstantChainReport constant_chain_report() {
  ConstantChainReport r;
  r.delivered = INFINITY;
  for (double l = 30; l <= 1e6; l *= 1.001) r.delivered = std::min(r.delivered, mg_chain_constant(l));
  r.lemma_link_holds = r.delivered > 0.1;
  r.theorem_link_holds = r.delivered > 0.12;
  r.literal_link_holds = 0.1 >= 0.12;
  return r;
}

nlohmann::json to_json(const TheoremCheck& c) {
  nlohmann::json j = {{"verdict", to_string(c.verdict)}};
  j["lll_bound"] = std::isnan(c.lll_bound) ? nlohmann::json(nullptr) : nlohmann::json(c.lll_bound);
  j["omega_bound"] = std::isnan(c.omega_bound) ? nlohmann::json(nullptr) : nlohmann::json(c.omega_bound);
  return j;
}

}  // namespace repulse::bounds
