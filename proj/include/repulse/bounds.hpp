#pragma once

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "repulse/arith.hpp"

namespace repulse::bounds {

inline constexpr long double kGamma = 0.577215664901532860606512090082L;
inline constexpr long double kGamma1 = -0.0728158454836767248605863758749L;
inline constexpr long double kB0 = kGamma * kGamma - 2.0L * kGamma1;

// Correction coefficients in the denominators of delta and eta.
inline constexpr double kDeltaCoef = 1.01011;
inline constexpr double kDeltaCoefPsi = 1.00807;
inline constexpr double kEtaCoef = 1.04204;
inline constexpr double kEtaCoefPsi = 1.03398;

enum class Variant { phi, uphi, psi, usigma };

const char* to_string(Variant v);
Variant variant_from_string(const std::string& s);
bool is_totient(Variant v);

class BoundsDomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Cutoffs of the final assembly. Unset values are NaN; r = 0 means unset.
struct BoundContext {
  double x1 = NAN;
  double x2 = NAN;
  double x3 = NAN;
  std::uint64_t r = 0;
  void validate() const;
  /// 1 + epsilon = exp(1/(log x2 log log x2) + 1/log r + 1/(2(x2 - 1))), with x2 = e^t.
  static double one_plus_epsilon(double t, double log_r);
};

/// (1+1/t)(1+1/(2t^3)) / [(1-(log t-8γ)/t)^2 (1-log t/t)(1 - c log log t/(t log t))].
double delta(double t, double c = kDeltaCoef);

/// The same shape with c (log t + log log t) in the last factor.
double eta(double t, double c = kEtaCoef);

double delta1(double t);

struct Delta1Check {
  double value = 0;
  double intermediate = 0;  // (1.06245 (log t - 8γ)^2 + 0.53123 log^2 t) / t^2
  double terminal = 0;      // 0.13552 / t
  bool intermediate_holds = false;
  bool terminal_holds = false;
};

Delta1Check delta1_check(double t);

enum class Thm21Form { statement, proof };

/// Upper bound for pi_U(x); x is carried as long double so e^100 and beyond fit.
long double thm21_pi_bound(long double x, double p_u, Thm21Form form = Thm21Form::statement);

/// 8 e^γ delta(log x) log log theta_U. Throws BoundsDomainError when theta_U <= e.
double pu_upper_from_theta(long double x, long double theta_u);

/// Upper bound on M assembled from the factorization. Throws on N = 1.
mpq_class assemble_M(const arith::ArithProfile& profile, Variant variant, int sign);

enum class Verdict { not_applicable, pass, fail };
const char* to_string(Verdict v);

struct TheoremCheck {
  Verdict verdict = Verdict::not_applicable;
  double lll_bound = NAN;    // C log log log N (or N1); NaN when not applicable
  double omega_bound = NAN;  // C log log omega; NaN when not applicable
};

/// Verdict from the applicable bounds (NaN marks a path that does not apply).
Verdict judge(const mpz_class& m, double lll_bound, double omega_bound);

/// Checks M against both bounds for the variant. Throws std::invalid_argument
/// when (N, M) does not solve the variant's equation.
TheoremCheck theorem_check(const arith::ArithProfile& profile, const mpz_class& m, Variant variant, int sign);

struct ChainLink {
  std::string name;
  double worst = 0;    // worst value of lhs - rhs over the grid
  double at = 0;       // argument of the worst value
  bool holds = false;  // worst < 0
};

/// The delta / eta chain inequalities on a grid over [lo, hi]:
/// t log f(t) - 3 log t < -c1, t (f(t) - 1) - 3 log t < -c2, (3 log t - c1)/t < c3.
struct ChainParams {
  std::string name;
  bool use_eta = false;
  double coef = kDeltaCoef;
  double lo = 73;
  double c1 = 7.75695;
  double c2 = 7.55957;
  double c3 = 0.07007;
};

std::vector<ChainParams> standard_chains();
std::vector<ChainLink> check_chain(const ChainParams& chain, double hi = 1e6);

/// L [(L/2 + 2γ + 0.4/L)(1 - 1/(2L^2)) - L/2 - 2γ], the constant the M_g
/// lower bound actually delivers at L = log y.
double mg_chain_constant(double log_y);

struct ConstantChainReport {
  double delivered = 0;        // min of mg_chain_constant over L >= 30
  bool lemma_link_holds = false;    // 0.4 line implies 0.1
  bool theorem_link_holds = false;  // 0.4 line implies 0.12
  bool literal_link_holds = false;  // 0.1 implies 0.12
};

ConstantChainReport constant_chain_report();

nlohmann::json to_json(const TheoremCheck& c);

}  // namespace repulse::bounds
