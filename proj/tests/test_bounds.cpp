#include <cmath>

#include "doctest.h"
#include "repulse/bounds.hpp"
#include "repulse/primes.hpp"

using namespace repulse;
using namespace repulse::bounds;

namespace {

// Separate transcription of the pi_U(x) bound in terms of L = log x.
long double pi_bound_reference(long double big_l, long double p_u) {
  const long double g = 0.57721566490153286060651209008240243L;
  const long double ll = logl(big_l);
  const long double num = 8 * expl(g) * expl(big_l) * (1 + 1 / big_l) * (1 + 1 / (2 * big_l * big_l * big_l));
  const long double a = 1 - (ll - 8 * g) / big_l;
  return num / (p_u * big_l * a * a * (1 - ll / big_l));
}

arith::ArithProfile prof(std::uint64_t n) { return arith::profile(arith::factor(n)); }

}  // namespace

TEST_SUITE("bounds") {
  TEST_CASE("delta values") {
    const double d = delta(1e6);
    CHECK(d > 1);
    CHECK(d < 1.0001);
    CHECK(delta(100) < 1 + (3 * std::log(100.0) - 7.55957) / 100);
    CHECK(8 * std::exp(static_cast<double>(kGamma)) * delta(73) > 0);
    CHECK_THROWS_AS(delta(2.0), std::domain_error);
  }

  TEST_CASE("delta1 chain") {
    const auto c73 = delta1_check(73);
    CHECK(c73.value * 73 <= 0.13552);
    CHECK(c73.terminal_holds);
    const auto c = delta1_check(1000);
    CHECK(c.intermediate_holds);
    CHECK(c.terminal_holds);
    // leading behaviour: ((log t - 8γ)^2 + log^2 t / 2) / t^2
    const double t = 1e6;
    const double a = std::log(t) - 8 * static_cast<double>(kGamma);
    CHECK(delta1(t) == doctest::Approx((a * a + std::log(t) * std::log(t) / 2) / (t * t)).epsilon(1e-4));
    CHECK(delta1(t) <= delta1_check(t).intermediate);
  }

  TEST_CASE("eta values") {
    CHECK((3 * std::log(72.0) - 7.05655) / 72 < 0.08019);
    for (double t : {72.0, 100.0, 1e4, 1e6}) CHECK(eta(t) >= delta(t));
    CHECK(std::isfinite(eta(72)));
  }

  TEST_CASE("delta chains hold on the grid") {
    for (const auto& chain : standard_chains()) {
      if (chain.use_eta) continue;
      for (const auto& link : check_chain(chain, 1e5)) {
        INFO(link.name << " worst " << link.worst << " at " << link.at);
        CHECK(link.holds);
      }
    }
  }

  TEST_CASE("prime count bound") {
    const long double x74 = expl(74.0L);
    const long double b1 = thm21_pi_bound(x74, 1);
    CHECK(b1 > 0);
    CHECK(std::isfinite(static_cast<double>(b1)));
    CHECK(thm21_pi_bound(x74, 1.5) < b1);
    const long double x80 = expl(80.0L);
    CHECK(static_cast<double>(thm21_pi_bound(x80, 2) / thm21_pi_bound(x80, 1)) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(static_cast<double>(b1 / pi_bound_reference(74, 1)) == doctest::Approx(1.0).epsilon(1e-12));
    const long double x100 = expl(100.0L);
    const double ratio = static_cast<double>(thm21_pi_bound(2 * x100, 1) / thm21_pi_bound(x100, 1));
    CHECK(ratio > 2 * 0.97);
    CHECK(ratio < 2 * 1.03);
    CHECK(thm21_pi_bound(x74, 1, Thm21Form::proof) < b1);
  }

  TEST_CASE("P_U from theta") {
    const long double x = expl(74.0L);
    const long double t1 = x / logl(74.0L);
    const double v1 = pu_upper_from_theta(x, t1);
    CHECK(v1 > 0);
    CHECK(pu_upper_from_theta(x, 2 * t1) > v1);
    const double e2 = pu_upper_from_theta(x, expl(expl(2.0L)));
    CHECK(e2 == doctest::Approx(2 * 8 * std::exp(static_cast<double>(kGamma)) * delta(74)).epsilon(1e-12));
    CHECK_THROWS_AS(pu_upper_from_theta(x, expl(1.0L)), BoundsDomainError);
  }

  TEST_CASE("assemble_M") {
    // squarefree, unitary totient: 1/phi(N) + N/phi(N)
    CHECK(assemble_M(prof(15), Variant::uphi, 1) == 2);
    CHECK(assemble_M(prof(12), Variant::uphi, 1) == mpq_class(1, 6) + 2);
    CHECK(assemble_M(prof(15), Variant::psi, 1) == mpq_class(1, 15) + mpq_class(8, 5));
    CHECK(assemble_M(prof(45), Variant::usigma, 1) == mpq_class(1, 45) + mpq_class(4, 3));
    CHECK_THROWS(assemble_M(prof(1), Variant::phi, 1));
  }

  TEST_CASE("theorem_check") {
    const auto c15 = theorem_check(prof(15), 2, Variant::phi, 1);
    CHECK(c15.verdict == Verdict::not_applicable);
    const std::uint64_t p = 1000000007;
    REQUIRE(primes::is_prime(p));
    const auto cp = theorem_check(prof(p), 1, Variant::phi, -1);
    CHECK(cp.verdict == Verdict::pass);
    CHECK(cp.lll_bound > 1);
    CHECK_THROWS_AS(theorem_check(prof(15), 3, Variant::phi, 1), std::invalid_argument);
    // negative path on synthetic bounds
    CHECK(judge(3, 2.5, NAN) == Verdict::fail);
    CHECK(judge(3, 4.0, 2.0) == Verdict::fail);
    CHECK(judge(1, 0.5, NAN) == Verdict::not_applicable);
    CHECK(judge(2, NAN, NAN) == Verdict::not_applicable);
    CHECK(judge(2, 3.0, NAN) == Verdict::pass);
    CHECK(std::string(to_string(Verdict::fail)) == "fail");
  }

  TEST_CASE("constant chain report") {
    const auto r = constant_chain_report();
    CHECK(r.delivered == doctest::Approx(0.1308).epsilon(1e-3));
    CHECK(r.lemma_link_holds);
    CHECK(r.theorem_link_holds);
    CHECK_FALSE(r.literal_link_holds);
  }

  TEST_CASE("context validation") {
    BoundContext ok;
    ok.x1 = 100;
    ok.x2 = 50;
    ok.r = 4;
    CHECK_NOTHROW(ok.validate());
    BoundContext bad = ok;
    bad.x2 = 200;
    CHECK_THROWS(bad.validate());
    bad = ok;
    bad.r = 3;
    CHECK_THROWS(bad.validate());
    CHECK(BoundContext::one_plus_epsilon(80, 16) > 1);
  }

  TEST_CASE("variant names") {
    for (auto v : {Variant::phi, Variant::uphi, Variant::psi, Variant::usigma}) {
      CHECK(variant_from_string(to_string(v)) == v);
    }
    CHECK_THROWS(variant_from_string("sigma"));
  }
}
