#include "doctest.h"
#include "repulse/bounds.hpp"
#include "repulse/primes.hpp"
#include "repulse/search.hpp"

using namespace repulse;
using namespace repulse::search;

namespace {

std::vector<std::pair<u64, u64>> pairs(const std::vector<Solution>& v) {
  std::vector<std::pair<u64, u64>> out;
  for (const auto& s : v) out.emplace_back(s.n.get_ui(), s.m.get_ui());
  return out;
}

bool prime_power(u64 n) { return arith::factor(n).size() == 1; }

}  // namespace

TEST_SUITE("search") {
  TEST_CASE("solve_m examples") {
    CHECK(solve_m(arith::profile(arith::factor(3)), Variant::phi, -1) == mpz_class(1));
    CHECK(solve_m(arith::profile(arith::factor(15)), Variant::phi, 1) == mpz_class(2));
    CHECK(solve_m(arith::profile(arith::factor(9)), Variant::usigma, 1) == mpz_class(1));
    CHECK_FALSE(solve_m(arith::profile(arith::factor(9)), Variant::usigma, -1));
    CHECK_FALSE(solve_m(arith::profile(arith::factor(12)), Variant::phi, 1));
    CHECK_FALSE(solve_m(arith::profile(arith::factor(1)), Variant::phi, 1));
  }

  TEST_CASE("scan examples") {
    ScanOptions opt{2, 20, Variant::phi, 1, 2, 1};
    CHECK(pairs(scan(opt)) == std::vector<std::pair<u64, u64>>{{2, 3}, {3, 2}, {15, 2}});
    CHECK(scan(ScanOptions{2, 100, Variant::phi, -1, 2, 1}).empty());
    std::vector<u64> got, want;
    for (const auto& s : scan(ScanOptions{2, 50, Variant::usigma, 1, 1, 1})) {
      CHECK(s.m == 1);
      got.push_back(s.n.get_ui());
    }
    for (u64 n = 2; n <= 50; ++n) {
      if (prime_power(n)) want.push_back(n);
    }
    CHECK(got == want);
  }

  TEST_CASE("scan agrees with a per-n loop to 1e5") {
    for (auto v : {Variant::phi, Variant::uphi, Variant::psi, Variant::usigma}) {
      for (int sign : {1, -1}) {
        std::vector<std::pair<u64, u64>> naive;
        for (u64 n = 2; n <= 100000; ++n) {
          const auto m = solve_m(arith::profile(arith::factor(n)), v, sign);
          if (m && *m >= 1) naive.emplace_back(n, m->get_ui());
        }
        const auto sieved = scan(ScanOptions{2, 100000, v, sign, 1, 2});
        INFO(bounds::to_string(v) << " sign " << sign);
        REQUIRE(pairs(sieved) == naive);
        for (const auto& s : sieved) REQUIRE(verify(s));
      }
    }
  }

  TEST_CASE("scan across block boundaries and with several workers") {
    const u64 lo = (1u << 20) - 1000, hi = 3 * (1u << 20) + 5;
    const auto a = scan(ScanOptions{lo, hi, Variant::uphi, -1, 1, 1});
    const auto b = scan(ScanOptions{lo, hi, Variant::uphi, -1, 1, 3});
    CHECK(pairs(a) == pairs(b));
    CHECK(a.front().n >= lo);
    CHECK(a.back().n <= hi);
  }

  TEST_CASE("psi and usigma composite solutions are squarefree with equal values") {
    for (int sign : {1, -1}) {
      for (auto v : {Variant::psi, Variant::usigma}) {
        for (const auto& s : scan(ScanOptions{2, 1000000, v, sign, 1, 1})) {
          if (s.cls == Classification::prime || s.cls == Classification::prime_power) continue;
          const auto p = arith::profile(s.factorization);
          if (v == Variant::psi) {
            CHECK(s.cls == Classification::composite_squarefree);
            CHECK(p.usigma == p.psi);
          }
        }
      }
    }
  }

  TEST_CASE("theorem_check never fails on scanned solutions") {
    for (auto v : {Variant::phi, Variant::uphi, Variant::psi, Variant::usigma}) {
      for (int sign : {1, -1}) {
        for (const auto& s : scan(ScanOptions{2, 200000, v, sign, 1, 1})) {
          const auto p = arith::profile(s.factorization);
          REQUIRE(bounds::theorem_check(p, s.m, v, sign).verdict != bounds::Verdict::fail);
          REQUIRE(mpq_class(s.m) <= bounds::assemble_M(p, v, sign));
        }
      }
    }
  }

  TEST_CASE("audits") {
    const auto l = lehmer_audit(10000);
    CHECK(l.passed());
    CHECK(l.counterexamples.empty());
    CHECK(l.prime_hits == 1229);
    CHECK(lehmer_audit(1).passed());
    CHECK(lehmer_audit(1).hits == 0);
    const auto s = subbarao_audit(10000);
    CHECK(s.passed());
    CHECK(s.hits == s.prime_power_hits);
    for (u64 q : {4ULL, 8ULL, 27ULL, 625ULL}) {
      const auto m = solve_m(arith::profile(arith::factor(q)), Variant::uphi, -1);
      CHECK(m == mpz_class(1));
    }
    const auto u = usigma_audit(10000);
    CHECK(u.passed());
    CHECK(u.missing.empty());
  }

  TEST_CASE("fermat family") {
    CHECK(fermat_family(1).n == 3);
    CHECK(fermat_family(2).n == 15);
    const auto s = fermat_family(5);
    CHECK(s.n == mpz_class("4294967295"));
    CHECK(s.m == 2);
    CHECK(arith::euler_phi(s.factorization) == mpz_class(1) << 31);
    CHECK(verify(s));
    CHECK_THROWS(fermat_family(6));
  }

  TEST_CASE("serialization") {
    const auto s = fermat_family(2);
    CHECK(to_json(s).dump() ==
          R"({"class":"composite-squarefree","factorization":[[3,1],[5,1]],"m":"2","n":"15","sign":"+1","variant":"phi"})");
    CHECK(to_csv(s) == "15,2,phi,+1,3*5,composite-squarefree");
    CHECK(csv_header() == "n,m,variant,sign,factorization,class");
  }
}
