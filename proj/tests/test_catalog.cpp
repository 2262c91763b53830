#include <cmath>

#include "doctest.h"
#include "repulse/catalog.hpp"
#include "repulse/expr.hpp"

using namespace repulse;
using nlohmann::json;

namespace {

catalog::Entry real_entry(const std::string& expression, const std::string& lo, const std::string& hi, double claimed) {
  catalog::Entry e;
  e.name = "probe";
  e.expression = expression;
  e.lo = lo;
  e.hi = hi;
  e.claimed = claimed;
  return e;
}

const catalog::Entry& find(const catalog::Catalog& c, const std::string& name) {
  for (const auto& e : c.entries) {
    if (e.name == name) return e;
  }
  throw std::out_of_range(name);
}

}  // namespace

TEST_SUITE("catalog") {
  TEST_CASE("expression evaluation") {
    CHECK(expr::eval_constant("1 + 2*3") == 7);
    CHECK(expr::eval_constant("2^3^2") == 512);
    CHECK(expr::eval_constant("-2^2") == -4);
    CHECK(expr::eval_constant("(1 - 4)/2") == -1.5L);
    CHECK(std::isinf(expr::eval_constant("inf")));
    CHECK(static_cast<double>(expr::eval_constant("exp(gamma)")) == doctest::Approx(1.7810724179901979));
    CHECK(static_cast<double>(expr::eval_constant("min(3, max(1, 2))")) == 2);
    CHECK_THROWS_AS(expr::eval_constant("1 +"), expr::ParseError);
    CHECK_THROWS_AS(expr::eval_constant("foo(1)"), expr::ParseError);
    CHECK_THROWS_AS(expr::eval_constant("t + 1"), expr::ParseError);
  }

  TEST_CASE("wexp solves w + log w = t") {
    for (long double t : {1.0L, 16.0L, 72.0L, 1000.0L}) {
      const long double w = expr::wexp(t);
      CHECK(static_cast<double>(w + logl(w)) == doctest::Approx(static_cast<double>(t)).epsilon(1e-15));
    }
  }

  TEST_CASE("programs with definitions") {
    const expr::Program p("t", {{"a", "t + 1"}, {"b", "a * a"}}, "b - a");
    CHECK(p(2) == 6);
    CHECK_THROWS_AS(expr::Program("t", {{"a", "b"}, {"b", "1"}}, "a"), expr::ParseError);
  }

  TEST_CASE("trivial constant entry passes with zero margin") {
    const auto r = catalog::verify_constant(real_entry("2.5", "0", "10", 2.5), {});
    CHECK(r.status == catalog::Status::pass);
    CHECK(r.margin == 0);
    CHECK(r.recomputed_sup == 2.5);
  }

  TEST_CASE("interior maximum is found") {
    auto e = real_entry("-(t - 3.3)^2 + 1", "0", "10", 1);
    auto r = catalog::verify_constant(e, {});
    CHECK(r.status == catalog::Status::pass);
    CHECK(r.argmax == doctest::Approx(3.3).epsilon(1e-6));
    e.claimed = 0.999;
    r = catalog::verify_constant(e, {});
    CHECK(r.status == catalog::Status::pass);  // within tolerance
    e.claimed = 0.99;
    r = catalog::verify_constant(e, {1e-4, 1000000, 1});
    CHECK(r.status == catalog::Status::exceed);
    CHECK(r.margin == doctest::Approx(-0.01).epsilon(1e-6));
  }

  TEST_CASE("infinite domain needs a tail") {
    auto e = real_entry("1/t", "1", "inf", 1);
    CHECK(catalog::verify_constant(e, {}).status == catalog::Status::unverifiable);
    e.tail_from = "1";
    const auto r = catalog::verify_constant(e, {});
    CHECK(r.status == catalog::Status::pass);
    CHECK(r.recomputed_sup == doctest::Approx(1));
    // a declared tail that is not monotone is caught
    auto bad = real_entry("sqrt(t)/(1 + t/100)", "1", "inf", 10);
    bad.tail_from = "1";
    CHECK(catalog::verify_constant(bad, {}).status == catalog::Status::unverifiable);
  }

  TEST_CASE("parse rejects malformed catalogs") {
    const auto ok = json::parse(R"({"version":"t","entries":[{"name":"a","expression":"t","domain":["0","1"],"claimed":1}]})");
    CHECK(catalog::parse(ok).entries.size() == 1);
    auto dup = ok;
    dup["entries"].push_back(dup["entries"][0]);
    CHECK_THROWS_AS(catalog::parse(dup), std::invalid_argument);
    auto bad = ok;
    bad["entries"][0]["expression"] = "t +* 1";
    CHECK_THROWS_AS(catalog::parse(bad), std::invalid_argument);
    auto kind = ok;
    kind["entries"][0]["kind"] = "guess";
    CHECK_THROWS(catalog::parse(kind));
  }

  TEST_CASE("embedded catalog matches the data file") {
    const auto c = catalog::load_default();
    CHECK(c.version == "1.0");
    CHECK(c.tolerance == 2e-3);
    CHECK(c.entries.size() >= 70);
    int flagged = 0;
    for (const auto& e : c.entries) flagged += !e.flag.empty();
    CHECK(flagged == 1);
  }

  TEST_CASE("borderline small-range entry") {
    const auto c = catalog::load_default();
    const auto r = catalog::verify_constant(find(c, "totient.small_range_mertens"), {});
    CHECK(r.flagged);
    CHECK(r.argmax == doctest::Approx(73));
    CHECK(r.recomputed_sup == doctest::Approx(15.1548670).epsilon(1e-8));
    CHECK(r.margin == doctest::Approx(-7.04e-6).epsilon(0.01));
    CHECK(r.margin < 0);
    CHECK(r.status == catalog::Status::pass);
  }

  TEST_CASE("large x1 entry") {
    const auto c = catalog::load_default();
    const auto r = catalog::verify_constant(find(c, "totient.large_x1"), {});
    CHECK(r.status == catalog::Status::pass);
    CHECK(r.margin >= 0);
    CHECK(r.argmax == doctest::Approx(73));
  }

  TEST_CASE("axioms are reported, not recomputed") {
    const auto c = catalog::load_default();
    const auto r = catalog::verify_constant(find(c, "mertens_tail_factor"), {});
    CHECK(r.status == catalog::Status::axiom);
    const auto j = catalog::to_json(r);
    CHECK(j["verdict"] == "axiom");
  }

  TEST_CASE("verification is independent of worker count") {
    const auto c = catalog::load_default();
    std::vector<catalog::Entry> some(c.entries.begin(), c.entries.begin() + 12);
    const auto a = catalog::verify_all(some, {2e-3, 20000, 1});
    const auto b = catalog::verify_all(some, {2e-3, 20000, 3});
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].name == b[i].name);
      CHECK(a[i].recomputed_sup == b[i].recomputed_sup);
    }
  }
}
