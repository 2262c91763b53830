#include "repulse/catalog.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "repulse/expr.hpp"
#include "repulse/primes.hpp"

namespace repulse::catalog {

namespace {

using ld = long double;

std::string endpoint(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number()) {
    std::ostringstream os;
    os.precision(17);
    os << v.get<double>();
    return os.str();
  }
  throw std::invalid_argument("domain endpoints must be strings or numbers");
}

Kind kind_from(const std::string& s) {
  if (s == "real") return Kind::real;
  if (s == "prime_rank") return Kind::prime_rank;
  if (s == "axiom") return Kind::axiom;
  throw std::invalid_argument("unknown catalog entry kind: " + s);
}

struct Failure {
  std::string why;
};

template <class F>
ld checked(const F& f, ld x) {
  const ld v = f(x);
  if (!std::isfinite(v)) {
    std::ostringstream os;
    os.precision(10);
    os << "non-finite value at " << static_cast<double>(x);
    throw Failure{os.str()};
  }
  return v;
}

struct Max {
  ld value = -INFINITY;
  ld at = 0;
};

// Maximum of f on [a, b]: a uniform scan, then golden-section refinement in
// the cell pair around the best sample.
template <class F>
Max maximize(const F& f, ld a, ld b, std::size_t samples) {
  Max m;
  if (!(b > a)) {
    m.value = checked(f, a);
    m.at = a;
    return m;
  }
  samples = std::max<std::size_t>(samples, 2);
  std::size_t best = 0;
  for (std::size_t i = 0; i <= samples; ++i) {
    const ld x = i == samples ? b : a + (b - a) * static_cast<ld>(i) / static_cast<ld>(samples);
    const ld v = checked(f, x);
    if (v > m.value) {
      m.value = v;
      m.at = x;
      best = i;
    }
  }
  const ld h = (b - a) / static_cast<ld>(samples);
  ld lo = best == 0 ? a : a + h * static_cast<ld>(best - 1);
  ld hi = best == samples ? b : std::min(b, a + h * static_cast<ld>(best + 1));
  const ld r = (std::sqrt(5.0L) - 1) / 2;
  ld x1 = hi - r * (hi - lo);
  ld x2 = lo + r * (hi - lo);
  ld f1 = checked(f, x1);
  ld f2 = checked(f, x2);
  for (int it = 0; it < 200 && hi - lo > 1e-15L * std::max<ld>(1, std::fabs(hi)); ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + r * (hi - lo);
      f2 = checked(f, x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - r * (hi - lo);
      f1 = checked(f, x1);
    }
  }
  for (auto [x, v] : {std::pair{x1, f1}, std::pair{x2, f2}}) {
    if (v > m.value) {
      m.value = v;
      m.at = x;
    }
  }
  return m;
}

// Samples f geometrically from `from` and reports the first increase.
template <class F>
std::optional<ld> tail_increase(const F& f, ld from, ld until) {
  ld prev = checked(f, from);
  for (ld x = from * 1.001L; x <= until; x *= 1.001L) {
    const ld v = checked(f, x);
    if (v > prev + 1e-12L * std::max<ld>(1, std::fabs(prev))) return x;
    prev = v;
  }
  return std::nullopt;
}

std::string domain_text(const Entry& e) { return "[" + e.lo + ", " + e.hi + "]"; }

void verify_real(const Entry& e, const VerifyOptions& opt, ConstantCheck& c) {
  const expr::Program prog(e.variable, e.where, e.expression);
  const ld lo = expr::eval_constant(e.lo);
  const ld hi = expr::eval_constant(e.hi);
  ld top = hi;
  std::optional<ld> tail;
  if (e.tail_from) {
    tail = expr::eval_constant(*e.tail_from);
    if (*tail < hi) top = std::max(lo, *tail);
  }
  if (std::isinf(top)) {
    c.status = Status::unverifiable;
    c.detail = "infinite domain without a declared monotone tail";
    return;
  }
  const std::size_t samples = e.unimodal ? 2000 : opt.grid;
  const Max m = maximize(prog, lo, top, samples);
  if (tail && *tail < hi) {
    const ld until = std::min(hi, std::max<ld>(1e6L, 1e3L * *tail));
    if (const auto bad = tail_increase(prog, top, until)) {
      std::ostringstream os;
      os << "declared monotone tail increases near " << static_cast<double>(*bad);
      c.status = Status::unverifiable;
      c.detail = os.str();
    }
  }
  c.recomputed_sup = static_cast<double>(m.value);
  c.argmax = static_cast<double>(m.at);
}

void verify_prime_rank(const Entry& e, ConstantCheck& c) {
  const auto f = expr::Expression::parse(e.expression, {"r", "P"});
  const auto lo = static_cast<std::uint64_t>(std::ceil(expr::eval_constant(e.lo)));
  const ld hi_real = expr::eval_constant(e.hi);
  if (!std::isfinite(hi_real)) throw Failure{"prime_rank entries need a finite domain"};
  const auto hi = static_cast<std::uint64_t>(std::floor(hi_real));
  const ld n = static_cast<ld>(std::max<std::uint64_t>(hi, 6));
  const auto bound = static_cast<std::uint64_t>(n * (std::log(n) + std::log(std::log(n)))) + 64;
  Max m;
  ld prod = 1;
  std::uint64_t rank = 0;
  primes::for_each_prime(3, bound, [&](std::uint64_t p) {
    if (rank >= hi) return;
    ++rank;
    prod *= static_cast<ld>(p) / static_cast<ld>(p - 1);
    if (rank < lo) return;
    const ld vars[2] = {static_cast<ld>(rank), prod};
    const ld v = f.eval(vars);
    if (v > m.value) {
      m.value = v;
      m.at = static_cast<ld>(rank);
    }
  });
  if (rank < hi) throw Failure{"prime stream ended early"};
  c.recomputed_sup = static_cast<double>(m.value);
  c.argmax = static_cast<double>(m.at);
}

}  // namespace

Catalog parse(const nlohmann::json& j) {
  Catalog cat;
  cat.version = j.value("version", "unversioned");
  cat.tolerance = j.value("tolerance", 2e-3);
  std::set<std::string> seen;
  for (const auto& item : j.at("entries")) {
    Entry e;
    e.name = item.at("name").get<std::string>();
    if (!seen.insert(e.name).second) throw std::invalid_argument("duplicate catalog entry: " + e.name);
    e.kind = kind_from(item.value("kind", "real"));
    e.claimed = item.at("claimed").get<double>();
    e.flag = item.value("flag", "");
    e.source = item.value("source", "");
    e.note = item.value("note", "");
    if (e.kind != Kind::axiom) {
      e.expression = item.at("expression").get<std::string>();
      e.variable = item.value("variable", "t");
      const auto& d = item.at("domain");
      if (!d.is_array() || d.size() != 2) throw std::invalid_argument(e.name + ": domain must be [lo, hi]");
      e.lo = endpoint(d[0]);
      e.hi = endpoint(d[1]);
      if (item.contains("tail_from")) e.tail_from = endpoint(item["tail_from"]);
      e.unimodal = item.value("unimodal", false);
      if (item.contains("where")) {
        for (const auto& w : item["where"]) e.where.emplace_back(w.at(0).get<std::string>(), w.at(1).get<std::string>());
      }
      try {
        if (e.kind == Kind::real) {
          expr::Program(e.variable, e.where, e.expression);
        } else {
          expr::Expression::parse(e.expression, {"r", "P"});
        }
        expr::eval_constant(e.lo);
        expr::eval_constant(e.hi);
        if (e.tail_from) expr::eval_constant(*e.tail_from);
      } catch (const expr::ParseError& err) {
        throw std::invalid_argument(e.name + ": " + err.what());
      }
    }
    cat.entries.push_back(std::move(e));
  }
  return cat;
}

Catalog load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open catalog file " + path);
  return parse(nlohmann::json::parse(in));
}

Catalog load_default() { return parse(nlohmann::json::parse(default_catalog_text())); }

const char* to_string(Status s) {
  switch (s) {
    case Status::pass: return "pass";
    case Status::exceed: return "exceed";
    case Status::axiom: return "axiom";
    case Status::unverifiable: return "unverifiable";
  }
  return "?";
}

ConstantCheck verify_constant(const Entry& e, const VerifyOptions& opt) {
  ConstantCheck c;
  c.name = e.name;
  c.expression = e.expression;
  c.claimed = e.claimed;
  c.flagged = !e.flag.empty();
  if (e.kind == Kind::axiom) {
    c.status = Status::axiom;
    c.recomputed_sup = e.claimed;
    c.detail = e.source;
    return c;
  }
  c.domain = domain_text(e);
  c.status = Status::pass;
  try {
    if (e.kind == Kind::real) {
      verify_real(e, opt, c);
    } else {
      verify_prime_rank(e, c);
    }
  } catch (const Failure& f) {
    c.status = Status::unverifiable;
    c.detail = f.why;
    return c;
  } catch (const std::domain_error& err) {
    c.status = Status::unverifiable;
    c.detail = err.what();
    return c;
  }
  c.margin = c.claimed - c.recomputed_sup;
  if (c.status != Status::unverifiable) {
    c.status = c.recomputed_sup <= c.claimed + opt.tolerance ? Status::pass : Status::exceed;
  }
  return c;
}

std::vector<ConstantCheck> verify_all(const std::vector<Entry>& entries, const VerifyOptions& opt) {
  std::vector<ConstantCheck> out(entries.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < entries.size();) out[i] = verify_constant(entries[i], opt);
  };
  const unsigned jobs = std::max(1u, std::min<unsigned>(opt.jobs, static_cast<unsigned>(entries.size())));
  std::vector<std::thread> pool;
  for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return out;
}

nlohmann::json to_json(const ConstantCheck& c) {
  nlohmann::json j = {{"name", c.name},
                      {"claimed", c.claimed},
                      {"recomputed_sup", c.recomputed_sup},
                      {"margin", c.margin},
                      {"verdict", to_string(c.status)},
                      {"flagged", c.flagged}};
  if (!c.expression.empty()) j["expression"] = c.expression;
  if (!c.domain.empty()) {
    j["domain"] = c.domain;
    j["argmax"] = c.argmax;
  }
  if (!c.detail.empty()) j["detail"] = c.detail;
  return j;
}

}  // namespace repulse::catalog
