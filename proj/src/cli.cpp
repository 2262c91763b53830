#include "repulse/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <memory>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "repulse/arith.hpp"
#include "repulse/bounds.hpp"
#include "repulse/catalog.hpp"
#include "repulse/expr.hpp"
#include "repulse/largesieve.hpp"
#include "repulse/repulsive.hpp"
#include "repulse/search.hpp"

namespace repulse::cli {

namespace {

using json = nlohmann::json;
using u64 = std::uint64_t;

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Accepts plain integers and integral scientific notation such as 1e7.
u64 parse_count(const std::string& flag, const std::string& text) {
  if (!text.empty() && std::all_of(text.begin(), text.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    try {
      return std::stoull(text);
    } catch (const std::exception&) {
      throw UsageError(flag + ": value out of range: " + text);
    }
  }
  double v = 0;
  std::size_t used = 0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw UsageError(flag + ": not a number: " + text);
  }
  if (used != text.size() || !(v >= 0) || v != std::floor(v) || v > 9.007199254740992e15) {
    throw UsageError(flag + ": expected a non-negative integer, got " + text);
  }
  return static_cast<u64>(v);
}

double parse_real(const std::string& flag, const std::string& text) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw UsageError(flag + ": not a number: " + text);
  }
  if (used != text.size() || !std::isfinite(v)) throw UsageError(flag + ": not a finite number: " + text);
  return v;
}

int parse_sign(const std::string& text) {
  if (text == "+1" || text == "1" || text == "+") return 1;
  if (text == "-1" || text == "-") return -1;
  throw UsageError("--sign must be +1 or -1");
}

std::string fmt(double v, int digits) {
  std::ostringstream os;
  os << std::setprecision(digits) << v;
  return os.str();
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw UsageError(path + ": " + e.what());
  }
}

// Destination for command output: the given stream or a file.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : os_(&fallback) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw IoError("cannot write " + path);
      os_ = file_.get();
    }
  }
  std::ostream& os() { return *os_; }
  void finish() {
    os_->flush();
    if (!*os_) throw IoError("write failed");
  }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* os_;
};

struct Common {
  std::string format = "jsonl";
  std::string output;
  unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
  std::string catalog;
};

void check_format(const Common& c) {
  if (c.format != "jsonl" && c.format != "csv" && c.format != "human") {
    throw UsageError("--format must be jsonl, csv or human");
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Explicit bounds and searches for Lehmer-type totient equations", "repulse"};
  app.require_subcommand(0, 1);
  Common common;
  bool show_version = false;
  app.add_flag("--version", show_version, "Print tool and catalog versions");
  app.add_option("--catalog", common.catalog, "Constant catalog JSON overriding the embedded default");

  auto add_common = [&](CLI::App* sub, bool with_format) {
    sub->add_option("--jobs", common.jobs, "Worker count")->check(CLI::PositiveNumber);
    sub->add_option("--output", common.output, "Write to FILE instead of stdout");
    if (with_format) sub->add_option("--format", common.format, "jsonl | csv | human");
  };

  // scan
  auto* scan = app.add_subcommand("scan", "Solutions of one variant equation over a range");
  std::string variant = "phi", sign = "+1", from = "2", to, min_m = "0";
  scan->add_option("--variant", variant, "phi | uphi | psi | usigma");
  scan->add_option("--sign", sign, "+1 or -1");
  scan->add_option("--from", from, "Lower end of the range");
  scan->add_option("--to", to, "Upper end of the range")->required();
  scan->add_option("--min-m", min_m, "Smallest M to report (0: variant default)");
  add_common(scan, true);

  // audit
  auto* audit = app.add_subcommand("audit", "Exhaustive conjecture audit");
  std::string conjecture;
  std::string audit_to;
  audit->add_option("--conjecture", conjecture, "lehmer | subbarao | usigma")->required();
  audit->add_option("--to", audit_to, "Upper end of the range")->required();
  add_common(audit, true);

  // greedy
  auto* greedy = app.add_subcommand("greedy", "Greedy a-self-repulsive prime set");
  std::string greedy_x;
  long greedy_a = 1;
  std::string greedy_start = "3";
  greedy->add_option("--x", greedy_x, "Cutoff")->required();
  greedy->add_option("--a", greedy_a, "Residue a");
  greedy->add_option("--start", greedy_start, "First prime considered");
  add_common(greedy, true);

  // sieve
  auto* sieve = app.add_subcommand("sieve", "Large-sieve count versus bound for a prime set");
  std::string sieve_x, sieve_w, sieve_set;
  sieve->add_option("--x", sieve_x, "A = [1, x]")->required();
  sieve->add_option("--w", sieve_w, "Sieving level")->required();
  sieve->add_option("--set", sieve_set, "Prime set JSON {a, primes, cutoff}")->required();
  add_common(sieve, true);

  // lemma21
  auto* lemma21 = app.add_subcommand("lemma21", "Restricted-sum inequality on seeded random functions");
  std::string l21_trials = "100", l21_x = "1000";
  u64 seed = 1;
  lemma21->add_option("--trials", l21_trials, "Number of random functions");
  lemma21->add_option("--x", l21_x, "Largest summation range");
  lemma21->add_option("--seed", seed, "Random seed");
  add_common(lemma21, true);

  // lemma22
  auto* lemma22 = app.add_subcommand("lemma22", "Divisor-sum margins streamed as JSON lines");
  std::string l22_from = "60", l22_to = "1e6", l22_step = "1";
  lemma22->add_option("--from", l22_from, "First y");
  lemma22->add_option("--to", l22_to, "Last y");
  lemma22->add_option("--step", l22_step, "Step");
  add_common(lemma22, true);

  // verify-constants
  auto* verify = app.add_subcommand("verify-constants", "Recompute every catalogued constant");
  std::vector<std::string> entries;
  double tolerance = -1;
  std::string report;
  std::string grid = "1e6";
  verify->add_option("--entry", entries, "Only these entries");
  verify->add_option("--tolerance", tolerance, "Absolute tolerance (default: catalog value)");
  verify->add_option("--report", report, "Write the JSON report to FILE");
  verify->add_option("--grid", grid, "Grid size for entries without a unimodal declaration");
  add_common(verify, true);

  // eval
  auto* eval = app.add_subcommand("eval", "Evaluate one closed-form function");
  std::string fn;
  std::string t_text, c_text, x_text, pu_text = "1", theta_text, expression, form = "statement";
  eval->add_option("--fn", fn, "delta | delta1 | eta | thm21 | pu-theta | expr")->required();
  eval->add_option("--t", t_text, "Argument t");
  eval->add_option("--c", c_text, "Coefficient for delta / eta");
  eval->add_option("--log-x", x_text, "log x for thm21 and pu-theta");
  eval->add_option("--p-u", pu_text, "P_U(x) for thm21");
  eval->add_option("--theta", theta_text, "theta_U(x) for pu-theta");
  eval->add_option("--form", form, "thm21 form: statement | proof");
  eval->add_option("--expr", expression, "Expression in t for --fn expr");

  // profile
  auto* prof = app.add_subcommand("profile", "Arithmetic profile and prime-support diagnostics");
  std::string n_text, fac_text;
  long prof_a = 1;
  prof->add_option("--n", n_text, "Integer to factor");
  prof->add_option("--factorization", fac_text, "JSON [[p, e], ...]");
  prof->add_option("--a", prof_a, "Residue a for the self-repulsion check");
  add_common(prof, true);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return 2;
  }

  try {
    check_format(common);
    const auto load_catalog = [&] {
      return common.catalog.empty() ? catalog::load_default() : catalog::load_file(common.catalog);
    };
    if (show_version) {
      out << "repulse " << kToolVersion << "\ncatalog " << load_catalog().version << "\n";
      return 0;
    }
    if (app.get_subcommands().empty()) {
      err << app.help();
      return 2;
    }

    if (scan->parsed()) {
      search::ScanOptions opt;
      opt.variant = bounds::variant_from_string(variant);
      opt.sign = parse_sign(sign);
      opt.lo = parse_count("--from", from);
      opt.hi = parse_count("--to", to);
      opt.min_m = parse_count("--min-m", min_m);
      opt.jobs = common.jobs;
      if (opt.hi > 1'000'000'000ULL) throw UsageError("--to is limited to 1e9");
      Sink sink(common.output, out);
      auto& os = sink.os();
      if (common.format == "csv") os << search::csv_header() << "\n";
      search::scan(opt, [&](const search::Solution& s) {
        if (common.format == "csv") {
          os << search::to_csv(s) << "\n";
        } else if (common.format == "human") {
          os << "n=" << s.n.get_str() << " m=" << s.m.get_str() << " " << search::to_string(s.cls) << "\n";
        } else {
          os << search::to_json(s).dump() << "\n";
        }
      });
      sink.finish();
      return 0;
    }

    if (audit->parsed()) {
      const u64 hi = parse_count("--to", audit_to);
      if (hi > 1'000'000'000ULL) throw UsageError("--to is limited to 1e9");
      search::AuditReport r;
      if (conjecture == "lehmer") {
        r = search::lehmer_audit(hi, common.jobs);
      } else if (conjecture == "subbarao") {
        r = search::subbarao_audit(hi, common.jobs);
      } else if (conjecture == "usigma") {
        r = search::usigma_audit(hi, common.jobs);
      } else {
        throw UsageError("--conjecture must be lehmer, subbarao or usigma");
      }
      Sink sink(common.output, out);
      if (common.format == "human") {
        sink.os() << r.name << " audit to " << r.hi << ": " << (r.passed() ? "pass" : "FAIL") << ", hits " << r.hits
                  << " (primes " << r.prime_hits << "), counterexamples " << r.counterexamples.size() << ", missing "
                  << r.missing.size() << ", " << fmt(r.seconds, 3) << " s\n";
      } else {
        sink.os() << search::to_json(r).dump() << "\n";
      }
      sink.finish();
      return r.passed() ? 0 : 1;
    }

    if (greedy->parsed()) {
      const double x = static_cast<double>(parse_count("--x", greedy_x));
      const u64 start = parse_count("--start", greedy_start);
      if (start < 2) throw UsageError("--start must be at least 2");
      const auto set = repulsive::greedy_construct(x, greedy_a, start);
      const auto st = repulsive::stats(set, x);
      Sink sink(common.output, out);
      if (common.format == "human") {
        sink.os() << "a=" << set.a << " primes=" << set.primes.size() << " P_U=" << fmt(static_cast<double>(st.p_u), 6)
                  << " S_U=" << fmt(static_cast<double>(st.s_u), 6) << "\n";
      } else {
        json j = repulsive::to_json(set);
        j["stats"] = repulsive::to_json(st);
        sink.os() << j.dump() << "\n";
      }
      sink.finish();
      return 0;
    }

    if (sieve->parsed()) {
      const u64 x = parse_count("--x", sieve_x);
      const double w = parse_real("--w", sieve_w);
      if (x < 1 || w < 1) throw UsageError("--x and --w must be at least 1");
      if (x > 100'000'000ULL || w > 1e5) throw UsageError("sieve is desk-scale: --x <= 1e8, --w <= 1e5");
      const auto set = repulsive::prime_set_from_json(load_json_file(sieve_set));
      const auto sys = largesieve::from_prime_set(1, static_cast<std::int64_t>(x), set.primes, static_cast<u64>(w));
      const u64 z = largesieve::survivor_count(sys, w);
      const double bound = largesieve::survivor_bound(sys.x_len(), w, sys);
      const auto ineq = largesieve::pi_u_sieve_inequality(static_cast<double>(x), w, set);
      Sink sink(common.output, out);
      if (common.format == "human") {
        sink.os() << "Z=" << z << " bound=" << fmt(bound, 6) << " slack=" << fmt(bound - static_cast<double>(z), 6)
                  << " pi_U=" << ineq.pi_u << "\n";
      } else {
        sink.os() << json{{"Z", z}, {"bound", bound}, {"slack", bound - static_cast<double>(z)}, {"pi_u", ineq.pi_u},
                          {"pi_u_rhs", ineq.rhs}, {"pi_u_holds", ineq.holds}}
                         .dump()
                  << "\n";
      }
      sink.finish();
      return (static_cast<double>(z) <= bound && ineq.holds) ? 0 : 1;
    }

    if (lemma21->parsed()) {
      const u64 trials = parse_count("--trials", l21_trials);
      const double x = static_cast<double>(parse_count("--x", l21_x));
      if (x < 1 || x > 1e6) throw UsageError("--x must be in [1, 1e6]");
      const auto results = largesieve::lemma21_random_trials(seed, static_cast<unsigned>(trials), x);
      Sink sink(common.output, out);
      u64 failures = 0;
      for (const auto& t : results) {
        if (!t.check.holds) ++failures;
        if (common.format == "human") {
          sink.os() << "x=" << t.x << " |U|=" << t.u.size() << " lhs=" << fmt(static_cast<double>(t.check.restricted), 6)
                    << " rhs=" << fmt(static_cast<double>(t.check.rhs), 6) << (t.check.holds ? " ok" : " VIOLATED") << "\n";
        } else {
          sink.os() << json{{"x", t.x}, {"u", t.u}, {"f_seed", t.f_seed},
                            {"lhs", static_cast<double>(t.check.restricted)}, {"rhs", static_cast<double>(t.check.rhs)},
                            {"holds", t.check.holds}}
                           .dump()
                    << "\n";
        }
      }
      sink.finish();
      return failures == 0 ? 0 : 1;
    }

    if (lemma22->parsed()) {
      const u64 lo = parse_count("--from", l22_from);
      const u64 hi = parse_count("--to", l22_to);
      const u64 step = parse_count("--step", l22_step);
      if (lo < 2 || hi < lo || step == 0) throw UsageError("need 2 <= --from <= --to and --step >= 1");
      if (hi > 1'000'000'000ULL) throw UsageError("--to is limited to 1e9");
      Sink sink(common.output, out);
      auto& os = sink.os();
      if (common.format == "csv") os << "y,margin\n";
      const auto sweep = largesieve::lemma22_sweep(lo, hi, step, [&](u64 y, double m) {
        if (common.format == "csv") {
          os << y << ',' << fmt(m, 17) << "\n";
        } else if (common.format == "human") {
          os << "y=" << y << " margin=" << fmt(m, 6) << "\n";
        } else {
          os << json{{"y", y}, {"margin", m}}.dump() << "\n";
        }
      });
      err << json{{"checked", sweep.checked}, {"violations", sweep.violations}, {"min_margin", sweep.min_margin},
                  {"argmin", sweep.argmin}, {"error_bound", sweep.error_bound}}
                 .dump()
          << "\n";
      sink.finish();
      return sweep.violations == 0 ? 0 : 1;
    }

    if (verify->parsed()) {
      auto cat = load_catalog();
      catalog::VerifyOptions opt;
      opt.tolerance = tolerance >= 0 ? tolerance : cat.tolerance;
      opt.grid = parse_count("--grid", grid);
      opt.jobs = common.jobs;
      std::vector<catalog::Entry> chosen;
      for (const auto& e : cat.entries) {
        if (entries.empty() || std::find(entries.begin(), entries.end(), e.name) != entries.end()) chosen.push_back(e);
      }
      for (const auto& name : entries) {
        if (std::none_of(cat.entries.begin(), cat.entries.end(), [&](const auto& e) { return e.name == name; })) {
          throw UsageError("unknown catalog entry: " + name);
        }
      }
      const auto results = catalog::verify_all(chosen, opt);
      json arr = json::array();
      bool ok = true;
      for (const auto& r : results) {
        arr.push_back(catalog::to_json(r));
        if (!r.flagged && r.status != catalog::Status::pass && r.status != catalog::Status::axiom) ok = false;
      }
      if (!report.empty()) {
        std::ofstream rep(report);
        if (!rep || !(rep << arr.dump(1) << "\n")) throw IoError("cannot write " + report);
      }
      Sink sink(common.output, out);
      for (const auto& r : results) {
        if (common.format == "human") {
          sink.os() << std::left << std::setw(44) << r.name << " " << std::setw(12) << catalog::to_string(r.status)
                    << " sup=" << fmt(r.recomputed_sup, 9) << " claimed=" << fmt(r.claimed, 9)
                    << " margin=" << fmt(r.margin, 3) << (r.flagged ? " [flagged]" : "") << "\n";
        } else if (common.format == "csv") {
          sink.os() << r.name << ',' << catalog::to_string(r.status) << ',' << fmt(r.recomputed_sup, 17) << ','
                    << fmt(r.claimed, 17) << ',' << fmt(r.margin, 17) << ',' << (r.flagged ? 1 : 0) << "\n";
        } else {
          sink.os() << catalog::to_json(r).dump() << "\n";
        }
      }
      sink.finish();
      return ok ? 0 : 1;
    }

    if (eval->parsed()) {
      auto need = [](const std::string& flag, const std::string& v) {
        if (v.empty()) throw UsageError(flag + " is required for this function");
        return parse_real(flag, v);
      };
      double value = 0;
      if (fn == "delta") {
        value = bounds::delta(need("--t", t_text), c_text.empty() ? bounds::kDeltaCoef : parse_real("--c", c_text));
      } else if (fn == "eta") {
        value = bounds::eta(need("--t", t_text), c_text.empty() ? bounds::kEtaCoef : parse_real("--c", c_text));
      } else if (fn == "delta1") {
        value = bounds::delta1(need("--t", t_text));
      } else if (fn == "thm21") {
        if (form != "statement" && form != "proof") throw UsageError("--form must be statement or proof");
        const long double x = std::exp(static_cast<long double>(need("--log-x", x_text)));
        value = static_cast<double>(bounds::thm21_pi_bound(
            x, parse_real("--p-u", pu_text), form == "proof" ? bounds::Thm21Form::proof : bounds::Thm21Form::statement));
      } else if (fn == "pu-theta") {
        const long double x = std::exp(static_cast<long double>(need("--log-x", x_text)));
        value = bounds::pu_upper_from_theta(x, need("--theta", theta_text));
      } else if (fn == "expr") {
        if (expression.empty()) throw UsageError("--expr is required for --fn expr");
        const expr::Program program("t", {}, expression);
        value = static_cast<double>(program(t_text.empty() ? 0.0L : parse_real("--t", t_text)));
      } else {
        throw UsageError("unknown --fn " + fn);
      }
      out << fmt(value, 15) << "\n";
      return 0;
    }

    if (prof->parsed()) {
      if (n_text.empty() == fac_text.empty()) throw UsageError("give exactly one of --n and --factorization");
      arith::Factorization f;
      if (!n_text.empty()) {
        const u64 n = parse_count("--n", n_text);
        if (n == 0) throw UsageError("--n must be positive");
        f = arith::factor(n);
      } else {
        try {
          f = arith::factorization_from_json(json::parse(fac_text));
        } catch (const json::parse_error& e) {
          throw UsageError(std::string("--factorization: ") + e.what());
        }
      }
      const auto p = arith::profile(f);
      json j = arith::to_json(p);
      j["factorization"] = arith::to_json(f);
      const auto d = repulsive::set_of_integer(f, prof_a);
      j["support"] = {{"a", prof_a},
                      {"phi_a", d.phi_a.get_str()},
                      {"gcd_is_one", d.gcd_is_one},
                      {"coprime_to_a", d.coprime_to_a},
                      {"squarefree", d.squarefree},
                      {"self_repulsive", d.self_repulsive}};
      if (d.witness) j["support"]["witness"] = {d.witness->p, d.witness->q};
      Sink sink(common.output, out);
      sink.os() << (common.format == "human" ? j.dump(2) : j.dump()) << "\n";
      sink.finish();
      return 0;
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    err << "domain error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}

}  // namespace repulse::cli
