#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "repulse/cli.hpp"

using nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = repulse::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> v;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) v.push_back(l);
  return v;
}

std::filesystem::path temp_file(const std::string& name) { return std::filesystem::temp_directory_path() / name; }

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("scan prints three json lines") {
    const auto r = run({"scan", "--variant", "phi", "--sign", "+1", "--to", "20", "--min-m", "2"});
    CHECK(r.code == 0);
    const auto l = lines(r.out);
    REQUIRE(l.size() == 3);
    CHECK(json::parse(l[0])["n"] == "2");
    CHECK(json::parse(l[1])["n"] == "3");
    CHECK(json::parse(l[2])["n"] == "15");
  }

  TEST_CASE("scan output is independent of jobs") {
    const auto a = run({"scan", "--variant", "uphi", "--sign", "-1", "--to", "3e6", "--min-m", "1", "--jobs", "1",
                        "--format", "csv"});
    const auto b = run({"scan", "--variant", "uphi", "--sign", "-1", "--to", "3e6", "--min-m", "1", "--jobs", "3",
                        "--format", "csv"});
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(lines(a.out)[0] == "n,m,variant,sign,factorization,class");
  }

  TEST_CASE("eval prints 15 significant digits") {
    const auto r = run({"eval", "--fn", "delta", "--t", "100"});
    CHECK(r.code == 0);
    const auto l = lines(r.out);
    REQUIRE(l.size() == 1);
    std::string digits;
    for (char c : l[0]) {
      if (std::isdigit(static_cast<unsigned char>(c))) digits += c;
    }
    CHECK(digits.size() == 15);
    CHECK(std::stod(l[0]) > 1);
  }

  TEST_CASE("audit exit code and report") {
    const auto r = run({"audit", "--conjecture", "lehmer", "--to", "1e5"});
    CHECK(r.code == 0);
    const auto j = json::parse(r.out);
    CHECK(j["counterexamples"].empty());
    CHECK(j["prime_hits"] == 9592);
  }

  TEST_CASE("usage errors exit 2") {
    CHECK(run({"scan", "--to", "20", "--sign", "2"}).code == 2);
    CHECK(run({"scan", "--to", "1.5"}).code == 2);
    CHECK(run({"scan", "--to", "20", "--format", "xml"}).code == 2);
    CHECK(run({"scan"}).code == 2);
    CHECK(run({"audit", "--conjecture", "goldbach", "--to", "10"}).code == 2);
    CHECK(run({"bogus"}).code == 2);
    CHECK(run({"eval", "--fn", "pu-theta", "--log-x", "74", "--theta", "2.718281828"}).code == 2);
    CHECK(run({"profile", "--n", "12", "--factorization", "[[2,2],[3,1]]"}).code == 2);
    CHECK(run({"eval", "--fn", "expr", "--expr", "t +"}).code == 2);
  }

  TEST_CASE("io errors exit 3") {
    CHECK(run({"scan", "--to", "20", "--output", "/nonexistent/dir/out.jsonl"}).code == 3);
    CHECK(run({"--catalog", "/nonexistent/catalog.json", "--version"}).code == 3);
    CHECK(run({"sieve", "--x", "100", "--w", "5", "--set", "/nonexistent/set.json"}).code == 3);
  }

  TEST_CASE("version") {
    const auto r = run({"--version"});
    CHECK(r.code == 0);
    CHECK(r.out == "repulse 1.0.0\ncatalog 1.0\n");
  }

  TEST_CASE("sieve command") {
    const auto path = temp_file("repulse_cli_set.json");
    {
      std::ofstream f(path);
      f << R"({"a": 1, "primes": [3, 5, 17, 23], "cutoff": 10000})";
    }
    const auto r = run({"sieve", "--x", "1e4", "--w", "30", "--set", path.string()});
    CHECK(r.code == 0);
    const auto j = json::parse(r.out);
    CHECK(j["Z"].get<double>() <= j["bound"].get<double>());
    CHECK(j["slack"].get<double>() >= 0);
    CHECK(j["pi_u"] == 4);
    std::filesystem::remove(path);
  }

  TEST_CASE("lemma21 is reproducible") {
    const auto a = run({"lemma21", "--trials", "20", "--seed", "3"});
    const auto b = run({"lemma21", "--trials", "20", "--seed", "3"});
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(lines(a.out).size() == 20);
  }

  TEST_CASE("lemma22 streams margins") {
    const auto r = run({"lemma22", "--from", "60", "--to", "70"});
    CHECK(r.code == 0);
    const auto l = lines(r.out);
    REQUIRE(l.size() == 11);
    CHECK(json::parse(l[0])["y"] == 60);
    CHECK(json::parse(l[0])["margin"].get<double>() > 0);
    CHECK(json::parse(r.err)["violations"] == 0);
  }

  TEST_CASE("greedy and profile") {
    const auto g = run({"greedy", "--x", "25", "--a", "1", "--start", "3"});
    CHECK(g.code == 0);
    CHECK(json::parse(g.out)["primes"] == json::parse("[3,5,17,23]"));
    const auto p = run({"profile", "--factorization", "[[3,1],[7,1]]", "--a", "1"});
    CHECK(p.code == 0);
    const auto j = json::parse(p.out);
    CHECK(j["support"]["self_repulsive"] == false);
    CHECK(j["support"]["witness"] == json::parse("[3,7]"));
  }

  TEST_CASE("verify-constants on selected entries") {
    const auto report = temp_file("repulse_cli_report.json");
    const auto r = run({"verify-constants", "--entry", "totient.large_x1", "--entry", "totient.small_range_mertens",
                        "--report", report.string()});
    CHECK(r.code == 0);
    std::ifstream in(report);
    const auto j = json::parse(in);
    REQUIRE(j.size() == 2);
    // catalog order: the small-range entry precedes large_x1
    CHECK(j[0]["name"] == "totient.small_range_mertens");
    CHECK(j[0]["flagged"] == true);
    CHECK(j[0]["margin"].get<double>() < 0);
    CHECK(j[1]["verdict"] == "pass");
    std::filesystem::remove(report);
    CHECK(run({"verify-constants", "--entry", "no.such.entry"}).code == 2);
    // an exceeding entry is a violation, exit 1
    CHECK(run({"verify-constants", "--entry", "odd_prime_product_small_rank"}).code == 1);
  }

  TEST_CASE("catalog override") {
    const char* file = std::getenv("REPULSE_CATALOG");
    if (file == nullptr) return;
    CHECK(run({"--catalog", file, "--version"}).out == "repulse 1.0.0\ncatalog 1.0\n");
  }

  TEST_CASE("binary runs") {
    const char* bin = std::getenv("REPULSE_BIN");
    if (bin == nullptr) return;
    const std::string cmd = std::string(bin) + " eval --fn delta1 --t 73 > /dev/null";
    CHECK(std::system(cmd.c_str()) == 0);
  }
}
