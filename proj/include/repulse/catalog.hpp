#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace repulse::catalog {

enum class Kind { real, prime_rank, axiom };

/// One explicit constant: sup of `expression` over the domain must not exceed
/// `claimed`. Endpoints are closed expressions or "inf".
struct Entry {
  std::string name;
  Kind kind = Kind::real;
  std::string variable = "t";
  std::vector<std::pair<std::string, std::string>> where;
  std::string expression;
  std::string lo = "0";
  std::string hi = "1";
  std::optional<std::string> tail_from;  // f is non-increasing beyond this point
  double claimed = 0;
  bool unimodal = false;
  std::string flag;
  std::string source;
  std::string note;
};

struct Catalog {
  std::string version;
  double tolerance = 2e-3;
  std::vector<Entry> entries;
};

Catalog parse(const nlohmann::json& j);
Catalog load_file(const std::string& path);
Catalog load_default();
const char* default_catalog_text();

enum class Status { pass, exceed, axiom, unverifiable };
const char* to_string(Status s);

struct ConstantCheck {
  std::string name;
  std::string expression;
  std::string domain;
  double claimed = 0;
  double recomputed_sup = 0;
  double argmax = 0;
  double margin = 0;  // claimed - recomputed_sup
  Status status = Status::unverifiable;
  bool flagged = false;
  std::string detail;
};

struct VerifyOptions {
  double tolerance = 2e-3;
  std::size_t grid = 1'000'000;
  unsigned jobs = 1;
};

ConstantCheck verify_constant(const Entry& e, const VerifyOptions& opt);

/// Entries are verified independently; results come back in catalog order.
std::vector<ConstantCheck> verify_all(const std::vector<Entry>& entries, const VerifyOptions& opt);

nlohmann::json to_json(const ConstantCheck& c);

}  // namespace repulse::catalog
