#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace repulse::expr {

class ParseError : public std::invalid_argument {
 public:
  ParseError(const std::string& what, std::size_t pos);
  std::size_t position() const { return pos_; }

 private:
  std::size_t pos_;
};

struct Node;

/// Real-valued expression over named variables. Grammar: + - * / ^ (right
/// associative), unary minus, parentheses, numbers, the constants gamma, pi
/// and e, and the functions log exp sqrt abs expm1 log1p min max wexp
/// delta(t, c) eta(t, c). wexp(t) solves w + log w = t, i.e. W(e^t).
class Expression {
 public:
  Expression() = default;
  static Expression parse(const std::string& text, const std::vector<std::string>& variables);

  long double eval(const long double* values) const;
  const std::string& text() const { return text_; }

 private:
  std::shared_ptr<const Node> root_;
  std::string text_;
};

/// A body expression in one variable preceded by ordered definitions; each
/// definition may use the variable and earlier definitions.
class Program {
 public:
  Program(const std::string& variable, const std::vector<std::pair<std::string, std::string>>& where,
          const std::string& body);

  long double operator()(long double x) const;

 private:
  std::vector<Expression> defs_;
  Expression body_;
};

/// Evaluates a closed expression, e.g. a domain endpoint such as "wexp(72)".
long double eval_constant(const std::string& text);

/// W(e^t) for real t.
long double wexp(long double t);

}  // namespace repulse::expr
