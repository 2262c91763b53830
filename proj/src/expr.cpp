#include "repulse/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>

#include "repulse/bounds.hpp"

namespace repulse::expr {

using ld = long double;

enum class Op { number, var, add, sub, mul, div, pow, neg, call };

enum class Fn { log, exp, sqrt, abs, expm1, log1p, min, max, wexp, delta, eta };

struct Node {
  Op op = Op::number;
  ld value = 0;
  int slot = 0;
  Fn fn = Fn::log;
  std::vector<std::shared_ptr<const Node>> kids;
};

namespace {

struct FnInfo {
  const char* name;
  Fn fn;
  int arity;
};

constexpr FnInfo kFunctions[] = {
    {"log", Fn::log, 1},     {"exp", Fn::exp, 1},     {"sqrt", Fn::sqrt, 1},   {"abs", Fn::abs, 1},
    {"expm1", Fn::expm1, 1}, {"log1p", Fn::log1p, 1}, {"min", Fn::min, 2},     {"max", Fn::max, 2},
    {"wexp", Fn::wexp, 1},   {"delta", Fn::delta, 2}, {"eta", Fn::eta, 2},
};

using NodePtr = std::shared_ptr<Node>;

class Parser {
 public:
  Parser(const std::string& s, const std::vector<std::string>& vars) : s_(s), vars_(vars) {}

  NodePtr run() {
    NodePtr n = expression();
    skip();
    if (pos_ != s_.size()) throw ParseError("unexpected '" + std::string(1, s_[pos_]) + "'", pos_);
    return n;
  }

 private:
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!accept(c)) throw ParseError(std::string("expected '") + c + "'", pos_);
  }

  static NodePtr binary(Op op, NodePtr a, NodePtr b) {
    auto n = std::make_shared<Node>();
    n->op = op;
    n->kids = {std::move(a), std::move(b)};
    return n;
  }

  NodePtr expression() {
    NodePtr n = term();
    for (;;) {
      if (accept('+')) {
        n = binary(Op::add, n, term());
      } else if (accept('-')) {
        n = binary(Op::sub, n, term());
      } else {
        return n;
      }
    }
  }

  NodePtr term() {
    NodePtr n = unary();
    for (;;) {
      if (accept('*')) {
        n = binary(Op::mul, n, unary());
      } else if (accept('/')) {
        n = binary(Op::div, n, unary());
      } else {
        return n;
      }
    }
  }

  NodePtr unary() {
    if (accept('-')) {
      auto n = std::make_shared<Node>();
      n->op = Op::neg;
      n->kids = {unary()};
      return n;
    }
    if (accept('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (accept('^')) return binary(Op::pow, base, unary());
    return base;
  }

  NodePtr primary() {
    skip();
    if (pos_ >= s_.size()) throw ParseError("unexpected end of expression", pos_);
    if (accept('(')) {
      NodePtr n = expression();
      expect(')');
      return n;
    }
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* start = s_.c_str() + pos_;
      char* end = nullptr;
      const ld v = std::strtold(start, &end);
      if (end == start) throw ParseError("bad number", pos_);
      pos_ += static_cast<std::size_t>(end - start);
      auto n = std::make_shared<Node>();
      n->value = v;
      return n;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t at = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      const std::string id = s_.substr(at, pos_ - at);
      skip();
      if (pos_ < s_.size() && s_[pos_] == '(') return call(id, at);
      for (std::size_t i = 0; i < vars_.size(); ++i) {
        if (vars_[i] == id) {
          auto n = std::make_shared<Node>();
          n->op = Op::var;
          n->slot = static_cast<int>(i);
          return n;
        }
      }
      auto n = std::make_shared<Node>();
      if (id == "gamma") {
        n->value = bounds::kGamma;
      } else if (id == "pi") {
        n->value = 3.14159265358979323846264338327950288L;
      } else if (id == "e") {
        n->value = 2.71828182845904523536028747135266250L;
      } else {
        throw ParseError("unknown identifier '" + id + "'", at);
      }
      return n;
    }
    throw ParseError("unexpected '" + std::string(1, c) + "'", pos_);
  }

  NodePtr call(const std::string& id, std::size_t at) {
    const FnInfo* info = nullptr;
    for (const auto& f : kFunctions) {
      if (id == f.name) info = &f;
    }
    if (!info) throw ParseError("unknown function '" + id + "'", at);
    expect('(');
    auto n = std::make_shared<Node>();
    n->op = Op::call;
    n->fn = info->fn;
    n->kids.push_back(expression());
    while (accept(',')) n->kids.push_back(expression());
    expect(')');
    if (static_cast<int>(n->kids.size()) != info->arity) {
      throw ParseError(id + " takes " + std::to_string(info->arity) + " argument(s)", at);
    }
    return n;
  }

  const std::string& s_;
  const std::vector<std::string>& vars_;
  std::size_t pos_ = 0;
};

ld apply(Fn fn, const ld* a) {
  switch (fn) {
    case Fn::log: return std::log(a[0]);
    case Fn::exp: return std::exp(a[0]);
    case Fn::sqrt: return std::sqrt(a[0]);
    case Fn::abs: return std::fabs(a[0]);
    case Fn::expm1: return std::expm1(a[0]);
    case Fn::log1p: return std::log1p(a[0]);
    case Fn::min: return std::fmin(a[0], a[1]);
    case Fn::max: return std::fmax(a[0], a[1]);
    case Fn::wexp: return wexp(a[0]);
    case Fn::delta: return bounds::delta(static_cast<double>(a[0]), static_cast<double>(a[1]));
    case Fn::eta: return bounds::eta(static_cast<double>(a[0]), static_cast<double>(a[1]));
  }
  return NAN;
}

ld eval_node(const Node& n, const ld* vars) {
  switch (n.op) {
    case Op::number: return n.value;
    case Op::var: return vars[n.slot];
    case Op::add: return eval_node(*n.kids[0], vars) + eval_node(*n.kids[1], vars);
    case Op::sub: return eval_node(*n.kids[0], vars) - eval_node(*n.kids[1], vars);
    case Op::mul: return eval_node(*n.kids[0], vars) * eval_node(*n.kids[1], vars);
    case Op::div: return eval_node(*n.kids[0], vars) / eval_node(*n.kids[1], vars);
    case Op::pow: {
      const ld b = eval_node(*n.kids[0], vars);
      const ld e = eval_node(*n.kids[1], vars);
      if (e == 2) return b * b;
      if (e == 3) return b * b * b;
      return std::pow(b, e);
    }
    case Op::neg: return -eval_node(*n.kids[0], vars);
    case Op::call: {
      ld args[2] = {0, 0};
      for (std::size_t i = 0; i < n.kids.size(); ++i) args[i] = eval_node(*n.kids[i], vars);
      return apply(n.fn, args);
    }
  }
  return NAN;
}

}  // namespace

ParseError::ParseError(const std::string& what, std::size_t pos)
    : std::invalid_argument(what + " at position " + std::to_string(pos)), pos_(pos) {}

Expression Expression::parse(const std::string& text, const std::vector<std::string>& variables) {
  Expression e;
  e.root_ = Parser(text, variables).run();
  e.text_ = text;
  return e;
}

long double Expression::eval(const long double* values) const {
  if (!root_) return NAN;
  return eval_node(*root_, values);
}

Program::Program(const std::string& variable, const std::vector<std::pair<std::string, std::string>>& where,
                 const std::string& body) {
  std::vector<std::string> names{variable};
  for (const auto& [name, text] : where) {
    defs_.push_back(Expression::parse(text, names));
    names.push_back(name);
  }
  body_ = Expression::parse(body, names);
}

long double Program::operator()(long double x) const {
  ld slots[16];
  std::vector<ld> heap;
  ld* v = slots;
  if (defs_.size() + 1 > 16) {
    heap.resize(defs_.size() + 1);
    v = heap.data();
  }
  v[0] = x;
  for (std::size_t i = 0; i < defs_.size(); ++i) v[i + 1] = defs_[i].eval(v);
  return body_.eval(v);
}

long double eval_constant(const std::string& text) {
  if (text == "inf") return INFINITY;
  return Expression::parse(text, {}).eval(nullptr);
}

long double wexp(long double t) {
  // Newton on h(w) = w + log w - t, which is increasing and concave in w > 0.
  ld w = t > 1 ? t - std::log(t) : std::exp(t);
  if (!(w > 0)) w = 1e-300L;
  for (int i = 0; i < 100; ++i) {
    const ld step = (w + std::log(w) - t) / (1 + 1 / w);
    ld next = w - step;
    if (next <= 0) next = w / 2;
    if (std::fabs(next - w) <= 1e-18L * std::fabs(w)) return next;
    w = next;
  }
  return w;
}

}  // namespace repulse::expr
