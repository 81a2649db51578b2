#include "rearr/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <vector>

#include "rearr/error.hpp"
#include "rearr/special.hpp"

namespace rearr {

struct Expression::Node {
  enum class Kind { Number, Var, Neg, Add, Sub, Mul, Div, Pow, Call } kind = Kind::Number;
  double value = 0.0;
  int var = 0;
  std::string name;
  std::vector<std::shared_ptr<const Node>> args;
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Kind = Expression::Node::Kind;

NodePtr make(Kind k, std::vector<NodePtr> args = {}) {
  auto n = std::make_shared<Expression::Node>();
  n->kind = k;
  n->args = std::move(args);
  return n;
}

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  NodePtr parse() {
    NodePtr e = expression();
    skip();
    if (pos_ != s_.size()) fail("unexpected character");
    return e;
  }

  int max_coordinate = -1;

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw PreconditionError("expression: " + what + " at position " + std::to_string(pos_) + " in '" + s_ + "'");
  }

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
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  NodePtr expression() {
    NodePtr lhs = term();
    while (true) {
      if (accept('+')) lhs = make(Kind::Add, {lhs, term()});
      else if (accept('-')) lhs = make(Kind::Sub, {lhs, term()});
      else return lhs;
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    while (true) {
      if (accept('*')) lhs = make(Kind::Mul, {lhs, unary()});
      else if (accept('/')) lhs = make(Kind::Div, {lhs, unary()});
      else return lhs;
    }
  }

  NodePtr unary() {
    if (accept('-')) return make(Kind::Neg, {unary()});
    if (accept('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (accept('^')) return make(Kind::Pow, {base, unary()});
    return base;
  }

  NodePtr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const char c = s_[pos_];
    if (accept('(')) {
      NodePtr e = expression();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    fail("unexpected character");
  }

  NodePtr number() {
    const char* start = s_.c_str() + pos_;
    char* end = nullptr;
    const double v = std::strtod(start, &end);
    if (end == start) fail("malformed number");
    pos_ += static_cast<std::size_t>(end - start);
    auto n = std::make_shared<Expression::Node>();
    n->kind = Kind::Number;
    n->value = v;
    return n;
  }

  NodePtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    const std::string id = s_.substr(start, pos_ - start);
    if (id == "pi") {
      auto n = std::make_shared<Expression::Node>();
      n->value = special::kPi;
      return n;
    }
    if (id[0] == 'x') {
      int index = 0;
      if (id.size() > 1) {
        for (std::size_t i = 1; i < id.size(); ++i)
          if (!std::isdigit(static_cast<unsigned char>(id[i]))) {
            pos_ = start;
            fail("unknown identifier '" + id + "'");
          }
        index = std::atoi(id.c_str() + 1) - 1;
        if (index < 0) {
          pos_ = start;
          fail("coordinates are numbered from x1");
        }
      }
      auto n = std::make_shared<Expression::Node>();
      n->kind = Kind::Var;
      n->var = index;
      max_coordinate = std::max(max_coordinate, index);
      return n;
    }
    static const std::vector<std::pair<std::string, int>> functions{
        {"abs", 1}, {"exp", 1}, {"log", 1}, {"sqrt", 1}, {"sin", 1}, {"cos", 1},
        {"step", 1}, {"min", -2}, {"max", -2}, {"dist", -2}};
    int arity = 0;
    for (const auto& [name, a] : functions)
      if (name == id) arity = a;
    if (arity == 0) {
      pos_ = start;
      fail("unknown identifier '" + id + "'");
    }
    expect('(');
    auto n = std::make_shared<Expression::Node>();
    n->kind = Kind::Call;
    n->name = id;
    n->args.push_back(expression());
    while (accept(',')) n->args.push_back(expression());
    expect(')');
    const auto count = static_cast<int>(n->args.size());
    if ((arity > 0 && count != arity) || (arity < 0 && count < -arity)) {
      pos_ = start;
      fail("wrong number of arguments to " + id);
    }
    if (id == "dist" && n->args.front()->kind != Kind::Var) {
      pos_ = start;
      fail("dist expects the variable x as its first argument");
    }
    return n;
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

double eval(const Expression::Node& n, std::span<const double> x) {
  auto arg = [&](std::size_t i) { return eval(*n.args[i], x); };
  switch (n.kind) {
    case Kind::Number: return n.value;
    case Kind::Var:
      require(static_cast<std::size_t>(n.var) < x.size(), "expression: coordinate out of range");
      return x[static_cast<std::size_t>(n.var)];
    case Kind::Neg: return -arg(0);
    case Kind::Add: return arg(0) + arg(1);
    case Kind::Sub: return arg(0) - arg(1);
    case Kind::Mul: return arg(0) * arg(1);
    case Kind::Div: return arg(0) / arg(1);
    case Kind::Pow: return std::pow(arg(0), arg(1));
    case Kind::Call: break;
  }
  const std::string& f = n.name;
  if (f == "abs") return std::fabs(arg(0));
  if (f == "exp") return std::exp(arg(0));
  if (f == "log") return std::log(arg(0));
  if (f == "sqrt") return std::sqrt(arg(0));
  if (f == "sin") return std::sin(arg(0));
  if (f == "cos") return std::cos(arg(0));
  if (f == "step") return arg(0) > 0.0 ? 1.0 : 0.0;
  if (f == "min" || f == "max") {
    double v = arg(0);
    for (std::size_t i = 1; i < n.args.size(); ++i) v = f == "min" ? std::min(v, arg(i)) : std::max(v, arg(i));
    return v;
  }
  // dist(x, c1, ..., cn): Euclidean distance over the listed centre coordinates.
  const std::size_t dims = n.args.size() - 1;
  require(dims <= x.size(), "expression: dist centre has more coordinates than the point");
  double s = 0.0;
  for (std::size_t i = 0; i < dims; ++i) {
    const double d = x[i] - arg(i + 1);
    s += d * d;
  }
  return std::sqrt(s);
}

}  // namespace

Expression Expression::parse(const std::string& text) {
  Parser p(text);
  Expression e;
  e.root_ = p.parse();
  e.text_ = text;
  e.max_coordinate_ = p.max_coordinate;
  return e;
}

double Expression::operator()(std::span<const double> x) const { return eval(*root_, x); }

}  // namespace rearr
