#include "tn/expr.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <unordered_set>

namespace tn {

namespace {

struct FunctionName {
  std::string_view name;
  Op op;
};

constexpr std::array<FunctionName, 7> kFunctions = {{{"sin", Op::Sin},
                                                     {"cos", Op::Cos},
                                                     {"tan", Op::Tan},
                                                     {"exp", Op::Exp},
                                                     {"log", Op::Log},
                                                     {"sqrt", Op::Sqrt},
                                                     {"abs", Op::Abs}}};

bool is_function(Op op) { return op >= Op::Sin; }

std::string_view function_name(Op op) {
  for (const auto& f : kFunctions)
    if (f.op == op) return f.name;
  return "?";
}

// Binding strength used by the printer; atoms bind tightest.
int precedence(Op op) {
  switch (op) {
    case Op::Add:
    case Op::Sub:
      return 1;
    case Op::Mul:
    case Op::Div:
      return 2;
    case Op::Neg:
      return 3;
    case Op::Pow:
      return 4;
    default:
      return 5;
  }
}

std::string format_number(double v) {
  std::array<char, 64> buf{};
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

}  // namespace

class ExprParser {
 public:
  ExprParser(std::string_view src, const std::vector<std::string>& vars, Expression& out)
      : src_(src), vars_(vars), out_(out) {}

  int parse() {
    skip_ws();
    if (pos_ >= src_.size()) throw ParseError("empty expression", pos_);
    int root = parse_sum();
    skip_ws();
    if (pos_ < src_.size()) throw ParseError(std::string("unexpected '") + src_[pos_] + "'", pos_);
    return root;
  }

 private:
  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  int add(Node n) {
    out_.nodes_.push_back(n);
    return static_cast<int>(out_.nodes_.size()) - 1;
  }

  int parse_sum() {
    int lhs = parse_product();
    for (;;) {
      if (accept('+')) {
        lhs = add({Op::Add, 0.0, -1, lhs, parse_product()});
      } else if (accept('-')) {
        lhs = add({Op::Sub, 0.0, -1, lhs, parse_product()});
      } else {
        return lhs;
      }
    }
  }

  int parse_product() {
    int lhs = parse_unary();
    for (;;) {
      if (accept('*')) {
        lhs = add({Op::Mul, 0.0, -1, lhs, parse_unary()});
      } else if (accept('/')) {
        lhs = add({Op::Div, 0.0, -1, lhs, parse_unary()});
      } else {
        return lhs;
      }
    }
  }

  int parse_unary() {
    if (accept('-')) return add({Op::Neg, 0.0, -1, parse_unary(), -1});
    return parse_power();
  }

  int parse_power() {
    int base = parse_primary();
    if (accept('^')) return add({Op::Pow, 0.0, -1, base, parse_unary()});
    return base;
  }

  int parse_primary() {
    skip_ws();
    if (pos_ >= src_.size()) throw ParseError("expected operand, found end of input", pos_);
    const char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      int inner = parse_sum();
      if (!accept(')')) throw ParseError("expected ')'", pos_);
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
    throw ParseError(std::string("expected operand, found '") + c + "'", pos_);
  }

  int parse_number() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() && (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.')) ++pos_;
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t look = pos_ + 1;
      if (look < src_.size() && (src_[look] == '+' || src_[look] == '-')) ++look;
      if (look < src_.size() && std::isdigit(static_cast<unsigned char>(src_[look]))) {
        pos_ = look;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      }
    }
    double v = 0.0;
    auto res = std::from_chars(src_.data() + start, src_.data() + pos_, v);
    if (res.ec != std::errc() || res.ptr != src_.data() + pos_) throw ParseError("malformed number", start);
    return add({Op::Const, v, -1, -1, -1});
  }

  int parse_identifier() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) ++pos_;
    const std::string name(src_.substr(start, pos_ - start));
    for (const auto& f : kFunctions) {
      if (f.name == name) {
        if (!accept('(')) throw ParseError("expected '(' after function '" + name + "'", pos_);
        int arg = parse_sum();
        if (!accept(')')) throw ParseError("expected ')'", pos_);
        return add({f.op, 0.0, -1, arg, -1});
      }
    }
    for (std::size_t i = 0; i < vars_.size(); ++i)
      if (vars_[i] == name) return add({Op::Var, 0.0, static_cast<int>(i), -1, -1});
    throw UndeclaredIdentifier(name);
  }

  std::string_view src_;
  const std::vector<std::string>& vars_;
  Expression& out_;
  std::size_t pos_ = 0;
};

Expression Expression::parse(std::string_view source, std::vector<std::string> variables) {
  std::unordered_set<std::string> seen;
  for (const auto& v : variables) {
    if (v.empty() || !(std::isalpha(static_cast<unsigned char>(v[0])) || v[0] == '_'))
      throw std::invalid_argument("invalid variable name '" + v + "'");
    for (const auto& f : kFunctions)
      if (f.name == v) throw std::invalid_argument("variable name '" + v + "' shadows a function");
    if (!seen.insert(v).second) throw std::invalid_argument("duplicate variable '" + v + "'");
  }
  Expression e;
  e.variables_ = std::move(variables);
  ExprParser parser(source, e.variables_, e);
  e.root_ = parser.parse();
  return e;
}

Expression Expression::constant(double c, std::vector<std::string> variables) {
  Expression e;
  e.variables_ = std::move(variables);
  if (c < 0.0) {
    e.nodes_.push_back({Op::Const, -c, -1, -1, -1});
    e.nodes_.push_back({Op::Neg, 0.0, -1, 0, -1});
    e.root_ = 1;
  } else {
    e.nodes_.push_back({Op::Const, c, -1, -1, -1});
    e.root_ = 0;
  }
  return e;
}

std::string Expression::to_string() const { return root_ < 0 ? std::string() : to_string(root_); }

std::string Expression::to_string(int idx) const {
  const Node& nd = nodes_[static_cast<std::size_t>(idx)];
  auto wrap = [&](int child, bool parens) {
    std::string s = to_string(child);
    return parens ? "(" + s + ")" : s;
  };
  const int prec = precedence(nd.op);
  switch (nd.op) {
    case Op::Const:
      return nd.value < 0.0 ? "(" + format_number(nd.value) + ")" : format_number(nd.value);
    case Op::Var:
      return variables_[static_cast<std::size_t>(nd.var)];
    case Op::Neg:
      return "-" + wrap(nd.lhs, precedence(nodes_[nd.lhs].op) < prec);
    case Op::Add:
    case Op::Sub:
    case Op::Mul:
    case Op::Div: {
      const char* sym = nd.op == Op::Add ? " + " : nd.op == Op::Sub ? " - " : nd.op == Op::Mul ? " * " : " / ";
      return wrap(nd.lhs, precedence(nodes_[nd.lhs].op) < prec) + sym +
             wrap(nd.rhs, precedence(nodes_[nd.rhs].op) <= prec);
    }
    case Op::Pow:
      return wrap(nd.lhs, precedence(nodes_[nd.lhs].op) <= prec) + "^" +
             wrap(nd.rhs, precedence(nodes_[nd.rhs].op) < precedence(Op::Neg));
    default:
      if (is_function(nd.op)) return std::string(function_name(nd.op)) + "(" + to_string(nd.lhs) + ")";
  }
  return "?";
}

bool Expression::operator==(const Expression& other) const {
  if (variables_ != other.variables_) return false;
  if (root_ < 0 || other.root_ < 0) return root_ == other.root_;
  return subtree_equal(root_, other, other.root_);
}

bool Expression::subtree_equal(int a, const Expression& other, int b) const {
  const Node& x = nodes_[static_cast<std::size_t>(a)];
  const Node& y = other.nodes_[static_cast<std::size_t>(b)];
  if (x.op != y.op) return false;
  switch (x.op) {
    case Op::Const:
      return x.value == y.value;
    case Op::Var:
      return x.var == y.var;
    default:
      break;
  }
  if ((x.lhs < 0) != (y.lhs < 0) || (x.rhs < 0) != (y.rhs < 0)) return false;
  if (x.lhs >= 0 && !subtree_equal(x.lhs, other, y.lhs)) return false;
  if (x.rhs >= 0 && !subtree_equal(x.rhs, other, y.rhs)) return false;
  return true;
}

bool Expression::is_constant(int idx) const {
  const Node& nd = nodes_[static_cast<std::size_t>(idx)];
  if (nd.op == Op::Var) return false;
  if (nd.lhs >= 0 && !is_constant(nd.lhs)) return false;
  if (nd.rhs >= 0 && !is_constant(nd.rhs)) return false;
  return true;
}

double Expression::constant_value(int idx) const { return eval_node<double>(idx, std::span<const double>()); }

void Expression::domain_fail(const std::string& what, int idx) const { throw DomainError(what, to_string(idx)); }

Jet3 eval_jet3(const Expression& e, const Vec& x, int max_order) {
  const auto n = static_cast<int>(x.size());
  if (static_cast<std::size_t>(n) != e.arity())
    throw std::invalid_argument("eval_jet3: point has " + std::to_string(n) + " coordinates, expression expects " +
                                std::to_string(e.arity()));
  Jet3 jet;
  jet.grad = Vec::Zero(n);
  jet.hess = Mat::Zero(n, n);
  jet.third = zeros3(n, n, n);

  if (max_order <= 0 || n == 0) {
    jet.value = e.evaluate<double>(std::span<const double>(x.data(), static_cast<std::size_t>(n)));
    return jet;
  }
  if (max_order == 1) {
    std::vector<D1> xs(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      for (int m = 0; m < n; ++m) xs[m] = seed1(x[m], m == i ? 1.0 : 0.0);
      D1 r = e.evaluate<D1>(xs);
      jet.value = r.v;
      jet.grad[i] = r.d;
    }
    return jet;
  }
  if (max_order == 2) {
    std::vector<D2> xs(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) {
        for (int m = 0; m < n; ++m) xs[m] = seed2(x[m], m == i ? 1.0 : 0.0, m == j ? 1.0 : 0.0);
        D2 r = e.evaluate<D2>(xs);
        jet.value = r.v.v;
        jet.grad[i] = r.v.d;
        jet.grad[j] = r.d.v;
        jet.hess(i, j) = jet.hess(j, i) = r.d.d;
      }
    }
    return jet;
  }
  std::vector<D3> xs(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      for (int k = j; k < n; ++k) {
        for (int m = 0; m < n; ++m)
          xs[m] = seed3(x[m], m == i ? 1.0 : 0.0, m == j ? 1.0 : 0.0, m == k ? 1.0 : 0.0);
        D3 r = e.evaluate<D3>(xs);
        jet.value = r.v.v.v;
        jet.grad[i] = r.v.v.d;
        jet.grad[j] = r.v.d.v;
        jet.grad[k] = r.d.v.v;
        jet.hess(i, j) = jet.hess(j, i) = r.v.d.d;
        jet.hess(i, k) = jet.hess(k, i) = r.d.v.d;
        jet.hess(j, k) = jet.hess(k, j) = r.d.d.v;
        const double t = r.d.d.d;
        jet.third(i, j, k) = jet.third(i, k, j) = jet.third(j, i, k) = t;
        jet.third(j, k, i) = jet.third(k, i, j) = jet.third(k, j, i) = t;
      }
    }
  }
  return jet;
}

std::vector<std::string> default_variables(int n) {
  std::vector<std::string> v;
  for (int i = 1; i <= n; ++i) v.push_back("x" + std::to_string(i));
  return v;
}

}  // namespace tn
