#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tn/dual.hpp"
#include "tn/tensor.hpp"

namespace tn {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

class UndeclaredIdentifier : public std::runtime_error {
 public:
  explicit UndeclaredIdentifier(std::string name)
      : std::runtime_error("undeclared identifier '" + name + "'"), name_(std::move(name)) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

// Raised when an expression is evaluated outside the domain of one of its
// nodes. node() is the printed subexpression that failed.
class DomainError : public std::runtime_error {
 public:
  DomainError(const std::string& what, std::string node)
      : std::runtime_error(what + " in '" + node + "'"), node_(std::move(node)) {}
  const std::string& node() const { return node_; }

 private:
  std::string node_;
};

enum class Op : std::uint8_t { Const, Var, Neg, Add, Sub, Mul, Div, Pow, Sin, Cos, Tan, Exp, Log, Sqrt, Abs };

struct Node {
  Op op = Op::Const;
  double value = 0.0;
  int var = -1;
  int lhs = -1;
  int rhs = -1;
};

/// Immutable arithmetic expression over an ordered list of variables.
///
/// Grammar, loosest binding first: `+ -`, `* /`, unary `-`, `^` (right
/// associative, exponent may carry a unary minus). Functions are sin, cos,
/// tan, exp, log, sqrt, abs with a parenthesized argument. to_string()
/// prints the same grammar and round-trips through parse().
class Expression {
 public:
  Expression() = default;

  static Expression parse(std::string_view source, std::vector<std::string> variables);
  static Expression constant(double c, std::vector<std::string> variables = {});

  const std::vector<std::string>& variables() const { return variables_; }
  std::size_t arity() const { return variables_.size(); }
  bool empty() const { return nodes_.empty(); }

  std::string to_string() const;
  std::string to_string(int node) const;

  /// Structural AST equality (same variables, same tree).
  bool operator==(const Expression& other) const;

  template <class T>
  T evaluate(std::span<const T> x) const {
    return eval_node<T>(root_, x);
  }
  double operator()(std::span<const double> x) const { return evaluate<double>(x); }
  double operator()(const Vec& x) const {
    return evaluate<double>(std::span<const double>(x.data(), static_cast<std::size_t>(x.size())));
  }

  const std::vector<Node>& nodes() const { return nodes_; }
  int root() const { return root_; }

 private:
  friend class ExprParser;

  bool subtree_equal(int a, const Expression& other, int b) const;
  bool is_constant(int node) const;
  double constant_value(int node) const;
  [[noreturn]] void domain_fail(const std::string& what, int node) const;

  template <class T>
  T eval_node(int idx, std::span<const T> x) const;

  std::vector<Node> nodes_;
  int root_ = -1;
  std::vector<std::string> variables_;
};

template <class T>
T Expression::eval_node(int idx, std::span<const T> x) const {
  using std::cos;
  using std::exp;
  using std::log;
  using std::sin;
  using std::sqrt;
  using std::tan;
  const Node& nd = nodes_[static_cast<std::size_t>(idx)];
  switch (nd.op) {
    case Op::Const:
      return T(nd.value);
    case Op::Var:
      return x[static_cast<std::size_t>(nd.var)];
    case Op::Neg:
      return -eval_node<T>(nd.lhs, x);
    case Op::Add:
      return eval_node<T>(nd.lhs, x) + eval_node<T>(nd.rhs, x);
    case Op::Sub:
      return eval_node<T>(nd.lhs, x) - eval_node<T>(nd.rhs, x);
    case Op::Mul:
      return eval_node<T>(nd.lhs, x) * eval_node<T>(nd.rhs, x);
    case Op::Div: {
      T den = eval_node<T>(nd.rhs, x);
      if (primal(den) == 0.0) domain_fail("division by zero", idx);
      return eval_node<T>(nd.lhs, x) / den;
    }
    case Op::Pow: {
      T base = eval_node<T>(nd.lhs, x);
      if (is_constant(nd.rhs)) {
        double c = constant_value(nd.rhs);
        if (c == std::round(c) && std::abs(c) <= 1024.0) {
          if (c < 0.0 && primal(base) == 0.0) domain_fail("negative power of zero", idx);
          return ipow(base, static_cast<long>(c));
        }
        if (primal(base) <= 0.0) domain_fail("non-integer power of non-positive base", idx);
        if constexpr (std::is_same_v<T, double>) {
          return std::pow(base, c);
        } else {
          return pow(base, c);
        }
      }
      if (primal(base) <= 0.0) domain_fail("variable power of non-positive base", idx);
      return exp(eval_node<T>(nd.rhs, x) * log(base));
    }
    case Op::Sin:
      return sin(eval_node<T>(nd.lhs, x));
    case Op::Cos:
      return cos(eval_node<T>(nd.lhs, x));
    case Op::Tan: {
      T a = eval_node<T>(nd.lhs, x);
      if (std::abs(std::cos(primal(a))) < 1e-15) domain_fail("tan at a pole", idx);
      return tan(a);
    }
    case Op::Exp:
      return exp(eval_node<T>(nd.lhs, x));
    case Op::Log: {
      T a = eval_node<T>(nd.lhs, x);
      if (primal(a) <= 0.0) domain_fail("log of non-positive argument", idx);
      return log(a);
    }
    case Op::Sqrt: {
      T a = eval_node<T>(nd.lhs, x);
      if (primal(a) <= 0.0) domain_fail("sqrt of non-positive argument", idx);
      return sqrt(a);
    }
    case Op::Abs: {
      T a = eval_node<T>(nd.lhs, x);
      if (std::abs(primal(a)) < 1e-12) domain_fail("abs is not differentiable at 0", idx);
      return primal(a) < 0.0 ? T(-a) : a;
    }
  }
  domain_fail("corrupt expression node", idx);
}

/// Value and all partial derivatives up to third order at a point.
struct Jet3 {
  double value = 0.0;
  Vec grad;
  Mat hess;
  Tensor3 third;  // third(i,j,k) = d_i d_j d_k f
};

/// Exact derivatives of e at x via nested dual numbers. Entries above
/// max_order are left zero.
Jet3 eval_jet3(const Expression& e, const Vec& x, int max_order = 3);

/// Gradient of e evaluated at a point whose coordinates are themselves dual
/// numbers; used to differentiate expressions composed with other maps.
template <class T>
std::vector<T> gradient_at(const Expression& e, std::span<const T> x) {
  const std::size_t n = x.size();
  std::vector<T> out(n);
  std::vector<Dual<T>> xs(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) xs[j] = Dual<T>{x[j], T(i == j ? 1.0 : 0.0)};
    out[i] = e.evaluate<Dual<T>>(std::span<const Dual<T>>(xs)).d;
  }
  return out;
}

/// Default chart variable names x1..xn.
std::vector<std::string> default_variables(int n);

}  // namespace tn
