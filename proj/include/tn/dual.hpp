#pragma once

#include <cmath>
#include <type_traits>

namespace tn {

// Forward-mode dual number. Nesting Dual<Dual<T>> gives exact higher
// derivatives: each level carries one seeded direction.
template <class T>
struct Dual {
  T v{};
  T d{};

  constexpr Dual() = default;
  constexpr Dual(double c) : v(c), d(0.0) {}  // NOLINT(google-explicit-constructor)
  constexpr Dual(T value, T tangent) : v(value), d(tangent) {}

  constexpr Dual& operator+=(const Dual& o) { v += o.v; d += o.d; return *this; }
  constexpr Dual& operator-=(const Dual& o) { v -= o.v; d -= o.d; return *this; }
  constexpr Dual& operator*=(const Dual& o) { *this = *this * o; return *this; }
  constexpr Dual& operator/=(const Dual& o) { *this = *this / o; return *this; }

  friend constexpr Dual operator+(const Dual& a, const Dual& b) { return {a.v + b.v, a.d + b.d}; }
  friend constexpr Dual operator-(const Dual& a, const Dual& b) { return {a.v - b.v, a.d - b.d}; }
  friend constexpr Dual operator-(const Dual& a) { return {-a.v, -a.d}; }
  friend constexpr Dual operator*(const Dual& a, const Dual& b) { return {a.v * b.v, a.d * b.v + a.v * b.d}; }
  friend constexpr Dual operator/(const Dual& a, const Dual& b) {
    T q = a.v / b.v;
    return {q, (a.d - q * b.d) / b.v};
  }
  friend constexpr Dual operator*(const Dual& a, double s) { return {a.v * s, a.d * s}; }
  friend constexpr Dual operator*(double s, const Dual& a) { return {a.v * s, a.d * s}; }
  friend constexpr Dual operator+(const Dual& a, double s) { return {a.v + s, a.d}; }
  friend constexpr Dual operator+(double s, const Dual& a) { return {a.v + s, a.d}; }
  friend constexpr Dual operator-(const Dual& a, double s) { return {a.v - s, a.d}; }
  friend constexpr Dual operator-(double s, const Dual& a) { return {s - a.v, -a.d}; }
  friend constexpr Dual operator/(const Dual& a, double s) { return {a.v / s, a.d / s}; }
};

using D1 = Dual<double>;
using D2 = Dual<D1>;
using D3 = Dual<D2>;
using D4 = Dual<D3>;

template <class T>
struct is_dual : std::false_type {};
template <class T>
struct is_dual<Dual<T>> : std::true_type {};

constexpr double primal(double x) { return x; }
template <class T>
constexpr double primal(const Dual<T>& x) { return primal(x.v); }

template <class T>
Dual<T> sin(const Dual<T>& x) {
  using std::cos;
  using std::sin;
  return {sin(x.v), cos(x.v) * x.d};
}

template <class T>
Dual<T> cos(const Dual<T>& x) {
  using std::cos;
  using std::sin;
  return {cos(x.v), -(sin(x.v) * x.d)};
}

template <class T>
Dual<T> tan(const Dual<T>& x) {
  using std::tan;
  T t = tan(x.v);
  return {t, (1.0 + t * t) * x.d};
}

template <class T>
Dual<T> exp(const Dual<T>& x) {
  using std::exp;
  T e = exp(x.v);
  return {e, e * x.d};
}

template <class T>
Dual<T> log(const Dual<T>& x) {
  using std::log;
  return {log(x.v), x.d / x.v};
}

template <class T>
Dual<T> sqrt(const Dual<T>& x) {
  using std::sqrt;
  T s = sqrt(x.v);
  return {s, x.d / (2.0 * s)};
}

template <class T>
Dual<T> abs(const Dual<T>& x) {
  return primal(x) < 0.0 ? -x : x;
}

// Real power with a constant exponent; caller guarantees a positive base.
template <class T>
Dual<T> pow(const Dual<T>& x, double c) {
  using std::pow;
  return {pow(x.v, c), c * pow(x.v, c - 1.0) * x.d};
}

// Integer power by repeated squaring; exact for polynomials.
template <class T>
T ipow(const T& x, long k) {
  if (k < 0) return T(1.0) / ipow(x, -k);
  T result(1.0);
  T base = x;
  while (k > 0) {
    if (k & 1) result = result * base;
    base = base * base;
    k >>= 1;
  }
  return result;
}

// Lifts a scalar with derivative seeds. seed(x, a, b, c) for D3 places the
// coordinate value x with unit tangents a, b, c at the three nesting levels.
inline D1 seed1(double x, double a) { return {x, a}; }
inline D2 seed2(double x, double a, double b) { return {D1{x, a}, D1{b, 0.0}}; }
inline D3 seed3(double x, double a, double b, double c) {
  return {D2{D1{x, a}, D1{b, 0.0}}, D2{D1{c, 0.0}, D1{0.0, 0.0}}};
}

}  // namespace tn
