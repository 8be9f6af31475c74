#pragma once

// Forward-mode dual numbers. Nesting Dual<Dual<double>> gives mixed second
// derivatives, Dual<Dual<Dual<double>>> third derivatives.
//
//   Dual<double> x{2.0, 1.0};
//   auto y = x * x;          // y.re == 4, y.du == 4

#include <cmath>
#include <type_traits>

namespace tbgeom {

template <class T>
struct Dual {
  T re{};
  T du{};

  constexpr Dual() = default;
  constexpr Dual(const T& value, const T& derivative) : re(value), du(derivative) {}
  template <class S>
    requires std::is_arithmetic_v<S>
  constexpr Dual(S value) : re(static_cast<double>(value)), du(0.0) {}

  constexpr Dual& operator+=(const Dual& o) { re += o.re; du += o.du; return *this; }
  constexpr Dual& operator-=(const Dual& o) { re -= o.re; du -= o.du; return *this; }
  constexpr Dual& operator*=(const Dual& o) { *this = *this * o; return *this; }
  constexpr Dual& operator/=(const Dual& o) { *this = *this / o; return *this; }

  friend constexpr Dual operator-(const Dual& a) { return {-a.re, -a.du}; }
  friend constexpr Dual operator+(const Dual& a, const Dual& b) { return {a.re + b.re, a.du + b.du}; }
  friend constexpr Dual operator-(const Dual& a, const Dual& b) { return {a.re - b.re, a.du - b.du}; }
  friend constexpr Dual operator*(const Dual& a, const Dual& b) {
    return {a.re * b.re, a.du * b.re + a.re * b.du};
  }
  friend constexpr Dual operator/(const Dual& a, const Dual& b) {
    T inv = T(1.0) / b.re;
    T q = a.re * inv;
    return {q, (a.du - q * b.du) * inv};
  }

  template <class S>
    requires std::is_arithmetic_v<S>
  friend constexpr Dual operator+(const Dual& a, S s) { return {a.re + static_cast<double>(s), a.du}; }
  template <class S>
    requires std::is_arithmetic_v<S>
  friend constexpr Dual operator+(S s, const Dual& a) { return a + s; }
  template <class S>
    requires std::is_arithmetic_v<S>
  friend constexpr Dual operator-(const Dual& a, S s) { return {a.re - static_cast<double>(s), a.du}; }
  template <class S>
    requires std::is_arithmetic_v<S>
  friend constexpr Dual operator-(S s, const Dual& a) { return {static_cast<double>(s) - a.re, -a.du}; }
  template <class S>
    requires std::is_arithmetic_v<S>
  friend constexpr Dual operator*(const Dual& a, S s) {
    const double k = static_cast<double>(s);
    return {a.re * k, a.du * k};
  }
  template <class S>
    requires std::is_arithmetic_v<S>
  friend constexpr Dual operator*(S s, const Dual& a) { return a * s; }
  template <class S>
    requires std::is_arithmetic_v<S>
  friend constexpr Dual operator/(const Dual& a, S s) {
    const double k = 1.0 / static_cast<double>(s);
    return {a.re * k, a.du * k};
  }
  template <class S>
    requires std::is_arithmetic_v<S>
  friend constexpr Dual operator/(S s, const Dual& a) { return Dual(s) / a; }
};

using D1 = Dual<double>;
using D2 = Dual<D1>;
using D3 = Dual<D2>;

template <class T>
struct dual_depth : std::integral_constant<int, 0> {};
template <class T>
struct dual_depth<Dual<T>> : std::integral_constant<int, 1 + dual_depth<T>::value> {};
template <class T>
inline constexpr int dual_depth_v = dual_depth<T>::value;

/// Innermost real part.
inline double value_of(double x) { return x; }
template <class T>
double value_of(const Dual<T>& x) { return value_of(x.re); }

template <class T>
Dual<T> sqrt(const Dual<T>& x) {
  using std::sqrt;
  T r = sqrt(x.re);
  return {r, x.du / (2.0 * r)};
}

template <class T>
Dual<T> exp(const Dual<T>& x) {
  using std::exp;
  T e = exp(x.re);
  return {e, e * x.du};
}

template <class T>
Dual<T> sin(const Dual<T>& x) {
  using std::cos;
  using std::sin;
  return {sin(x.re), cos(x.re) * x.du};
}

template <class T>
Dual<T> cos(const Dual<T>& x) {
  using std::cos;
  using std::sin;
  return {cos(x.re), -sin(x.re) * x.du};
}

template <class T>
Dual<T> log(const Dual<T>& x) {
  using std::log;
  return {log(x.re), x.du / x.re};
}

template <class T>
Dual<T> pow(const Dual<T>& x, double p) {
  using std::pow;
  T base = pow(x.re, p - 1.0);
  return {base * x.re, p * base * x.du};
}

/// Integer power by repeated multiplication; valid for any scalar and any sign of x.
template <class T>
T ipow(const T& x, int n) {
  if (n < 0) return T(1.0) / ipow(x, -n);
  T r(1.0);
  for (int i = 0; i < n; ++i) r = r * x;
  return r;
}

}  // namespace tbgeom
