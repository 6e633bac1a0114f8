#pragma once

#include <gmpxx.h>

#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <type_traits>

#include "bispec/errors.hpp"

namespace bispec {

// Exact scalars are GMP rationals; mpq_class keeps p/q canonical after every
// arithmetic step, so equality is structural.
using Rational = mpq_class;

enum class Mode { exact, floating };

constexpr int kNegInf = std::numeric_limits<int>::min() / 4;

template <class T>
struct Field;

template <>
struct Field<Rational> {
  static constexpr bool exact = true;
  static bool zero(const Rational& x) { return sgn(x) == 0; }
  static Rational of(long v) { return Rational(v); }
  static Rational ratio(long p, long q) {
    Rational r(p, q);
    r.canonicalize();
    return r;
  }
  static double to_double(const Rational& x) { return x.get_d(); }
  static double mag(const Rational& x) { return std::fabs(x.get_d()); }
  static std::string str(const Rational& x) {
    return x.get_num().get_str() + "/" + x.get_den().get_str();
  }
  static Rational parse(const std::string& s) {
    Rational r;
    if (r.set_str(s, 10) != 0) throw InvalidInput("bad rational '" + s + "'");
    if (sgn(r.get_den()) == 0) throw InvalidInput("zero denominator in '" + s + "'");
    r.canonicalize();
    return r;
  }
};

template <>
struct Field<double> {
  static constexpr bool exact = false;
  static bool zero(double x) { return x == 0.0; }
  static double of(long v) { return static_cast<double>(v); }
  static double ratio(long p, long q) { return static_cast<double>(p) / static_cast<double>(q); }
  static double to_double(double x) { return x; }
  static double mag(double x) { return std::fabs(x); }
  static std::string str(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
  }
  static double parse(const std::string& s) {
    auto slash = s.find('/');
    if (slash != std::string::npos) return Field<Rational>::parse(s).get_d();
    try {
      size_t used = 0;
      double v = std::stod(s, &used);
      if (used != s.size()) throw InvalidInput("bad number '" + s + "'");
      return v;
    } catch (const std::logic_error&) {
      throw InvalidInput("bad number '" + s + "'");
    }
  }
};

template <class T>
bool is_zero(const T& x) {
  return Field<T>::zero(x);
}

template <class T>
double magnitude(const T& x) {
  return Field<T>::mag(x);
}

// Zero test used by the checks that become tolerance checks in float mode.
template <class T>
bool near_zero(const T& x, double tol, double scale = 1.0) {
  if constexpr (Field<T>::exact) {
    return Field<T>::zero(x);
  } else {
    return std::fabs(x) <= tol * (scale < 1.0 ? 1.0 : scale);
  }
}

inline Rational to_exact(const Rational& x) { return x; }

template <class T>
T convert(const Rational& x) {
  if constexpr (std::is_same_v<T, Rational>) {
    return x;
  } else {
    return x.get_d();
  }
}

// (a)_j = a(a-1)...(a-j+1); the empty product is 1.
inline long falling_factorial(long a, long j) {
  if (j < 0) throw InvalidInput("falling_factorial: negative j");
  long r = 1;
  for (long t = 0; t < j; ++t) r *= (a - t);
  return r;
}

template <class T>
T falling_factorial_as(long a, long j) {
  T r = Field<T>::of(1);
  for (long t = 0; t < j; ++t) r *= Field<T>::of(a - t);
  return r;
}

// Generalized binomial C(a, j) for integer a and j >= 0.
template <class T>
T binomial(long a, long j) {
  if (j < 0) return Field<T>::of(0);
  T num = falling_factorial_as<T>(a, j);
  T den = Field<T>::of(1);
  for (long t = 2; t <= j; ++t) den *= Field<T>::of(t);
  return T(num / den);
}

template <class T>
T power(const T& base, long e) {
  T r = Field<T>::of(1);
  if (e < 0) {
    T inv = T(Field<T>::of(1) / base);
    for (long t = 0; t < -e; ++t) r *= inv;
    return r;
  }
  for (long t = 0; t < e; ++t) r *= base;
  return r;
}

}  // namespace bispec
