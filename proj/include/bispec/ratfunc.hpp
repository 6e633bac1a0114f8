#pragma once

#include <vector>

#include "bispec/poly.hpp"

namespace bispec {

// Reduced rational function num/den with monic denominator. In float mode
// the gcd step is skipped: only the denominator is made monic.
template <class T>
class RatFunc {
 public:
  using scalar_type = T;

  RatFunc() : num_(), den_(Poly<T>::constant(Field<T>::of(1))) {}
  RatFunc(const Poly<T>& p) : num_(p), den_(Poly<T>::constant(Field<T>::of(1))) {}  // NOLINT
  RatFunc(Poly<T> n, Poly<T> d) : num_(std::move(n)), den_(std::move(d)) { normalize(); }
  static RatFunc constant(const T& a) { return RatFunc(Poly<T>::constant(a)); }

  const Poly<T>& num() const { return num_; }
  const Poly<T>& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_polynomial() const { return den_.deg() == 0; }
  // deg num - deg den; kNegInf for zero.
  int order_at_infinity() const { return num_.is_zero() ? kNegInf : num_.deg() - den_.deg(); }

  T eval(const T& at) const { return T(num_.eval(at) / den_.eval(at)); }

  RatFunc derivative() const {
    return RatFunc(num_.derivative() * den_ - num_ * den_.derivative(), den_ * den_);
  }

  friend RatFunc operator+(const RatFunc& a, const RatFunc& b) {
    if (a.den_ == b.den_) return RatFunc(a.num_ + b.num_, a.den_);
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    if constexpr (Field<T>::exact) {
      const Poly<T> g = gcd(a.den_, b.den_);
      if (g.deg() > 0) {
        const Poly<T> ad = divmod(a.den_, g).first, bd = divmod(b.den_, g).first;
        return RatFunc(a.num_ * bd + b.num_ * ad, a.den_ * bd);
      }
    }
    return RatFunc(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  }
  friend RatFunc operator-(const RatFunc& a) {
    RatFunc r = a;
    r.num_ = -r.num_;
    return r;
  }
  friend RatFunc operator-(const RatFunc& a, const RatFunc& b) { return a + (-b); }
  friend RatFunc operator*(const RatFunc& a, const RatFunc& b) {
    return RatFunc(a.num_ * b.num_, a.den_ * b.den_);
  }
  friend RatFunc operator*(const RatFunc& a, const T& s) {
    RatFunc r = a;
    r.num_ = r.num_ * s;
    if (r.num_.is_zero()) r.den_ = Poly<T>::constant(Field<T>::of(1));
    return r;
  }
  friend RatFunc operator*(const T& s, const RatFunc& a) { return a * s; }
  friend RatFunc operator/(const RatFunc& a, const RatFunc& b) {
    if (b.is_zero()) throw InvalidInput("rational function division by zero");
    return RatFunc(a.num_ * b.den_, a.den_ * b.num_);
  }
  RatFunc& operator+=(const RatFunc& o) { return *this = *this + o; }
  RatFunc& operator-=(const RatFunc& o) { return *this = *this - o; }
  RatFunc& operator*=(const RatFunc& o) { return *this = *this * o; }
  friend bool operator==(const RatFunc& a, const RatFunc& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const RatFunc& a, const RatFunc& b) { return !(a == b); }

  double scale() const { return num_.scale(); }

 private:
  void normalize() {
    if (den_.is_zero()) throw InvalidInput("rational function with zero denominator");
    if (num_.is_zero()) {
      den_ = Poly<T>::constant(Field<T>::of(1));
      return;
    }
    if constexpr (Field<T>::exact) {
      Poly<T> g = gcd(num_, den_);
      if (g.deg() > 0) {
        num_ = divmod(num_, g).first;
        den_ = divmod(den_, g).first;
      }
    }
    T l = den_.lead();
    if (l != Field<T>::of(1)) {
      T inv = T(Field<T>::of(1) / l);
      num_ = num_ * inv;
      den_ = den_ * inv;
    }
  }
  Poly<T> num_, den_;
};

template <class T>
RatFunc<T> derivative(const RatFunc<T>& f) {
  return f.derivative();
}
template <class T>
Poly<T> derivative(const Poly<T>& f) {
  return f.derivative();
}
template <class T>
bool is_zero(const RatFunc<T>& f) {
  return f.is_zero();
}
template <class T>
bool is_zero(const Poly<T>& f) {
  return f.is_zero();
}

// Coefficients of x^top, x^(top-1), ..., x^(top-depth+1).
template <class T>
struct LaurentTail {
  int top = 0;
  std::vector<T> coeffs;
  int depth() const { return static_cast<int>(coeffs.size()); }
  // Coefficient of x^e; zero above top, and the caller must stay above the floor.
  T at(int e) const {
    int idx = top - e;
    if (idx < 0) return Field<T>::of(0);
    if (idx >= depth()) throw InvalidInput("LaurentTail: exponent below the guaranteed window");
    return coeffs[idx];
  }
  int floor() const { return top - depth() + 1; }
};

// Expansion at x = infinity by power-series division in y = 1/x.
template <class T>
LaurentTail<T> laurent_at_infinity(const RatFunc<T>& f, int depth) {
  if (depth <= 0) throw InvalidInput("laurent_at_infinity: depth must be positive");
  LaurentTail<T> t;
  t.coeffs.assign(depth, Field<T>::of(0));
  if (f.is_zero()) return t;
  const auto& n = f.num().coeffs();
  const auto& d = f.den().coeffs();
  const int dn = f.num().deg(), dd = f.den().deg();
  t.top = dn - dd;
  auto nrev = [&](int i) { return i <= dn ? n[dn - i] : Field<T>::of(0); };
  auto drev = [&](int i) { return i <= dd ? d[dd - i] : Field<T>::of(0); };
  const T d0 = drev(0);
  for (int i = 0; i < depth; ++i) {
    T acc = nrev(i);
    for (int j = 1; j <= i && j <= dd; ++j) acc -= drev(j) * t.coeffs[i - j];
    t.coeffs[i] = T(acc / d0);
  }
  return t;
}

template <class T>
RatFunc<T> ratfunc_convert(const RatFunc<Rational>& f) {
  return RatFunc<T>(poly_convert<T>(f.num()), poly_convert<T>(f.den()));
}

template <class T>
double magnitude(const RatFunc<T>& p) {
  return p.scale();
}

}  // namespace bispec
