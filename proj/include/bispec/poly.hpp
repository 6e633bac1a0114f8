#pragma once

#include <algorithm>
#include <utility>
#include <vector>

#include "bispec/scalar.hpp"

namespace bispec {

// Univariate polynomial, ascending coefficients. The zero polynomial is the
// empty list and has degree kNegInf.
template <class T>
class Poly {
 public:
  using scalar_type = T;

  Poly() = default;
  explicit Poly(std::vector<T> c) : c_(std::move(c)) { trim(); }
  static Poly constant(const T& a) { return Poly(std::vector<T>{a}); }
  static Poly monomial(int e, const T& a = Field<T>::of(1)) {
    std::vector<T> c(e + 1, Field<T>::of(0));
    c[e] = a;
    return Poly(std::move(c));
  }
  static Poly x() { return monomial(1); }
  // x - a
  static Poly linear_root(const T& a) { return Poly(std::vector<T>{T(-a), Field<T>::of(1)}); }

  const std::vector<T>& coeffs() const { return c_; }
  int deg() const { return c_.empty() ? kNegInf : static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  T coeff(int i) const {
    if (i < 0 || i >= static_cast<int>(c_.size())) return Field<T>::of(0);
    return c_[i];
  }
  T lead() const { return c_.empty() ? Field<T>::of(0) : c_.back(); }

  T eval(const T& at) const {
    T r = Field<T>::of(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = T(r * at + *it);
    return r;
  }

  Poly derivative() const {
    if (c_.size() <= 1) return Poly();
    std::vector<T> d(c_.size() - 1);
    for (size_t i = 1; i < c_.size(); ++i) d[i - 1] = T(c_[i] * Field<T>::of(static_cast<long>(i)));
    return Poly(std::move(d));
  }

  // Coefficients of p(x + a): the Taylor coefficients of p at a.
  Poly shift(const T& a) const {
    std::vector<T> w = c_;
    const int n = static_cast<int>(w.size());
    for (int i = 0; i < n; ++i)
      for (int j = n - 2; j >= i; --j) w[j] = T(w[j] + a * w[j + 1]);
    return Poly(std::move(w));
  }

  Poly monic() const {
    if (c_.empty()) return *this;
    return *this * T(Field<T>::of(1) / lead());
  }

  friend Poly operator+(const Poly& a, const Poly& b) {
    std::vector<T> r(std::max(a.c_.size(), b.c_.size()), Field<T>::of(0));
    for (size_t i = 0; i < a.c_.size(); ++i) r[i] += a.c_[i];
    for (size_t i = 0; i < b.c_.size(); ++i) r[i] += b.c_[i];
    return Poly(std::move(r));
  }
  friend Poly operator-(const Poly& a) {
    std::vector<T> r = a.c_;
    for (auto& v : r) v = T(-v);
    return Poly(std::move(r));
  }
  friend Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }
  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return Poly();
    std::vector<T> r(a.c_.size() + b.c_.size() - 1, Field<T>::of(0));
    for (size_t i = 0; i < a.c_.size(); ++i) {
      if (bispec::is_zero(a.c_[i])) continue;
      for (size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
    }
    return Poly(std::move(r));
  }
  friend Poly operator*(const Poly& a, const T& s) {
    std::vector<T> r = a.c_;
    for (auto& v : r) v = T(v * s);
    return Poly(std::move(r));
  }
  friend Poly operator*(const T& s, const Poly& a) { return a * s; }
  Poly& operator+=(const Poly& o) { return *this = *this + o; }
  Poly& operator-=(const Poly& o) { return *this = *this - o; }
  Poly& operator*=(const Poly& o) { return *this = *this * o; }
  friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }
  friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

  Poly pow(int e) const {
    Poly r = constant(Field<T>::of(1));
    for (int i = 0; i < e; ++i) r = r * *this;
    return r;
  }

  // Largest coefficient magnitude; float-mode checks scale by it.
  double scale() const {
    double s = 0;
    for (const auto& v : c_) s = std::max(s, magnitude(v));
    return s;
  }

 private:
  void trim() {
    while (!c_.empty() && Field<T>::zero(c_.back())) c_.pop_back();
  }
  std::vector<T> c_;
};

// Euclidean division a = q*b + r with deg r < deg b.
template <class T>
std::pair<Poly<T>, Poly<T>> divmod(const Poly<T>& a, const Poly<T>& b) {
  if (b.is_zero()) throw InvalidInput("polynomial division by zero");
  std::vector<T> r = a.coeffs();
  const int db = b.deg();
  if (a.deg() < db) return {Poly<T>(), a};
  std::vector<T> q(a.deg() - db + 1, Field<T>::of(0));
  const T lb = b.lead();
  for (int i = a.deg(); i >= db; --i) {
    T f = T(r[i] / lb);
    q[i - db] = f;
    if (Field<T>::zero(f)) continue;
    for (int j = 0; j <= db; ++j) r[i - db + j] -= f * b.coeffs()[j];
    r[i] = Field<T>::of(0);
  }
  r.resize(db > 0 ? db : 0);
  return {Poly<T>(std::move(q)), Poly<T>(std::move(r))};
}

// Monic gcd; gcd(0, 0) = 0. Only meaningful in exact arithmetic.
template <class T>
Poly<T> gcd(Poly<T> a, Poly<T> b) {
  while (!b.is_zero()) {
    auto r = divmod(a, b).second;
    a = std::move(b);
    b = r.is_zero() ? std::move(r) : r.monic();  // keeps coefficient growth down
  }
  return a.monic();
}

// Divide out (x - a) once by synthetic division; returns quotient and remainder p(a).
template <class T>
std::pair<Poly<T>, T> deflate(const Poly<T>& p, const T& a) {
  const auto& c = p.coeffs();
  if (c.empty()) return {Poly<T>(), Field<T>::of(0)};
  std::vector<T> q(c.size() - 1, Field<T>::of(0));
  T acc = c.back();
  for (int i = static_cast<int>(c.size()) - 2; i >= 0; --i) {
    q[i] = acc;
    acc = T(c[i] + acc * a);
  }
  return {Poly<T>(std::move(q)), acc};
}

template <class T>
Poly<T> from_roots(const std::vector<std::pair<T, int>>& roots) {
  Poly<T> r = Poly<T>::constant(Field<T>::of(1));
  for (const auto& [z, m] : roots) r = r * Poly<T>::linear_root(z).pow(m);
  return r;
}

namespace detail {
inline std::vector<mpz_class> divisors(mpz_class n) {
  n = abs(n);
  std::vector<mpz_class> small, large;
  for (mpz_class d = 1; d * d <= n; ++d) {
    if (n % d == 0) {
      small.push_back(d);
      if (d * d != n) large.push_back(n / d);
    }
  }
  small.insert(small.end(), large.rbegin(), large.rend());
  return small;
}
}  // namespace detail

// Rational roots with multiplicity; irrational and complex roots are skipped.
inline std::vector<std::pair<Rational, int>> rational_roots(const Poly<Rational>& p) {
  std::vector<std::pair<Rational, int>> out;
  if (p.deg() <= 0) return out;
  Poly<Rational> q = p;
  int zero_mult = 0;
  while (q.deg() > 0 && sgn(q.coeff(0)) == 0) {
    q = divmod(q, Poly<Rational>::x()).first;
    ++zero_mult;
  }
  if (zero_mult) out.push_back({Rational(0), zero_mult});
  if (q.deg() <= 0) return out;
  // Clear denominators, then scan the rational-root-theorem candidates.
  mpz_class l = 1;
  for (const auto& c : q.coeffs()) l = lcm(l, c.get_den());
  std::vector<mpz_class> ic;
  for (const auto& c : q.coeffs()) ic.push_back(mpz_class(c * l));
  auto ps = detail::divisors(ic.front());
  auto qs = detail::divisors(ic.back());
  std::vector<Rational> cands;
  for (const auto& a : ps)
    for (const auto& b : qs) {
      Rational r(a, b);
      r.canonicalize();
      cands.push_back(r);
      cands.push_back(Rational(-r));
    }
  std::sort(cands.begin(), cands.end());
  cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
  for (const auto& r : cands) {
    int m = 0;
    while (q.deg() > 0) {
      auto [d, rem] = deflate(q, r);
      if (sgn(rem) != 0) break;
      q = d;
      ++m;
    }
    if (m) out.push_back({r, m});
    if (q.deg() <= 0) break;
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

template <class T>
Poly<T> poly_convert(const Poly<Rational>& p) {
  std::vector<T> c;
  for (const auto& v : p.coeffs()) c.push_back(convert<T>(v));
  return Poly<T>(std::move(c));
}

template <class T>
double magnitude(const Poly<T>& p) {
  return p.scale();
}

}  // namespace bispec
