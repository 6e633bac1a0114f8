#pragma once

#include <algorithm>
#include <utility>
#include <vector>

#include "bispec/mat.hpp"
#include "bispec/ratfunc.hpp"

namespace bispec {

// Rational function kept in partial-fraction form
//   sum_e p_e x^e + sum_a sum_j c_{aj} (x - a)^{-j}
// with values V (scalars or matrices) and scalar poles T. The form is closed
// under +, *, d/dx and never needs a gcd, so float arithmetic stays stable.
template <class T, class V = T>
class PFrac {
 public:
  using scalar_type = T;
  using value_type = V;
  struct Pole {
    T at;
    std::vector<V> c;  // c[j-1] multiplies (x-at)^{-j}
  };

  PFrac() = default;
  PFrac(const V& constant) { poly_.push_back(constant); normalize(); }  // NOLINT
  static PFrac from_poly(std::vector<V> ascending) {
    PFrac f;
    f.poly_ = std::move(ascending);
    f.normalize();
    return f;
  }
  // v * (x - at)^{-j}
  static PFrac pole_term(const T& at, int j, const V& v) {
    PFrac f;
    Pole p{at, std::vector<V>(j)};
    p.c[j - 1] = v;
    f.poles_.push_back(std::move(p));
    f.normalize();
    return f;
  }

  const std::vector<V>& poly() const { return poly_; }
  const std::vector<Pole>& poles() const { return poles_; }
  bool is_zero() const { return poly_.empty() && poles_.empty(); }
  bool is_polynomial() const { return poles_.empty(); }
  int poly_degree() const { return poly_.empty() ? kNegInf : static_cast<int>(poly_.size()) - 1; }

  // Coefficient c_j at pole a (j >= 1); zero if absent.
  V pole_coeff(const T& at, int j) const {
    for (const auto& p : poles_)
      if (p.at == at) return j <= static_cast<int>(p.c.size()) ? p.c[j - 1] : V{};
    return V{};
  }
  int pole_order(const T& at) const {
    for (const auto& p : poles_)
      if (p.at == at) return static_cast<int>(p.c.size());
    return 0;
  }
  V residue(const T& at) const { return pole_coeff(at, 1); }
  V poly_coeff(int e) const { return e >= 0 && e < static_cast<int>(poly_.size()) ? poly_[e] : V{}; }

  // Coefficient of x^{-t} (t >= 0) in the expansion at infinity.
  V coeff_at_infinity(int t) const {
    if (t == 0) return poly_coeff(0);
    V acc{};
    for (const auto& p : poles_)
      for (int j = 1; j <= std::min<int>(t, static_cast<int>(p.c.size())); ++j) {
        if (bispec::is_zero(p.c[j - 1])) continue;
        T w = T(binomial<T>(t - 1, j - 1) * power(p.at, t - j));
        acc = acc + w * p.c[j - 1];
      }
    return acc;
  }

  PFrac derivative() const {
    PFrac r;
    for (size_t e = 1; e < poly_.size(); ++e) {
      r.poly_.resize(e);
      r.poly_[e - 1] = Field<T>::of(static_cast<long>(e)) * poly_[e];
    }
    for (const auto& p : poles_) {
      Pole q{p.at, std::vector<V>(p.c.size() + 1)};
      for (size_t j = 1; j <= p.c.size(); ++j) q.c[j] = Field<T>::of(-static_cast<long>(j)) * p.c[j - 1];
      r.poles_.push_back(std::move(q));
    }
    r.normalize();
    return r;
  }

  friend PFrac operator+(const PFrac& a, const PFrac& b) {
    PFrac r = a;
    r.add_poly(b.poly_, nullptr);
    for (const auto& p : b.poles_) r.add_pole(p.at, p.c, nullptr);
    r.normalize();
    return r;
  }
  friend PFrac operator-(const PFrac& a) { return Field<T>::of(-1) * a; }
  friend PFrac operator-(const PFrac& a, const PFrac& b) { return a + (-b); }
  friend PFrac operator*(const T& s, const PFrac& a) {
    PFrac r = a;
    for (auto& v : r.poly_) v = s * v;
    for (auto& p : r.poles_)
      for (auto& v : p.c) v = s * v;
    r.normalize();
    return r;
  }
  friend PFrac operator*(const PFrac& a, const T& s) { return s * a; }

  // Product; value order is preserved (left factor's values on the left).
  friend PFrac operator*(const PFrac& a, const PFrac& b) {
    PFrac r;
    auto a_terms = a.terms();
    auto b_terms = b.terms();
    for (const auto& ta : a_terms)
      for (const auto& tb : b_terms) {
        V v = (*ta.value) * (*tb.value);
        if (bispec::is_zero(v)) continue;
        r.add_basis_product(ta, tb, v);
      }
    r.normalize();
    return r;
  }
  PFrac& operator+=(const PFrac& o) { return *this = *this + o; }
  PFrac& operator-=(const PFrac& o) { return *this = *this - o; }
  PFrac& operator*=(const PFrac& o) { return *this = *this * o; }

  friend bool operator==(const PFrac& a, const PFrac& b) {
    if (a.poly_.size() != b.poly_.size() || a.poles_.size() != b.poles_.size()) return false;
    for (size_t i = 0; i < a.poly_.size(); ++i)
      if (!(a.poly_[i] == b.poly_[i])) return false;
    for (size_t i = 0; i < a.poles_.size(); ++i) {
      if (!(a.poles_[i].at == b.poles_[i].at) || a.poles_[i].c.size() != b.poles_[i].c.size()) return false;
      for (size_t j = 0; j < a.poles_[i].c.size(); ++j)
        if (!(a.poles_[i].c[j] == b.poles_[i].c[j])) return false;
    }
    return true;
  }
  friend bool operator!=(const PFrac& a, const PFrac& b) { return !(a == b); }

  double scale() const {
    double s = 0;
    for (const auto& v : poly_) s = std::max(s, magnitude(v));
    for (const auto& p : poles_)
      for (const auto& v : p.c) s = std::max(s, magnitude(v));
    return s;
  }

  // Drop every coefficient with magnitude <= tol * scale (float cleanup).
  PFrac chop(double tol, double scale) const {
    PFrac r = *this;
    auto small = [&](const V& v) { return magnitude(v) <= tol * std::max(1.0, scale); };
    for (auto& v : r.poly_)
      if (small(v)) v = V{};
    for (auto& p : r.poles_)
      for (auto& v : p.c)
        if (small(v)) v = V{};
    r.normalize();
    return r;
  }

  PFrac without_poles() const {
    PFrac r;
    r.poly_ = poly_;
    r.normalize();
    return r;
  }

 private:
  struct Term {
    int kind;  // 0: x^e, 1: (x-at)^{-j}
    int e;
    T at;
    const V* value;
  };
  std::vector<Term> terms() const {
    std::vector<Term> t;
    for (size_t e = 0; e < poly_.size(); ++e)
      if (!bispec::is_zero(poly_[e])) t.push_back({0, static_cast<int>(e), T{}, &poly_[e]});
    for (const auto& p : poles_)
      for (size_t j = 0; j < p.c.size(); ++j)
        if (!bispec::is_zero(p.c[j])) t.push_back({1, static_cast<int>(j + 1), p.at, &p.c[j]});
    return t;
  }

  void add_at_poly(int e, const V& v) {
    if (static_cast<int>(poly_.size()) <= e) poly_.resize(e + 1);
    poly_[e] = poly_[e] + v;
  }
  void add_at_pole(const T& at, int j, const V& v) {
    for (auto& p : poles_)
      if (p.at == at) {
        if (static_cast<int>(p.c.size()) < j) p.c.resize(j);
        p.c[j - 1] = p.c[j - 1] + v;
        return;
      }
    Pole p{at, std::vector<V>(j)};
    p.c[j - 1] = v;
    poles_.push_back(std::move(p));
  }
  void add_poly(const std::vector<V>& q, const T* s) {
    for (size_t e = 0; e < q.size(); ++e) add_at_poly(static_cast<int>(e), s ? (*s) * q[e] : q[e]);
  }
  void add_pole(const T& at, const std::vector<V>& c, const T* s) {
    for (size_t j = 0; j < c.size(); ++j) add_at_pole(at, static_cast<int>(j + 1), s ? (*s) * c[j] : c[j]);
  }

  // x^e * (x-a)^{-j} written in the basis, times v.
  void add_monomial_times_pole(int e, const T& a, int j, const V& v) {
    // x^e = sum_t C(e,t) a^(e-t) (x-a)^t
    for (int t = 0; t <= e; ++t) {
      T w = T(binomial<T>(e, t) * power(a, e - t));
      if (Field<T>::zero(w)) continue;
      if (t < j) {
        add_at_pole(a, j - t, w * v);
      } else {
        // (x-a)^s = sum_r C(s,r) (-a)^(s-r) x^r
        int s = t - j;
        for (int r = 0; r <= s; ++r) {
          T u = T(w * binomial<T>(s, r) * power(T(-a), s - r));
          if (!Field<T>::zero(u)) add_at_poly(r, u * v);
        }
      }
    }
  }

  void add_basis_product(const Term& x, const Term& y, const V& v) {
    if (x.kind == 0 && y.kind == 0) {
      add_at_poly(x.e + y.e, v);
    } else if (x.kind == 0) {
      add_monomial_times_pole(x.e, y.at, y.e, v);
    } else if (y.kind == 0) {
      add_monomial_times_pole(y.e, x.at, x.e, v);
    } else if (x.at == y.at) {
      add_at_pole(x.at, x.e + y.e, v);
    } else {
      // (x-a)^{-i} (x-b)^{-j}: principal parts at a and at b.
      const T& a = x.at;
      const T& b = y.at;
      const int i = x.e, j = y.e;
      for (int t = 0; t < i; ++t) {
        T w = T(binomial<T>(-j, t) * power(T(a - b), -j - t));
        add_at_pole(a, i - t, w * v);
      }
      for (int t = 0; t < j; ++t) {
        T w = T(binomial<T>(-i, t) * power(T(b - a), -i - t));
        add_at_pole(b, j - t, w * v);
      }
    }
  }

  void normalize() {
    while (!poly_.empty() && bispec::is_zero(poly_.back())) poly_.pop_back();
    for (auto& p : poles_)
      while (!p.c.empty() && bispec::is_zero(p.c.back())) p.c.pop_back();
    poles_.erase(std::remove_if(poles_.begin(), poles_.end(), [](const Pole& p) { return p.c.empty(); }),
                 poles_.end());
    std::sort(poles_.begin(), poles_.end(), [](const Pole& x, const Pole& y) { return x.at < y.at; });
  }

  std::vector<V> poly_;
  std::vector<Pole> poles_;
};

template <class T, class V>
PFrac<T, V> derivative(const PFrac<T, V>& f) {
  return f.derivative();
}
template <class T, class V>
bool is_zero(const PFrac<T, V>& f) {
  return f.is_zero();
}
template <class T, class V>
double magnitude(const PFrac<T, V>& f) {
  return f.scale();
}

template <class T>
PFrac<T> pfrac_from_poly(const Poly<T>& p) {
  return PFrac<T>::from_poly(p.coeffs());
}

// 1 / prod (x - r)^m as a partial fraction.
template <class T>
PFrac<T> inverse_of_roots(const std::vector<std::pair<T, int>>& roots) {
  PFrac<T> r(Field<T>::of(1));
  for (const auto& [at, m] : roots)
    if (m > 0) r = r * PFrac<T>::pole_term(at, m, Field<T>::of(1));
  return r;
}

template <class T>
RatFunc<T> to_ratfunc(const PFrac<T>& f) {
  RatFunc<T> r(Poly<T>(f.poly()));
  for (const auto& p : f.poles())
    for (size_t j = 0; j < p.c.size(); ++j) {
      if (Field<T>::zero(p.c[j])) continue;
      r += RatFunc<T>(Poly<T>::constant(p.c[j]), Poly<T>::linear_root(p.at).pow(static_cast<int>(j + 1)));
    }
  return r;
}

// Split f over the supplied poles. The denominator must be a product of
// (x - pole) powers; anything left over raises UnsplitDenominator.
template <class T>
PFrac<T> partial_fractions(const RatFunc<T>& f, const std::vector<T>& poles, double tol = 0.0) {
  Poly<T> den = f.den();
  std::vector<std::pair<T, int>> mult;
  const double dscale = den.scale();
  for (const auto& p : poles) {
    int m = 0;
    while (den.deg() > 0) {
      auto [q, rem] = deflate(den, p);
      if (!near_zero(rem, tol, dscale)) break;
      den = q;
      ++m;
    }
    if (m) mult.push_back({p, m});
  }
  if (den.deg() > 0) throw UnsplitDenominator("denominator has a factor outside the supplied poles");
  // den is now a constant (1 up to rounding)
  const T dconst = den.lead();
  Poly<T> full = from_roots(mult);
  auto [qpoly, rem] = divmod(f.num(), full);
  PFrac<T> out = PFrac<T>::from_poly((qpoly * T(Field<T>::of(1) / dconst)).coeffs());
  for (const auto& [p, m] : mult) {
    // Taylor coefficients at p of rem / (dconst * other factors), up to order m-1.
    std::vector<std::pair<T, int>> others;
    for (const auto& o : mult)
      if (!(o.first == p)) others.push_back(o);
    Poly<T> q = from_roots(others) * dconst;
    Poly<T> rs = rem.shift(p), qs = q.shift(p);
    std::vector<T> series(m, Field<T>::of(0));
    for (int t = 0; t < m; ++t) {
      T acc = rs.coeff(t);
      for (int s = 1; s <= t; ++s) acc -= qs.coeff(s) * series[t - s];
      series[t] = T(acc / qs.coeff(0));
    }
    for (int t = 0; t < m; ++t)
      if (!Field<T>::zero(series[t])) out += PFrac<T>::pole_term(p, m - t, series[t]);
  }
  return out;
}

template <class T>
PFrac<T> pfrac_convert(const PFrac<Rational>& f) {
  std::vector<T> poly;
  for (const auto& v : f.poly()) poly.push_back(convert<T>(v));
  PFrac<T> r = PFrac<T>::from_poly(poly);
  for (const auto& p : f.poles())
    for (size_t j = 0; j < p.c.size(); ++j)
      r += PFrac<T>::pole_term(convert<T>(p.at), static_cast<int>(j + 1), convert<T>(p.c[j]));
  return r;
}

}  // namespace bispec
