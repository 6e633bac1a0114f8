#pragma once

#include <algorithm>
#include <set>
#include <utility>
#include <vector>

#include "bispec/diffop.hpp"

namespace bispec {

// ---------------------------------------------------------------- partitions

struct Partition {
  std::vector<int> parts;  // weakly decreasing, positive

  Partition() = default;
  explicit Partition(std::vector<int> p) : parts(std::move(p)) {
    while (!parts.empty() && parts.back() == 0) parts.pop_back();
    for (size_t i = 0; i + 1 < parts.size(); ++i)
      if (parts[i] < parts[i + 1]) throw InvalidInput("partition parts must be weakly decreasing");
    for (int v : parts)
      if (v < 0) throw InvalidInput("partition parts must be nonnegative");
  }
  bool empty() const { return parts.empty(); }
  int length() const { return static_cast<int>(parts.size()); }
  int first() const { return parts.empty() ? 0 : parts[0]; }
  int size() const {
    int s = 0;
    for (int v : parts) s += v;
    return s;
  }
  int operator[](int i) const { return i < length() ? parts[i] : 0; }  // 0-based
  friend bool operator==(const Partition& a, const Partition& b) { return a.parts == b.parts; }
  friend bool operator!=(const Partition& a, const Partition& b) { return !(a == b); }
  friend bool operator<(const Partition& a, const Partition& b) { return a.parts < b.parts; }
};

inline Partition conjugate(const Partition& p) {
  std::vector<int> c;
  for (int i = 1; i <= p.first(); ++i) {
    int cnt = 0;
    for (int v : p.parts)
      if (v >= i) ++cnt;
    c.push_back(cnt);
  }
  return Partition(c);
}

// The set d = {n + mu_j - j} and its complement in {0..p-1}, the latter
// also from the conjugate formula {n - mu'_j + j - 1}.
struct DSets {
  std::vector<int> d, complement, complement_formula;
  bool agree() const { return complement == complement_formula; }
};

inline DSets d_sets(const Partition& mu) {
  DSets r;
  const int n = mu.length(), p = mu.first() + n;
  for (int j = 1; j <= n; ++j) r.d.push_back(n + mu[j - 1] - j);
  std::set<int> ds(r.d.begin(), r.d.end());
  for (int v = 0; v < p; ++v)
    if (!ds.count(v)) r.complement.push_back(v);
  Partition c = conjugate(mu);
  for (int j = 1; j <= mu.first(); ++j) r.complement_formula.push_back(n - c[j - 1] + j - 1);
  std::sort(r.d.begin(), r.d.end());
  std::sort(r.complement_formula.begin(), r.complement_formula.end());
  return r;
}

// ------------------------------------------------------- exponential sums

// sum_r f_r(x) e^{rate_r x} with f_r polynomial (QuasiExp) or rational (ExpRat).
template <class T, class F>
class ExpSum {
 public:
  using scalar_type = T;
  struct Term {
    T rate;
    F f;
  };

  ExpSum() = default;
  ExpSum(const T& rate, F f) { add(rate, std::move(f)); }
  static ExpSum one() { return ExpSum(Field<T>::of(0), F(Poly<T>::constant(Field<T>::of(1)))); }
  static ExpSum exp(const T& rate) { return ExpSum(rate, F(Poly<T>::constant(Field<T>::of(1)))); }

  const std::vector<Term>& terms() const { return t_; }
  bool is_zero() const { return t_.empty(); }
  bool single() const { return t_.size() == 1; }
  const Term& term() const {
    if (t_.size() != 1) throw InvalidInput("expected a single exponential term");
    return t_[0];
  }
  F part(const T& rate) const {
    for (const auto& t : t_)
      if (t.rate == rate) return t.f;
    return F{};
  }

  ExpSum derivative() const {
    ExpSum r;
    for (const auto& t : t_) r.add(t.rate, t.f.derivative() + t.f * t.rate);
    return r;
  }

  friend ExpSum operator+(const ExpSum& a, const ExpSum& b) {
    ExpSum r = a;
    for (const auto& t : b.t_) r.add(t.rate, t.f);
    return r;
  }
  friend ExpSum operator-(const ExpSum& a) {
    ExpSum r;
    for (const auto& t : a.t_) r.t_.push_back({t.rate, -t.f});
    return r;
  }
  friend ExpSum operator-(const ExpSum& a, const ExpSum& b) { return a + (-b); }
  friend ExpSum operator*(const ExpSum& a, const ExpSum& b) {
    ExpSum r;
    for (const auto& x : a.t_)
      for (const auto& y : b.t_) r.add(T(x.rate + y.rate), x.f * y.f);
    return r;
  }
  friend ExpSum operator*(const T& s, const ExpSum& a) {
    ExpSum r;
    for (const auto& t : a.t_) r.add(t.rate, t.f * s);
    return r;
  }
  friend ExpSum operator*(const F& s, const ExpSum& a) {
    ExpSum r;
    for (const auto& t : a.t_) r.add(t.rate, s * t.f);
    return r;
  }
  ExpSum& operator+=(const ExpSum& o) { return *this = *this + o; }
  friend bool operator==(const ExpSum& a, const ExpSum& b) {
    if (a.t_.size() != b.t_.size()) return false;
    for (size_t i = 0; i < a.t_.size(); ++i)
      if (!(a.t_[i].rate == b.t_[i].rate) || !(a.t_[i].f == b.t_[i].f)) return false;
    return true;
  }
  friend bool operator!=(const ExpSum& a, const ExpSum& b) { return !(a == b); }

  void add(const T& rate, F f) {
    for (auto it = t_.begin(); it != t_.end(); ++it) {
      if (it->rate == rate) {
        it->f = it->f + f;
        if (bispec::is_zero(it->f)) t_.erase(it);
        return;
      }
    }
    if (bispec::is_zero(f)) return;
    t_.push_back({rate, std::move(f)});
    std::sort(t_.begin(), t_.end(), [](const Term& x, const Term& y) { return x.rate < y.rate; });
  }

 private:
  std::vector<Term> t_;
};

template <class T>
using QuasiExp = ExpSum<T, Poly<T>>;
template <class T>
using ExpRat = ExpSum<T, RatFunc<T>>;

template <class T, class F>
ExpSum<T, F> derivative(const ExpSum<T, F>& f) {
  return f.derivative();
}
template <class T, class F>
bool is_zero(const ExpSum<T, F>& f) {
  return f.is_zero();
}

template <class T>
QuasiExp<T> qe(const T& rate, const Poly<T>& q) {
  return QuasiExp<T>(rate, q);
}

template <class T>
ExpRat<T> to_exprat(const QuasiExp<T>& f) {
  ExpRat<T> r;
  for (const auto& t : f.terms()) r.add(t.rate, RatFunc<T>(t.f));
  return r;
}

// a / b with b a single exponential term.
template <class T>
ExpRat<T> divide(const ExpRat<T>& a, const ExpRat<T>& b) {
  if (b.is_zero()) throw InvalidInput("division by the zero function");
  const auto& d = b.term();
  ExpRat<T> r;
  for (const auto& t : a.terms()) r.add(T(t.rate - d.rate), t.f / d.f);
  return r;
}
template <class T>
ExpRat<T> divide(const QuasiExp<T>& a, const QuasiExp<T>& b) {
  return divide(to_exprat(a), to_exprat(b));
}

// g'/g for a single-term g = r e^{ax}: a + r'/r.
template <class T>
RatFunc<T> log_derivative(const ExpRat<T>& g) {
  const auto& t = g.term();
  return RatFunc<T>::constant(t.rate) + t.f.derivative() / t.f;
}

// Rational part of a rate-0 single term (zero allowed).
template <class T>
RatFunc<T> rational_part(const ExpRat<T>& g) {
  if (g.is_zero()) return RatFunc<T>();
  const auto& t = g.term();
  if (!Field<T>::zero(t.rate)) throw InvalidInput("function is not rational");
  return t.f;
}

namespace detail {
template <class T>
RatFunc<T> as_ratfunc(const RatFunc<T>& f) {
  return f;
}
template <class T>
RatFunc<T> as_ratfunc(const Poly<T>& f) {
  return RatFunc<T>(f);
}
template <class T>
RatFunc<T> as_ratfunc(const PFrac<T>& f) {
  return to_ratfunc(f);
}
}  // namespace detail

// D applied to f: sum_m c_m f^{(m)}.
template <class C, class T>
ExpRat<T> apply(const DiffOp<C>& D, const ExpRat<T>& f) {
  ExpRat<T> r, der = f;
  for (int m = 0; m <= D.order(); ++m) {
    if (m > 0) der = der.derivative();
    if (bispec::is_zero(D.coeff(m))) continue;
    r += detail::as_ratfunc(D.coeff(m)) * der;
  }
  return r;
}
template <class C, class T>
ExpRat<T> apply(const DiffOp<C>& D, const QuasiExp<T>& f) {
  return apply(D, to_exprat(f));
}

// ------------------------------------------------------------ Wronskians

namespace detail {
// Matrix of derivatives with the given orders as rows, functions as columns.
template <class E>
E wronski_rows(const std::vector<E>& fs, const std::vector<int>& orders) {
  const int n = static_cast<int>(fs.size());
  int maxo = 0;
  for (int o : orders) maxo = std::max(maxo, o);
  std::vector<std::vector<E>> ders(n);
  for (int j = 0; j < n; ++j) {
    ders[j].push_back(fs[j]);
    for (int o = 1; o <= maxo; ++o) ders[j].push_back(ders[j].back().derivative());
  }
  std::vector<std::vector<E>> M(orders.size(), std::vector<E>(n));
  for (size_t r = 0; r < orders.size(); ++r)
    for (int j = 0; j < n; ++j) M[r][j] = ders[j][orders[r]];
  return rdet(M, E::one());
}
}  // namespace detail

template <class E>
E wronskian(const std::vector<E>& fs) {
  std::vector<int> orders;
  for (size_t i = 0; i < fs.size(); ++i) orders.push_back(static_cast<int>(i));
  return detail::wronski_rows(fs, orders);
}

// W_i: derivative rows 0..n with order n-i left out.
template <class E>
E wronskian_minor(const std::vector<E>& fs, int i) {
  const int n = static_cast<int>(fs.size());
  if (i < 0 || i > n) throw IndexOutOfRange("wronskian_minor index");
  std::vector<int> orders;
  for (int o = 0; o <= n; ++o)
    if (o != n - i) orders.push_back(o);
  return detail::wronski_rows(fs, orders);
}

template <class T>
DiffOp<RatFunc<T>> fundamental_operator(const std::vector<QuasiExp<T>>& fs) {
  const int n = static_cast<int>(fs.size());
  QuasiExp<T> W = wronskian(fs);
  if (W.is_zero()) throw DependentBasis("Wronskian vanishes");
  std::vector<RatFunc<T>> c(n + 1);
  for (int i = 0; i <= n; ++i) {
    ExpRat<T> ratio = divide(wronskian_minor(fs, i), W);
    RatFunc<T> a = rational_part(ratio);
    c[n - i] = (i % 2) ? -a : a;
  }
  return DiffOp<RatFunc<T>>(std::move(c));
}

// First-order factors (d - g_i'/g_i), i = 1..n, whose product is D_V.
template <class T>
std::vector<DiffOp<RatFunc<T>>> factorize(const std::vector<QuasiExp<T>>& fs) {
  const int n = static_cast<int>(fs.size());
  std::vector<DiffOp<RatFunc<T>>> out(n);
  std::vector<QuasiExp<T>> tail;  // f_n, f_{n-1}, ..., f_i
  QuasiExp<T> prev = QuasiExp<T>::one();
  for (int i = n - 1; i >= 0; --i) {
    tail.push_back(fs[i]);
    QuasiExp<T> w = wronskian(tail);
    if (w.is_zero()) throw DegenerateFlag("intermediate Wronskian vanishes");
    ExpRat<T> g = divide(w, prev);
    out[i] = DiffOp<RatFunc<T>>(
        std::vector<RatFunc<T>>{-log_derivative(g), RatFunc<T>::constant(Field<T>::of(1))});
    prev = w;
  }
  return out;
}

// h_i = W(f_1..^f_i..f_n) / W(f_1..f_n).
template <class T>
std::vector<ExpRat<T>> conjugate_kernel_basis(const std::vector<QuasiExp<T>>& fs) {
  QuasiExp<T> W = wronskian(fs);
  if (W.is_zero()) throw DependentBasis("Wronskian vanishes");
  std::vector<ExpRat<T>> hs;
  for (size_t i = 0; i < fs.size(); ++i) {
    std::vector<QuasiExp<T>> rest;
    for (size_t j = 0; j < fs.size(); ++j)
      if (j != i) rest.push_back(fs[j]);
    hs.push_back(divide(wronskian(rest), W));
  }
  return hs;
}

// phi_a = W(f, h without h_a) / W(f, h).
template <class T>
std::vector<ExpRat<T>> quotient_conjugate_kernel(const std::vector<QuasiExp<T>>& fs,
                                                 const std::vector<QuasiExp<T>>& hs) {
  std::vector<QuasiExp<T>> all = fs;
  all.insert(all.end(), hs.begin(), hs.end());
  QuasiExp<T> W = wronskian(all);
  if (W.is_zero()) throw DependentBasis("combined Wronskian vanishes");
  std::vector<ExpRat<T>> phis;
  for (size_t a = 0; a < hs.size(); ++a) {
    std::vector<QuasiExp<T>> rest = fs;
    for (size_t b = 0; b < hs.size(); ++b)
      if (b != a) rest.push_back(hs[b]);
    phis.push_back(divide(wronskian(rest), W));
  }
  return phis;
}

// ------------------------------------------------------ closed forms

template <class T>
std::vector<QuasiExp<T>> hat_basis(const std::vector<T>& alphas, const std::vector<int>& ps) {
  std::vector<QuasiExp<T>> b;
  for (size_t i = 0; i < alphas.size(); ++i)
    for (int p = 0; p < ps[i]; ++p) b.push_back(qe(alphas[i], Poly<T>::monomial(p)));
  return b;
}

template <class T>
T factorial_product(const std::vector<int>& ps, int skip_i, int skip_s) {
  T c = Field<T>::of(1);
  for (size_t l = 0; l < ps.size(); ++l)
    for (int s = 1; s <= ps[l] - 1; ++s) {
      if (static_cast<int>(l) == skip_i && s == skip_s) continue;
      for (int f = 2; f <= s; ++f) c *= Field<T>::of(f);
    }
  return c;
}

// W(x^p e^{a_i x}, p < p_i) evaluated from the product formula.
template <class T>
QuasiExp<T> closed_form_wronskian(const std::vector<T>& alphas, const std::vector<int>& ps) {
  const size_t n = alphas.size();
  T rate = Field<T>::of(0);
  for (size_t i = 0; i < n; ++i) rate += Field<T>::of(ps[i]) * alphas[i];
  T c = factorial_product<T>(ps, -1, -1);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j) c *= power(T(alphas[j] - alphas[i]), static_cast<long>(ps[i]) * ps[j]);
  return qe(rate, Poly<T>::constant(c));
}

template <class T>
struct MinorForm {
  T rate;
  int degree = 0;  // of the monic factor r_ij
  T constant;
};

// W_ij (x^j e^{a_i x} omitted) in the product form e^{rate x} r_ij(x) constant.
template <class T>
MinorForm<T> closed_form_minor(const std::vector<T>& alphas, const std::vector<int>& ps, int i, int j) {
  const int n = static_cast<int>(alphas.size());
  if (i < 0 || i >= n || j < 0 || j >= ps[i]) throw IndexOutOfRange("closed_form_minor index");
  MinorForm<T> m;
  m.rate = Field<T>::of(0);
  std::vector<int> q = ps;
  q[i] -= 1;
  for (int l = 0; l < n; ++l) m.rate += Field<T>::of(q[l]) * alphas[l];
  m.degree = ps[i] - j - 1;
  m.constant = factorial_product<T>(ps, i, j);
  for (int l = 0; l < n; ++l)
    for (int l2 = l + 1; l2 < n; ++l2)
      m.constant *= power(T(alphas[l2] - alphas[l]), static_cast<long>(q[l]) * q[l2]);
  return m;
}

template <class T>
QuasiExp<T> direct_minor(const std::vector<T>& alphas, const std::vector<int>& ps, int i, int j) {
  std::vector<QuasiExp<T>> b;
  for (size_t l = 0; l < alphas.size(); ++l)
    for (int p = 0; p < ps[l]; ++p)
      if (!(static_cast<int>(l) == i && p == j)) b.push_back(qe(alphas[l], Poly<T>::monomial(p)));
  return wronskian(b);
}

// Does the direct minor match rate, degree and leading constant of the formula?
template <class T>
bool minor_matches(const std::vector<T>& alphas, const std::vector<int>& ps, int i, int j) {
  auto f = closed_form_minor(alphas, ps, i, j);
  auto w = direct_minor(alphas, ps, i, j);
  if (!w.single()) return false;
  const auto& t = w.term();
  return t.rate == f.rate && t.f.deg() == f.degree && t.f.lead() == f.constant;
}

}  // namespace bispec
