#pragma once

#include <functional>
#include <map>
#include <utility>
#include <vector>

#include "bispec/pfrac.hpp"
#include "bispec/psido.hpp"
#include "bispec/ratfunc.hpp"

namespace bispec {

template <class T>
T derivative(const T& x) requires std::is_same_v<T, Rational> || std::is_same_v<T, double> {
  (void)x;
  return Field<T>::of(0);
}

// Differential operator sum_m c[m] d^m, coefficients ascending. The zero
// operator has no coefficients. C is Poly, RatFunc or PFrac (scalar or matrix).
template <class C>
class DiffOp {
 public:
  using coeff_type = C;

  DiffOp() = default;
  explicit DiffOp(std::vector<C> ascending) : c_(std::move(ascending)) { trim(); }
  // Leading-first convenience: {c_n, ..., c_0}.
  static DiffOp leading_first(std::vector<C> lf) {
    std::reverse(lf.begin(), lf.end());
    return DiffOp(std::move(lf));
  }
  static DiffOp constant(const C& c) { return DiffOp(std::vector<C>{c}); }
  // one * d^m
  static DiffOp d(int m, const C& one) {
    std::vector<C> v(m + 1);
    v[m] = one;
    return DiffOp(std::move(v));
  }

  int order() const { return c_.empty() ? kNegInf : static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<C>& coeffs() const { return c_; }
  C coeff(int m) const { return m >= 0 && m < static_cast<int>(c_.size()) ? c_[m] : C{}; }
  const C& lead() const { return c_.back(); }
  // Coefficients leading-first.
  std::vector<C> leading_first_coeffs() const { return std::vector<C>(c_.rbegin(), c_.rend()); }

  friend DiffOp operator+(const DiffOp& a, const DiffOp& b) {
    std::vector<C> r(std::max(a.c_.size(), b.c_.size()));
    for (size_t i = 0; i < a.c_.size(); ++i) r[i] = r[i] + a.c_[i];
    for (size_t i = 0; i < b.c_.size(); ++i) r[i] = r[i] + b.c_[i];
    return DiffOp(std::move(r));
  }
  friend DiffOp operator-(const DiffOp& a) {
    std::vector<C> r;
    for (const auto& c : a.c_) r.push_back(-c);
    return DiffOp(std::move(r));
  }
  friend DiffOp operator-(const DiffOp& a, const DiffOp& b) { return a + (-b); }

  // Composition by the Leibniz rule: (a d^p)(b d^q) = a sum_l C(p,l) b^{(l)} d^{p+q-l}.
  friend DiffOp operator*(const DiffOp& A, const DiffOp& B) {
    if (A.is_zero() || B.is_zero()) return DiffOp();
    std::vector<C> r(A.c_.size() + B.c_.size() - 1);
    const int maxp = A.order();
    // derivatives of B's coefficients, computed once
    std::vector<std::vector<C>> dB(maxp + 1);
    dB[0] = B.c_;
    for (int l = 1; l <= maxp; ++l)
      for (const auto& b : dB[l - 1]) dB[l].push_back(derivative(b));
    for (int p = 0; p <= maxp; ++p) {
      const C& a = A.c_[p];
      if (bispec::is_zero(a)) continue;
      for (int l = 0; l <= p; ++l) {
        auto w = binomial<scalar_of>(p, l);
        for (size_t q = 0; q < B.c_.size(); ++q) {
          const C& bl = dB[l][q];
          if (bispec::is_zero(bl)) continue;
          r[p + q - l] = r[p + q - l] + w * (a * bl);
        }
      }
    }
    return DiffOp(std::move(r));
  }
  friend DiffOp operator*(const C& s, const DiffOp& A) {
    std::vector<C> r;
    for (const auto& c : A.c_) r.push_back(s * c);
    return DiffOp(std::move(r));
  }
  DiffOp& operator+=(const DiffOp& o) { return *this = *this + o; }
  DiffOp& operator-=(const DiffOp& o) { return *this = *this - o; }
  DiffOp& operator*=(const DiffOp& o) { return *this = *this * o; }

  friend bool operator==(const DiffOp& a, const DiffOp& b) {
    if (a.c_.size() != b.c_.size()) return false;
    for (size_t i = 0; i < a.c_.size(); ++i)
      if (!(a.c_[i] == b.c_[i])) return false;
    return true;
  }
  friend bool operator!=(const DiffOp& a, const DiffOp& b) { return !(a == b); }

  // Formal conjugate: sum_m (-d)^m a_m = sum_l [sum_m (-1)^m C(m,l) a_m^{(m-l)}] d^l.
  DiffOp dagger() const {
    if (is_zero()) return DiffOp();
    const int n = order();
    std::vector<C> r(n + 1);
    for (int m = 0; m <= n; ++m) {
      C a = c_[m];
      std::vector<C> ders{a};
      for (int t = 1; t <= m; ++t) ders.push_back(derivative(ders.back()));
      for (int l = 0; l <= m; ++l) {
        auto w = binomial<scalar_of>(m, l);
        if (m % 2) w = -w;
        r[l] = r[l] + w * ders[m - l];
      }
    }
    return DiffOp(std::move(r));
  }

  template <class F>
  auto map(F f) const {
    using D = decltype(f(std::declval<C>()));
    std::vector<D> r;
    for (const auto& c : c_) r.push_back(f(c));
    return DiffOp<D>(std::move(r));
  }

  double scale() const {
    double s = 0;
    for (const auto& c : c_) s = std::max(s, magnitude(c));
    return s;
  }

  using scalar_of = typename C::scalar_type;

 private:
  void trim() {
    while (!c_.empty() && bispec::is_zero(c_.back())) c_.pop_back();
  }
  std::vector<C> c_;
};

template <class C>
DiffOp<C> dagger(const DiffOp<C>& a) {
  return a.dagger();
}
template <class C>
bool is_zero(const DiffOp<C>& a) {
  return a.is_zero();
}

// Drop tiny coefficient entries (float mode).
template <class T, class V>
DiffOp<PFrac<T, V>> chop(const DiffOp<PFrac<T, V>>& D, double tol) {
  const double s = D.scale();
  std::vector<PFrac<T, V>> r;
  for (const auto& c : D.coeffs()) r.push_back(c.chop(tol, s));
  return DiffOp<PFrac<T, V>>(std::move(r));
}

namespace detail {
template <class C>
C chop_coeff(const C& c, double tol, double scale) {
  if constexpr (requires { c.chop(tol, scale); }) {
    return c.chop(tol, scale);
  } else {
    (void)tol;
    (void)scale;
    return c;
  }
}
}  // namespace detail

// Right division: Q with Q * D = Dhat, D monic. Throws NotDivisible on a
// nonzero remainder (tolerance relative to the operator scale in float mode).
template <class C>
DiffOp<C> quotient(const DiffOp<C>& Dhat, const DiffOp<C>& D, double tol = 0.0) {
  using T = typename C::scalar_type;
  if (D.is_zero()) throw InvalidInput("quotient by the zero operator");
  const int n = D.order();
  if (Dhat.order() < n) throw NotDivisible("dividend has lower order than divisor");
  const double scale = std::max(1.0, std::max(Dhat.scale(), D.scale()));
  std::vector<C> R = Dhat.coeffs();
  std::vector<C> Q(Dhat.order() - n + 1);
  const C& one = D.lead();
  for (int r = Dhat.order(); r >= n; --r) {
    C c = R[r];
    if (bispec::is_zero(c)) continue;
    Q[r - n] = c;
    DiffOp<C> step = DiffOp<C>::d(r - n, one) * D;
    for (int m = 0; m <= step.order(); ++m) R[m] = R[m] - c * step.coeff(m);
    R[r] = C{};
  }
  for (int m = 0; m < n; ++m) {
    C rem = detail::chop_coeff(R[m], Field<T>::exact ? 0.0 : tol, scale);
    if (!bispec::is_zero(rem)) throw NotDivisible("nonzero remainder in operator division");
  }
  (void)one;
  return DiffOp<C>(std::move(Q));
}

// Row determinant sum_sigma sgn(sigma) M[0][s0] M[1][s1] ..., products taken
// in row order. E needs +, -, * and a multiplicative identity `one`.
template <class E>
E rdet(const std::vector<std::vector<E>>& M, const E& one) {
  const int n = static_cast<int>(M.size());
  if (n == 0) return one;
  for (const auto& row : M)
    if (static_cast<int>(row.size()) != n) throw InvalidInput("rdet needs a square matrix");
  std::vector<E> F(size_t{1} << n);
  std::vector<bool> have(size_t{1} << n, false);
  F[0] = one;
  have[0] = true;
  for (unsigned S = 1; S < (1u << n); ++S) {
    const int s = __builtin_popcount(S);
    const int r = n - s;  // this set of columns serves rows r..n-1
    E acc{};
    bool any = false;
    int pos = 0;
    for (int j = 0; j < n; ++j) {
      if (!(S & (1u << j))) continue;
      const unsigned rest = S & ~(1u << j);
      E term = M[r][j] * F[rest];
      if (pos % 2) term = -term;
      acc = any ? acc + term : term;
      any = true;
      ++pos;
    }
    F[S] = acc;
    have[S] = true;
  }
  return F[(1u << n) - 1];
}

// Laurent data of a coefficient at infinity: exponent -> value, plus floor.
namespace detail {
template <class T>
std::pair<std::map<int, T>, int> tail_of(const Poly<T>& p, int) {
  std::map<int, T> m;
  for (int e = 0; e <= p.deg(); ++e)
    if (!Field<T>::zero(p.coeff(e))) m[e] = p.coeff(e);
  return {m, kNegInf};
}
template <class T>
std::pair<std::map<int, T>, int> tail_of(const RatFunc<T>& f, int depth) {
  std::map<int, T> m;
  if (f.is_zero()) return {m, kNegInf};
  if (f.is_polynomial()) return tail_of(f.num(), depth);
  if (f.order_at_infinity() > 0) throw NotRegularAtInfinity("coefficient grows at infinity");
  auto t = laurent_at_infinity(f, depth);
  for (int i = 0; i < t.depth(); ++i)
    if (!Field<T>::zero(t.coeffs[i])) m[t.top - i] = t.coeffs[i];
  return {m, t.floor()};
}
template <class T>
std::pair<std::map<int, T>, int> tail_of(const PFrac<T>& f, int depth) {
  std::map<int, T> m;
  if (f.is_polynomial()) {
    for (size_t e = 0; e < f.poly().size(); ++e)
      if (!Field<T>::zero(f.poly()[e])) m[static_cast<int>(e)] = f.poly()[e];
    return {m, kNegInf};
  }
  if (f.poly_degree() > 0) throw NotRegularAtInfinity("coefficient grows at infinity");
  int top = 0;
  if (f.poly().empty()) {
    top = -1;
    while (top > -depth - 64 && Field<T>::zero(f.coeff_at_infinity(-top))) --top;
  }
  const int floor = top - depth + 1;
  for (int e = top; e >= floor; --e) {
    T v = f.coeff_at_infinity(-e);
    if (!Field<T>::zero(v)) m[e] = v;
  }
  return {m, floor};
}
}  // namespace detail

// Expand each coefficient at infinity to `depth` terms below its top.
template <class C>
auto diffop_to_psido(const DiffOp<C>& D, int depth) {
  using T = typename C::scalar_type;
  if (depth <= 0) throw InvalidInput("diffop_to_psido: depth must be positive");
  int kmin = kNegInf;
  std::vector<std::map<int, T>> tails;
  for (const auto& c : D.coeffs()) {
    auto [m, f] = detail::tail_of(c, depth);
    kmin = std::max(kmin, f);
    tails.push_back(std::move(m));
  }
  PsiDO<T> P(kNegInf, kNegInf, kmin, kNegInf);
  for (size_t order = 0; order < tails.size(); ++order)
    for (const auto& [e, v] : tails[order]) P.set(e, static_cast<int>(order), v);
  return P;
}

template <class T>
DiffOp<PFrac<T>> to_pfrac_op(const DiffOp<RatFunc<T>>& D, const std::vector<T>& poles, double tol = 0.0) {
  return D.map([&](const RatFunc<T>& f) { return partial_fractions(f, poles, tol); });
}
template <class T>
DiffOp<RatFunc<T>> to_ratfunc_op(const DiffOp<PFrac<T>>& D) {
  return D.map([](const PFrac<T>& f) { return to_ratfunc(f); });
}

template <class C>
C const_coeff(const typename C::scalar_type& a) {
  if constexpr (requires { C::constant(a); }) {
    return C::constant(a);
  } else {
    return C(a);
  }
}

// prod_i (d - r_i)^{p_i} with constant coefficients.
template <class C>
DiffOp<C> constant_factor_product(const std::vector<std::pair<typename C::scalar_type, int>>& factors) {
  using T = typename C::scalar_type;
  DiffOp<C> r = DiffOp<C>::constant(const_coeff<C>(Field<T>::of(1)));
  for (const auto& [a, p] : factors) {
    DiffOp<C> f(std::vector<C>{const_coeff<C>(T(-a)), const_coeff<C>(Field<T>::of(1))});
    for (int i = 0; i < p; ++i) r = r * f;
  }
  return r;
}

// A fully known series with no negative powers, read back as an operator
// with polynomial coefficients.
template <class T>
DiffOp<Poly<T>> psido_to_diffop(const PsiDO<T>& A) {
  if (A.k_min() != kNegInf || A.m_min() != kNegInf) throw NotDifferential("series is only known on a window");
  int M = -1;
  for (const auto& [key, c] : A.terms()) {
    if (key.first < 0 || key.second < 0) throw NotDifferential("negative power in the series");
    M = std::max(M, key.second);
  }
  std::vector<std::vector<T>> c(M + 1);
  for (const auto& [key, v] : A.terms()) {
    auto& row = c[key.second];
    if (static_cast<int>(row.size()) <= key.first) row.resize(key.first + 1, Field<T>::of(0));
    row[key.first] = v;
  }
  std::vector<Poly<T>> coeffs;
  for (auto& row : c) coeffs.push_back(Poly<T>(std::move(row)));
  return DiffOp<Poly<T>>(std::move(coeffs));
}

template <class T>
DiffOp<Poly<T>> ddagger(const DiffOp<Poly<T>>& D) {
  return psido_to_diffop(diffop_to_psido(D, 1).ddagger());
}

// Rational coefficients are accepted only when they are polynomials.
template <class T>
DiffOp<Poly<T>> ddagger(const DiffOp<RatFunc<T>>& D) {
  return ddagger(D.map([](const RatFunc<T>& f) {
    if (!f.is_polynomial()) throw NotDifferential("coefficient with poles has no differential image");
    return Poly<T>(f.num().coeffs()) * T(Field<T>::of(1) / f.den().lead());
  }));
}

}  // namespace bispec
