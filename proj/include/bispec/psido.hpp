#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <utility>

#include "bispec/scalar.hpp"

namespace bispec {

namespace detail {
inline int clamp_floor(long v) { return v <= kNegInf / 2 ? kNegInf : static_cast<int>(v); }
inline int floor_sum(int a, int b) {
  if (a <= kNegInf / 2 || b <= kNegInf / 2) return kNegInf;
  return a + b;
}
}  // namespace detail

// Windowed pseudodifferential operator sum C_{km} x^k d^m.
// Coefficients with k < k_min or m < m_min are unknown; above the ceilings
// everything is zero. A floor of kNegInf means "known all the way down".
template <class T>
class PsiDO {
 public:
  using Key = std::pair<int, int>;  // (k, m)

  PsiDO() = default;
  PsiDO(int K, int M, int k_min, int m_min) : K_(K), M_(M), kmin_(k_min), mmin_(m_min) {}

  static PsiDO one() { return monomial(0, 0, Field<T>::of(1)); }
  // Exactly known c x^k d^m.
  static PsiDO monomial(int k, int m, const T& c) {
    PsiDO p(k, m, kNegInf, kNegInf);
    p.set(k, m, c);
    return p;
  }

  int K() const { return K_; }
  int M() const { return M_; }
  int k_min() const { return kmin_; }
  int m_min() const { return mmin_; }
  const std::map<Key, T>& terms() const { return t_; }
  bool known(int k, int m) const { return k >= kmin_ && m >= mmin_; }

  T coeff(int k, int m) const {
    auto it = t_.find({k, m});
    return it == t_.end() ? Field<T>::of(0) : it->second;
  }

  // Stores c at (k, m); entries outside the window are dropped, ceilings grow.
  void set(int k, int m, const T& c) {
    if (!known(k, m)) return;
    if (Field<T>::zero(c)) {
      t_.erase({k, m});
      return;
    }
    t_[{k, m}] = c;
    K_ = std::max(K_, k);
    M_ = std::max(M_, m);
  }
  void add(int k, int m, const T& c) {
    if (!known(k, m)) return;
    T v = T(coeff(k, m) + c);
    set(k, m, v);
  }

  // Raise the floors (forgetting anything below).
  PsiDO truncated(int k_min, int m_min) const {
    PsiDO r(K_, M_, std::max(kmin_, k_min), std::max(mmin_, m_min));
    for (const auto& [key, c] : t_) r.set(key.first, key.second, c);
    return r;
  }

  PsiDO scaled(const T& s) const {
    PsiDO r(K_, M_, kmin_, mmin_);
    for (const auto& [key, c] : t_) r.set(key.first, key.second, T(s * c));
    return r;
  }

  friend PsiDO operator+(const PsiDO& a, const PsiDO& b) {
    PsiDO r(std::max(a.K_, b.K_), std::max(a.M_, b.M_), std::max(a.kmin_, b.kmin_),
            std::max(a.mmin_, b.mmin_));
    for (const auto& [key, c] : a.t_) r.add(key.first, key.second, c);
    for (const auto& [key, c] : b.t_) r.add(key.first, key.second, c);
    return r;
  }
  friend PsiDO operator-(const PsiDO& a) { return a.scaled(Field<T>::of(-1)); }
  friend PsiDO operator-(const PsiDO& a, const PsiDO& b) { return a + (-b); }
  friend PsiDO operator*(const PsiDO& a, const PsiDO& b) { return mul(a, b); }

  // Product with optional extra truncation floors (needed whenever both a
  // d-exponent of the left and an x-exponent of the right go negative).
  friend PsiDO mul(const PsiDO& a, const PsiDO& b, int k_floor = kNegInf, int m_floor = kNegInf) {
    if (a.t_.empty() || b.t_.empty()) {
      PsiDO z(detail::floor_sum(a.K_, b.K_), detail::floor_sum(a.M_, b.M_), kNegInf, kNegInf);
      z.kmin_ = std::max({detail::floor_sum(a.kmin_, b.K_), detail::floor_sum(b.kmin_, a.K_), k_floor});
      z.mmin_ = std::max({detail::floor_sum(a.mmin_, b.M_), detail::floor_sum(b.mmin_, a.M_), m_floor});
      return z;
    }
    const int kf = std::max({detail::floor_sum(a.kmin_, b.K_), detail::floor_sum(b.kmin_, a.K_), k_floor});
    const int mf = std::max({detail::floor_sum(a.mmin_, b.M_), detail::floor_sum(b.mmin_, a.M_), m_floor});
    PsiDO r(a.K_ + b.K_, a.M_ + b.M_, kf, mf);
    std::map<Key, T> acc;
    for (const auto& [ka, ca] : a.t_)
      for (const auto& [kb, cb] : b.t_) {
        const int k1 = ka.first, m1 = ka.second, k2 = kb.first, m2 = kb.second;
        const bool finite = m1 >= 0 || k2 >= 0;
        long jmax = finite ? std::min<long>(m1 >= 0 ? m1 : 1L << 40, k2 >= 0 ? k2 : 1L << 40) : 1L << 40;
        if (kf > kNegInf) jmax = std::min<long>(jmax, static_cast<long>(k1) + k2 - kf);
        if (mf > kNegInf) jmax = std::min<long>(jmax, static_cast<long>(m1) + m2 - mf);
        if (jmax >= (1L << 39)) throw InvalidInput("psido product has no finite window");
        T w = T(ca * cb);
        T ff = Field<T>::of(1);  // (m1)_j (k2)_j / j!
        for (long j = 0; j <= jmax; ++j) {
          if (j > 0) ff = T(ff * Field<T>::of(m1 - j + 1) * Field<T>::of(k2 - j + 1) / Field<T>::of(j));
          if (Field<T>::zero(ff)) break;
          const int k = static_cast<int>(k1 + k2 - j), m = static_cast<int>(m1 + m2 - j);
          if (k < kf || m < mf) continue;
          auto& slot = acc[{k, m}];
          slot = T(slot + w * ff);
        }
      }
    for (const auto& [key, c] : acc) r.set(key.first, key.second, c);
    return r;
  }

  // Formal conjugate: x^k d^m -> (-d)^m x^k.
  PsiDO dagger() const {
    PsiDO r(K_, M_, kmin_, mmin_);
    std::map<Key, T> acc;
    for (const auto& [key, c] : t_) {
      const int k = key.first, m = key.second;
      long jmax = 1L << 40;
      if (m >= 0) jmax = std::min<long>(jmax, m);
      if (k >= 0) jmax = std::min<long>(jmax, k);
      if (kmin_ > kNegInf) jmax = std::min<long>(jmax, static_cast<long>(k) - kmin_);
      if (mmin_ > kNegInf) jmax = std::min<long>(jmax, static_cast<long>(m) - mmin_);
      if (jmax >= (1L << 39)) throw InvalidInput("psido conjugate has no finite window");
      T sign = (m % 2 == 0) ? Field<T>::of(1) : Field<T>::of(-1);
      T ff = Field<T>::of(1);
      for (long j = 0; j <= jmax; ++j) {
        if (j > 0) ff = T(ff * Field<T>::of(m - j + 1) * Field<T>::of(k - j + 1) / Field<T>::of(j));
        if (Field<T>::zero(ff)) break;
        auto& slot = acc[{static_cast<int>(k - j), static_cast<int>(m - j)}];
        slot = T(slot + sign * c * ff);
      }
    }
    for (const auto& [key, c] : acc) r.set(key.first, key.second, c);
    return r;
  }

  // Exponent swap x^k d^m -> x^m d^k (with the window).
  PsiDO ddagger() const {
    PsiDO r(M_, K_, mmin_, kmin_);
    for (const auto& [key, c] : t_) r.set(key.second, key.first, c);
    return r;
  }

  PsiDO sharp() const { return dagger().ddagger(); }

 private:
  int K_ = kNegInf, M_ = kNegInf;
  int kmin_ = kNegInf, mmin_ = kNegInf;
  std::map<Key, T> t_;
};

template <class T>
PsiDO<T> dagger(const PsiDO<T>& a) {
  return a.dagger();
}
template <class T>
PsiDO<T> ddagger(const PsiDO<T>& a) {
  return a.ddagger();
}
template <class T>
PsiDO<T> sharp(const PsiDO<T>& a) {
  return a.sharp();
}

struct WindowCompare {
  bool equal = true;
  int k_min = kNegInf;
  int m_min = kNegInf;
  double max_diff = 0;
  int compared = 0;  // keys inside the window carrying a nonzero on either side
};

// Compare on the intersection of the guaranteed windows.
template <class T>
WindowCompare compare(const PsiDO<T>& a, const PsiDO<T>& b, double tol = 0.0) {
  WindowCompare w;
  w.k_min = std::max(a.k_min(), b.k_min());
  w.m_min = std::max(a.m_min(), b.m_min());
  double scale = 1.0;
  for (const auto& [key, c] : a.terms()) scale = std::max(scale, magnitude(c));
  for (const auto& [key, c] : b.terms()) scale = std::max(scale, magnitude(c));
  auto check = [&](const typename PsiDO<T>::Key& key) {
    if (key.first < w.k_min || key.second < w.m_min) return;
    ++w.compared;
    T d = T(a.coeff(key.first, key.second) - b.coeff(key.first, key.second));
    w.max_diff = std::max(w.max_diff, magnitude(d));
    if (!near_zero(d, tol, scale)) w.equal = false;
  };
  for (const auto& [key, c] : a.terms()) check(key);
  for (const auto& [key, c] : b.terms()) check(key);
  return w;
}

// Inverse known on [-K-d+1, -K] x [-M-d+1, -M], built from the geometric
// series in 1 + D' = C^{-1} x^{-K} D d^{-M}.
template <class T>
PsiDO<T> invert(const PsiDO<T>& D, int depth) {
  if (depth <= 0) throw InvalidInput("invert: depth must be positive");
  if (D.terms().empty()) throw NotInvertible("zero operator");
  int K = kNegInf, M = kNegInf;
  for (const auto& [key, c] : D.terms()) {
    K = std::max(K, key.first);
    M = std::max(M, key.second);
  }
  auto it = D.terms().find({K, M});
  if (it == D.terms().end()) throw NotInvertible("no top coefficient C_KM");
  const T cinv = T(Field<T>::of(1) / it->second);
  const int lo = -(depth - 1);
  // D' with shifted exponents; the shift is exact (no reordering needed).
  PsiDO<T> Dp(0, 0, std::max(detail::floor_sum(D.k_min(), -K), lo), std::max(detail::floor_sum(D.m_min(), -M), lo));
  for (const auto& [key, c] : D.terms())
    if (!(key.first == K && key.second == M)) Dp.set(key.first - K, key.second - M, T(c * cinv));
  PsiDO<T> S = PsiDO<T>::one().truncated(Dp.k_min(), Dp.m_min());
  PsiDO<T> term = S;
  const PsiDO<T> minus = -Dp;
  for (int j = 1; j <= 2 * depth; ++j) {
    term = mul(term, minus, lo, lo);
    if (term.terms().empty()) break;
    S = S + term;
  }
  S = S.truncated(lo, lo);
  PsiDO<T> left = PsiDO<T>::monomial(0, -M, cinv);
  PsiDO<T> right = PsiDO<T>::monomial(-K, 0, Field<T>::of(1));
  PsiDO<T> r = mul(mul(left, S, lo - K, lo - M), right, lo - K, lo - M);
  return r;
}

}  // namespace bispec
