#pragma once

#include <algorithm>
#include <utility>
#include <vector>

#include "bispec/quasiexp.hpp"

namespace bispec {

template <class T>
struct QEData {
  std::vector<Partition> mu;
  std::vector<Partition> lambda;
  std::vector<T> alphas;
  std::vector<T> zs;
  bool reduced = false;

  int n() const { return static_cast<int>(mu.size()); }
  int k() const { return static_cast<int>(lambda.size()); }
  int n_i(int i) const { return mu[i].length(); }
  int p_i(int i) const { return mu[i].first() + mu[i].length(); }
  // dim V
  int Mprime() const {
    int s = 0;
    for (const auto& p : mu) s += p.length();
    return s;
  }
  int M() const {
    int s = 0;
    for (const auto& p : mu) s += p.first();
    return s;
  }
  int L() const {
    int s = 0;
    for (const auto& p : lambda) s += p.first();
    return s;
  }

  void validate() const {
    if (mu.size() != alphas.size() || lambda.size() != zs.size())
      throw InvalidInput("data: partition and point lists differ in length");
    for (size_t i = 0; i < alphas.size(); ++i)
      for (size_t j = i + 1; j < alphas.size(); ++j)
        if (alphas[i] == alphas[j]) throw CoincidingParameters("data: repeated alpha");
    for (size_t i = 0; i < zs.size(); ++i)
      for (size_t j = i + 1; j < zs.size(); ++j)
        if (zs[i] == zs[j]) throw CoincidingParameters("data: repeated z");
  }

  friend bool operator==(const QEData& a, const QEData& b) {
    return a.mu == b.mu && a.lambda == b.lambda && a.alphas == b.alphas && a.zs == b.zs;
  }
};

// Order-insensitive comparison: (point, partition) pairs on each side.
template <class T>
bool same_data(const QEData<T>& a, const QEData<T>& b) {
  auto pairs = [](const std::vector<T>& pts, const std::vector<Partition>& ps) {
    std::vector<std::pair<T, Partition>> v;
    for (size_t i = 0; i < pts.size(); ++i) v.push_back({pts[i], ps[i]});
    std::sort(v.begin(), v.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    return v;
  };
  return pairs(a.alphas, a.mu) == pairs(b.alphas, b.mu) && pairs(a.zs, a.lambda) == pairs(b.zs, b.lambda);
}

template <class T>
QEData<T> reduce_data(const QEData<T>& d) {
  QEData<T> r;
  for (size_t i = 0; i < d.mu.size(); ++i)
    if (!d.mu[i].empty()) {
      r.mu.push_back(d.mu[i]);
      r.alphas.push_back(d.alphas[i]);
    }
  for (size_t a = 0; a < d.lambda.size(); ++a)
    if (!d.lambda[a].empty()) {
      r.lambda.push_back(d.lambda[a]);
      r.zs.push_back(d.zs[a]);
    }
  r.reduced = true;
  return r;
}

// The dual data (lambda', mu'; z, -alpha).
template <class T>
QEData<T> dual_data(const QEData<T>& d) {
  QEData<T> r;
  for (size_t a = 0; a < d.lambda.size(); ++a) {
    r.mu.push_back(conjugate(d.lambda[a]));
    r.alphas.push_back(d.zs[a]);
  }
  for (size_t i = 0; i < d.mu.size(); ++i) {
    r.lambda.push_back(conjugate(d.mu[i]));
    r.zs.push_back(T(-d.alphas[i]));
  }
  r.reduced = d.reduced;
  return r;
}

// D * prod over empty mu-slots of (d - alpha_i).
template <class C, class T>
DiffOp<C> augment_op(const DiffOp<C>& D, const std::vector<Partition>& parts, const std::vector<T>& pts) {
  std::vector<std::pair<T, int>> f;
  for (size_t i = 0; i < parts.size(); ++i)
    if (parts[i].empty()) f.push_back({pts[i], 1});
  if (f.empty()) return D;
  return D * constant_factor_product<C>(f);
}
template <class C, class T>
DiffOp<C> augment_op(const DiffOp<C>& D, const QEData<T>& d) {
  return augment_op(D, d.mu, d.alphas);
}

// ------------------------------------------------------------- exponents

template <class T>
struct Exponents {
  std::vector<int> e;  // descending
  Partition lambda;
  bool singular = false;
};

namespace detail {
// Taylor coefficients at z of q(x) e^{a(x-z)}, orders 0..N-1.
template <class T>
std::vector<T> taylor_row(const T& a, const Poly<T>& q, const T& z, int N) {
  if (N <= 0) return {};
  Poly<T> s = q.shift(z);
  std::vector<T> row(N, Field<T>::of(0));
  std::vector<T> ex(N, Field<T>::of(0));  // a^l / l!
  ex[0] = Field<T>::of(1);
  for (int l = 1; l < N; ++l) ex[l] = T(ex[l - 1] * a / Field<T>::of(l));
  for (int m = 0; m < N; ++m) {
    T acc = Field<T>::of(0);
    for (int j = 0; j <= std::min(m, s.deg()); ++j) acc += s.coeff(j) * ex[m - j];
    row[m] = acc;
  }
  return row;
}

// Pivot columns of the row-echelon form by lowest nonzero column, or empty on
// rank deficiency within N columns.
template <class T>
std::vector<int> lowest_pivots(std::vector<std::vector<T>> R, int N) {
  const int r = static_cast<int>(R.size());
  std::vector<bool> used(r, false);
  std::vector<int> piv;
  for (int c = 0; c < N && static_cast<int>(piv.size()) < r; ++c) {
    int p = -1;
    for (int i = 0; i < r; ++i)
      if (!used[i] && !Field<T>::zero(R[i][c])) {
        p = i;
        break;
      }
    if (p < 0) continue;
    used[p] = true;
    piv.push_back(c);
    for (int i = 0; i < r; ++i) {
      if (used[i] || Field<T>::zero(R[i][c])) continue;
      T f = T(R[i][c] / R[p][c]);
      for (int cc = c; cc < N; ++cc) R[i][cc] -= f * R[p][cc];
    }
  }
  return piv;
}
}  // namespace detail

// Exponents of span(basis) at z; every basis element must carry one rate.
template <class T>
Exponents<T> exponents_at(const std::vector<QuasiExp<T>>& basis, const T& z) {
  const int Mp = static_cast<int>(basis.size());
  Exponents<T> out;
  if (Mp == 0) return out;
  for (int N = Mp + 4;; N *= 2) {
    std::vector<std::vector<T>> R;
    for (const auto& f : basis) {
      const auto& t = f.term();
      R.push_back(detail::taylor_row(t.rate, t.f, z, N));
    }
    auto piv = detail::lowest_pivots(R, N);
    if (static_cast<int>(piv.size()) == Mp) {
      out.e.assign(piv.rbegin(), piv.rend());
      break;
    }
    if (N > 4096) throw DependentBasis("basis is linearly dependent");
  }
  std::vector<int> lam;
  for (int i = 1; i <= Mp; ++i) lam.push_back(out.e[i - 1] - Mp + i);
  out.lambda = Partition(lam);
  out.singular = !out.lambda.empty();
  return out;
}

template <class T>
std::vector<std::pair<T, Partition>> singular_points(const std::vector<QuasiExp<T>>& basis) {
  QuasiExp<T> W = wronskian(basis);
  if (W.is_zero()) throw DependentBasis("Wronskian vanishes");
  const Poly<T>& P = W.term().f;
  std::vector<std::pair<T, Partition>> out;
  if constexpr (Field<T>::exact) {
    auto roots = rational_roots(P);
    int total = 0;
    for (const auto& [r, m] : roots) total += m;
    if (total != P.deg()) throw IrrationalSingularPoint("Wronskian has a root outside the rationals");
    for (const auto& [r, m] : roots) out.push_back({r, exponents_at(basis, r).lambda});
  } else {
    if (P.deg() > 0) throw InvalidInput("singular_points needs exact mode");
  }
  return out;
}

// Bring the elements of one rate to distinct degrees (span unchanged).
template <class T>
std::vector<Poly<T>> graded_polys(std::vector<Poly<T>> ps) {
  std::sort(ps.begin(), ps.end(), [](const Poly<T>& a, const Poly<T>& b) { return a.deg() > b.deg(); });
  for (size_t i = 0; i < ps.size(); ++i) {
    if (ps[i].is_zero()) throw DependentBasis("basis is linearly dependent");
    for (size_t j = i + 1; j < ps.size(); ++j)
      if (ps[j].deg() == ps[i].deg()) ps[j] = ps[j] - ps[i] * T(ps[j].lead() / ps[i].lead());
    std::sort(ps.begin() + i + 1, ps.end(), [](const Poly<T>& a, const Poly<T>& b) { return a.deg() > b.deg(); });
  }
  return ps;
}

template <class T>
QEData<T> qe_data(const std::vector<QuasiExp<T>>& basis) {
  QEData<T> d;
  std::vector<std::vector<Poly<T>>> by_rate;
  for (const auto& f : basis) {
    if (!f.single()) throw DegreePatternMismatch("basis element mixes exponential rates");
    const auto& t = f.term();
    auto it = std::find(d.alphas.begin(), d.alphas.end(), t.rate);
    if (it == d.alphas.end()) {
      d.alphas.push_back(t.rate);
      by_rate.push_back({t.f});
    } else {
      by_rate[it - d.alphas.begin()].push_back(t.f);
    }
  }
  for (auto& ps : by_rate) {
    ps = graded_polys(ps);
    const int n = static_cast<int>(ps.size());
    std::vector<int> mu;
    for (int j = 1; j <= n; ++j) mu.push_back(ps[j - 1].deg() - n + j);
    for (int j = 0; j < n; ++j) {
      if (mu[j] < 1 || (j > 0 && mu[j] > mu[j - 1]))
        throw DegreePatternMismatch("basis degrees do not realize a partition");
    }
    d.mu.push_back(Partition(mu));
  }
  for (const auto& [z, lam] : singular_points(basis)) {
    d.zs.push_back(z);
    d.lambda.push_back(lam);
  }
  d.reduced = true;
  return d;
}

}  // namespace bispec
