#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include "bispec/diffop.hpp"
#include "bispec/mat.hpp"
#include "bispec/pfrac.hpp"

namespace bispec {

// Wedge monomials in xi_{ai} (a < k, i < n, zero-based) are bitmasks; the
// variable (a, i) is bit a*n + i, and canonical order is ascending bit index.
using Wedge = unsigned;

inline int wedge_var(int a, int i, int n) { return a * n + i; }

struct SignedWedge {
  int sign;
  Wedge w;
};

// Left derivation: (-1)^{s-1} for the variable at position s.
inline std::optional<SignedWedge> left_derivation(Wedge p, int v) {
  if (!(p & (1u << v))) return std::nullopt;
  const int before = __builtin_popcount(p & ((1u << v) - 1));
  return SignedWedge{before % 2 ? -1 : 1, p & ~(1u << v)};
}

// Left multiplication by xi_v.
inline std::optional<SignedWedge> xi_mul(Wedge p, int v) {
  if (p & (1u << v)) return std::nullopt;
  const int before = __builtin_popcount(p & ((1u << v) - 1));
  return SignedWedge{before % 2 ? -1 : 1, p | (1u << v)};
}

inline std::vector<std::pair<int, int>> wedge_vars(Wedge w, int n) {
  std::vector<std::pair<int, int>> v;
  for (int b = 0; b < 32; ++b)
    if (w & (1u << b)) v.push_back({b / n, b % n});
  return v;
}

// A set of monomials closed under whatever operators are built on it.
struct FermionSpace {
  int k = 0, n = 0;
  std::vector<int> l, m;  // empty when the space is not a single block
  std::vector<Wedge> basis;
  std::unordered_map<Wedge, int> index;

  int dim() const { return static_cast<int>(basis.size()); }
  void finish() {
    std::sort(basis.begin(), basis.end(), [this](Wedge x, Wedge y) { return wedge_vars(x, n) < wedge_vars(y, n); });
    index.clear();
    for (int i = 0; i < dim(); ++i) index[basis[i]] = i;
  }
};

inline std::vector<int> row_degrees(Wedge w, int k, int n) {
  std::vector<int> l(k, 0);
  for (int a = 0; a < k; ++a)
    for (int i = 0; i < n; ++i)
      if (w & (1u << wedge_var(a, i, n))) ++l[a];
  return l;
}
inline std::vector<int> col_degrees(Wedge w, int k, int n) {
  std::vector<int> m(n, 0);
  for (int a = 0; a < k; ++a)
    for (int i = 0; i < n; ++i)
      if (w & (1u << wedge_var(a, i, n))) ++m[i];
  return m;
}

inline FermionSpace full_space(int k, int n) {
  if (k < 1 || n < 1 || k * n > 20) throw InvalidInput("k*n must be between 1 and 20");
  FermionSpace s;
  s.k = k;
  s.n = n;
  for (Wedge w = 0; w < (1u << (k * n)); ++w) s.basis.push_back(w);
  s.finish();
  return s;
}

inline FermionSpace weight_block(int k, int n, const std::vector<int>& l, const std::vector<int>& m) {
  if (static_cast<int>(l.size()) != k || static_cast<int>(m.size()) != n) throw NotInZ("degree vectors have wrong length");
  int sl = 0, sm = 0;
  for (int v : l) {
    if (v < 0 || v > n) throw NotInZ("row degree out of range");
    sl += v;
  }
  for (int v : m) {
    if (v < 0 || v > k) throw NotInZ("column degree out of range");
    sm += v;
  }
  if (sl != sm) throw NotInZ("row and column degrees have different totals");
  FermionSpace s;
  s.k = k;
  s.n = n;
  s.l = l;
  s.m = m;
  for (Wedge w = 0; w < (1u << (k * n)); ++w)
    if (row_degrees(w, k, n) == l && col_degrees(w, k, n) == m) s.basis.push_back(w);
  s.finish();
  return s;
}

// Monomials with fixed row degrees (every gl_n-side operator keeps these).
inline FermionSpace row_sector(int k, int n, const std::vector<int>& l) {
  if (static_cast<int>(l.size()) != k) throw NotInZ("row degree vector has wrong length");
  FermionSpace s;
  s.k = k;
  s.n = n;
  for (Wedge w = 0; w < (1u << (k * n)); ++w)
    if (row_degrees(w, k, n) == l) s.basis.push_back(w);
  s.finish();
  return s;
}
inline FermionSpace col_sector(int k, int n, const std::vector<int>& m) {
  if (static_cast<int>(m.size()) != n) throw NotInZ("column degree vector has wrong length");
  FermionSpace s;
  s.k = k;
  s.n = n;
  for (Wedge w = 0; w < (1u << (k * n)); ++w)
    if (col_degrees(w, k, n) == m) s.basis.push_back(w);
  s.finish();
  return s;
}

// Every (l, m) in Z_kn.
inline std::vector<std::pair<std::vector<int>, std::vector<int>>> all_blocks(int k, int n) {
  std::vector<std::pair<std::vector<int>, std::vector<int>>> out;
  std::vector<int> l(k, 0), m(n, 0);
  std::function<void(int)> rec_m;
  std::function<void(int)> rec_l = [&](int a) {
    if (a == k) {
      rec_m(0);
      return;
    }
    for (int v = 0; v <= n; ++v) {
      l[a] = v;
      rec_l(a + 1);
    }
  };
  rec_m = [&](int i) {
    if (i == n) {
      int sl = 0, sm = 0;
      for (int v : l) sl += v;
      for (int v : m) sm += v;
      if (sl == sm) out.push_back({l, m});
      return;
    }
    for (int v = 0; v <= k; ++v) {
      m[i] = v;
      rec_m(i + 1);
    }
  };
  rec_l(0);
  return out;
}

// Matrix of xi_v d_w on the space.
template <class T>
Mat<T> xi_d(const FermionSpace& s, int v, int w) {
  Mat<T> M(s.dim(), s.dim());
  for (int c = 0; c < s.dim(); ++c) {
    auto d = left_derivation(s.basis[c], w);
    if (!d) continue;
    auto x = xi_mul(d->w, v);
    if (!x) continue;
    auto it = s.index.find(x->w);
    if (it == s.index.end()) throw InvalidInput("operator leaves the chosen space");
    M(it->second, c) += Field<T>::of(d->sign * x->sign);
  }
  return M;
}
template <class T>
Mat<T> xi_only(const FermionSpace& s, int v) {
  Mat<T> M(s.dim(), s.dim());
  for (int c = 0; c < s.dim(); ++c) {
    auto x = xi_mul(s.basis[c], v);
    if (!x) continue;
    auto it = s.index.find(x->w);
    if (it == s.index.end()) throw InvalidInput("operator leaves the chosen space");
    M(it->second, c) += Field<T>::of(x->sign);
  }
  return M;
}
template <class T>
Mat<T> d_only(const FermionSpace& s, int v) {
  Mat<T> M(s.dim(), s.dim());
  for (int c = 0; c < s.dim(); ++c) {
    auto d = left_derivation(s.basis[c], v);
    if (!d) continue;
    auto it = s.index.find(d->w);
    if (it == s.index.end()) throw InvalidInput("operator leaves the chosen space");
    M(it->second, c) += Field<T>::of(d->sign);
  }
  return M;
}

// sum_a z_a^s xi_{ai} d_{aj}
template <class T>
Mat<T> current_action_n(int i, int j, int s, const std::vector<T>& zs, const FermionSpace& sp) {
  if (i < 0 || i >= sp.n || j < 0 || j >= sp.n || static_cast<int>(zs.size()) != sp.k)
    throw IndexOutOfRange("current_action_n index");
  Mat<T> r(sp.dim(), sp.dim());
  for (int a = 0; a < sp.k; ++a) r += power(zs[a], s) * xi_d<T>(sp, wedge_var(a, i, sp.n), wedge_var(a, j, sp.n));
  return r;
}
// sum_i (-alpha_i)^s xi_{ai} d_{bi}
template <class T>
Mat<T> current_action_k(int a, int b, int s, const std::vector<T>& alphas, const FermionSpace& sp) {
  if (a < 0 || a >= sp.k || b < 0 || b >= sp.k || static_cast<int>(alphas.size()) != sp.n)
    throw IndexOutOfRange("current_action_k index");
  Mat<T> r(sp.dim(), sp.dim());
  for (int i = 0; i < sp.n; ++i) r += power(T(-alphas[i]), s) * xi_d<T>(sp, wedge_var(a, i, sp.n), wedge_var(b, i, sp.n));
  return r;
}

// One of the two tensor-factor actions: gl_N at P sites, rho(p, i, j) is
// the image of (e_ij)_(p). rates play the role of alpha, pts of z.
template <class T>
struct Side {
  int N = 0, P = 0, dim = 0;
  std::vector<T> rates, pts;
  FermionSpace space;
  std::function<Mat<T>(int, int, int)> rho;
};

template <class T>
void check_distinct(const std::vector<T>& v, const char* what) {
  for (size_t i = 0; i < v.size(); ++i)
    for (size_t j = i + 1; j < v.size(); ++j)
      if (v[i] == v[j]) throw CoincidingParameters(std::string("repeated ") + what);
}

// gl_n side: (e_ij)_(a) -> xi_{ai} d_{aj}.
template <class T>
Side<T> n_side(const FermionSpace& sp, const std::vector<T>& alphas, const std::vector<T>& zs) {
  if (static_cast<int>(alphas.size()) != sp.n || static_cast<int>(zs.size()) != sp.k)
    throw InvalidInput("parameter count does not match k, n");
  check_distinct(alphas, "alpha");
  check_distinct(zs, "z");
  Side<T> s;
  s.N = sp.n;
  s.P = sp.k;
  s.dim = sp.dim();
  s.rates = alphas;
  s.pts = zs;
  s.space = sp;
  const int n = sp.n;
  auto cache = std::make_shared<std::map<std::tuple<int, int, int>, Mat<T>>>();
  s.rho = [sp, n, cache](int a, int i, int j) {
    auto key = std::make_tuple(a, i, j);
    auto it = cache->find(key);
    if (it != cache->end()) return it->second;
    Mat<T> M = xi_d<T>(sp, wedge_var(a, i, n), wedge_var(a, j, n));
    (*cache)[key] = M;
    return M;
  };
  return s;
}

// gl_k side: (e_ab)_(i) -> xi_{ai} d_{bi}; rates are the z's, points given.
template <class T>
Side<T> k_side(const FermionSpace& sp, const std::vector<T>& rates, const std::vector<T>& pts) {
  if (static_cast<int>(rates.size()) != sp.k || static_cast<int>(pts.size()) != sp.n)
    throw InvalidInput("parameter count does not match k, n");
  check_distinct(rates, "rate");
  check_distinct(pts, "point");
  Side<T> s;
  s.N = sp.k;
  s.P = sp.n;
  s.dim = sp.dim();
  s.rates = rates;
  s.pts = pts;
  s.space = sp;
  const int n = sp.n;
  auto cache = std::make_shared<std::map<std::tuple<int, int, int>, Mat<T>>>();
  s.rho = [sp, n, cache](int i, int a, int b) {
    auto key = std::make_tuple(i, a, b);
    auto it = cache->find(key);
    if (it != cache->end()) return it->second;
    Mat<T> M = xi_d<T>(sp, wedge_var(a, i, n), wedge_var(b, i, n));
    (*cache)[key] = M;
    return M;
  };
  return s;
}

// sum_i rates_i (e_ii)_(p) + sum_{q != p} Omega_(pq) / (pts_p - pts_q)
template <class T>
Mat<T> gaudin_hamiltonian(const Side<T>& s, int p) {
  if (p < 0 || p >= s.P) throw IndexOutOfRange("gaudin_hamiltonian index");
  Mat<T> H(s.dim, s.dim);
  for (int i = 0; i < s.N; ++i) H += s.rates[i] * s.rho(p, i, i);
  for (int q = 0; q < s.P; ++q) {
    if (q == p) continue;
    Mat<T> Om(s.dim, s.dim);
    for (int i = 0; i < s.N; ++i)
      for (int j = 0; j < s.N; ++j) Om += s.rho(p, i, j) * s.rho(q, j, i);
    H += T(Field<T>::of(1) / (s.pts[p] - s.pts[q])) * Om;
  }
  return H;
}

// sum_p pts_p (e_ii)_(p) + sum_{j != i} (e_ij e_ji - e_ii) / (rates_i - rates_j)
template <class T>
Mat<T> dynamical_hamiltonian(const Side<T>& s, int i) {
  if (i < 0 || i >= s.N) throw IndexOutOfRange("dynamical_hamiltonian index");
  auto E = [&](int a, int b) {
    Mat<T> r(s.dim, s.dim);
    for (int p = 0; p < s.P; ++p) r += s.rho(p, a, b);
    return r;
  };
  Mat<T> G(s.dim, s.dim);
  for (int p = 0; p < s.P; ++p) G += s.pts[p] * s.rho(p, i, i);
  const Mat<T> Eii = E(i, i);
  for (int j = 0; j < s.N; ++j) {
    if (j == i) continue;
    G += T(Field<T>::of(1) / (s.rates[i] - s.rates[j])) * (E(i, j) * E(j, i) - Eii);
  }
  return G;
}

template <class T>
using MatFrac = PFrac<T, Mat<T>>;
template <class T>
using MatOp = DiffOp<MatFrac<T>>;

template <class T>
MatFrac<T> lift(const PFrac<T>& f, int dim) {
  const Mat<T> I = Mat<T>::identity(dim);
  std::vector<Mat<T>> poly;
  for (const auto& v : f.poly()) poly.push_back(v * I);
  MatFrac<T> r = MatFrac<T>::from_poly(poly);
  for (const auto& p : f.poles())
    for (size_t j = 0; j < p.c.size(); ++j) r += MatFrac<T>::pole_term(p.at, static_cast<int>(j + 1), p.c[j] * I);
  return r;
}

// rdet((d - rates_i) delta_ij - sum_p rho(p, j, i) / (x - pts_p)); monic of order N.
template <class T>
MatOp<T> universal_operator(const Side<T>& s) {
  const Mat<T> I = Mat<T>::identity(s.dim);
  std::vector<std::vector<MatOp<T>>> M(s.N, std::vector<MatOp<T>>(s.N));
  for (int i = 0; i < s.N; ++i)
    for (int j = 0; j < s.N; ++j) {
      MatFrac<T> c0;
      for (int p = 0; p < s.P; ++p) {
        Mat<T> r = s.rho(p, j, i);
        if (!r.is_zero()) c0 -= MatFrac<T>::pole_term(s.pts[p], 1, r);
      }
      if (i == j) {
        c0 -= MatFrac<T>(s.rates[i] * I);
        M[i][j] = MatOp<T>(std::vector<MatFrac<T>>{c0, MatFrac<T>(I)});
      } else {
        M[i][j] = MatOp<T>(std::vector<MatFrac<T>>{c0});
      }
    }
  MatOp<T> D = rdet(M, MatOp<T>::constant(MatFrac<T>(I)));
  if (D.order() != s.N || !(D.lead() == MatFrac<T>(I))) throw IdentityFailed("universal operator is not monic of order N");
  // sum_i B_{i0} u^{N-i} = prod (u - rates_j)
  Poly<T> pr = from_roots([&] {
    std::vector<std::pair<T, int>> v;
    for (const auto& r : s.rates) v.push_back({r, 1});
    return v;
  }());
  for (int i = 1; i <= s.N; ++i) {
    const MatFrac<T>& B = D.coeff(s.N - i);
    if (B.poly_degree() > 0) throw IdentityFailed("coefficient grows at infinity");
    if (!(B.poly_coeff(0) == pr.coeff(s.N - i) * I)) throw IdentityFailed("constant-term identity fails");
  }
  return D;
}

// Sub-matrix on the monomials of `block` (both spaces share k, n).
template <class T>
Mat<T> restrict_to(const Mat<T>& M, const FermionSpace& from, const FermionSpace& block) {
  Mat<T> r(block.dim(), block.dim());
  if (M.empty()) return r;
  for (int a = 0; a < block.dim(); ++a)
    for (int b = 0; b < block.dim(); ++b) r(a, b) = M(from.index.at(block.basis[a]), from.index.at(block.basis[b]));
  return r;
}

// Does M map the block into itself (all other entries in its columns zero)?
template <class T>
bool preserves(const Mat<T>& M, const FermionSpace& from, const FermionSpace& block) {
  if (M.empty()) return true;
  for (const auto& w : block.basis) {
    const int c = from.index.at(w);
    for (int r = 0; r < from.dim(); ++r)
      if (!Field<T>::zero(M(r, c)) && !block.index.count(from.basis[r])) return false;
  }
  return true;
}

// Constant parts B_{i0} and pole coefficients B_{ija} of the universal operator.
template <class T>
struct BetheTable {
  int N = 0, dim = 0;
  std::vector<T> rates, pts;
  std::vector<Mat<T>> constants;                      // index i-1
  std::map<std::tuple<int, int, int>, Mat<T>> poles;  // (i, j, p) -> coefficient of (x - pts_p)^{-j}

  std::vector<Mat<T>> generators() const {
    std::vector<Mat<T>> g = constants;
    for (const auto& [key, M] : poles) g.push_back(M);
    return g;
  }

  // B_i(x) rebuilt from the table
  MatFrac<T> coefficient(int i) const {
    MatFrac<T> f(constants.at(i - 1));
    for (const auto& [key, M] : poles)
      if (std::get<0>(key) == i) f += MatFrac<T>::pole_term(pts[std::get<2>(key)], std::get<1>(key), M);
    return f;
  }
};

template <class T>
BetheTable<T> bethe_generators(const Side<T>& s) {
  BetheTable<T> t;
  t.N = s.N;
  t.dim = s.dim;
  t.rates = s.rates;
  t.pts = s.pts;
  const MatOp<T> op = universal_operator(s);
  for (int i = 1; i <= s.N; ++i) {
    const MatFrac<T>& B = op.coeff(s.N - i);
    Mat<T> c = B.poly_coeff(0);
    t.constants.push_back(c.empty() ? Mat<T>(s.dim, s.dim) : c);
    for (int p = 0; p < s.P; ++p) {
      const int ord = B.pole_order(s.pts[p]);
      if (ord > i) throw PoleOrderExceeded("pole order above i");
      for (int j = 1; j <= ord; ++j) {
        Mat<T> v = B.pole_coeff(s.pts[p], j);
        if (!v.empty()) t.poles[{i, j, p}] = v;
      }
    }
  }
  return t;
}

// Restriction of every entry to a block of the space the table lives on;
// IdentityFailed if some entry does not keep the block.
template <class T>
BetheTable<T> restrict_table(const BetheTable<T>& t, const FermionSpace& from, const FermionSpace& block) {
  BetheTable<T> r = t;
  r.dim = block.dim();
  auto cut = [&](const Mat<T>& M) {
    if (!preserves(M, from, block)) throw IdentityFailed("generator leaves the weight block");
    return restrict_to(M, from, block);
  };
  for (auto& c : r.constants) c = cut(c);
  for (auto& [key, M] : r.poles) M = cut(M);
  return r;
}

// Coefficient of x^{-j} at infinity of B_i.
template <class T>
Mat<T> coeff_at_infinity(const BetheTable<T>& t, int i, int j) {
  if (i < 1 || i > t.N || j < 0) throw IndexOutOfRange("coeff_at_infinity index");
  if (j == 0) return t.constants[i - 1];
  Mat<T> r(t.dim, t.dim);
  for (const auto& [key, M] : t.poles) {
    const auto [ii, jj, p] = key;
    if (ii != i || jj > j) continue;
    // (x - z)^{-r} = sum_j binom(j-1, r-1) z^{j-r} x^{-j}
    r += T(binomial<T>(j - 1, jj - 1) * power(t.pts[p], j - jj)) * M;
  }
  return r;
}

// C_j(u) from prod (u - rates) sum_j C_j x^{-j} = u^N + sum_i B_i(x) u^{N-i}.
template <class T>
std::vector<MatFrac<T>> chat_series(const BetheTable<T>& t, int j_max) {
  if (j_max < 0) throw InvalidInput("chat_series depth");
  std::vector<std::pair<T, int>> roots;
  for (const auto& r : t.rates) roots.push_back({r, 1});
  const MatFrac<T> inv = lift(inverse_of_roots(roots), t.dim);
  const Mat<T> I = Mat<T>::identity(t.dim);
  std::vector<MatFrac<T>> out;
  for (int j = 0; j <= j_max; ++j) {
    std::vector<Mat<T>> num(t.N + 1, Mat<T>(t.dim, t.dim));
    if (j == 0) num[t.N] = I;
    for (int i = 1; i <= t.N; ++i) num[t.N - i] = num[t.N - i] + coeff_at_infinity(t, i, j);
    out.push_back(MatFrac<T>::from_poly(num) * inv);
  }
  return out;
}

struct ResidueReport {
  bool ok = true;
  std::vector<int> failed_gaudin, failed_dynamical;
};

// H_p = Res_{x=pts_p}(B_1^2/2 - B_2), G_i = Res_{u=rates_i}(C_1^2/2 - C_2),
// compared with the given Hamiltonian matrices.
template <class T>
ResidueReport residue_check(const BetheTable<T>& t, const std::vector<Mat<T>>& H, const std::vector<Mat<T>>& G) {
  ResidueReport r;
  const T half = Field<T>::ratio(1, 2);
  const MatFrac<T> B1 = t.coefficient(1), B2 = t.N >= 2 ? t.coefficient(2) : MatFrac<T>();
  const MatFrac<T> hb = half * (B1 * B1) - B2;
  for (size_t p = 0; p < t.pts.size(); ++p)
    if (!(hb.residue(t.pts[p]) == H.at(p))) {
      r.ok = false;
      r.failed_gaudin.push_back(static_cast<int>(p));
    }
  auto C = chat_series(t, 2);
  const MatFrac<T> gc = half * (C[1] * C[1]) - C[2];
  for (int i = 0; i < t.N; ++i)
    if (!(gc.residue(t.rates[i]) == G.at(i))) {
      r.ok = false;
      r.failed_dynamical.push_back(i);
    }
  return r;
}

template <class T>
ResidueReport residue_check(const Side<T>& s, const BetheTable<T>& t) {
  std::vector<Mat<T>> H, G;
  for (int p = 0; p < s.P; ++p) H.push_back(gaudin_hamiltonian(s, p));
  for (int i = 0; i < s.N; ++i) G.push_back(dynamical_hamiltonian(s, i));
  return residue_check(t, H, G);
}

// ------------------------------------------------------------ block level

// gl_n side on the row sector of the block, and the gl_k side (rates z,
// points -alpha) on its column sector.
template <class T>
Side<T> n_side_for(const FermionSpace& block, const std::vector<T>& alphas, const std::vector<T>& zs) {
  return n_side(block.l.empty() ? block : row_sector(block.k, block.n, block.l), alphas, zs);
}
template <class T>
Side<T> k_side_for(const FermionSpace& block, const std::vector<T>& alphas, const std::vector<T>& zs) {
  std::vector<T> neg;
  for (const auto& a : alphas) neg.push_back(T(-a));
  return k_side(block.m.empty() ? block : col_sector(block.k, block.n, block.m), zs, neg);
}

template <class T>
BetheTable<T> block_table(const Side<T>& s, const FermionSpace& block) {
  return restrict_table(bethe_generators(s), s.space, block);
}

template <class T>
Mat<T> on_block(const Mat<T>& M, const Side<T>& s, const FermionSpace& block) {
  if (!preserves(M, s.space, block)) throw IdentityFailed("operator leaves the weight block");
  return restrict_to(M, s.space, block);
}

struct DualityReport {
  bool gaudin = true, dynamical = true, sign = true;
  std::vector<std::string> failures;
  bool ok() const { return gaudin && dynamical && sign; }
};

// (i) rho_n(H_a(alpha, z)) = -rho_k(G_a(z, -alpha)),
// (ii) rho_n(G_i(alpha, z)) = rho_k(H_i(z, -alpha)), on the full space.
template <class T>
DualityReport duality_check(int k, int n, const std::vector<T>& alphas, const std::vector<T>& zs) {
  DualityReport r;
  const FermionSpace sp = full_space(k, n);
  const Side<T> A = n_side(sp, alphas, zs);
  const Side<T> B = k_side_for(sp, alphas, zs);
  for (int a = 0; a < k; ++a)
    if (!(gaudin_hamiltonian(A, a) == T(-1) * dynamical_hamiltonian(B, a))) {
      r.gaudin = false;
      r.failures.push_back("gaudin/dynamical a=" + std::to_string(a + 1));
    }
  for (int i = 0; i < n; ++i)
    if (!(dynamical_hamiltonian(A, i) == gaudin_hamiltonian(B, i))) {
      r.dynamical = false;
      r.failures.push_back("dynamical/gaudin i=" + std::to_string(i + 1));
    }
  return r;
}

// (iii) B_{ij} at (-alpha, -z) equals (-1)^{n-i-j} B_{ij} at (alpha, z), for
// j = 0..j_max, on the given block.
template <class T>
DualityReport sign_check(const FermionSpace& block, const std::vector<T>& alphas, const std::vector<T>& zs,
                         int j_max) {
  DualityReport r;
  std::vector<T> na, nz;
  for (const auto& a : alphas) na.push_back(T(-a));
  for (const auto& z : zs) nz.push_back(T(-z));
  const BetheTable<T> plus = block_table(n_side_for(block, alphas, zs), block);
  const BetheTable<T> minus = block_table(n_side_for(block, na, nz), block);
  const int N = plus.N;
  for (int i = 1; i <= N; ++i)
    for (int j = 0; j <= j_max; ++j) {
      const int e = N - i - j;
      const T sg = Field<T>::of(((e % 2) + 2) % 2 ? -1 : 1);
      if (!(coeff_at_infinity(minus, i, j) == sg * coeff_at_infinity(plus, i, j))) {
        r.sign = false;
        r.failures.push_back("sign i=" + std::to_string(i) + " j=" + std::to_string(j));
      }
    }
  return r;
}

// Pairwise commutators of one list, or across two lists.
template <class T>
bool all_commute(const std::vector<Mat<T>>& a, const std::vector<Mat<T>>& b) {
  for (const auto& x : a)
    for (const auto& y : b)
      if (!commutator(x, y).is_zero()) return false;
  return true;
}

}  // namespace bispec
