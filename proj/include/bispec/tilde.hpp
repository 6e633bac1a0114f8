#pragma once

#include <algorithm>
#include <map>
#include <random>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "bispec/linalg.hpp"
#include "bispec/qedata.hpp"

namespace bispec {

template <class T>
using PDiffOp = DiffOp<PFrac<T>>;

template <class T>
struct TildeStages {
  PDiffOp<T> D_V;             // augmentation stripped
  PDiffOp<T> Dhat;            // prod (d - alpha_i)^{p_i}
  PDiffOp<T> Dcheck;          // quotient Dhat / D_V
  PDiffOp<T> Dcheck_dagger;   // formal conjugate
  DiffOp<Poly<T>> step4;      // prod (x - z_a)^{lambda_1} * conjugate
  DiffOp<Poly<T>> step5;      // exponent swap
  PDiffOp<T> Dtilde;          // divided, monic of order L
  PDiffOp<T> Dtilde_aug;      // re-augmented
};

namespace detail {
template <class T>
PDiffOp<T> chop_if_float(const PDiffOp<T>& D, double tol) {
  if constexpr (Field<T>::exact) {
    (void)tol;
    return D;
  } else {
    return chop(D, tol);
  }
}

template <class T>
bool poly_near(const Poly<T>& a, const Poly<T>& b, double tol) {
  Poly<T> d = a - b;
  const double s = std::max({1.0, a.scale(), b.scale()});
  for (const auto& c : d.coeffs())
    if (!near_zero(c, tol, s)) return false;
  return true;
}
}  // namespace detail

// The chain: strip, quotient, conjugate, multiply, swap, divide, re-augment.
template <class T>
TildeStages<T> tilde_chain(const PDiffOp<T>& D_aug, const QEData<T>& data, double tol = 0.0) {
  data.validate();
  const QEData<T> red = reduce_data(data);
  TildeStages<T> st;
  const PFrac<T> one(Field<T>::of(1));
  if (D_aug.is_zero() || !(D_aug.lead() == one)) {
    if constexpr (Field<T>::exact) throw InvalidInput("operator must be monic");
  }

  // (1) strip the augmentation
  std::vector<std::pair<T, int>> aug;
  for (size_t i = 0; i < data.mu.size(); ++i)
    if (data.mu[i].empty()) aug.push_back({data.alphas[i], 1});
  st.D_V = aug.empty() ? D_aug : quotient(D_aug, constant_factor_product<PFrac<T>>(aug), tol);
  st.D_V = detail::chop_if_float(st.D_V, tol);
  if (st.D_V.order() != red.Mprime())
    throw InvalidInput("operator order does not match the data");

  // (2) quotient
  std::vector<std::pair<T, int>> hat;
  for (int i = 0; i < red.n(); ++i) hat.push_back({red.alphas[i], red.p_i(i)});
  st.Dhat = constant_factor_product<PFrac<T>>(hat);
  st.Dcheck = detail::chop_if_float(quotient(st.Dhat, st.D_V, tol), tol);

  // (3) formal conjugate
  st.Dcheck_dagger = detail::chop_if_float(st.Dcheck.dagger(), tol);

  // (4) multiply by prod (x - z_a)^{lambda_1}; coefficients must become polynomial
  std::vector<std::pair<T, int>> zr;
  for (int a = 0; a < red.k(); ++a) zr.push_back({red.zs[a], red.lambda[a].first()});
  const PFrac<T> P = pfrac_from_poly(from_roots(zr));
  const double s4 = std::max(1.0, st.Dcheck_dagger.scale());
  std::vector<Poly<T>> c4;
  for (const auto& c : st.Dcheck_dagger.coeffs()) {
    PFrac<T> v = P * c;
    if constexpr (!Field<T>::exact) v = v.chop(tol, s4 * std::max(1.0, P.scale()));
    if (!v.is_polynomial()) throw NonPolynomialAtStep4("coefficient keeps a pole after multiplication");
    c4.push_back(Poly<T>(v.poly()));
  }
  st.step4 = DiffOp<Poly<T>>(c4);

  // (5) swap exponents: sum p_{mk} x^k d^m -> sum p_{mk} x^m d^k
  int maxdeg = 0;
  for (const auto& c : c4) maxdeg = std::max(maxdeg, c.deg());
  std::vector<Poly<T>> c5(maxdeg + 1);
  for (int k = 0; k <= maxdeg; ++k) {
    std::vector<T> q(c4.size(), Field<T>::of(0));
    for (size_t m = 0; m < c4.size(); ++m) q[m] = c4[m].coeff(k);
    c5[k] = Poly<T>(q);
  }
  st.step5 = DiffOp<Poly<T>>(c5);
  if (st.step5.is_zero()) throw NotDifferentialAtStep5("swap produced the zero operator");

  // (6) divide by (-1)^M prod (x + alpha_i)^{mu_1}
  const int L = red.L();
  std::vector<std::pair<T, int>> ar;
  for (int i = 0; i < red.n(); ++i) ar.push_back({T(-red.alphas[i]), red.mu[i].first()});
  Poly<T> expect = from_roots(ar);
  const T sgn = (red.M() % 2) ? Field<T>::of(-1) : Field<T>::of(1);
  expect = expect * sgn;
  for (int k = L + 1; k <= st.step5.order(); ++k)
    if (!detail::poly_near(st.step5.coeff(k), Poly<T>(), tol))
      throw NotMonicOrderL("order exceeds L after the swap");
  if (!detail::poly_near(st.step5.coeff(L), expect, tol)) throw NotMonicOrderL("leading coefficient is not the expected product");
  const PFrac<T> inv = sgn * inverse_of_roots(ar);
  std::vector<PFrac<T>> c6(L + 1);
  for (int k = 0; k < L; ++k) c6[k] = pfrac_from_poly(st.step5.coeff(k)) * inv;
  c6[L] = one;
  st.Dtilde = detail::chop_if_float(PDiffOp<T>(c6), tol);

  // (7) re-augment with the empty lambda slots
  st.Dtilde_aug = augment_op(st.Dtilde, data.lambda, data.zs);
  return st;
}

template <class T>
PDiffOp<T> tilde_transform(const PDiffOp<T>& D_aug, const QEData<T>& data, double tol = 0.0) {
  return tilde_chain(D_aug, data, tol).Dtilde_aug;
}

// Exact RatFunc front end: poles of the input live at the z's.
inline DiffOp<RatFunc<Rational>> tilde_transform(const DiffOp<RatFunc<Rational>>& D_aug, const QEData<Rational>& data) {
  return to_ratfunc_op(tilde_transform(to_pfrac_op(D_aug, data.zs), data));
}

// ---------------------------------------------------------- kernel of D~

namespace detail {
template <class T>
using CoordKey = std::tuple<int, T, int>;  // (0, 0, e) polynomial x^e; (1, at, j) pole

template <class T>
std::vector<std::pair<CoordKey<T>, T>> coords(const PFrac<T>& f) {
  std::vector<std::pair<CoordKey<T>, T>> v;
  for (size_t e = 0; e < f.poly().size(); ++e)
    if (!Field<T>::zero(f.poly()[e])) v.push_back({CoordKey<T>{0, Field<T>::of(0), static_cast<int>(e)}, f.poly()[e]});
  for (const auto& p : f.poles())
    for (size_t j = 0; j < p.c.size(); ++j)
      if (!Field<T>::zero(p.c[j])) v.push_back({CoordKey<T>{1, p.at, static_cast<int>(j + 1)}, p.c[j]});
  return v;
}
}  // namespace detail

// Kernel of D inside span{x^t e^{r x} : t <= max_deg, r in rates}.
inline std::vector<QuasiExp<Rational>> kernel_basis(const PDiffOp<Rational>& D, const std::vector<Rational>& rates,
                                                    int max_deg) {
  using T = Rational;
  std::vector<QuasiExp<T>> out;
  for (const auto& z : rates) {
    std::vector<PFrac<T>> images;
    for (int t = 0; t <= max_deg; ++t) {
      PFrac<T> acc;
      for (int m = 0; m <= D.order(); ++m) {
        if (D.coeff(m).is_zero()) continue;
        // (x^t e^{zx})^{(m)} = e^{zx} sum_l C(m,l) (t)_l x^{t-l} z^{m-l}
        std::vector<T> poly(t + 1, Field<T>::of(0));
        for (int l = 0; l <= std::min(m, t); ++l)
          poly[t - l] += binomial<T>(m, l) * falling_factorial_as<T>(t, l) * power(z, m - l);
        acc += D.coeff(m) * PFrac<T>::from_poly(poly);
      }
      images.push_back(acc);
    }
    std::map<detail::CoordKey<T>, int> row_of;
    Matrix<T> A;
    for (int t = 0; t <= max_deg; ++t)
      for (const auto& [key, v] : detail::coords(images[t])) {
        auto it = row_of.find(key);
        int r;
        if (it == row_of.end()) {
          r = static_cast<int>(A.size());
          row_of[key] = r;
          A.push_back(std::vector<T>(max_deg + 1, Field<T>::of(0)));
        } else {
          r = it->second;
        }
        A[r][t] = v;
      }
    for (const auto& v : nullspace(A, max_deg + 1)) out.push_back(qe(z, Poly<T>(v)));
  }
  return out;
}

// ---------------------------------------------------- windowed formula

// (-1)^{M'} prod (x + alpha_i)^{n_i} (D_V^{-1})^# prod (d - z_a)^{lambda_1},
// compared with D~ on the guaranteed window.
template <class T>
WindowCompare tilde_window_check(const PDiffOp<T>& D_V, const QEData<T>& data, const PDiffOp<T>& Dtilde, int depth,
                                 double tol = 0.0) {
  const QEData<T> red = reduce_data(data);
  PsiDO<T> inv = invert(diffop_to_psido(D_V, depth), depth);
  PsiDO<T> s = inv.sharp();
  std::vector<std::pair<T, int>> ar;
  for (int i = 0; i < red.n(); ++i) ar.push_back({T(-red.alphas[i]), red.n_i(i)});
  Poly<T> left = from_roots(ar) * ((red.Mprime() % 2) ? Field<T>::of(-1) : Field<T>::of(1));
  PsiDO<T> Lp = diffop_to_psido(DiffOp<Poly<T>>::constant(left), 1);
  std::vector<std::pair<T, int>> zr;
  for (int a = 0; a < red.k(); ++a) zr.push_back({red.zs[a], red.lambda[a].first()});
  PsiDO<T> Rp = diffop_to_psido(constant_factor_product<Poly<T>>(zr), 1);
  PsiDO<T> formula = mul(mul(Lp, s), Rp);
  return compare(formula, diffop_to_psido(Dtilde, depth), tol);
}

// --------------------------------------------------------- residues

template <class T>
struct HGResidues {
  std::vector<T> h;        // Res_{x=z_a}(b_1^2/2 - b_2)
  std::vector<T> g_tilde;  // Res_{u=z_a}(c~_1^2/2 - c~_2)
  bool identity = true;    // g~_a = -h_a for all a
};

template <class T>
HGResidues<T> h_g_residues(const PDiffOp<T>& D_aug, const PDiffOp<T>& Dt_aug, const QEData<T>& data, double tol = 0.0) {
  HGResidues<T> r;
  const int n = D_aug.order();
  const PFrac<T> b1 = D_aug.coeff(n - 1), b2 = n >= 2 ? D_aug.coeff(n - 2) : PFrac<T>();
  const PFrac<T> half(Field<T>::ratio(1, 2));
  const PFrac<T> hb = half * b1 * b1 - b2;
  for (const auto& z : data.zs) r.h.push_back(hb.residue(z));

  // c~_t(u) = (delta_{t0} u^k + sum_s b~_{s,t} u^{k-s}) / (constant-term polynomial)
  const int k = Dt_aug.order();
  auto num = [&](int t) {
    std::vector<T> c(k + 1, Field<T>::of(0));
    if (t == 0) c[k] = Field<T>::of(1);
    for (int s = 1; s <= k; ++s) c[k - s] += Dt_aug.coeff(k - s).coeff_at_infinity(t);
    return Poly<T>(c);
  };
  const Poly<T> den = num(0);
  auto ct = [&](int t) { return partial_fractions(RatFunc<T>(num(t), den), data.zs, tol); };
  const PFrac<T> c1 = ct(1), c2 = ct(2);
  const PFrac<T> gc = half * c1 * c1 - c2;
  double scale = 1.0;
  for (const auto& v : r.h) scale = std::max(scale, magnitude(v));
  for (size_t a = 0; a < data.zs.size(); ++a) {
    T g = gc.residue(data.zs[a]);
    r.g_tilde.push_back(g);
    if (!near_zero(T(g + r.h[a]), tol, scale)) r.identity = false;
  }
  return r;
}

// ------------------------------------------------- instance generator

namespace detail {
template <class T>
std::vector<int> exponent_set(const Partition& lam, int Mp) {
  std::vector<int> e;
  for (int t = 1; t <= Mp; ++t) e.push_back(Mp + lam[t - 1] - t);
  std::sort(e.begin(), e.end());
  return e;  // ascending
}
}  // namespace detail

// A space whose data is exactly `data` (verified), built one basis element at a
// time so that each new element adds the next prescribed exponent at every z.
inline std::vector<QuasiExp<Rational>> make_space_with_data(const QEData<Rational>& data, unsigned seed,
                                                            int retries = 40) {
  using T = Rational;
  data.validate();
  for (const auto& p : data.mu)
    if (p.empty()) throw InvalidInput("make_space_with_data needs reduced data");
  for (const auto& p : data.lambda)
    if (p.empty()) throw InvalidInput("make_space_with_data needs reduced data");
  const int Mp = data.Mprime();
  struct Slot {
    T rate;
    int deg;
  };
  std::vector<Slot> slots;
  for (int i = 0; i < data.n(); ++i)
    for (int j = 1; j <= data.n_i(i); ++j) slots.push_back({data.alphas[i], data.n_i(i) + data.mu[i][j - 1] - j});
  std::vector<std::vector<int>> eps;
  for (const auto& lam : data.lambda) eps.push_back(detail::exponent_set<T>(lam, Mp));

  std::vector<int> perm(Mp);
  for (int i = 0; i < Mp; ++i) perm[i] = i;
  std::sort(perm.begin(), perm.end(), [&](int a, int b) { return slots[a].deg < slots[b].deg; });
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> coin(-4, 4);
  std::vector<std::vector<int>> perms;
  {
    std::vector<int> p = perm;
    std::sort(p.begin(), p.end());
    do perms.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
    std::stable_sort(perms.begin(), perms.end(), [&](const auto& a, const auto& b) { return (a == perm) > (b == perm); });
  }
  for (int attempt = 0; attempt < retries; ++attempt) {
    const auto& order = perms[attempt % perms.size()];
    std::vector<QuasiExp<T>> built;
    bool ok = true;
    for (int s = 0; s < Mp && ok; ++s) {
      const Slot& sl = slots[order[s]];
      // unknowns: coefficients 0..deg-1 of q, then c^{(a)}_r for each a, r < s
      const int nq = sl.deg, nc = static_cast<int>(data.zs.size()) * s;
      const int cols = nq + nc;
      Matrix<T> A;
      std::vector<T> b;
      for (size_t a = 0; a < data.zs.size(); ++a) {
        const int need = eps[a][s];
        const T& z = data.zs[a];
        // Taylor rows at z of x^t e^{rate(x-z)} and of the built elements
        std::vector<std::vector<T>> qrows;
        for (int t = 0; t <= sl.deg; ++t) qrows.push_back(detail::taylor_row(sl.rate, Poly<T>::monomial(t), z, need));
        std::vector<std::vector<T>> grows;
        for (const auto& g : built) grows.push_back(detail::taylor_row(g.term().rate, g.term().f, z, need));
        for (int m = 0; m < need; ++m) {
          std::vector<T> row(cols, Field<T>::of(0));
          for (int t = 0; t < nq; ++t) row[t] = qrows[t][m];
          for (int r = 0; r < s; ++r) row[nq + static_cast<int>(a) * s + r] = T(-grows[r][m]);
          A.push_back(row);
          b.push_back(T(-qrows[sl.deg][m]));
        }
      }
      auto sol = solve_affine(A, b, cols);
      if (!sol) {
        ok = false;
        break;
      }
      std::vector<T> v = sol->particular;
      for (const auto& nv : sol->null) {
        T w = Field<T>::of(coin(rng));
        for (int c = 0; c < cols; ++c) v[c] += w * nv[c];
      }
      std::vector<T> q(sl.deg + 1);
      for (int t = 0; t < nq; ++t) q[t] = v[t];
      q[sl.deg] = Field<T>::of(1);
      built.push_back(qe(sl.rate, Poly<T>(q)));
    }
    if (!ok) continue;
    try {
      if (same_data(qe_data(built), data)) return built;
    } catch (const Error&) {
    }
  }
  throw NoSolutionFound("no space with the requested data within the retry budget");
}

// Monic order, kernel data and residue identity for one exact instance.
struct Theorem1Result {
  bool monic_order_L = false;
  bool kernel_data = false;
  bool residues = false;
  std::string note;
};

inline Theorem1Result check_theorem1(const std::vector<QuasiExp<Rational>>& V, const QEData<Rational>& data) {
  Theorem1Result res;
  auto D = to_pfrac_op(fundamental_operator(V), data.zs);
  TildeStages<Rational> st;
  try {
    st = tilde_chain(D, data);
  } catch (const Error& e) {
    res.note = std::string(e.kind()) + ": " + e.what();
    return res;
  }
  res.monic_order_L = st.Dtilde.order() == data.L() && st.Dtilde.lead() == PFrac<Rational>(Rational(1));
  int bound = data.L() + 2;
  for (const auto& l : data.lambda) bound += l.size();
  auto ker = kernel_basis(st.Dtilde, data.zs, bound);
  try {
    res.kernel_data = static_cast<int>(ker.size()) == data.L() && same_data(qe_data(ker), dual_data(data));
  } catch (const Error& e) {
    res.note = std::string(e.kind()) + ": " + e.what();
  }
  res.residues = h_g_residues(D, st.Dtilde_aug, data).identity;
  return res;
}

}  // namespace bispec
