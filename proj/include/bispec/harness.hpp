#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "bispec/fermion.hpp"
#include "bispec/io.hpp"
#include "bispec/tilde.hpp"

namespace bispec {

// ------------------------------------------------------------ config/report

struct SuiteConfig {
  int k = 0, n = 0;  // 0: suite default
  unsigned seed = 1;
  Mode mode = Mode::exact;
  double tol = 1e-8;
  int trunc = 6;
  int retries = 20;
  int instances = 0;  // 0: suite default
  std::vector<Rational> alphas, zs;  // empty: random
  std::vector<int> l, m;             // empty: suite default block
};

struct Report {
  std::string suite;
  int instances = 0;
  int skipped = 0;
  json failures = json::array();
  json notes = json::object();

  void fail(const std::string& check, json input, const std::string& message) {
    failures.push_back({{"check", check}, {"input", std::move(input)}, {"message", message}});
  }
  bool ok() const { return failures.empty(); }
  int failures_of(const std::string& check) const {
    int c = 0;
    for (const auto& f : failures)
      if (f.at("check") == check) ++c;
    return c;
  }
  json to_json() const {
    return {{"suite", suite}, {"instances", instances}, {"skipped", skipped}, {"failures", failures},
            {"notes", notes}, {"ok", ok()}};
  }
};

// ------------------------------------------------------------ random draws

inline Rational random_rational(std::mt19937& rng, int height) {
  std::uniform_int_distribution<int> num(-height, height), den(1, height);
  Rational r(num(rng), den(rng));
  r.canonicalize();
  return r;
}

inline std::vector<Rational> distinct_rationals(std::mt19937& rng, int count, int height,
                                                const std::vector<Rational>& avoid = {}) {
  std::vector<Rational> v;
  for (int guard = 0; static_cast<int>(v.size()) < count; ++guard) {
    if (guard > 10000) throw InvalidInput("cannot draw distinct rationals of this height");
    Rational r = random_rational(rng, height);
    if (std::find(v.begin(), v.end(), r) == v.end() && std::find(avoid.begin(), avoid.end(), r) == avoid.end())
      v.push_back(r);
  }
  return v;
}

// Coefficients in -3..3 on a window of depth 2..5 below ceilings in -2..3;
// the top coefficient is nonzero so products keep a nonempty window.
inline PsiDO<Rational> random_psido(std::mt19937& rng) {
  std::uniform_int_distribution<int> ceil(-2, 3), depth(2, 5), coef(-3, 3), coin(0, 1);
  const int K = ceil(rng), M = ceil(rng), dk = depth(rng), dm = depth(rng);
  PsiDO<Rational> A(K, M, K - dk + 1, M - dm + 1);
  for (int k = K - dk + 1; k <= K; ++k)
    for (int m = M - dm + 1; m <= M; ++m)
      if (coin(rng)) A.set(k, m, Rational(coef(rng)));
  int c = 0;
  while (c == 0) c = coef(rng);
  A.set(K, M, Rational(c));
  return A;
}

// Monic, order 1..3, coefficients regular at infinity with poles of order <= 2.
inline PDiffOp<Rational> random_regular_diffop(std::mt19937& rng) {
  std::uniform_int_distribution<int> ord(1, 3), coef(-3, 3), npoles(0, 2), porder(1, 2);
  const int r = ord(rng);
  std::vector<PFrac<Rational>> c(r + 1);
  for (int i = 0; i < r; ++i) {
    PFrac<Rational> f(Rational(coef(rng)));
    const auto pts = distinct_rationals(rng, npoles(rng), 4);
    for (const auto& p : pts) f += PFrac<Rational>::pole_term(p, porder(rng), Rational(coef(rng)));
    c[i] = f;
  }
  c[r] = PFrac<Rational>(Rational(1));
  return PDiffOp<Rational>(c);
}

inline std::vector<QuasiExp<Rational>> random_space(std::mt19937& rng, int dim, int height) {
  std::uniform_int_distribution<int> nrates(1, dim), deg(0, 2), coef(-3, 3);
  const auto rates = distinct_rationals(rng, nrates(rng), height);
  std::uniform_int_distribution<int> pick(0, static_cast<int>(rates.size()) - 1);
  std::vector<QuasiExp<Rational>> b;
  for (int t = 0; t < dim; ++t) {
    const int d = deg(rng);
    std::vector<Rational> q(d + 1);
    for (auto& v : q) v = Rational(coef(rng));
    q[d] = Rational(1);
    b.push_back(qe(rates[pick(rng)], Poly<Rational>(q)));
  }
  return b;
}

// --------------------------------------------------------- eigen-decomposition

struct EigenPair {
  std::vector<double> vector;
  std::vector<double> values;  // one per input operator
};

struct EigenBasis {
  std::vector<EigenPair> pairs;
  double min_gap = 0;
  bool ill_conditioned = false;  // gap under 1e3 * tol
};

namespace detail {
inline Eigen::MatrixXd to_eigen(const Mat<double>& M, int dim) {
  Eigen::MatrixXd E = Eigen::MatrixXd::Zero(dim, dim);
  if (M.empty()) return E;
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) E(i, j) = M(i, j);
  return E;
}
}  // namespace detail

// Rayleigh quotient for a unit vector; sets the residual norm.
inline double eigenvalue_of(const Mat<double>& M, const std::vector<double>& v, double* residual = nullptr) {
  const int d = static_cast<int>(v.size());
  Eigen::Map<const Eigen::VectorXd> x(v.data(), d);
  const Eigen::VectorXd y = detail::to_eigen(M, d) * x;
  const double lam = x.dot(y);
  if (residual) *residual = (y - lam * x).lpNorm<Eigen::Infinity>();
  return lam;
}

// Simultaneous diagonalization through one random combination.
inline EigenBasis common_eigenbasis(const std::vector<Mat<double>>& ops, double tol, unsigned seed) {
  EigenBasis out;
  int dim = 0;
  for (const auto& M : ops) dim = std::max(dim, M.rows());
  if (dim == 0) return out;
  double s = 1.0;
  std::vector<Eigen::MatrixXd> E;
  for (const auto& M : ops) {
    E.push_back(detail::to_eigen(M, dim));
    s = std::max(s, E.back().lpNorm<Eigen::Infinity>());
  }
  for (size_t a = 0; a < E.size(); ++a)
    for (size_t b = a + 1; b < E.size(); ++b)
      if ((E[a] * E[b] - E[b] * E[a]).lpNorm<Eigen::Infinity>() > tol * s * s * dim)
        throw NotCommuting("operators " + std::to_string(a) + " and " + std::to_string(b) + " do not commute");

  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(dim, dim);
  for (const auto& A : E) C += u(rng) * A;
  const double sc = std::max(1.0, C.lpNorm<Eigen::Infinity>());
  Eigen::EigenSolver<Eigen::MatrixXd> es(C);
  if (es.info() != Eigen::Success) throw Degenerate("eigen solver did not converge");
  std::vector<int> order(dim);
  for (int i = 0; i < dim; ++i) {
    order[i] = i;
    if (std::fabs(es.eigenvalues()[i].imag()) > tol * sc) throw Degenerate("complex eigenvalue in the combination");
  }
  std::sort(order.begin(), order.end(), [&](int a, int b) { return es.eigenvalues()[a].real() < es.eigenvalues()[b].real(); });
  out.min_gap = dim > 1 ? std::numeric_limits<double>::infinity() : 0.0;
  for (int i = 0; i + 1 < dim; ++i)
    out.min_gap = std::min(out.min_gap, es.eigenvalues()[order[i + 1]].real() - es.eigenvalues()[order[i]].real());
  if (dim > 1 && out.min_gap <= tol * sc) throw Degenerate("eigenvalues of the combination collide");
  out.ill_conditioned = dim > 1 && out.min_gap < 1e3 * tol * sc;

  for (int idx : order) {
    Eigen::VectorXd v = es.eigenvectors().col(idx).real();
    v.normalize();
    int lead = 0;
    for (int i = 0; i < dim; ++i)
      if (std::fabs(v[i]) > std::fabs(v[lead]) + 1e-12) lead = i;
    if (v[lead] < 0) v = -v;
    EigenPair p;
    p.vector.assign(v.data(), v.data() + dim);
    for (size_t a = 0; a < ops.size(); ++a) {
      double res = 0;
      const double lam = eigenvalue_of(ops[a], p.vector, &res);
      if (res > tol * std::max(1.0, E[a].lpNorm<Eigen::Infinity>()) * dim)
        throw Degenerate("operator " + std::to_string(a) + " is not diagonal in the found basis");
      p.values.push_back(lam);
    }
    out.pairs.push_back(std::move(p));
  }
  return out;
}

// ------------------------------------------------ eigenvalues -> operators

template <class T>
struct EigenTable {
  std::vector<T> constants;                      // index i-1
  std::map<std::tuple<int, int, int>, T> poles;  // (i, j, p)
};

// d^N + sum_i b_i(x) d^{N-i}, b_i = const_i + sum beta_{ijp} (x - pts_p)^{-j}.
template <class T>
PDiffOp<T> eigen_to_diffop(int N, const std::vector<T>& pts, const EigenTable<T>& e) {
  if (static_cast<int>(e.constants.size()) != N) throw IncompleteTable("constant parts missing");
  std::vector<PFrac<T>> c(N + 1);
  c[N] = PFrac<T>(Field<T>::of(1));
  for (int i = 1; i <= N; ++i) c[N - i] = PFrac<T>(e.constants[i - 1]);
  for (const auto& [key, v] : e.poles) {
    const auto [i, j, p] = key;
    if (i < 1 || i > N || p < 0 || p >= static_cast<int>(pts.size()) || j < 1)
      throw IncompleteTable("pole entry outside the table shape");
    c[N - i] += PFrac<T>::pole_term(pts[p], j, v);
  }
  return PDiffOp<T>(c);
}

// Same, after checking the eigenvalues cover every entry of the table.
template <class T, class U>
PDiffOp<T> eigen_to_diffop(const BetheTable<U>& t, const std::vector<T>& pts, const EigenTable<T>& e) {
  for (const auto& [key, M] : t.poles)
    if (!e.poles.count(key)) throw IncompleteTable("no eigenvalue for a pole coefficient");
  return eigen_to_diffop(t.N, pts, e);
}

// Entries of a table on a one-dimensional block.
inline EigenTable<Rational> exact_eigen_table(const BetheTable<Rational>& t) {
  if (t.dim != 1) throw InvalidInput("exact eigenvalues need a one-dimensional block");
  EigenTable<Rational> e;
  auto entry = [](const Mat<Rational>& M) { return M.empty() ? Rational(0) : M(0, 0); };
  for (const auto& c : t.constants) e.constants.push_back(entry(c));
  for (const auto& [key, M] : t.poles) e.poles[key] = entry(M);
  return e;
}

// Rayleigh quotients of every table entry at v; worst residual reported.
inline EigenTable<double> float_eigen_table(const BetheTable<Rational>& t, const std::vector<double>& v,
                                            double* worst = nullptr) {
  EigenTable<double> e;
  double w = 0;
  auto val = [&](const Mat<Rational>& M) {
    double r = 0;
    const double lam = eigenvalue_of(mat_to_double(M), v, &r);
    w = std::max(w, r / std::max(1.0, M.empty() ? 0.0 : M.scale()));
    return lam;
  };
  for (const auto& c : t.constants) e.constants.push_back(val(c));
  for (const auto& [key, M] : t.poles) e.poles[key] = val(M);
  if (worst) *worst = w;
  return e;
}

// Block (l, m) <-> data: mu^(i) = (m_i) at alpha_i, lambda^(a) = (1^{l_a}) at z_a.
template <class T>
QEData<T> block_data(const FermionSpace& block, const std::vector<T>& alphas, const std::vector<T>& zs) {
  QEData<T> d;
  for (int i = 0; i < block.n; ++i) d.mu.push_back(Partition(block.m[i] ? std::vector<int>{block.m[i]} : std::vector<int>{}));
  for (int a = 0; a < block.k; ++a) d.lambda.push_back(Partition(std::vector<int>(block.l[a], 1)));
  d.alphas = alphas;
  d.zs = zs;
  d.reduced = false;
  return d;
}

// Largest |a - b| / max(1, |a|, |b|) over the coefficients of two operators.
template <class T>
double max_relative_diff(const PDiffOp<T>& a, const PDiffOp<T>& b) {
  const int N = std::max(a.order(), b.order());
  double worst = 0;
  auto rel = [&](const T& x, const T& y) {
    const double den = std::max({1.0, magnitude(x), magnitude(y)});
    worst = std::max(worst, magnitude(T(x - y)) / den);
  };
  for (int i = 0; i <= N; ++i) {
    const PFrac<T> f = a.coeff(i), g = b.coeff(i);
    const int dp = std::max(f.poly_degree(), g.poly_degree());
    for (int e = 0; e <= dp; ++e) rel(f.poly_coeff(e), g.poly_coeff(e));
    std::vector<T> ats;
    for (const auto& p : f.poles()) ats.push_back(p.at);
    for (const auto& p : g.poles()) ats.push_back(p.at);
    for (const auto& at : ats) {
      const int o = std::max(f.pole_order(at), g.pole_order(at));
      for (int j = 1; j <= o; ++j) rel(f.pole_coeff(at, j), g.pole_coeff(at, j));
    }
  }
  return worst;
}

// ------------------------------------------------------------- main2 pieces

struct Main2Outcome {
  bool ok = true;
  double max_rel = 0;
  json detail = json::array();
  std::string message;
};

// One-dimensional block: every step exact.
inline Main2Outcome main2_exact(const FermionSpace& block, const std::vector<Rational>& alphas,
                                const std::vector<Rational>& zs) {
  Main2Outcome o;
  std::vector<Rational> neg;
  for (const auto& a : alphas) neg.push_back(-a);
  const auto tn = block_table(n_side_for(block, alphas, zs), block);
  const auto tk = block_table(k_side_for(block, alphas, zs), block);
  const auto D = eigen_to_diffop(tn, zs, exact_eigen_table(tn));
  const auto data = block_data(block, alphas, zs);
  const auto Dt = tilde_transform(D, data);
  const auto Dk = eigen_to_diffop(tk, neg, exact_eigen_table(tk));
  o.ok = Dt == Dk;
  if (!o.ok) o.message = "transformed operator differs from the dual eigenvalues";
  o.detail.push_back({{"D_aug", to_json(D)}, {"D_tilde_aug", to_json(Dt)}, {"dual", to_json(Dk)}, {"equal", o.ok}});
  return o;
}

// Any block, double precision; Degenerate propagates for resampling.
inline Main2Outcome main2_float(const FermionSpace& block, const std::vector<Rational>& alphas,
                                const std::vector<Rational>& zs, double tol, unsigned seed) {
  Main2Outcome o;
  const auto tn = block_table(n_side_for(block, alphas, zs), block);
  const auto tk = block_table(k_side_for(block, alphas, zs), block);
  std::vector<Mat<double>> gens;
  for (const auto& g : tn.generators()) gens.push_back(mat_to_double(g));
  const EigenBasis eb = common_eigenbasis(gens, tol, seed);
  std::vector<double> ad, zd, negd;
  for (const auto& a : alphas) {
    ad.push_back(a.get_d());
    negd.push_back(-a.get_d());
  }
  for (const auto& z : zs) zd.push_back(z.get_d());
  const auto data = block_data(block, ad, zd);
  for (const auto& p : eb.pairs) {
    double rn = 0, rk = 0;
    const auto en = float_eigen_table(tn, p.vector, &rn);
    const auto ek = float_eigen_table(tk, p.vector, &rk);
    json item = {{"vector", p.vector}};
    if (rk > tol * block.dim()) {
      o.ok = false;
      o.message = "eigenvector of one table is not an eigenvector of the other";
    }
    const auto D = eigen_to_diffop(tn, zd, en);
    PDiffOp<double> Dt;
    try {
      Dt = tilde_transform(D, data, tol);
    } catch (const Error& e) {
      o.ok = false;
      o.message = std::string(e.kind()) + ": " + e.what();
      item["error"] = o.message;
      o.detail.push_back(item);
      continue;
    }
    const auto Dk = eigen_to_diffop(tk, negd, ek);
    const double rel = max_relative_diff(Dt, Dk);
    o.max_rel = std::max(o.max_rel, rel);
    if (!(rel <= tol)) {
      o.ok = false;
      o.message = "coefficients disagree beyond tolerance";
    }
    item["D_aug"] = to_json(D);
    item["D_tilde_aug"] = to_json(Dt);
    item["dual"] = to_json(Dk);
    item["max_rel"] = rel;
    o.detail.push_back(item);
  }
  return o;
}

// ---------------------------------------------------------------- suites

inline Report verify_psido(const SuiteConfig& cfg) {
  Report r;
  r.suite = "psido";
  std::mt19937 rng(cfg.seed);
  const int triples = cfg.instances > 0 ? cfg.instances : 200;
  int vacuous = 0;
  auto eq = [&](const PsiDO<Rational>& a, const PsiDO<Rational>& b) {
    const auto w = compare(a, b);
    if (w.compared == 0) ++vacuous;
    return w.equal;
  };
  for (int t = 0; t < triples; ++t) {
    const auto A = random_psido(rng), B = random_psido(rng), C = random_psido(rng);
    json in = {{"A", to_json(A)}, {"B", to_json(B)}, {"C", to_json(C)}};
    ++r.instances;
    try {
      if (!eq((A * B) * C, A * (B * C))) r.fail("associativity", in, "(AB)C != A(BC)");
      if (!eq(A.dagger().dagger(), A)) r.fail("dagger_involution", in, "A^dagger^dagger != A");
      if (!eq(A.ddagger().ddagger(), A)) r.fail("ddagger_involution", in, "A^ddagger^ddagger != A");
      if (!eq(A.sharp().sharp().sharp().sharp(), A)) r.fail("sharp_order4", in, "#^4 != id");
      if (!eq((A * B).dagger(), B.dagger() * A.dagger())) r.fail("dagger_antiautomorphism", in, "(AB)^dagger");
      if (!eq((A * B).ddagger(), B.ddagger() * A.ddagger())) r.fail("ddagger_antiautomorphism", in, "(AB)^ddagger");
      if (!eq((A * B).sharp(), A.sharp() * B.sharp())) r.fail("sharp_automorphism", in, "(AB)^#");
    } catch (const Error& e) {
      r.fail("psido_exception", in, std::string(e.kind()) + ": " + e.what());
    }
  }
  const int inv = cfg.instances > 0 ? std::max(1, cfg.instances / 4) : 50;
  const PsiDO<Rational> one = PsiDO<Rational>::one();
  auto check_inverse = [&](const PsiDO<Rational>& D, const json& in, const std::string& tag) {
    const auto E = invert(D, cfg.trunc);
    for (const auto& P : {D * E, E * D}) {
      const auto w = compare(P, one);
      if (!w.equal || w.k_min > 0 || w.m_min > 0) r.fail(tag, in, "product with the inverse is not 1 on its window");
    }
  };
  for (int t = 0; t < inv; ++t) {
    const auto D = random_psido(rng);
    ++r.instances;
    json in = {{"D", to_json(D)}, {"depth", cfg.trunc}};
    try {
      check_inverse(D, in, "inverse");
    } catch (const Error& e) {
      r.fail("inverse", in, std::string(e.kind()) + ": " + e.what());
    }
  }
  const int conv = cfg.instances > 0 ? std::max(1, cfg.instances / 10) : 20;
  for (int t = 0; t < conv; ++t) {
    const auto D = random_regular_diffop(rng);
    ++r.instances;
    json in = {{"D", to_json(D)}, {"depth", cfg.trunc}};
    try {
      const auto P = diffop_to_psido(D, cfg.trunc);
      check_inverse(P, in, "inverse_of_diffop");
      if (!eq(diffop_to_psido(D.dagger(), cfg.trunc), P.dagger()))
        r.fail("dagger_diffop_vs_psido", in, "conjugate disagrees between representations");
    } catch (const Error& e) {
      r.fail("inverse_of_diffop", in, std::string(e.kind()) + ": " + e.what());
    }
  }
  r.notes["vacuous_comparisons"] = vacuous;
  return r;
}

// Closed forms on a fixed grid and the complementary-set formula.
inline void closed_form_checks(Report& r) {
  const std::vector<Rational> grid = {Rational(1), Field<Rational>::ratio(-1, 2), Rational(3)};
  for (int n = 1; n <= 3; ++n) {
    std::vector<int> ps(n, 1);
    while (true) {
      std::vector<Rational> al(grid.begin(), grid.begin() + n);
      json in = {{"alphas", to_json_scalars(al)}, {"p", ps}};
      ++r.instances;
      if (!(closed_form_wronskian(al, ps) == wronskian(hat_basis(al, ps))))
        r.fail("closed_form_wronskian", in, "closed-form Wronskian differs from the determinant");
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < ps[i]; ++j)
          if (!minor_matches(al, ps, i, j)) {
            json mi = in;
            mi["i"] = i + 1;
            mi["j"] = j;
            const auto f = closed_form_minor(al, ps, i, j);
            const auto w = direct_minor(al, ps, i, j);
            mi["formula_constant"] = Field<Rational>::str(f.constant);
            mi["direct"] = to_json(w);
            r.fail("closed_form_minor", mi, "minor differs from the closed form");
          }
      int pos = 0;
      while (pos < n && ps[pos] == 3) ps[pos++] = 1;
      if (pos == n) break;
      ++ps[pos];
    }
  }
  // partitions inside a 6 x 6 box
  std::vector<int> parts;
  std::function<void(int, int)> rec = [&](int maxpart, int left) {
    Partition p(parts);
    ++r.instances;
    if (!d_sets(p).agree()) r.fail("complementary_set", json{{"mu", p.parts}}, "the two complement formulas differ");
    if (left == 0) return;
    for (int v = 1; v <= maxpart; ++v) {
      parts.push_back(v);
      rec(v, left - 1);
      parts.pop_back();
    }
  };
  rec(6, 6);
}

inline Report verify_wronskian(const SuiteConfig& cfg) {
  Report r;
  r.suite = "wronskian";
  using T = Rational;
  std::mt19937 rng(cfg.seed);
  const int want = cfg.instances > 0 ? cfg.instances : 30;
  int done = 0;
  std::uniform_int_distribution<int> dimd(1, 4);
  for (int guard = 0; done < want && guard < want * 20; ++guard) {
    const int n = dimd(rng);
    const auto fs = random_space(rng, n, 5);
    if (wronskian(fs).is_zero()) continue;
    json in = json::array();
    for (const auto& f : fs) in.push_back(to_json(f));
    ++done;
    ++r.instances;
    try {
      const auto D = fundamental_operator(fs);
      for (const auto& f : fs)
        if (!apply(D, f).is_zero()) r.fail("fundamental_annihilates", in, "basis element not annihilated");

      std::vector<DiffOp<RatFunc<T>>> fac;
      try {
        fac = factorize(fs);
      } catch (const DegenerateFlag&) {
        ++r.skipped;
      }
      if (!fac.empty()) {
        DiffOp<RatFunc<T>> prod = fac[0];
        for (size_t i = 1; i < fac.size(); ++i) prod = prod * fac[i];
        if (!(prod == D)) r.fail("factorization", in, "product of factors differs from the fundamental operator");
      }

      const auto hs = conjugate_kernel_basis(fs);
      const auto Dd = D.dagger();
      for (const auto& h : hs)
        if (!apply(Dd, h).is_zero()) r.fail("conjugate_kernel", in, "h not annihilated by the conjugate");
      const T sign = (n * (n - 1) / 2) % 2 ? T(-1) : T(1);
      if (!(wronskian(hs) * to_exprat(wronskian(fs)) == sign * ExpRat<T>::one()))
        r.fail("conjugate_wronskian", in, "W(h) W(f) differs from the sign");

      if (n >= 2) {
        std::uniform_int_distribution<int> cut(0, n - 1);
        const int c = cut(rng);
        std::vector<QuasiExp<T>> f1(fs.begin(), fs.begin() + c), h1(fs.begin() + c, fs.end());
        const auto Dsmall = c == 0 ? DiffOp<RatFunc<T>>::constant(RatFunc<T>::constant(T(1))) : fundamental_operator(f1);
        const auto Q = quotient(D, Dsmall);
        if (!(Q * Dsmall == D)) r.fail("quotient", in, "quotient times divisor differs");
        const auto Qd = Q.dagger();
        for (const auto& phi : quotient_conjugate_kernel(f1, h1))
          if (!apply(Qd, phi).is_zero()) r.fail("quotient_conjugate_kernel", in, "phi not annihilated");
      }

      // D g * W(f) = W(f, g) for a random quasi-exponential g
      const auto g = random_space(rng, 1, 5)[0];
      std::vector<QuasiExp<T>> fg = fs;
      fg.push_back(g);
      if (!(apply(D, g) * to_exprat(wronskian(fs)) == to_exprat(wronskian(fg))))
        r.fail("wronskian_identity", in, "D g W(f) != W(f, g)");
    } catch (const Error& e) {
      r.fail("wronskian_exception", in, std::string(e.kind()) + ": " + e.what());
    }
  }
  closed_form_checks(r);
  return r;
}

// Reduced data with k, n <= 2, M' <= 3 and small parts.
inline QEData<Rational> random_theorem1_data(std::mt19937& rng) {
  std::uniform_int_distribution<int> kn(1, 2), part(1, 2), len(1, 2);
  QEData<Rational> d;
  const int n = kn(rng), k = kn(rng);
  int Mp = 0;
  for (int i = 0; i < n; ++i) {
    int L = std::min(len(rng), 3 - Mp - (n - 1 - i));
    if (L < 1) L = 1;
    std::vector<int> p;
    int top = part(rng);
    for (int j = 0; j < L; ++j) {
      p.push_back(top);
      top = std::uniform_int_distribution<int>(1, top)(rng);
    }
    Mp += L;
    d.mu.push_back(Partition(p));
  }
  for (int a = 0; a < k; ++a) {
    int L = std::uniform_int_distribution<int>(1, std::min(2, Mp))(rng);
    std::vector<int> p;
    int top = part(rng);
    for (int j = 0; j < L; ++j) {
      p.push_back(top);
      top = std::uniform_int_distribution<int>(1, top)(rng);
    }
    d.lambda.push_back(Partition(p));
  }
  d.alphas = distinct_rationals(rng, n, 3);
  d.zs = distinct_rationals(rng, k, 3);
  d.reduced = true;
  return d;
}

inline Report verify_theorem1(const SuiteConfig& cfg) {
  Report r;
  r.suite = "theorem1";
  std::mt19937 rng(cfg.seed);
  const int want = cfg.instances > 0 ? cfg.instances : 20;
  int infeasible = 0;
  for (int guard = 0; r.instances < want && guard < want * 50; ++guard) {
    const auto data = random_theorem1_data(rng);
    std::vector<QuasiExp<Rational>> V;
    try {
      V = make_space_with_data(data, static_cast<unsigned>(rng()), cfg.retries);
    } catch (const NoSolutionFound&) {
      ++infeasible;
      continue;
    }
    ++r.instances;
    json in = {{"data", to_json(data)}, {"basis", json::array()}};
    for (const auto& f : V) in["basis"].push_back(to_json(f));
    try {
      const auto res = check_theorem1(V, data);
      if (!res.monic_order_L) r.fail("monic_order_L", in, res.note.empty() ? "not monic of order L" : res.note);
      if (!res.kernel_data) r.fail("kernel_data", in, res.note.empty() ? "kernel data is not the dual data" : res.note);
      if (!res.residues) r.fail("eigenvalue_residues", in, "g~ != -h");
      const auto D = to_pfrac_op(fundamental_operator(V), data.zs);
      const auto st = tilde_chain(D, data);
      const auto w = tilde_window_check(st.D_V, data, st.Dtilde, cfg.trunc);
      if (!w.equal) r.fail("tilde_window", in, "windowed formula disagrees with the chain");
    } catch (const Error& e) {
      r.fail("theorem1_exception", in, std::string(e.kind()) + ": " + e.what());
    }
  }
  r.skipped = infeasible;
  if (r.instances < want) r.fail("theorem1_budget", json{{"seed", cfg.seed}}, "too few feasible instances drawn");
  return r;
}

// Commutativity, cross-commutativity, weight preservation and the sign
// identity on every block of P_kn.
inline void bethe_block_checks(int k, int n, const std::vector<Rational>& al, const std::vector<Rational>& zs,
                               int j_max, Report& r) {
  json in = {{"k", k}, {"n", n}, {"alphas", to_json_scalars(al)}, {"zs", to_json_scalars(zs)}};
  const FermionSpace full = full_space(k, n);
  const Side<Rational> fn = n_side(full, al, zs);
  for (const auto& [l, m] : all_blocks(k, n)) {
    const FermionSpace b = weight_block(k, n, l, m);
    if (b.dim() == 0) continue;
    json bi = in;
    bi["l"] = l;
    bi["m"] = m;
    ++r.instances;
    try {
      const auto A = n_side_for(b, al, zs);
      const auto B = k_side_for(b, al, zs);
      const auto tA = block_table(A, b);
      const auto tB = block_table(B, b);
      if (!all_commute(tA.generators(), tA.generators())) r.fail("bethe_commutative", bi, "gl_n-side table");
      if (!all_commute(tB.generators(), tB.generators())) r.fail("bethe_commutative", bi, "gl_k-side table");
      if (!all_commute(tA.generators(), tB.generators())) r.fail("cross_commutative", bi, "tables do not commute");
      std::vector<Mat<Rational>> cartan;
      for (int i = 0; i < n; ++i) {
        Mat<Rational> h(A.dim, A.dim);
        for (int a = 0; a < k; ++a) h += A.rho(a, i, i);
        cartan.push_back(on_block(h, A, b));
      }
      if (!all_commute(tA.generators(), cartan)) r.fail("weight_preservation", bi, "table does not commute with the Cartan part");
      const auto sg = sign_check(b, al, zs, j_max);
      if (!sg.ok()) r.fail("sign_identity", bi, sg.failures.front());
    } catch (const IdentityFailed& e) {
      r.fail("weight_preservation", bi, e.what());
    } catch (const Error& e) {
      r.fail("bethe_exception", bi, std::string(e.kind()) + ": " + e.what());
    }
  }
}

inline Report verify_duality(const SuiteConfig& cfg) {
  Report r;
  r.suite = "duality";
  std::mt19937 rng(cfg.seed);
  std::vector<std::pair<int, int>> shapes = {{1, 2}, {2, 2}, {2, 3}};
  if (cfg.k > 0 && cfg.n > 0) shapes = {{cfg.k, cfg.n}};
  const int draws = cfg.instances > 0 ? cfg.instances : 2;
  for (const auto& [k, n] : shapes) {
    for (int d = 0; d < draws; ++d) {
      auto al = cfg.alphas.empty() ? distinct_rationals(rng, n, 7) : cfg.alphas;
      auto zs = cfg.zs.empty() ? distinct_rationals(rng, k, 7) : cfg.zs;
      json in = {{"k", k}, {"n", n}, {"alphas", to_json_scalars(al)}, {"zs", to_json_scalars(zs)}};
      ++r.instances;
      try {
        const auto rep = duality_check(k, n, al, zs);
        for (const auto& f : rep.failures) r.fail("hamiltonian_duality", in, f);
        if (k <= 2 && n <= 2) {
          const auto sp = full_space(k, n);
          const auto A = n_side(sp, al, zs);
          const auto B = k_side_for(sp, al, zs);
          for (const auto* s : {&A, &B}) {
            const auto rr = residue_check(*s, bethe_generators(*s));
            if (!rr.ok) r.fail("residue_formulas", in, s == &A ? "gl_n side" : "gl_k side");
          }
        }
        if (k == 2 && n == 2) bethe_block_checks(k, n, al, zs, cfg.trunc, r);
      } catch (const Error& e) {
        r.fail("duality_exception", in, std::string(e.kind()) + ": " + e.what());
      }
      if (!cfg.alphas.empty() && !cfg.zs.empty()) break;
    }
  }
  return r;
}

inline Report verify_main2(const SuiteConfig& cfg) {
  Report r;
  r.suite = "main2";
  const int k = cfg.k > 0 ? cfg.k : 2, n = cfg.n > 0 ? cfg.n : 2;
  std::mt19937 rng(cfg.seed);
  auto draw = [&](std::vector<Rational>& al, std::vector<Rational>& zs) {
    al = cfg.alphas.empty() ? distinct_rationals(rng, n, 7) : cfg.alphas;
    zs = cfg.zs.empty() ? distinct_rationals(rng, k, 7) : cfg.zs;
  };
  // exact spot instances: every one-dimensional block
  {
    std::vector<Rational> al, zs;
    draw(al, zs);
    for (const auto& [l, m] : all_blocks(k, n)) {
      const auto b = weight_block(k, n, l, m);
      if (b.dim() != 1) continue;
      json in = {{"k", k}, {"n", n}, {"l", l}, {"m", m}, {"alphas", to_json_scalars(al)}, {"zs", to_json_scalars(zs)}};
      ++r.instances;
      try {
        const auto o = main2_exact(b, al, zs);
        if (!o.ok) {
          in["detail"] = o.detail;
          r.fail("main2_exact", in, o.message);
        }
      } catch (const Error& e) {
        r.fail("main2_exact", in, std::string(e.kind()) + ": " + e.what());
      }
    }
  }
  // float draws on one block
  std::vector<int> l = cfg.l, m = cfg.m;
  if (l.empty() && m.empty() && k == n) {
    l.assign(k, 1);
    m.assign(n, 1);
  }
  if (l.empty() || m.empty()) return r;
  const auto b = weight_block(k, n, l, m);
  const int draws = cfg.instances > 0 ? cfg.instances : 5;
  double worst = 0;
  int resampled = 0;
  for (int d = 0; d < draws; ++d) {
    bool done = false;
    json last;
    for (int attempt = 0; attempt <= cfg.retries && !done; ++attempt) {
      std::vector<Rational> al, zs;
      draw(al, zs);
      last = {{"k", k}, {"n", n}, {"l", l}, {"m", m}, {"alphas", to_json_scalars(al)}, {"zs", to_json_scalars(zs)}};
      try {
        const auto o = main2_float(b, al, zs, cfg.tol, static_cast<unsigned>(rng()));
        done = true;
        ++r.instances;
        worst = std::max(worst, o.max_rel);
        if (!o.ok) {
          last["detail"] = o.detail;
          last["max_rel"] = o.max_rel;
          r.fail("main2_float", last, o.message);
        }
      } catch (const Degenerate&) {
        ++resampled;
      } catch (const Error& e) {
        done = true;
        ++r.instances;
        r.fail("main2_float", last, std::string(e.kind()) + ": " + e.what());
      }
    }
    if (!done) r.fail("main2_budget", last, "no generic draw within the retry budget");
  }
  r.notes["max_relative_difference"] = worst;
  r.notes["resampled"] = resampled;
  return r;
}

}  // namespace bispec
