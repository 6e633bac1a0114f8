#include <catch_amalgamated.hpp>

#include <random>

#include "bispec/bispec.hpp"

using namespace bispec;
using R = Rational;
using P = Poly<R>;
using F = RatFunc<R>;
using M = Mat<R>;

namespace {

R q(long p, long d = 1) { return Field<R>::ratio(p, d); }

// xi_{a1 i1} xi_{a2 i2} ... with one-based indices, as a bitmask
Wedge w_(std::initializer_list<std::pair<int, int>> vars, int n) {
  Wedge w = 0;
  for (auto [a, i] : vars) w |= 1u << wedge_var(a - 1, i - 1, n);
  return w;
}

R entry(const M& A, const FermionSpace& s, Wedge row, Wedge col) {
  return A.empty() ? R(0) : A(s.index.at(row), s.index.at(col));
}

M diag(std::initializer_list<long> d) {
  M r(static_cast<int>(d.size()), static_cast<int>(d.size()));
  int i = 0;
  for (long v : d) {
    r(i, i) = R(v);
    ++i;
  }
  return r;
}

// Entry (r, c) of B_i(x) as an ordinary rational function.
F entry_of(const BetheTable<R>& t, int i, int r, int c) {
  PFrac<R> f(t.constants[i - 1].empty() ? R(0) : t.constants[i - 1](r, c));
  for (const auto& [key, A] : t.poles)
    if (std::get<0>(key) == i) f += PFrac<R>::pole_term(t.pts[std::get<2>(key)], std::get<1>(key), A(r, c));
  return to_ratfunc(f);
}

using Dense = std::vector<std::vector<F>>;
Dense dense(const BetheTable<R>& t, int i) {
  Dense D(t.dim, std::vector<F>(t.dim));
  if (i > t.N) return D;
  for (int r = 0; r < t.dim; ++r)
    for (int c = 0; c < t.dim; ++c) D[r][c] = entry_of(t, i, r, c);
  return D;
}
Dense dense_mul(const Dense& a, const Dense& b) {
  const size_t n = a.size();
  Dense r(n, std::vector<F>(n));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j)
      for (size_t k = 0; k < n; ++k) r[i][j] += a[i][k] * b[k][j];
  return r;
}

// Residue at z from the Taylor expansion of f (x - z)^m.
R residue_oracle(const F& f, const R& z) {
  int m = 0;
  P den = f.den();
  while (!den.is_zero() && den.eval(z) == 0) {
    den = divmod(den, P::linear_root(z)).first;
    ++m;
  }
  if (m == 0 || f.is_zero()) return R(0);
  F g(f.num(), den);
  R fact = 1;
  for (int i = 1; i < m; ++i) {
    g = g.derivative();
    fact *= i;
  }
  return g.eval(z) / fact;
}

}  // namespace

TEST_CASE("left derivations", "[fermion][oracle]") {
  const Wedge x12 = 0b11;  // xi_1 xi_2 with k = 1
  const auto d2 = left_derivation(x12, 1);
  REQUIRE(d2);
  CHECK(d2->sign == -1);
  CHECK(d2->w == 0b01);
  const auto d1 = left_derivation(x12, 0);
  REQUIRE(d1);
  CHECK(d1->sign == 1);
  CHECK(d1->w == 0b10);
  CHECK_FALSE(left_derivation(x12, 2));
  const auto m = xi_mul(0b10, 0);
  REQUIRE(m);
  CHECK(m->sign == 1);
  CHECK_FALSE(xi_mul(0b10, 1));
}

TEST_CASE("current actions", "[fermion][oracle]") {
  SECTION("k = 2, n = 1: e11 t on xi_11 gives z_1 xi_11") {
    const auto sp = full_space(2, 1);
    const std::vector<R> zs{R(4), R(-1)};
    const M A = current_action_n(0, 0, 1, zs, sp);
    const Wedge x11 = w_({{1, 1}}, 1), x21 = w_({{2, 1}}, 1);
    CHECK(entry(A, sp, x11, x11) == 4);
    CHECK(entry(A, sp, x21, x21) == -1);
    CHECK(entry(A, sp, x21, x11) == 0);
  }
  SECTION("s = 0 is the plain action: e12 xi_12 = xi_11") {
    const auto sp = full_space(1, 2);
    const M A = current_action_n(0, 1, 0, std::vector<R>{R(7)}, sp);
    CHECK(entry(A, sp, w_({{1, 1}}, 2), w_({{1, 2}}, 2)) == 1);
  }
  SECTION("k side uses powers of -alpha") {
    const auto sp = full_space(2, 2);
    const std::vector<R> al{R(2), R(3)};
    const M A = current_action_k(0, 1, 2, al, sp);
    // xi_11 d_21 (-2)^2 + xi_12 d_22 (-3)^2
    CHECK(entry(A, sp, w_({{1, 1}}, 2), w_({{2, 1}}, 2)) == 4);
    CHECK(entry(A, sp, w_({{1, 2}}, 2), w_({{2, 2}}, 2)) == 9);
  }
  SECTION("xi d + d xi = 1") {
    const auto sp = full_space(2, 2);
    for (int v = 0; v < 4; ++v) CHECK(xi_only<R>(sp, v) * d_only<R>(sp, v) + d_only<R>(sp, v) * xi_only<R>(sp, v) == M::identity(16));
  }
  SECTION("index errors") {
    const auto sp = full_space(1, 2);
    CHECK_THROWS_AS(current_action_n(2, 0, 0, std::vector<R>{R(1)}, sp), IndexOutOfRange);
    CHECK_THROWS_AS(current_action_k(0, 1, 0, std::vector<R>{R(1), R(2)}, sp), IndexOutOfRange);
  }
}

TEST_CASE("weight blocks", "[fermion][oracle]") {
  const auto b = weight_block(2, 2, {1, 1}, {1, 1});
  REQUIRE(b.dim() == 2);
  CHECK(b.basis[0] == w_({{1, 1}, {2, 2}}, 2));
  CHECK(b.basis[1] == w_({{1, 2}, {2, 1}}, 2));
  const auto c = weight_block(2, 2, {2, 0}, {1, 1});
  REQUIRE(c.dim() == 1);
  CHECK(c.basis[0] == w_({{1, 1}, {1, 2}}, 2));
  const auto z = weight_block(2, 2, {0, 0}, {0, 0});
  REQUIRE(z.dim() == 1);
  CHECK(z.basis[0] == 0u);
  CHECK_THROWS_AS(weight_block(2, 2, {1, 0}, {1, 1}), NotInZ);
  CHECK_THROWS_AS(weight_block(2, 2, {3, 0}, {2, 1}), NotInZ);
  const json j = to_json(b);
  CHECK(j.at("basis")[0] == json::parse("[[1,1],[2,2]]"));
}

TEST_CASE("hamiltonians", "[fermion][oracle]") {
  const R al = 5, z = -2;
  SECTION("k = n = 1") {
    const auto sp = full_space(1, 1);
    const auto s = n_side(sp, std::vector<R>{al}, std::vector<R>{z});
    CHECK(gaudin_hamiltonian(s, 0) == diag({0, 5}));
    CHECK(dynamical_hamiltonian(s, 0) == diag({0, -2}));
  }
  SECTION("k = 2, n = 1 on the column sector m = (1)") {
    const std::vector<R> zs{R(1), R(4)};
    const auto sp = full_space(2, 1);
    const auto s = n_side(sp, std::vector<R>{al}, zs);
    const M H = gaudin_hamiltonian(s, 0);
    const Wedge x11 = w_({{1, 1}}, 1), x21 = w_({{2, 1}}, 1), both = x11 | x21;
    // alpha e11 plus Omega / (z1 - z2); Omega = e11 (x) e11 counts pairs
    CHECK(entry(H, sp, x11, x11) == al);
    CHECK(entry(H, sp, x21, x21) == 0);
    CHECK(entry(H, sp, x11, x21) == 0);
    CHECK(entry(H, sp, both, both) == al + q(1, -3));
    const auto sec = col_sector(2, 1, {1});
    CHECK(sec.dim() == 2);
    CHECK(preserves(H, sp, sec));
    CHECK(restrict_to(H, sp, sec) == diag({5, 0}));
  }
  SECTION("coinciding parameters") {
    const auto sp = full_space(1, 2);
    CHECK_THROWS_AS(n_side(sp, std::vector<R>{R(1), R(1)}, std::vector<R>{R(0)}), CoincidingParameters);
  }
}

TEST_CASE("universal operator and its table", "[fermion][oracle]") {
  const R al = 3, z = q(1, 2);
  const auto sp = full_space(1, 1);
  const auto s = n_side(sp, std::vector<R>{al}, std::vector<R>{z});
  SECTION("first-order coefficient") {
    const auto D = universal_operator(s);
    REQUIRE(D.order() == 1);
    const auto B1 = D.coeff(0);
    const Wedge x = w_({{1, 1}}, 1);
    // on xi_11: -alpha - 1/(x - z); on 1: -alpha
    CHECK(B1.poly_coeff(0) == diag({-3, -3}));
    CHECK(entry(B1.pole_coeff(z, 1), sp, x, x) == -1);
    CHECK(entry(B1.pole_coeff(z, 1), sp, 0, 0) == 0);
  }
  SECTION("table") {
    const auto t = bethe_generators(s);
    REQUIRE(t.constants.size() == 1);
    CHECK(t.constants[0] == diag({-3, -3}));
    REQUIRE(t.poles.size() == 1);
    CHECK(t.poles.at({1, 1, 0}) == diag({0, -1}));
  }
  SECTION("zero-weight block is scalar") {
    const auto b = weight_block(2, 2, {0, 0}, {0, 0});
    const auto t = block_table(n_side_for(b, std::vector<R>{R(1), R(2)}, std::vector<R>{R(3), R(4)}), b);
    for (const auto& g : t.generators()) CHECK((g.empty() || g.rows() == 1));
    CHECK(t.constants[0](0, 0) == -3);
    CHECK(t.constants[1](0, 0) == 2);
  }
  SECTION("n = 2, k = 1 is monic of order 2 with the constant-term identity") {
    const auto sp2 = full_space(1, 2);
    const auto s2 = n_side(sp2, std::vector<R>{R(1), R(-2)}, std::vector<R>{R(5)});
    const auto D = universal_operator(s2);
    CHECK(D.order() == 2);
    CHECK(D.coeff(1).poly_coeff(0) == R(1) * M::identity(4));
    CHECK(D.coeff(0).poly_coeff(0) == R(-2) * M::identity(4));
  }
}

TEST_CASE("series C_j(u)", "[fermion][oracle]") {
  const R al = 3, z = q(1, 2);
  const auto sp = full_space(1, 1);
  const auto t = bethe_generators(n_side(sp, std::vector<R>{al}, std::vector<R>{z}));
  const auto C = chat_series(t, 3);
  const Wedge x = w_({{1, 1}}, 1);
  CHECK(C[0] == MatFrac<R>(M::identity(2)));
  CHECK(entry(C[1].pole_coeff(al, 1), sp, x, x) == -1);
  CHECK(entry(C[2].pole_coeff(al, 1), sp, x, x) == -z);
  CHECK(entry(C[1].pole_coeff(al, 1), sp, 0, 0) == 0);
  SECTION("n = 2 against an entrywise expansion at infinity") {
    const std::vector<R> a2{R(1), R(-2)};
    const auto b = weight_block(2, 2, {1, 1}, {1, 1});
    const auto t2 = block_table(n_side_for(b, a2, std::vector<R>{R(3), q(-1, 2)}), b);
    const auto C2 = chat_series(t2, 3);
    for (int j = 1; j <= 3; ++j) {
      CHECK(C2[j].is_polynomial() == false);
      CHECK(C2[j].poly_degree() < 0);
      for (int r = 0; r < b.dim(); ++r)
        for (int c = 0; c < b.dim(); ++c) {
          // C_j = N_j(u) / prod (u - alpha), N_j(u) = sum_i [x^{-j}] B_i(x) u^{2-i}
          std::vector<R> num(2, R(0));
          for (int i = 1; i <= 2; ++i) num[2 - i] = laurent_at_infinity(entry_of(t2, i, r, c), 8).at(-j);
          const P Nj(num);
          for (int i = 0; i < 2; ++i) {
            const R expect = Nj.eval(a2[i]) / (a2[i] - a2[1 - i]);
            const M res = C2[j].pole_coeff(a2[i], 1);
            CHECK((res.empty() ? R(0) : res(r, c)) == expect);
          }
        }
    }
  }
}

TEST_CASE("residue formulas", "[fermion][oracle]") {
  SECTION("k = n = 1 by hand") {
    const R al = 3, z = q(1, 2);
    const auto s = n_side(full_space(1, 1), std::vector<R>{al}, std::vector<R>{z});
    const auto t = bethe_generators(s);
    const auto rep = residue_check(s, t);
    CHECK(rep.ok);
    // Res_{x=z} (alpha + 1/(x - z))^2 / 2 = alpha on xi_11
    const F b1 = F::constant(-al) - F(P::constant(R(1)), P::linear_root(z));
    CHECK(residue_oracle(b1 * b1 * q(1, 2), z) == al);
  }
  SECTION("k = n = 2 block against dense residues") {
    const std::vector<R> al{R(1), R(-2)}, zs{R(3), q(-1, 2)};
    const auto b = weight_block(2, 2, {1, 1}, {1, 1});
    const auto s = n_side_for(b, al, zs);
    const auto t = block_table(s, b);
    const Dense B1 = dense(t, 1), B2 = dense(t, 2), B11 = dense_mul(B1, B1);
    for (int p = 0; p < 2; ++p) {
      const M H = on_block(gaudin_hamiltonian(s, p), s, b);
      for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) CHECK(residue_oracle(B11[r][c] * q(1, 2) - B2[r][c], zs[p]) == H(r, c));
    }
    std::vector<M> H, G;
    for (int p = 0; p < 2; ++p) H.push_back(on_block(gaudin_hamiltonian(s, p), s, b));
    for (int i = 0; i < 2; ++i) G.push_back(on_block(dynamical_hamiltonian(s, i), s, b));
    CHECK(residue_check(t, H, G).ok);
  }
}

TEST_CASE("duality identities", "[fermion][oracle]") {
  SECTION("k = n = 1") {
    const R al = 3, z = 7;
    const auto sp = full_space(1, 1);
    const auto A = n_side(sp, std::vector<R>{al}, std::vector<R>{z});
    const auto B = k_side_for(sp, std::vector<R>{al}, std::vector<R>{z});
    CHECK(gaudin_hamiltonian(A, 0) == diag({0, 3}));
    CHECK(dynamical_hamiltonian(B, 0) == diag({0, -3}));
    CHECK(duality_check(1, 1, std::vector<R>{al}, std::vector<R>{z}).ok());
  }
  SECTION("k = 2, n = 1 on the full space") {
    const auto r = duality_check(2, 1, std::vector<R>{q(2, 3)}, std::vector<R>{R(1), R(-4)});
    CHECK(r.gaudin);
    CHECK(r.dynamical);
  }
  SECTION("sign identity on l = m = (1, 1)") {
    const auto b = weight_block(2, 2, {1, 1}, {1, 1});
    const auto r = sign_check(b, std::vector<R>{R(1), R(-2)}, std::vector<R>{R(3), q(5, 2)}, 6);
    CHECK(r.ok());
  }
  SECTION("block restriction refuses an operator that leaves the block") {
    const auto sp = full_space(2, 2);
    const auto s = n_side(sp, std::vector<R>{R(1), R(2)}, std::vector<R>{R(3), R(4)});
    const auto b = weight_block(2, 2, {1, 1}, {1, 1});
    CHECK_THROWS_AS(on_block(s.rho(0, 0, 1), s, b), IdentityFailed);
  }
}

TEST_CASE("anticommutation on full spaces", "[fermion][property]") {
  for (int k = 1; k <= 6; ++k)
    for (int n = 1; k * n <= 6; ++n) {
      const auto sp = full_space(k, n);
      const M I = M::identity(sp.dim()), Z(sp.dim(), sp.dim());
      for (int v = 0; v < k * n; ++v)
        for (int w = 0; w < k * n; ++w) {
          const M dv = d_only<R>(sp, v), dw = d_only<R>(sp, w), xv = xi_only<R>(sp, v);
          CHECK(dv * dw + dw * dv == Z);
          CHECK(xv * dw + dw * xv == (v == w ? I : Z));
        }
    }
}

TEST_CASE("gl relations and commuting actions", "[fermion][property]") {
  for (auto [k, n] : std::vector<std::pair<int, int>>{{2, 2}, {2, 3}, {3, 2}}) {
    const auto sp = full_space(k, n);
    std::vector<R> ones_z(k, R(1)), ones_a(n, R(1));
    auto en = [&](int i, int j) { return current_action_n(i, j, 0, ones_z, sp); };
    auto ek = [&](int a, int b) { return current_action_k(a, b, 0, ones_a, sp); };
    const M Z(sp.dim(), sp.dim());
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b) {
            M rhs = Z;
            if (j == a) rhs += en(i, b);
            if (b == i) rhs -= en(a, j);
            CHECK(commutator(en(i, j), en(a, b)) == rhs);
          }
    for (int a = 0; a < k; ++a)
      for (int b = 0; b < k; ++b)
        for (int c = 0; c < k; ++c)
          for (int d = 0; d < k; ++d) {
            M rhs = Z;
            if (b == c) rhs += ek(a, d);
            if (d == a) rhs -= ek(c, b);
            CHECK(commutator(ek(a, b), ek(c, d)) == rhs);
          }
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int a = 0; a < k; ++a)
          for (int b = 0; b < k; ++b) CHECK(commutator(en(i, j), ek(a, b)).is_zero());
  }
}

TEST_CASE("bethe tables on every block of P_22", "[fermion][property]") {
  std::mt19937 rng(21);
  for (int draw = 0; draw < 2; ++draw) {
    const auto al = distinct_rationals(rng, 2, 7), zs = distinct_rationals(rng, 2, 7);
    const auto full = full_space(2, 2);
    const auto A = n_side(full, al, zs);
    const auto tf = bethe_generators(A);
    int dims = 0;
    for (const auto& [l, m] : all_blocks(2, 2)) {
      const auto b = weight_block(2, 2, l, m);
      dims += b.dim();
      if (b.dim() == 0) continue;
      // every full-space generator keeps the block
      for (const auto& g : tf.generators()) CHECK(preserves(g, full, b));
      const auto tn = block_table(n_side_for(b, al, zs), b);
      const auto tk = block_table(k_side_for(b, al, zs), b);
      CHECK(all_commute(tn.generators(), tn.generators()));
      CHECK(all_commute(tk.generators(), tk.generators()));
      CHECK(all_commute(tn.generators(), tk.generators()));
      CHECK(sign_check(b, al, zs, 6).ok());
    }
    CHECK(dims == 16);
    // commuting with the Cartan part on the full space
    for (int i = 0; i < 2; ++i) {
      const M h = current_action_n(i, i, 0, std::vector<R>{R(1), R(1)}, full);
      for (const auto& g : tf.generators()) CHECK(commutator(g, h).is_zero());
    }
  }
}

TEST_CASE("sign pattern for n = 3 goes with i + j", "[fermion][property]") {
  const std::vector<R> al{R(1), R(-2), q(1, 3)}, zs{R(2)};
  const std::vector<R> na{R(-1), R(2), q(-1, 3)}, nz{R(-2)};
  const auto b = weight_block(1, 3, {1}, {1, 0, 0});
  const auto plus = block_table(n_side_for(b, al, zs), b), minus = block_table(n_side_for(b, na, nz), b);
  for (int i = 1; i <= 3; ++i)
    for (int j = 0; j <= 4; ++j) {
      const R sg = (i + j) % 2 ? R(-1) : R(1);
      CHECK(coeff_at_infinity(minus, i, j) == sg * coeff_at_infinity(plus, i, j));
    }
}

TEST_CASE("block dimensions add up", "[fermion][property]") {
  for (int k = 1; k <= 3; ++k)
    for (int n = 1; n <= 3; ++n) {
      long total = 0;
      for (const auto& [l, m] : all_blocks(k, n)) total += weight_block(k, n, l, m).dim();
      CHECK(total == (1L << (k * n)));
    }
}

TEST_CASE("table json", "[fermion][unit]") {
  const auto s = n_side(full_space(1, 1), std::vector<R>{R(3)}, std::vector<R>{R(1)});
  const json j = to_json(bethe_generators(s));
  CHECK(j.at("constants").size() == 1);
  CHECK(j.at("poles")[0].at("op").at("entries") == json::parse(R"([[1,1,"-1/1"]])"));
}
