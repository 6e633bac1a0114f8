#include <catch_amalgamated.hpp>

#include <random>

#include "bispec/bispec.hpp"

using namespace bispec;
using R = Rational;
using P = Poly<R>;
using F = RatFunc<R>;
using Psi = PsiDO<R>;
using Op = DiffOp<F>;
using PolyOp = DiffOp<P>;

namespace {

R q(long p, long d = 1) { return Field<R>::ratio(p, d); }
P poly(std::initializer_list<long> c) {
  std::vector<R> v;
  for (long x : c) v.push_back(R(x));
  return P(v);
}
const P X = P::x();
F f_(const P& p) { return F(p); }
F inv_lin(const R& c) { return F(P::constant(R(1)), P::linear_root(c)); }  // 1/(x-c)

Psi mono(int k, int m, long c = 1) { return Psi::monomial(k, m, R(c)); }

// Independent oracle: a series with nonnegative powers acting on a polynomial.
P act(const Psi& A, const P& p) {
  P r;
  for (const auto& [key, c] : A.terms()) {
    REQUIRE(key.first >= 0);
    REQUIRE(key.second >= 0);
    P d = p;
    for (int i = 0; i < key.second; ++i) d = d.derivative();
    r += P::monomial(key.first, c) * d;
  }
  return r;
}

bool same(const Psi& a, const Psi& b) { return compare(a, b).equal; }

}  // namespace

TEST_CASE("psido product examples", "[operator-rings][oracle]") {
  SECTION("d x = x d + 1") {
    const Psi r = mono(0, 1) * mono(1, 0);
    CHECK(r.coeff(1, 1) == 1);
    CHECK(r.coeff(0, 0) == 1);
    CHECK(r.terms().size() == 2);
  }
  SECTION("identity") {
    std::mt19937 rng(3);
    for (int t = 0; t < 20; ++t) {
      const Psi B = random_psido(rng);
      CHECK(same(Psi::one() * B, B));
      CHECK(same(B * Psi::one(), B));
    }
  }
  SECTION("d^2 x^2 checked on test polynomials") {
    const Psi r = mono(0, 2) * mono(2, 0);
    Psi expect = mono(2, 2) + mono(1, 1, 4) + mono(0, 0, 2);
    CHECK(same(r, expect));
    for (int e = 0; e <= 3; ++e) {
      const P t = P::monomial(e);
      CHECK(act(r, t) == act(mono(0, 2), act(mono(2, 0), t)));
    }
  }
  SECTION("ceilings add") {
    const Psi r = mono(2, -1).truncated(-4, -4) * mono(-3, 2).truncated(-4, -4);
    CHECK(r.K() == -1);
    CHECK(r.M() == 1);
    CHECK(r.k_min() > kNegInf);
    // an infinite expansion needs a window on some operand
    CHECK_THROWS(mono(2, -1) * mono(-3, 2));
  }
}

TEST_CASE("psido inversion examples", "[operator-rings][oracle]") {
  SECTION("1 - 1/x") {
    const Psi D = mono(0, 0) - mono(-1, 0);
    const Psi E = invert(D, 4);
    for (int k = 0; k >= -3; --k) CHECK(E.coeff(k, 0) == 1);
    CHECK(E.known(-3, 0));
    CHECK_FALSE(E.known(-4, 0));
  }
  SECTION("d - alpha from a differential operator multiplies back to 1") {
    const Op D = Op::leading_first({F::constant(R(1)), F::constant(R(-2))});
    const Psi P0 = diffop_to_psido(D, 3);
    const Psi E = invert(P0, 3);
    const auto w = compare(P0 * E, Psi::one());
    CHECK(w.equal);
    CHECK(w.compared > 0);
    CHECK(compare(E * P0, Psi::one()).equal);
  }
  SECTION("x") {
    const Psi E = invert(mono(1, 0), 3);
    CHECK(E.coeff(-1, 0) == 1);
    CHECK(E.terms().size() == 1);
  }
  SECTION("zero is not invertible") {
    CHECK_THROWS_AS(invert(Psi(0, 0, kNegInf, kNegInf), 3), NotInvertible);
  }
}

TEST_CASE("conjugation examples", "[operator-rings][oracle]") {
  SECTION("(x d)^dagger = -x d - 1") {
    const Psi r = mono(1, 1).dagger();
    CHECK(same(r, mono(1, 1, -1) + mono(0, 0, -1)));
    const PolyOp D = PolyOp::leading_first({X, P()});
    CHECK(D.dagger() == PolyOp::leading_first({-X, poly({-1})}));
  }
  SECTION("involution") {
    std::mt19937 rng(8);
    for (int t = 0; t < 30; ++t) {
      const Psi A = random_psido(rng);
      CHECK(same(A.dagger().dagger(), A));
    }
  }
  SECTION("(d - alpha)^dagger = -d - alpha") {
    const Op D = Op::leading_first({F::constant(R(1)), F::constant(R(-5))});
    CHECK(D.dagger() == Op::leading_first({F::constant(R(-1)), F::constant(R(-5))}));
  }
}

TEST_CASE("exponent swap examples", "[operator-rings][oracle]") {
  SECTION("(x^2 d)^ddagger = x d^2") {
    CHECK(same(mono(2, 1).ddagger(), mono(1, 2)));
    const PolyOp D = PolyOp::leading_first({P::monomial(2), P()});
    CHECK(ddagger(D) == PolyOp::leading_first({X, P(), P()}));
  }
  SECTION("involution") {
    std::mt19937 rng(9);
    for (int t = 0; t < 30; ++t) {
      const Psi A = random_psido(rng);
      CHECK(same(A.ddagger().ddagger(), A));
    }
  }
  SECTION("first order operator at c = 3, alpha = 2") {
    // -(x-3) d - 2x + 7, expanded by hand and swapped by index
    const PolyOp D = PolyOp::leading_first({poly({3, -1}), poly({7, -2})});
    const PolyOp expect = PolyOp::leading_first({poly({-2, -1}), poly({7, 3})});
    CHECK(ddagger(D) == expect);
    const Op Dr = Op::leading_first({f_(poly({3, -1})), f_(poly({7, -2}))});
    CHECK(ddagger(Dr) == expect);
  }
  SECTION("poles have no differential image") {
    const Op D = Op::leading_first({F::constant(R(1)), -inv_lin(R(0))});
    CHECK_THROWS_AS(ddagger(D), NotDifferential);
    CHECK_THROWS_AS(psido_to_diffop(mono(-1, 0)), NotDifferential);
    CHECK_THROWS_AS(psido_to_diffop(mono(0, 0).truncated(-3, -3)), NotDifferential);
  }
}

TEST_CASE("sharp examples", "[operator-rings][oracle]") {
  CHECK(same(mono(1, 0).sharp(), mono(0, 1)));
  CHECK(same(mono(0, 1).sharp(), mono(1, 0, -1)));
  std::mt19937 rng(10);
  for (int t = 0; t < 30; ++t) {
    const Psi A = random_psido(rng), B = random_psido(rng);
    CHECK(same(A.sharp().sharp().sharp().sharp(), A));
    CHECK(same((A * B).sharp(), A.sharp() * B.sharp()));
  }
}

TEST_CASE("differential operators as series", "[operator-rings][unit]") {
  SECTION("d - 1/x at depth 2") {
    const Op D = Op::leading_first({F::constant(R(1)), -inv_lin(R(0))});
    const Psi S = diffop_to_psido(D, 2);
    CHECK(S.coeff(0, 1) == 1);
    CHECK(S.coeff(-1, 0) == -1);
    CHECK(S.coeff(-2, 0) == 0);
    CHECK(S.known(-2, 0));
    CHECK_FALSE(S.known(-3, 0));
  }
  SECTION("constant coefficients map to themselves") {
    const Op D = Op::leading_first({F::constant(R(1)), F::constant(R(3)), F::constant(R(-2))});
    const Psi S = diffop_to_psido(D, 4);
    CHECK(same(S, mono(0, 2) + mono(0, 1, 3) + mono(0, 0, -2)));
    CHECK(S.k_min() == kNegInf);
    CHECK(psido_to_diffop(S) == D.map([](const F& f) { return f.num(); }));
  }
  SECTION("a pole at infinity is rejected") {
    const Op D = Op::leading_first({F::constant(R(1)), F(P::monomial(2), P::linear_root(R(1)))});
    CHECK_THROWS_AS(diffop_to_psido(D, 3), NotRegularAtInfinity);
  }
}

TEST_CASE("composition and application", "[operator-rings][oracle]") {
  const Op d = Op::d(1, F::constant(R(1)));
  const Op one = Op::constant(F::constant(R(1)));
  SECTION("(d - 1)(d + 1) = d^2 - 1") {
    CHECK((d - one) * (d + one) == Op::leading_first({F::constant(R(1)), F(), F::constant(R(-1))}));
  }
  SECTION("(d + 1/x)(d - 1/x) = d^2") {
    const Op a = d + Op::constant(inv_lin(R(0))), b = d - Op::constant(inv_lin(R(0)));
    CHECK(a * b == Op::d(2, F::constant(R(1))));
  }
  SECTION("d - alpha kills e^{alpha x}") {
    const Op D = d - Op::constant(F::constant(R(3)));
    CHECK(apply(D, qe(R(3), P::constant(R(1)))).is_zero());
    CHECK_FALSE(apply(D, qe(R(2), P::constant(R(1)))).is_zero());
  }
  SECTION("apply respects products") {
    std::mt19937 rng(4);
    for (int t = 0; t < 20; ++t) {
      const auto A = to_ratfunc_op(random_regular_diffop(rng));
      const auto B = to_ratfunc_op(random_regular_diffop(rng));
      const auto f = random_space(rng, 1, 4)[0];
      CHECK(apply(A * B, f) == apply(A, apply(B, f)));
    }
  }
}

TEST_CASE("row determinant", "[operator-rings][oracle]") {
  const Op d = Op::d(1, F::constant(R(1)));
  const Op x = Op::constant(f_(X));
  const Op one = Op::constant(F::constant(R(1)));
  SECTION("scalar 2x2") {
    auto c = [](long v) { return Op::constant(F::constant(R(v))); };
    CHECK(rdet<Op>({{c(2), c(3)}, {c(5), c(7)}}, one) == c(2 * 7 - 3 * 5));
  }
  SECTION("[[d, x], [1, x]] = x d + 1 - x") {
    const Op r = rdet<Op>({{d, x}, {one, x}}, one);
    CHECK(r == Op::leading_first({f_(X), f_(poly({1, -1}))}));
  }
  SECTION("1x1") { CHECK(rdet<Op>({{d}}, one) == d); }
}

TEST_CASE("product ring laws on random windows", "[operator-rings][property]") {
  std::mt19937 rng(2024);
  int compared = 0;
  for (int t = 0; t < 200; ++t) {
    const Psi A = random_psido(rng), B = random_psido(rng), C = random_psido(rng);
    const auto w = compare((A * B) * C, A * (B * C));
    CHECK(w.equal);
    compared += w.compared;
    CHECK(same((A * B).dagger(), B.dagger() * A.dagger()));
    CHECK(same((A * B).ddagger(), B.ddagger() * A.ddagger()));
    CHECK(same((A * B).sharp(), A.sharp() * B.sharp()));
  }
  CHECK(compared >= 200);
}

TEST_CASE("inverses on random elements", "[operator-rings][property]") {
  std::mt19937 rng(77);
  for (int t = 0; t < 50; ++t) {
    const Psi D = random_psido(rng);
    const Psi E = invert(D, 5);
    for (const Psi& p : {D * E, E * D}) {
      const auto w = compare(p, Psi::one());
      CHECK(w.equal);
      CHECK(w.k_min <= 0);
      CHECK(w.m_min <= 0);
    }
  }
}

TEST_CASE("exact and windowed conjugates agree", "[operator-rings][property]") {
  std::mt19937 rng(31);
  for (int t = 0; t < 20; ++t) {
    const auto D = random_regular_diffop(rng);
    const auto w = compare(diffop_to_psido(D.dagger(), 6), diffop_to_psido(D, 6).dagger());
    CHECK(w.equal);
    CHECK(w.compared > 0);
  }
}

TEST_CASE("operator json", "[operator-rings][unit]") {
  std::mt19937 rng(1);
  const Psi A = random_psido(rng);
  const Psi B = psido_from_json<R>(to_json(A));
  CHECK(same(A, B));
  CHECK(B.k_min() == A.k_min());
  CHECK(B.m_min() == A.m_min());
  const Op D = Op::leading_first({F::constant(R(1)), -inv_lin(q(1, 2))});
  const json j = to_json(D);
  CHECK(j.at("order") == 1);
  CHECK(diffop_from_json<R>(j) == D);
  CHECK(to_json(mono(0, 0)).at("floor") == json::array({nullptr, nullptr}));
}
