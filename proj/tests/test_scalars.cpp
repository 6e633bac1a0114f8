#include <catch_amalgamated.hpp>

#include <random>

#include "bispec/bispec.hpp"

using namespace bispec;
using R = Rational;
using P = Poly<R>;
using F = RatFunc<R>;

namespace {

R q(long p, long d = 1) { return Field<R>::ratio(p, d); }
P poly(std::initializer_list<long> c) {
  std::vector<R> v;
  for (long x : c) v.push_back(R(x));
  return P(v);
}
const P X = P::x();

P random_poly(std::mt19937& rng, int maxdeg = 3) {
  std::uniform_int_distribution<int> deg(-1, maxdeg), c(-4, 4), d(1, 3);
  const int n = deg(rng);
  std::vector<R> v;
  for (int i = 0; i <= n; ++i) v.push_back(q(c(rng), d(rng)));
  return P(v);
}

F random_ratfunc(std::mt19937& rng) {
  P den;
  while (den.is_zero()) den = random_poly(rng, 2);
  return F(random_poly(rng, 3), den);
}

}  // namespace

TEST_CASE("falling factorial", "[scalars][unit]") {
  CHECK(falling_factorial(7, 0) == 1);
  CHECK(falling_factorial(5, 2) == 20);
  CHECK(falling_factorial(-1, 2) == 2);
  CHECK(falling_factorial(3, 4) == 0);
}

TEST_CASE("rationals are canonical", "[scalars][unit]") {
  const R a = q(6, -4);
  CHECK(a.get_num() == -3);
  CHECK(a.get_den() == 2);
  CHECK(Field<R>::str(a) == "-3/2");
  CHECK(Field<R>::parse("-3/2") == a);
  CHECK(Field<R>::parse("4") == R(4));
  CHECK(Field<R>::parse("6/8") == q(3, 4));
}

TEST_CASE("polynomial basics", "[scalars][unit]") {
  CHECK(P().deg() == kNegInf);
  CHECK(poly({1, 2, 0, 0}).deg() == 1);
  CHECK((X - P::constant(R(1))) * (X + P::constant(R(1))) == poly({-1, 0, 1}));
  const auto [qt, rm] = divmod(poly({-1, 0, 1}), poly({-1, 1}));
  CHECK(qt == poly({1, 1}));
  CHECK(rm.is_zero());
  CHECK(gcd(poly({-1, 0, 1}), poly({1, 2, 1})) == poly({1, 1}));
  CHECK(poly({1, 2, 3}).derivative() == poly({2, 6}));
  CHECK(poly({1, 1}).shift(R(2)) == poly({3, 1}));
}

TEST_CASE("rational function normal form", "[scalars][unit]") {
  const F f(poly({-2, 0, 2}), poly({2, 2}));  // 2(x-1)(x+1) / 2(x+1)
  CHECK(f.num() == poly({-1, 1}));
  CHECK(f.den() == poly({1}));
  const F g(poly({3}), poly({0, 2}));
  CHECK(g.den().lead() == R(1));
  CHECK(g.num() == P::constant(q(3, 2)));
  CHECK(F(poly({1}), poly({-1, 1})) + F(poly({-1}), poly({-1, 1})) == F());
}

TEST_CASE("laurent tails at infinity", "[scalars][oracle]") {
  SECTION("geometric series") {
    const auto t = laurent_at_infinity(F(poly({1}), poly({-2, 1})), 3);
    CHECK(t.top == -1);
    CHECK(t.coeffs == std::vector<R>{R(1), R(2), R(4)});
  }
  SECTION("polynomial") {
    const auto t = laurent_at_infinity(F(X), 2);
    CHECK(t.top == 1);
    CHECK(t.coeffs == std::vector<R>{R(1), R(0)});
  }
  SECTION("(x^2+1)/(x^2-1) against long division") {
    const F f(poly({1, 0, 1}), poly({-1, 0, 1}));
    const auto t = laurent_at_infinity(f, 3);
    CHECK(t.top == 0);
    CHECK(t.coeffs == std::vector<R>{R(1), R(0), R(2)});
    // oracle: den * tail agrees with num down to x^{top + deg den - depth + 1}
    const auto t6 = laurent_at_infinity(f, 6);
    std::map<int, R> prod;
    for (int e = 0; e < t6.depth(); ++e)
      for (int j = 0; j <= 2; ++j) prod[t6.top - e + j] += t6.coeffs[e] * f.den().coeff(j);
    for (int e = 2; e >= 2 - 6 + 1; --e) CHECK(prod[e] == f.num().coeff(e));
  }
  SECTION("zero") {
    const auto t = laurent_at_infinity(F(), 2);
    for (const auto& c : t.coeffs) CHECK(c == 0);
  }
}

TEST_CASE("partial fractions", "[scalars][oracle]") {
  SECTION("two simple poles, recombined") {
    const F f(poly({1}), poly({2, -3, 1}));
    const auto p = partial_fractions(f, std::vector<R>{R(1), R(2)});
    CHECK(p.pole_coeff(R(1), 1) == R(-1));
    CHECK(p.pole_coeff(R(2), 1) == R(1));
    CHECK(p.is_polynomial() == false);
    CHECK(p.poly().empty());
    CHECK(to_ratfunc(p) == f);
  }
  SECTION("polynomial input") {
    const auto p = partial_fractions(F(X), std::vector<R>{});
    CHECK(p.is_polynomial());
    CHECK(to_ratfunc(p) == F(X));
  }
  SECTION("double pole") {
    const auto p = partial_fractions(F(poly({1}), poly({1, -2, 1})), std::vector<R>{R(1)});
    CHECK(p.pole_coeff(R(1), 1) == R(0));
    CHECK(p.pole_coeff(R(1), 2) == R(1));
    CHECK(p.pole_order(R(1)) == 2);
  }
  SECTION("unsplit denominator") {
    CHECK_THROWS_AS(partial_fractions(F(poly({1}), poly({-2, 0, 1})), std::vector<R>{R(1)}), UnsplitDenominator);
    CHECK_THROWS_AS(partial_fractions(F(poly({1}), poly({-3, 1})), std::vector<R>{R(1)}), UnsplitDenominator);
  }
}

TEST_CASE("rational roots", "[scalars][unit]") {
  using V = std::vector<std::pair<R, int>>;
  CHECK(rational_roots(poly({-1, 0, 1})) == V{{R(-1), 1}, {R(1), 1}});
  CHECK(rational_roots(poly({9, -6, 1})) == V{{R(3), 2}});
  CHECK(rational_roots(poly({-2, 0, 1})).empty());
  CHECK(rational_roots(poly({0, 0, -3, 2})) == V{{R(0), 2}, {q(3, 2), 1}});
}

TEST_CASE("ring axioms on random triples", "[scalars][property]") {
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> c(-9, 9), d(1, 9);
  for (int t = 0; t < 200; ++t) {
    const R a = q(c(rng), d(rng)), b = q(c(rng), d(rng)), e = q(c(rng), d(rng));
    CHECK((a + b) + e == a + (b + e));
    CHECK((a * b) * e == a * (b * e));
    CHECK(a * (b + e) == a * b + a * e);

    const P p = random_poly(rng), r = random_poly(rng), s = random_poly(rng);
    CHECK((p + r) + s == p + (r + s));
    CHECK((p * r) * s == p * (r * s));
    CHECK(p * (r + s) == p * r + p * s);
    CHECK(p * r == r * p);

    const F f = random_ratfunc(rng), g = random_ratfunc(rng), h = random_ratfunc(rng);
    CHECK((f + g) + h == f + (g + h));
    CHECK((f * g) * h == f * (g * h));
    CHECK(f * (g + h) == f * g + f * h);
    CHECK(f - f == F());
    if (!g.is_zero()) CHECK((f / g) * g == f);
    for (const F* x : {&f, &g, &h}) {
      CHECK(x->den().lead() == R(1));
      CHECK(gcd(x->num(), x->den()).deg() <= 0);
    }
  }
}

TEST_CASE("laurent tail of a product is the windowed product", "[scalars][property]") {
  std::mt19937 rng(5);
  const int depth = 5;
  for (int t = 0; t < 100; ++t) {
    const F f = random_ratfunc(rng), g = random_ratfunc(rng);
    if (f.is_zero() || g.is_zero()) continue;
    const auto tf = laurent_at_infinity(f, depth), tg = laurent_at_infinity(g, depth);
    const auto tp = laurent_at_infinity(f * g, depth);
    const int top = tf.top + tg.top;
    REQUIRE(tp.top == top);
    for (int e = top; e > top - depth; --e) {
      R s = 0;
      for (int i = 0; i < depth; ++i) {
        const int ef = tf.top - i, eg = e - ef;
        if (eg <= tg.top && eg > tg.top - depth) s += tf.coeffs[i] * tg.at(eg);
      }
      CHECK(s == tp.at(e));
    }
  }
}

TEST_CASE("partial fractions recombine", "[scalars][property]") {
  std::mt19937 rng(9);
  std::uniform_int_distribution<int> c(-3, 3), m(1, 3), np(0, 3);
  for (int t = 0; t < 100; ++t) {
    std::vector<std::pair<R, int>> roots;
    std::vector<R> pts;
    for (int i = 0, n = np(rng); i < n; ++i) {
      const R z = q(c(rng), m(rng));
      if (std::find(pts.begin(), pts.end(), z) != pts.end()) continue;
      pts.push_back(z);
      roots.push_back({z, m(rng)});
    }
    const F f(random_poly(rng, 5), from_roots(roots));
    const auto p = partial_fractions(f, pts);
    CHECK(to_ratfunc(p) == f);
    for (const auto& [z, mult] : roots) CHECK(p.pole_order(z) <= mult);
  }
}

TEST_CASE("float mode shares the arithmetic", "[scalars][unit]") {
  using D = Poly<double>;
  const D p(std::vector<double>{-1.0, 0.0, 1.0});
  CHECK(p.eval(3.0) == 8.0);
  const RatFunc<double> f(D(std::vector<double>{1.0}), D(std::vector<double>{-2.0, 1.0}));
  const auto t = laurent_at_infinity(f, 3);
  CHECK(t.coeffs == std::vector<double>{1.0, 2.0, 4.0});
  CHECK(near_zero(1e-12, 1e-8));
  CHECK_FALSE(near_zero(1e-6, 1e-8));
}

TEST_CASE("scalar json", "[scalars][unit]") {
  CHECK(to_json_scalar(q(-3, 2)) == "-3/2");
  CHECK(scalar_from_json<R>(json("5/10")) == q(1, 2));
  CHECK(scalar_from_json<R>(json(3)) == R(3));
  CHECK(scalar_from_json<R>(json(0.5)) == q(1, 2));
  const P p = poly({1, -2, 3});
  CHECK(poly_from_json<R>(to_json(p)) == p);
  const F f(poly({1}), poly({-2, 1}));
  CHECK(to_json(f) == json::parse(R"({"num":["1/1"],"den":["-2/1","1/1"]})"));
  CHECK(ratfunc_from_json<R>(to_json(f)) == f);
  CHECK_THROWS_AS(scalar_from_json<R>(json::array()), InvalidInput);
}
