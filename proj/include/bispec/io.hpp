#pragma once

#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "bispec/diffop.hpp"
#include "bispec/fermion.hpp"
#include "bispec/qedata.hpp"

namespace bispec {

using json = nlohmann::json;

// Exact scalars travel as "p/q" strings, floats as numbers.
template <class T>
json to_json_scalar(const T& x) {
  if constexpr (Field<T>::exact)
    return Field<T>::str(x);
  else
    return x;
}

template <class T>
T scalar_from_json(const json& j) {
  if (j.is_string()) return Field<T>::parse(j.get<std::string>());
  if (j.is_number_integer()) return Field<T>::of(j.get<long>());
  if (j.is_number()) {
    if constexpr (Field<T>::exact) {
      Rational r(j.get<double>());  // binary value, exactly
      return r;
    } else {
      return j.get<double>();
    }
  }
  throw InvalidInput("expected a scalar, got " + j.dump());
}

template <class T>
std::vector<T> scalars_from_json(const json& j) {
  if (!j.is_array()) throw InvalidInput("expected an array of scalars");
  std::vector<T> v;
  for (const auto& e : j) v.push_back(scalar_from_json<T>(e));
  return v;
}
template <class T>
json to_json_scalars(const std::vector<T>& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(to_json_scalar(x));
  return a;
}

template <class T>
json to_json(const Poly<T>& p) {
  return to_json_scalars(p.coeffs());
}
template <class T>
Poly<T> poly_from_json(const json& j) {
  return Poly<T>(scalars_from_json<T>(j));
}

template <class T>
json to_json(const RatFunc<T>& f) {
  return {{"num", to_json(f.num())}, {"den", to_json(f.den())}};
}
template <class T>
RatFunc<T> ratfunc_from_json(const json& j) {
  if (j.is_array()) return RatFunc<T>(poly_from_json<T>(j));
  if (!j.is_object()) return RatFunc<T>(Poly<T>::constant(scalar_from_json<T>(j)));
  return RatFunc<T>(poly_from_json<T>(j.at("num")), j.contains("den") ? poly_from_json<T>(j.at("den")) : Poly<T>::constant(Field<T>::of(1)));
}

template <class T>
json to_json(const PFrac<T>& f) {
  return to_json(to_ratfunc(f));
}

template <class C>
json to_json(const DiffOp<C>& D) {
  json c = json::array();
  for (const auto& v : D.leading_first_coeffs()) c.push_back(to_json(v));
  return {{"order", D.order()}, {"coeffs", c}};
}
template <class T>
DiffOp<RatFunc<T>> diffop_from_json(const json& j) {
  const auto& c = j.at("coeffs");
  std::vector<RatFunc<T>> v;
  for (const auto& e : c) v.push_back(ratfunc_from_json<T>(e));
  auto D = DiffOp<RatFunc<T>>::leading_first(v);
  if (j.contains("order") && j.at("order").get<int>() != D.order()) throw InvalidInput("order does not match coefficient count");
  return D;
}

template <class T>
json to_json(const PsiDO<T>& A) {
  json t = json::array();
  for (const auto& [key, c] : A.terms()) t.push_back({{"k", key.first}, {"m", key.second}, {"c", to_json_scalar(c)}});
  auto fl = [](int v) { return v == kNegInf ? json(nullptr) : json(v); };
  return {{"terms", t}, {"floor", json::array({fl(A.k_min()), fl(A.m_min())})}};
}
template <class T>
PsiDO<T> psido_from_json(const json& j) {
  auto fl = [](const json& v) { return v.is_null() ? kNegInf : v.get<int>(); };
  int kmin = kNegInf, mmin = kNegInf;
  if (j.contains("floor")) {
    kmin = fl(j.at("floor").at(0));
    mmin = fl(j.at("floor").at(1));
  }
  PsiDO<T> A(kNegInf, kNegInf, kmin, mmin);
  for (const auto& t : j.at("terms")) A.add(t.at("k").get<int>(), t.at("m").get<int>(), scalar_from_json<T>(t.at("c")));
  return A;
}

template <class T>
json to_json(const QuasiExp<T>& f) {
  json a = json::array();
  for (const auto& t : f.terms()) a.push_back({{"alpha", to_json_scalar(t.rate)}, {"poly", to_json(t.f)}});
  return a;
}
template <class T>
QuasiExp<T> quasiexp_from_json(const json& j) {
  QuasiExp<T> f;
  for (const auto& t : j) f = f + qe(scalar_from_json<T>(t.at("alpha")), poly_from_json<T>(t.at("poly")));
  return f;
}

inline json to_json(const Partition& p) { return p.parts; }

template <class T>
json to_json(const QEData<T>& d) {
  json mu = json::array(), lam = json::array();
  for (const auto& p : d.mu) mu.push_back(to_json(p));
  for (const auto& p : d.lambda) lam.push_back(to_json(p));
  return {{"mu", mu}, {"lambda", lam}, {"alphas", to_json_scalars(d.alphas)}, {"zs", to_json_scalars(d.zs)}};
}
template <class T>
QEData<T> qedata_from_json(const json& j) {
  QEData<T> d;
  for (const auto& p : j.at("mu")) d.mu.push_back(Partition(p.get<std::vector<int>>()));
  for (const auto& p : j.at("lambda")) d.lambda.push_back(Partition(p.get<std::vector<int>>()));
  d.alphas = scalars_from_json<T>(j.at("alphas"));
  d.zs = scalars_from_json<T>(j.at("zs"));
  bool red = true;
  for (const auto& p : d.mu) red = red && !p.empty();
  for (const auto& p : d.lambda) red = red && !p.empty();
  d.reduced = red;
  d.validate();
  return d;
}

// Indices are 1-based on the wire.
inline json to_json(const FermionSpace& s) {
  json basis = json::array();
  for (Wedge w : s.basis) {
    json m = json::array();
    for (auto [a, i] : wedge_vars(w, s.n)) m.push_back({a + 1, i + 1});
    basis.push_back(m);
  }
  return {{"l", s.l}, {"m", s.m}, {"basis", basis}};
}

template <class T>
json to_json(const Mat<T>& M, int dim) {
  json e = json::array();
  if (!M.empty())
    for (int i = 0; i < M.rows(); ++i)
      for (int j = 0; j < M.cols(); ++j)
        if (!Field<T>::zero(M(i, j))) e.push_back({i, j, to_json_scalar(M(i, j))});
  return {{"rows", dim}, {"entries", e}};
}

template <class T>
json to_json(const BetheTable<T>& t) {
  json c = json::array(), p = json::array();
  for (size_t i = 0; i < t.constants.size(); ++i) c.push_back({{"i", i + 1}, {"op", to_json(t.constants[i], t.dim)}});
  for (const auto& [key, M] : t.poles) {
    const auto [i, j, a] = key;
    p.push_back({{"i", i}, {"j", j}, {"a", a + 1}, {"op", to_json(M, t.dim)}});
  }
  return {{"constants", c}, {"poles", p}};
}

}  // namespace bispec
