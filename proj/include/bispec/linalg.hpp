#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "bispec/scalar.hpp"

namespace bispec {

template <class T>
using Matrix = std::vector<std::vector<T>>;

// Reduced row echelon form in place; returns pivot columns. Exact for
// Rational; partial pivoting with a tolerance for double.
template <class T>
std::vector<int> rref(Matrix<T>& A, double tol = 0.0) {
  std::vector<int> piv;
  const int rows = static_cast<int>(A.size());
  if (rows == 0) return piv;
  const int cols = static_cast<int>(A[0].size());
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int best = -1;
    double bestmag = 0;
    for (int i = r; i < rows; ++i) {
      if (Field<T>::zero(A[i][c])) continue;
      if constexpr (Field<T>::exact) {
        best = i;
        break;
      } else {
        if (std::fabs(A[i][c]) > bestmag) {
          bestmag = std::fabs(A[i][c]);
          best = i;
        }
      }
    }
    if (best < 0) continue;
    if constexpr (!Field<T>::exact) {
      if (bestmag <= tol) continue;
    }
    std::swap(A[r], A[best]);
    T inv = T(Field<T>::of(1) / A[r][c]);
    for (int cc = c; cc < cols; ++cc) A[r][cc] = T(A[r][cc] * inv);
    for (int i = 0; i < rows; ++i) {
      if (i == r || Field<T>::zero(A[i][c])) continue;
      T f = A[i][c];
      for (int cc = c; cc < cols; ++cc) A[i][cc] -= f * A[r][cc];
    }
    piv.push_back(c);
    ++r;
  }
  return piv;
}

// Basis of {v : A v = 0}.
template <class T>
std::vector<std::vector<T>> nullspace(Matrix<T> A, int cols, double tol = 0.0) {
  std::vector<std::vector<T>> out;
  if (A.empty()) {
    for (int j = 0; j < cols; ++j) {
      std::vector<T> v(cols, Field<T>::of(0));
      v[j] = Field<T>::of(1);
      out.push_back(v);
    }
    return out;
  }
  auto piv = rref(A, tol);
  std::vector<bool> is_piv(cols, false);
  for (int c : piv) is_piv[c] = true;
  for (int f = 0; f < cols; ++f) {
    if (is_piv[f]) continue;
    std::vector<T> v(cols, Field<T>::of(0));
    v[f] = Field<T>::of(1);
    for (size_t r = 0; r < piv.size(); ++r) v[piv[r]] = T(-A[r][f]);
    out.push_back(v);
  }
  return out;
}

template <class T>
struct AffineSolution {
  std::vector<T> particular;
  std::vector<std::vector<T>> null;
};

// Solutions of A v = b, or nullopt when inconsistent.
template <class T>
std::optional<AffineSolution<T>> solve_affine(const Matrix<T>& A, const std::vector<T>& b, int cols,
                                              double tol = 0.0) {
  Matrix<T> aug;
  for (size_t i = 0; i < A.size(); ++i) {
    auto row = A[i];
    row.push_back(b[i]);
    aug.push_back(row);
  }
  AffineSolution<T> s;
  s.particular.assign(cols, Field<T>::of(0));
  if (aug.empty()) {
    s.null = nullspace<T>({}, cols, tol);
    return s;
  }
  auto piv = rref(aug, tol);
  for (size_t r = 0; r < piv.size(); ++r) {
    if (piv[r] == cols) return std::nullopt;
    s.particular[piv[r]] = aug[r][cols];
  }
  std::vector<bool> is_piv(cols, false);
  for (int c : piv)
    if (c < cols) is_piv[c] = true;
  for (int f = 0; f < cols; ++f) {
    if (is_piv[f]) continue;
    std::vector<T> v(cols, Field<T>::of(0));
    v[f] = Field<T>::of(1);
    for (size_t r = 0; r < piv.size(); ++r) v[piv[r]] = T(-aug[r][f]);
    s.null.push_back(v);
  }
  return s;
}

}  // namespace bispec
