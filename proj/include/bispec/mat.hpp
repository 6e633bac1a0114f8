#pragma once

#include <algorithm>
#include <vector>

#include "bispec/scalar.hpp"

namespace bispec {

// Small dense matrix. A default-constructed (0x0) matrix is the zero of every
// shape, so it can pad coefficient lists without knowing the block size.
template <class T>
class Mat {
 public:
  Mat() = default;
  Mat(int r, int c) : r_(r), c_(c), a_(static_cast<size_t>(r) * c, Field<T>::of(0)) {}
  static Mat identity(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = Field<T>::of(1);
    return m;
  }

  int rows() const { return r_; }
  int cols() const { return c_; }
  bool empty() const { return r_ == 0 && c_ == 0; }
  T& operator()(int i, int j) { return a_[static_cast<size_t>(i) * c_ + j]; }
  const T& operator()(int i, int j) const { return a_[static_cast<size_t>(i) * c_ + j]; }

  bool is_zero() const {
    for (const auto& v : a_)
      if (!Field<T>::zero(v)) return false;
    return true;
  }
  double scale() const {
    double s = 0;
    for (const auto& v : a_) s = std::max(s, magnitude(v));
    return s;
  }

  friend Mat operator+(const Mat& a, const Mat& b) {
    if (a.empty()) return b;
    if (b.empty()) return a;
    check_same(a, b);
    Mat r = a;
    for (size_t i = 0; i < r.a_.size(); ++i) r.a_[i] += b.a_[i];
    return r;
  }
  friend Mat operator-(const Mat& a) {
    Mat r = a;
    for (auto& v : r.a_) v = T(-v);
    return r;
  }
  friend Mat operator-(const Mat& a, const Mat& b) { return a + (-b); }
  friend Mat operator*(const Mat& a, const Mat& b) {
    if (a.empty() || b.empty()) return Mat();
    if (a.c_ != b.r_) throw InvalidInput("matrix shape mismatch in product");
    Mat r(a.r_, b.c_);
    for (int i = 0; i < a.r_; ++i)
      for (int k = 0; k < a.c_; ++k) {
        const T& x = a(i, k);
        if (Field<T>::zero(x)) continue;
        for (int j = 0; j < b.c_; ++j) r(i, j) += x * b(k, j);
      }
    return r;
  }
  friend Mat operator*(const T& s, const Mat& a) {
    Mat r = a;
    for (auto& v : r.a_) v = T(s * v);
    return r;
  }
  friend Mat operator*(const Mat& a, const T& s) { return s * a; }
  Mat& operator+=(const Mat& o) { return *this = *this + o; }
  Mat& operator-=(const Mat& o) { return *this = *this - o; }

  // Empty and all-zero matrices compare equal.
  friend bool operator==(const Mat& a, const Mat& b) {
    if (a.empty() || b.empty()) return a.is_zero() && b.is_zero();
    return a.r_ == b.r_ && a.c_ == b.c_ && a.a_ == b.a_;
  }
  friend bool operator!=(const Mat& a, const Mat& b) { return !(a == b); }

 private:
  static void check_same(const Mat& a, const Mat& b) {
    if (a.r_ != b.r_ || a.c_ != b.c_) throw InvalidInput("matrix shape mismatch in sum");
  }
  int r_ = 0, c_ = 0;
  std::vector<T> a_;
};

template <class T>
bool is_zero(const Mat<T>& m) {
  return m.is_zero();
}
template <class T>
double magnitude(const Mat<T>& m) {
  return m.scale();
}

template <class T>
Mat<T> commutator(const Mat<T>& a, const Mat<T>& b) {
  return a * b - b * a;
}

template <class T>
Mat<double> mat_to_double(const Mat<T>& m) {
  if (m.empty()) return Mat<double>();
  Mat<double> r(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) r(i, j) = Field<T>::to_double(m(i, j));
  return r;
}

}  // namespace bispec
