#pragma once

#include <array>
#include <cmath>

namespace ldg {

/// Small 2x2 tensor with Frobenius algebra. Entry (i,j) is component i,
/// derivative/column direction j.
struct Tensor2 {
  std::array<double, 4> e{0.0, 0.0, 0.0, 0.0};

  double& operator()(int i, int j) { return e[2 * i + j]; }
  double operator()(int i, int j) const { return e[2 * i + j]; }

  double dot(const Tensor2& q) const {
    return e[0] * q.e[0] + e[1] * q.e[1] + e[2] * q.e[2] + e[3] * q.e[3];
  }
  double norm() const { return std::sqrt(dot(*this)); }

  Tensor2& operator+=(const Tensor2& q) {
    for (int m = 0; m < 4; ++m) e[m] += q.e[m];
    return *this;
  }
  Tensor2& operator-=(const Tensor2& q) {
    for (int m = 0; m < 4; ++m) e[m] -= q.e[m];
    return *this;
  }
  Tensor2& operator*=(double s) {
    for (int m = 0; m < 4; ++m) e[m] *= s;
    return *this;
  }

  friend Tensor2 operator+(Tensor2 a, const Tensor2& b) { return a += b; }
  friend Tensor2 operator-(Tensor2 a, const Tensor2& b) { return a -= b; }
  friend Tensor2 operator*(double s, Tensor2 a) { return a *= s; }

  static Tensor2 outer(const std::array<double, 2>& u, const std::array<double, 2>& n) {
    Tensor2 t;
    t(0, 0) = u[0] * n[0];
    t(0, 1) = u[0] * n[1];
    t(1, 0) = u[1] * n[0];
    t(1, 1) = u[1] * n[1];
    return t;
  }
};

/// Fourth-order tensor acting on Tensor2, stored as a 4x4 matrix in the
/// flattened (i,j) index.
struct Tensor4 {
  std::array<double, 16> e{};

  double& operator()(int m, int n) { return e[4 * m + n]; }
  double operator()(int m, int n) const { return e[4 * m + n]; }

  Tensor2 apply(const Tensor2& q) const {
    Tensor2 r;
    for (int m = 0; m < 4; ++m) {
      double s = 0.0;
      for (int n = 0; n < 4; ++n) s += e[4 * m + n] * q.e[n];
      r.e[m] = s;
    }
    return r;
  }

  static Tensor4 identity() {
    Tensor4 t;
    for (int m = 0; m < 4; ++m) t(m, m) = 1.0;
    return t;
  }
};

}  // namespace ldg
