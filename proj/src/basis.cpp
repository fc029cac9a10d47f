#include "ldg/basis.hpp"

#include <cmath>
#include <stdexcept>

namespace ldg {

double reference_monomial_integral(int a, int b) {
  long double v = 1.0L;
  // a! b! / (a+b+2)! computed as a product of ratios to avoid overflow.
  for (int i = 1; i <= a; ++i) v *= static_cast<long double>(i);
  for (int i = 1; i <= b; ++i) v *= static_cast<long double>(i);
  for (int i = 1; i <= a + b + 2; ++i) v /= static_cast<long double>(i);
  return static_cast<double>(v);
}

ReferenceBasis::ReferenceBasis(int degree) : degree_(degree) {
  if (degree < 0) throw std::invalid_argument("ReferenceBasis: negative degree");
  ndof_ = (degree + 1) * (degree + 2) / 2;
  expo_.reserve(ndof_);
  for (int d = 0; d <= degree; ++d)
    for (int a = d; a >= 0; --a) expo_.push_back({a, d - a});

  Eigen::MatrixXd gram(ndof_, ndof_);
  for (int i = 0; i < ndof_; ++i)
    for (int j = 0; j < ndof_; ++j)
      gram(i, j) = reference_monomial_integral(expo_[i][0] + expo_[j][0],
                                               expo_[i][1] + expo_[j][1]);
  coef_ = Eigen::MatrixXd::Identity(ndof_, ndof_);
  // Two orthonormalization passes polish roundoff from the ill-conditioned
  // monomial Gram matrix.
  for (int pass = 0; pass < 2; ++pass) {
    const Eigen::MatrixXd g = coef_ * gram * coef_.transpose();
    const Eigen::LLT<Eigen::MatrixXd> llt(g);
    if (llt.info() != Eigen::Success)
      throw std::runtime_error("ReferenceBasis: Gram matrix not SPD");
    coef_ = llt.matrixL().solve(coef_);
  }
}

double ReferenceBasis::value(int i, double xi, double eta) const {
  double s = 0.0;
  for (int j = 0; j < ndof_; ++j) {
    const double m = std::pow(xi, expo_[j][0]) * std::pow(eta, expo_[j][1]);
    s += coef_(i, j) * m;
  }
  return s;
}

std::array<double, 2> ReferenceBasis::gradient(int i, double xi, double eta) const {
  std::array<double, 2> g{0.0, 0.0};
  for (int j = 0; j < ndof_; ++j) {
    const int a = expo_[j][0];
    const int b = expo_[j][1];
    if (a > 0) g[0] += coef_(i, j) * a * std::pow(xi, a - 1) * std::pow(eta, b);
    if (b > 0) g[1] += coef_(i, j) * b * std::pow(xi, a) * std::pow(eta, b - 1);
  }
  return g;
}

}  // namespace ldg
