#pragma once

#include <Eigen/Dense>
#include <array>
#include <vector>

namespace ldg {

/// L2-orthonormal polynomial basis of degree <= k on the reference triangle
/// {xi>=0, eta>=0, xi+eta<=1}, built by Cholesky orthonormalization of the
/// monomials against their exact Gram matrix. Local mass matrices on a
/// physical cell are then detJ times the identity.
class ReferenceBasis {
 public:
  explicit ReferenceBasis(int degree);

  int degree() const { return degree_; }
  int size() const { return ndof_; }

  double value(int i, double xi, double eta) const;
  std::array<double, 2> gradient(int i, double xi, double eta) const;

 private:
  int degree_;
  int ndof_;
  std::vector<std::array<int, 2>> expo_;  // monomial exponents (a, b)
  Eigen::MatrixXd coef_;                  // basis i = sum_j coef_(i,j) xi^a eta^b
};

/// Exact integral of xi^a eta^b over the reference triangle: a! b!/(a+b+2)!.
double reference_monomial_integral(int a, int b);

}  // namespace ldg
