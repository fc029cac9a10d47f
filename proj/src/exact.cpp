#include "ldg/exact.hpp"

#include <cmath>

namespace ldg {

namespace {
// a(x) = (x2, -x1) and its (constant) gradient (da)_{kj} = d_j a_k.
constexpr double da[2][2] = {{0.0, 1.0}, {-1.0, 0.0}};

double radius(double x, double y) {
  const double r = std::hypot(x, y);
  if (r == 0.0) throw std::domain_error("exact solution is singular at the origin");
  return r;
}
}  // namespace

std::array<double, 2> ExactSolution::u(double x, double y) const {
  const double rb = std::pow(radius(x, y), beta_);
  return {rb * y, -rb * x};
}

Tensor2 ExactSolution::gradient(double x, double y) const {
  const double r = radius(x, y);
  const double rb = std::pow(r, beta_);
  const double c = beta_ * rb / (r * r);  // beta r^(beta-2)
  const double xv[2] = {x, y};
  const double av[2] = {y, -x};
  Tensor2 g;
  for (int k = 0; k < 2; ++k)
    for (int j = 0; j < 2; ++j) g(k, j) = c * xv[j] * av[k] + rb * da[k][j];
  return g;
}

std::array<std::array<std::array<double, 2>, 2>, 2> ExactSolution::hessian(
    double x, double y) const {
  const double r = radius(x, y);
  const double c2 = beta_ * (beta_ - 2.0) * std::pow(r, beta_ - 4.0);
  const double c1 = beta_ * std::pow(r, beta_ - 2.0);
  const double xv[2] = {x, y};
  const double av[2] = {y, -x};
  std::array<std::array<std::array<double, 2>, 2>, 2> H{};
  for (int k = 0; k < 2; ++k)
    for (int j = 0; j < 2; ++j)
      for (int l = 0; l < 2; ++l)
        H[k][j][l] = c2 * xv[j] * xv[l] * av[k] +
                     c1 * ((j == l ? 1.0 : 0.0) * av[k] + xv[j] * da[k][l] +
                           xv[l] * da[k][j]);
  return H;
}

Tensor2 ExactSolution::stress(double x, double y) const {
  return op_A(nf_, gradient(x, y));
}

std::array<double, 2> ExactSolution::source(double x, double y) const {
  const Tensor2 g = gradient(x, y);
  const Tensor4 DA = op_A_jacobian(nf_, g);
  const auto H = hessian(x, y);
  std::array<double, 2> f{0.0, 0.0};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l)
          f[i] -= DA(2 * i + j, 2 * k + l) * H[k][l][j];
  return f;
}

}  // namespace ldg
