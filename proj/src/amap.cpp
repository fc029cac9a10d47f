#include "ldg/amap.hpp"

#include <cmath>

namespace ldg {

namespace {

double default_eps(const Tensor2& P) { return 1e-12 * (1.0 + P.norm()); }

Tensor4 rank_one_plus_identity(double g, double gprime_over_r, const Tensor2& P) {
  Tensor4 t;
  for (int m = 0; m < 4; ++m) {
    t(m, m) = g;
    for (int n = 0; n < 4; ++n) t(m, n) += gprime_over_r * P.e[m] * P.e[n];
  }
  return t;
}

}  // namespace

Tensor2 op_A(const NFunction& nf, const Tensor2& P) {
  const double r = P.norm();
  if (r == 0.0) return Tensor2{};
  return std::pow(nf.delta() + r, nf.p() - 2.0) * P;
}

Tensor4 op_A_jacobian(const NFunction& nf, const Tensor2& P, double eps) {
  if (eps < 0.0) eps = default_eps(P);
  const double r0 = P.norm();
  if (r0 == 0.0 && nf.delta() == 0.0 && nf.p() < 2.0 && eps == 0.0) {
    throw std::domain_error("op_A_jacobian: singular at P=0 for p<2, delta=0");
  }
  const double r = std::max(r0, eps);
  if (r == 0.0) {
    // p >= 2, delta = 0, no floor: DA(0) = 0 for p > 2, identity for p = 2.
    Tensor4 t;
    if (nf.p() == 2.0) t = Tensor4::identity();
    return t;
  }
  const double g = std::pow(nf.delta() + r, nf.p() - 2.0);  // phi'(r)/r
  const double c = (nf.second(r) - g) / (r * r);
  return rank_one_plus_identity(g, c, P);
}

Tensor2 op_A_shifted(const NFunction& nf, double a, const Tensor2& P) {
  const double r = P.norm();
  if (r == 0.0) return Tensor2{};
  const double s = a + r;
  return (nf.prime(s) / s) * P;
}

Tensor4 op_A_shifted_jacobian(const NFunction& nf, double a, const Tensor2& P,
                              double eps) {
  if (a == 0.0) return op_A_jacobian(nf, P, eps);
  if (eps < 0.0) eps = default_eps(P);
  const double r = std::max(P.norm(), eps);
  const double s = a + r;
  const double g = nf.prime(s) / s;
  const double gprime = (nf.second(s) * s - nf.prime(s)) / (s * s);
  return rank_one_plus_identity(g, gprime / r, P);
}

Tensor2 op_A_shifted_da(const NFunction& nf, double a, const Tensor2& P) {
  const double r = P.norm();
  if (r == 0.0) return Tensor2{};
  const double s = a + r;
  const double gprime = (nf.second(s) * s - nf.prime(s)) / (s * s);
  return gprime * P;
}

Tensor2 map_F(const NFunction& nf, const Tensor2& P) {
  const double r = P.norm();
  if (r == 0.0) return Tensor2{};
  return std::pow(nf.delta() + r, 0.5 * (nf.p() - 2.0)) * P;
}

Tensor2 map_Fstar(const NFunction& nf, const Tensor2& P) {
  const double r = P.norm();
  if (r == 0.0) return Tensor2{};
  return std::sqrt(nf.conjugate_prime(r) / r) * P;
}

}  // namespace ldg
