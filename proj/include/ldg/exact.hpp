#pragma once

#include "ldg/amap.hpp"

namespace ldg {

/// Manufactured solution u(x) = |x|^beta (x2, -x1)^T and derived data for
/// -div A(grad u) = f. All evaluators are singular only at the origin.
class ExactSolution {
 public:
  ExactSolution(NFunction nf, double beta = 0.01)
      : nf_(std::move(nf)), beta_(beta) {}

  const NFunction& nf() const { return nf_; }
  double beta() const { return beta_; }

  std::array<double, 2> u(double x, double y) const;
  Tensor2 gradient(double x, double y) const;
  /// hess[k][j][l] = d_j d_l u_k.
  std::array<std::array<std::array<double, 2>, 2>, 2> hessian(double x, double y) const;

  Tensor2 stress(double x, double y) const;  // A(grad u)
  /// f_i = -sum_{j,k,l} DA(grad u)_{ij,kl} d_l d_j u_k.
  std::array<double, 2> source(double x, double y) const;

 private:
  NFunction nf_;
  double beta_;
};

}  // namespace ldg
