#pragma once

#include <Eigen/Sparse>

#include "ldg/amap.hpp"
#include "ldg/operators.hpp"

namespace ldg {

/// Problem data for -div A(grad u) = f - div F with A of (p,delta)-structure.
struct ProblemData {
  NFunction nf;
  double alpha = 1.0;     // stabilization parameter
  VectorFn f;             // volume source (nullable -> zero)
  TensorFn F;             // tensor source (nullable -> zero)
  VectorFn u_D;           // Dirichlet datum (nullable -> zero)
  VectorFn a_N;           // Neumann datum (nullable -> zero)
};

/// Treatment of the flux shift a = |{Pi0 L_h}| in the Newton linearization:
/// lagged freezes it (keeps the Jacobian symmetric), full differentiates
/// through it.
enum class ShiftMode { lagged, full };

/// Assembles the primal LDG residual and Jacobian. The discrete unknown is
/// the coefficient vector of u_h in U_h^k; L_h = grad_h u_h - R(u_h - u_D*)
/// is represented through a sparse map G with L-coefficients = G u + c0.
class Assembler {
 public:
  Assembler(const DgOperators& ops, ProblemData data);

  const DgOperators& ops() const { return *ops_; }
  const ProblemData& data() const { return data_; }

  Eigen::Index n_dofs() const { return nu_; }

  /// Residual of the primal formulation: for every test basis function,
  /// (A(L_h), G z) + alpha <A_a(h^{-1} [[ (u-u_D*) x n ]]), [[ z x n ]]> - b(z).
  Eigen::VectorXd residual(const Eigen::VectorXd& u) const;

  Eigen::SparseMatrix<double> jacobian(const Eigen::VectorXd& u,
                                       ShiftMode mode = ShiftMode::lagged) const;

  /// L_h = grad_h u_h + R(u_D*) - R(u_h) as a degree-k tensor field.
  BrokenField flux_gradient(const Eigen::VectorXd& u) const;
  /// A_h = Pi_h A(L_h).
  BrokenField flux_stress(const Eigen::VectorXd& u) const;

  BrokenField to_field(const Eigen::VectorXd& u) const;

  /// Per-face shift a_gamma = |{Pi0 L_h}_gamma| (zero on Neumann faces).
  std::vector<double> face_shifts(const Eigen::VectorXd& u) const;

  const Eigen::SparseMatrix<double>& gradient_map() const { return G_; }
  const Eigen::VectorXd& lifted_boundary() const { return c0_; }
  const Eigen::VectorXd& rhs() const { return b_; }

 private:
  Eigen::VectorXd project_stress(const Eigen::VectorXd& lcoef) const;
  void add_stabilization_residual(const Eigen::VectorXd& u,
                                  const std::vector<double>& shifts,
                                  Eigen::VectorXd& r) const;

  Eigen::Index idx_u(int cell, int c, int i) const {
    return (static_cast<Eigen::Index>(cell) * 2 + c) * nd_ + i;
  }
  Eigen::Index idx_l(int cell, int m, int j) const {
    return (static_cast<Eigen::Index>(cell) * 4 + m) * nd_ + j;
  }

  /// Jump of (u - u_D*) tensored with the normal at a face quad point.
  Tensor2 data_jump(const Eigen::VectorXd& u, int face, int q) const;

  const DgOperators* ops_;
  ProblemData data_;
  int nd_;
  Eigen::Index nu_, nl_;
  double h_;
  Eigen::SparseMatrix<double> G_;
  Eigen::VectorXd c0_;
  Eigen::VectorXd b_;
  Eigen::VectorXd detl_;  // detJ per L-coefficient row
};

}  // namespace ldg
