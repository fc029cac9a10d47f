#pragma once

#include "ldg/assembly.hpp"

namespace ldg {

struct NewtonOptions {
  double atol = 1e-8;
  double rtol = 1e-10;
  int max_iter = 100;
  ShiftMode shift_mode = ShiftMode::lagged;
  double armijo_c1 = 1e-4;
  double step_min = std::ldexp(1.0, -20);
};

struct SolveReport {
  bool converged = false;
  std::string failure;                  // empty on success
  std::vector<double> residual_norms;   // including the initial residual
  std::vector<double> step_sizes;       // one per accepted Newton step
  std::vector<int> linear_iterations;   // -1 for a direct solve
  Eigen::VectorXd u;
  int iterations() const { return static_cast<int>(step_sizes.size()); }
};

struct LinearSolveError : std::runtime_error {
  double achieved;
  LinearSolveError(const std::string& what, double rel)
      : std::runtime_error(what), achieved(rel) {}
};

/// Solve J d = -r to relative residual 1e-10 (verified a posteriori).
/// BiCGSTAB with incomplete-LU preconditioning, falling back to a sparse LU
/// factorization if the iteration stalls. Returns the iteration count used
/// (-1 for the direct fallback) through *iters if given.
Eigen::VectorXd linear_solve(const Eigen::SparseMatrix<double>& J,
                             const Eigen::VectorXd& r, int* iters = nullptr);

SolveReport newton_solve(const Assembler& assembler, Eigen::VectorXd initial,
                         const NewtonOptions& opts = {});

}  // namespace ldg
