#include "ldg/solver.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseLU>

namespace ldg {

namespace {
constexpr double kLinearTol = 1e-10;

double relative_residual(const Eigen::SparseMatrix<double>& J,
                         const Eigen::VectorXd& d, const Eigen::VectorXd& r) {
  return (J * d + r).norm() / r.norm();
}
}  // namespace

Eigen::VectorXd linear_solve(const Eigen::SparseMatrix<double>& J,
                             const Eigen::VectorXd& r, int* iters) {
  if (r.norm() == 0.0) {
    if (iters) *iters = 0;
    return Eigen::VectorXd::Zero(r.size());
  }
  Eigen::BiCGSTAB<Eigen::SparseMatrix<double>, Eigen::IncompleteLUT<double>> krylov;
  krylov.setTolerance(1e-13);
  krylov.setMaxIterations(2000);
  krylov.compute(J);
  if (krylov.info() == Eigen::Success) {
    Eigen::VectorXd d = krylov.solve(-r);
    if (krylov.info() == Eigen::Success && relative_residual(J, d, r) <= kLinearTol) {
      if (iters) *iters = static_cast<int>(krylov.iterations());
      return d;
    }
  }
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(J);
  if (lu.info() != Eigen::Success)
    throw LinearSolveError("sparse LU factorization failed", 1.0);
  Eigen::VectorXd d = lu.solve(-r);
  const double rel = relative_residual(J, d, r);
  if (rel > kLinearTol)
    throw LinearSolveError("linear solve did not reach the residual tolerance", rel);
  if (iters) *iters = -1;
  return d;
}

SolveReport newton_solve(const Assembler& assembler, Eigen::VectorXd initial,
                         const NewtonOptions& opts) {
  SolveReport report;
  report.u = std::move(initial);
  Eigen::VectorXd r = assembler.residual(report.u);
  double rnorm = r.norm();
  const double r0 = rnorm;
  report.residual_norms.push_back(rnorm);

  for (int it = 0; it < opts.max_iter; ++it) {
    if (rnorm <= opts.atol || (r0 > 0.0 && rnorm / r0 <= opts.rtol)) {
      report.converged = true;
      return report;
    }
    const Eigen::SparseMatrix<double> J = assembler.jacobian(report.u, opts.shift_mode);
    int lin_iters = 0;
    Eigen::VectorXd d;
    try {
      d = linear_solve(J, r, &lin_iters);
    } catch (const LinearSolveError& err) {
      report.failure = err.what();
      return report;
    }
    report.linear_iterations.push_back(lin_iters);

    double s = 1.0;
    Eigen::VectorXd u_trial;
    Eigen::VectorXd r_trial;
    double rnorm_trial = rnorm;
    bool accepted = false;
    while (s >= opts.step_min) {
      u_trial = report.u + s * d;
      r_trial = assembler.residual(u_trial);
      rnorm_trial = r_trial.norm();
      if (rnorm_trial <= (1.0 - opts.armijo_c1 * s) * rnorm) {
        accepted = true;
        break;
      }
      s *= 0.5;
    }
    if (!accepted) {
      report.failure = "line search stagnated";
      return report;
    }
    report.u = std::move(u_trial);
    r = std::move(r_trial);
    rnorm = rnorm_trial;
    report.residual_norms.push_back(rnorm);
    report.step_sizes.push_back(s);
  }
  if (rnorm <= opts.atol || (r0 > 0.0 && rnorm / r0 <= opts.rtol)) {
    report.converged = true;
  } else {
    report.failure = "maximum Newton iterations exceeded";
  }
  return report;
}

}  // namespace ldg
