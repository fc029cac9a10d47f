#pragma once

#include <optional>
#include <string>

#include "ldg/exact.hpp"
#include "ldg/solver.hpp"

namespace ldg {

/// Stabilization parameter table keyed by p; throws for p outside the table
/// unless an explicit alpha is supplied in the config.
double default_alpha(double p);

struct RunConfig {
  double p = 2.0;
  double delta = 1e-3;
  std::optional<double> alpha;  // default: table lookup by p
  int degree = 1;
  int levels = 4;               // finest level index; meshes 0..levels
  double beta = 0.01;
  double domain_half_width = 2.0;  // Omega = (-w, w)^2
  double h0 = 1.0;                 // level-0 grid spacing
  double atol = 1e-8;
  double rtol = 1e-10;
  int max_iter = 50;
  ShiftMode shift_mode = ShiftMode::lagged;
  bool continuation = true;  // reuse the previous level's solution as guess
  std::string out_dir = ".";
  bool export_fields = false;

  double alpha_value() const { return alpha ? *alpha : default_alpha(p); }
};

/// Parse a flat key=value config file into the given config ('#' comments);
/// keys mirror the CLI flags. Throws std::runtime_error on unknown keys.
void apply_config_file(RunConfig& cfg, const std::string& path);

struct ErrorQuantities {
  double e_grad = 0.0;  // ||F(grad_h u_h) - F(grad u)||_2
  double e_L = 0.0;     // ||F(L_h) - F(grad u)||_2
  double e_A = 0.0;     // ||F*(A_h) - F*(A(grad u))||_2
  double e_jump = 0.0;  // m_{phi,h}(u_h - u)^{1/2}
};

struct EocRow {
  int level = 0;
  double h = 0.0;
  ErrorQuantities err;
  // EOC of each error (NaN on the first row).
  double eoc_grad = 0.0, eoc_L = 0.0, eoc_A = 0.0, eoc_jump = 0.0;
};

ErrorQuantities error_quantities(const DgOperators& ops, const Assembler& assembler,
                                 const ExactSolution& exact,
                                 const Eigen::VectorXd& u);

struct StudyResult {
  std::vector<EocRow> rows;
  std::vector<SolveReport> reports;
  bool completed = false;  // false when a level failed to converge
  std::string failure;
};

/// Solves the manufactured problem on a regular refinement sequence, computes
/// errors and EOCs, and writes eoc.csv plus report.json into cfg.out_dir.
/// A nonconvergent level aborts with the rows so far persisted.
StudyResult run_convergence_study(const RunConfig& cfg);

/// Per-quadrature-point CSVs (x,y,value) of the solution/error magnitudes
/// at a single level: u_mag, u_err, L_mag, L_err, A_mag, A_err, lift_mag,
/// lift_err (each "<name>.csv" in cfg.out_dir).
void write_field_csvs(const RunConfig& cfg, const DgOperators& ops,
                      const Assembler& assembler, const ExactSolution& exact,
                      const Eigen::VectorXd& u);

void write_eoc_csv(const std::vector<EocRow>& rows, const std::string& path);

}  // namespace ldg
