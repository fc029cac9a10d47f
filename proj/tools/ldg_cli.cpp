#include <iostream>
#include <random>

#include "CLI11.hpp"
#include "json.hpp"
#include "ldg/experiments.hpp"
#include "ldg/operators.hpp"

namespace {

using namespace ldg;

void add_common_flags(CLI::App* cmd, RunConfig& cfg, std::string& config_path,
                      std::string& shift_mode, bool require_p = true) {
  auto* popt = cmd->add_option("--p", cfg.p, "exponent of the (p,delta) structure");
  if (require_p) popt->required();
  cmd->add_option("--delta", cfg.delta, "delta of the (p,delta) structure");
  cmd->add_option("--alpha", cfg.alpha, "stabilization parameter (default: table by p)");
  cmd->add_option("--k", cfg.degree, "polynomial degree");
  cmd->add_option("--levels", cfg.levels, "finest refinement level");
  cmd->add_option("--beta", cfg.beta, "exponent of the manufactured solution");
  cmd->add_option("--atol", cfg.atol, "Newton absolute tolerance");
  cmd->add_option("--rtol", cfg.rtol, "Newton relative tolerance");
  cmd->add_option("--max-iter", cfg.max_iter, "Newton iteration cap");
  cmd->add_option("--shift-mode", shift_mode, "lagged|full")
      ->check(CLI::IsMember({"lagged", "full"}));
  cmd->add_option("--out", cfg.out_dir, "output directory");
  cmd->add_option("--config", config_path, "key=value config file (CLI overrides it)");
}

/// CLI flags win over the config file: parse flags, re-apply file defaults
/// only where the flag was not given.
RunConfig resolve_config(CLI::App* cmd, const RunConfig& cli_cfg,
                         const std::string& config_path,
                         const std::string& shift_mode) {
  RunConfig cfg;
  if (!config_path.empty()) apply_config_file(cfg, config_path);
  const auto take = [&](const char* flag, auto member) {
    if (cmd->count(flag) > 0) cfg.*member = cli_cfg.*member;
  };
  take("--p", &RunConfig::p);
  take("--delta", &RunConfig::delta);
  take("--alpha", &RunConfig::alpha);
  take("--k", &RunConfig::degree);
  take("--levels", &RunConfig::levels);
  take("--beta", &RunConfig::beta);
  take("--atol", &RunConfig::atol);
  take("--rtol", &RunConfig::rtol);
  take("--max-iter", &RunConfig::max_iter);
  take("--out", &RunConfig::out_dir);
  if (cmd->count("--shift-mode") > 0)
    cfg.shift_mode = shift_mode == "full" ? ShiftMode::full : ShiftMode::lagged;
  return cfg;
}

int run_props(double delta, unsigned seed) {
  const std::vector<double> ps = {1.25, 4.0 / 3.0, 1.5, 5.0 / 3.0, 1.8,
                                  2.0,  2.25,      2.5, 3.0,       4.0};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> logu(-6.0, 6.0);
  std::normal_distribution<double> gauss;
  bool ok = true;
  for (double p : ps) {
    const NFunction nf(p, delta);
    int young_bad = 0;
    double max_roundtrip = 0.0, max_jac = 0.0;
    for (int i = 0; i < 20000; ++i) {
      const double t = std::pow(10.0, logu(rng));
      const double s = std::pow(10.0, logu(rng));
      if (t * s > nf.value(t) + nf.conjugate_value(s) + 1e-9 * (1.0 + t * s))
        ++young_bad;
      const double back = nf.conjugate_prime(nf.prime(t));
      max_roundtrip = std::max(max_roundtrip, std::abs(back - t) / t);
    }
    for (int i = 0; i < 200; ++i) {
      Tensor2 P;
      for (double& e : P.e) e = gauss(rng);
      const Tensor4 J = op_A_jacobian(nf, P);
      const double h = 1e-6 * (1.0 + P.norm());
      for (int n = 0; n < 4; ++n) {
        Tensor2 Pp = P, Pm = P;
        Pp.e[n] += h;
        Pm.e[n] -= h;
        const Tensor2 d = (1.0 / (2.0 * h)) * (op_A(nf, Pp) - op_A(nf, Pm));
        for (int m = 0; m < 4; ++m)
          max_jac = std::max(max_jac, std::abs(J(m, n) - d.e[m]) /
                                          (1.0 + std::abs(J(m, n))));
      }
    }
    const bool pass = young_bad == 0 && max_roundtrip <= 1e-10 && max_jac <= 1e-5;
    ok = ok && pass;
    std::cout << "p=" << p << "  young_violations=" << young_bad
              << "  roundtrip=" << max_roundtrip << "  jac_fd=" << max_jac
              << (pass ? "  PASS" : "  FAIL") << '\n';
  }
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LDG solver for nonlinear elliptic systems with (p,delta)-structure"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string config_path;
  std::string shift_mode = "lagged";

  auto* solve = app.add_subcommand("solve", "single-level solve, report as JSON");
  add_common_flags(solve, cfg, config_path, shift_mode);
  auto* eoc = app.add_subcommand("eoc", "convergence study, writes eoc.csv + report.json");
  add_common_flags(eoc, cfg, config_path, shift_mode);
  auto* fields = app.add_subcommand("export-fields",
                                    "solve the finest level and write field CSVs");
  add_common_flags(fields, cfg, config_path, shift_mode);

  auto* props = app.add_subcommand("props", "property-test sampling report");
  double props_delta = 1e-3;
  unsigned props_seed = 7;
  props->add_option("--delta", props_delta, "delta for the sampled family");
  props->add_option("--seed", props_seed, "RNG seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (props->parsed()) return run_props(props_delta, props_seed);

    CLI::App* cmd = solve->parsed() ? solve : eoc->parsed() ? eoc : fields;
    RunConfig rc = resolve_config(cmd, cfg, config_path, shift_mode);

    if (solve->parsed()) {
      // A single solve at the requested level (the finest of the sequence).
      rc.levels = std::max(0, rc.levels);
      const NFunction nf(rc.p, rc.delta);
      const ExactSolution exact(nf, rc.beta);
      const double w = rc.domain_half_width;
      Triangulation mesh = build_cartesian(-w, -w, w, w, rc.h0);
      for (int l = 0; l < rc.levels; ++l) mesh = refine_regular(mesh);
      const DgOperators ops =
          DgOperators::with_defaults(mesh, rc.degree, {{0.0, 0.0}});
      ProblemData data{nf};
      data.alpha = rc.alpha_value();
      data.f = [&exact](double x, double y) { return exact.source(x, y); };
      data.u_D = [&exact](double x, double y) { return exact.u(x, y); };
      const Assembler assembler(ops, std::move(data));
      NewtonOptions nopts;
      nopts.atol = rc.atol;
      nopts.rtol = rc.rtol;
      nopts.max_iter = rc.max_iter;
      nopts.shift_mode = rc.shift_mode;
      const SolveReport report =
          newton_solve(assembler, Eigen::VectorXd::Zero(assembler.n_dofs()), nopts);
      const ErrorQuantities err =
          report.converged ? error_quantities(ops, assembler, exact, report.u)
                           : ErrorQuantities{};
      nlohmann::json j;
      j["converged"] = report.converged;
      j["iterations"] = report.iterations();
      j["residual_norms"] = report.residual_norms;
      j["step_sizes"] = report.step_sizes;
      if (!report.failure.empty()) j["failure"] = report.failure;
      if (report.converged) {
        j["e_grad"] = err.e_grad;
        j["e_L"] = err.e_L;
        j["e_A"] = err.e_A;
        j["e_jump"] = err.e_jump;
      }
      std::cout << j.dump(2) << '\n';
      return report.converged ? 0 : 1;
    }

    if (fields->parsed()) rc.export_fields = true;
    const StudyResult result = run_convergence_study(rc);
    for (const auto& row : result.rows) {
      std::cout << "level " << row.level << "  h=" << row.h
                << "  e_grad=" << row.err.e_grad << " (" << row.eoc_grad << ")"
                << "  e_L=" << row.err.e_L << " (" << row.eoc_L << ")"
                << "  e_A=" << row.err.e_A << " (" << row.eoc_A << ")"
                << "  e_jump=" << row.err.e_jump << " (" << row.eoc_jump << ")\n";
    }
    if (!result.completed) {
      std::cerr << "error: " << result.failure << '\n';
      return 1;
    }
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
