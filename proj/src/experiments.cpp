#include "ldg/experiments.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include "json.hpp"
#include <sstream>

#include "ldg/operators.hpp"

namespace ldg {

double default_alpha(double p) {
  static const std::vector<std::pair<double, double>> table = {
      {1.25, 0.06}, {4.0 / 3.0, 0.1}, {1.5, 0.2}, {5.0 / 3.0, 0.5}, {1.8, 1.0},
      {2.0, 2.0},   {2.25, 2.0},      {2.5, 2.5}, {3.0, 2.5},       {4.0, 2.5}};
  for (const auto& [pt, alpha] : table)
    if (std::abs(pt - p) < 1e-12) return alpha;
  throw std::invalid_argument("no default stabilization parameter for p=" +
                              std::to_string(p) + "; pass alpha explicitly");
}

void apply_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto strip = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      if (b == std::string::npos) return std::string();
      const auto e = s.find_last_not_of(" \t\r");
      return s.substr(b, e - b + 1);
    };
    line = strip(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": expected key=value");
    const std::string key = strip(line.substr(0, eq));
    const std::string value = strip(line.substr(eq + 1));
    if (key == "p") cfg.p = std::stod(value);
    else if (key == "delta") cfg.delta = std::stod(value);
    else if (key == "alpha") cfg.alpha = std::stod(value);
    else if (key == "k") cfg.degree = std::stoi(value);
    else if (key == "levels") cfg.levels = std::stoi(value);
    else if (key == "beta") cfg.beta = std::stod(value);
    else if (key == "atol") cfg.atol = std::stod(value);
    else if (key == "rtol") cfg.rtol = std::stod(value);
    else if (key == "max-iter") cfg.max_iter = std::stoi(value);
    else if (key == "shift-mode") {
      if (value == "lagged") cfg.shift_mode = ShiftMode::lagged;
      else if (value == "full") cfg.shift_mode = ShiftMode::full;
      else throw std::runtime_error("shift-mode must be lagged or full");
    } else if (key == "out") cfg.out_dir = value;
    else if (key == "export-fields") cfg.export_fields = value == "1" || value == "true";
    else if (key == "continuation") cfg.continuation = value == "1" || value == "true";
    else throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                  ": unknown key '" + key + "'");
  }
}

namespace {

/// L2 norm of the pointwise difference of a mapped broken tensor field and a
/// mapped exact tensor field.
double l2_map_error(const DgOperators& ops, const BrokenField& X,
                    const std::function<Tensor2(const Tensor2&)>& map_discrete,
                    const std::function<Tensor2(double, double)>& mapped_exact) {
  double total = 0.0;
  for (int cell = 0; cell < static_cast<int>(ops.mesh().cells.size()); ++cell) {
    const TriangleRule& r = ops.rule(cell);
    const double det = ops.geom(cell).det;
    for (std::size_t q = 0; q < r.size(); ++q) {
      const Tensor2 V = X.eval_tensor(ops.basis(), cell, r.xi[q], r.eta[q]);
      const Point x = ops.map_point(cell, r.xi[q], r.eta[q]);
      const Tensor2 diff = map_discrete(V) - mapped_exact(x.x, x.y);
      total += det * r.weights[q] * diff.dot(diff);
    }
  }
  return std::sqrt(total);
}

}  // namespace

ErrorQuantities error_quantities(const DgOperators& ops, const Assembler& assembler,
                                 const ExactSolution& exact,
                                 const Eigen::VectorXd& u) {
  const NFunction& nf = assembler.data().nf;
  const BrokenField uh = assembler.to_field(u);
  const BrokenField grad_h = local_gradient(ops, uh);
  const BrokenField Lh = assembler.flux_gradient(u);
  const BrokenField Ah = assembler.flux_stress(u);

  const auto F_exact = [&](double x, double y) {
    return map_F(nf, exact.gradient(x, y));
  };
  const auto Fstar_exact = [&](double x, double y) {
    return map_Fstar(nf, exact.stress(x, y));
  };
  const auto F_disc = [&](const Tensor2& V) { return map_F(nf, V); };
  const auto Fstar_disc = [&](const Tensor2& V) { return map_Fstar(nf, V); };

  ErrorQuantities e;
  e.e_grad = l2_map_error(ops, grad_h, F_disc, F_exact);
  e.e_L = l2_map_error(ops, Lh, F_disc, F_exact);
  e.e_A = l2_map_error(ops, Ah, Fstar_disc, Fstar_exact);

  const VectorFn u_exact = [&](double x, double y) { return exact.u(x, y); };
  const auto jumps = jumps_of_field(ops, uh, u_exact);
  const auto phi = [&](double t) { return nf.value(t); };
  e.e_jump = std::sqrt(modular_jump(ops, phi, jumps, ops.mesh().grid_h));
  return e;
}

void write_eoc_csv(const std::vector<EocRow>& rows, const std::string& path) {
  std::ofstream out(path);
  out << "level,h,e_grad,eoc_grad,e_L,eoc_L,e_A,eoc_A,e_jump,eoc_jump\n";
  out.precision(12);
  for (const auto& r : rows) {
    out << r.level << ',' << r.h << ',' << r.err.e_grad << ',' << r.eoc_grad
        << ',' << r.err.e_L << ',' << r.eoc_L << ',' << r.err.e_A << ','
        << r.eoc_A << ',' << r.err.e_jump << ',' << r.eoc_jump << '\n';
  }
}

namespace {

void write_report_json(const std::vector<SolveReport>& reports,
                       const StudyResult& result, const RunConfig& cfg,
                       const std::string& path) {
  nlohmann::json j;
  j["p"] = cfg.p;
  j["delta"] = cfg.delta;
  j["alpha"] = cfg.alpha_value();
  j["k"] = cfg.degree;
  j["completed"] = result.completed;
  if (!result.failure.empty()) j["failure"] = result.failure;
  auto& levels = j["levels"];
  levels = nlohmann::json::array();
  for (std::size_t i = 0; i < reports.size(); ++i) {
    nlohmann::json lvl;
    lvl["level"] = static_cast<int>(i);
    lvl["converged"] = reports[i].converged;
    lvl["iterations"] = reports[i].iterations();
    lvl["residual_norms"] = reports[i].residual_norms;
    lvl["step_sizes"] = reports[i].step_sizes;
    lvl["linear_iterations"] = reports[i].linear_iterations;
    if (!reports[i].failure.empty()) lvl["failure"] = reports[i].failure;
    levels.push_back(std::move(lvl));
  }
  std::ofstream out(path);
  out << j.dump(2) << '\n';
}

double eoc(double e_fine, double e_coarse, double h_fine, double h_coarse) {
  return std::log(e_fine / e_coarse) / std::log(h_fine / h_coarse);
}

Assembler make_assembler(const DgOperators& ops, const ExactSolution& exact,
                         const RunConfig& cfg) {
  ProblemData data{exact.nf()};
  data.alpha = cfg.alpha_value();
  data.f = [&exact](double x, double y) { return exact.source(x, y); };
  data.u_D = [&exact](double x, double y) { return exact.u(x, y); };
  return Assembler(ops, std::move(data));
}

}  // namespace

void write_field_csvs(const RunConfig& cfg, const DgOperators& ops,
                      const Assembler& assembler, const ExactSolution& exact,
                      const Eigen::VectorXd& u) {
  namespace fs = std::filesystem;
  fs::create_directories(cfg.out_dir);
  const NFunction& nf = exact.nf();
  const BrokenField uh = assembler.to_field(u);
  const BrokenField Lh = assembler.flux_gradient(u);
  const BrokenField Ah = assembler.flux_stress(u);
  const BrokenField lift_uh =
      lift(ops, jumps_of_field(ops, uh, nullptr));
  const VectorFn u_exact = [&](double x, double y) { return exact.u(x, y); };
  const BrokenField lift_err =
      lift(ops, jumps_of_field(ops, uh, u_exact));

  const auto vec_norm = [](const std::array<double, 2>& v) {
    return std::hypot(v[0], v[1]);
  };
  const auto path = [&](const char* name) {
    return (fs::path(cfg.out_dir) / (std::string(name) + ".csv")).string();
  };

  export_samples_csv(ops, [&](int cell, int q, Point) {
    const TriangleRule& r = ops.rule(cell);
    return vec_norm(uh.eval_vector(ops.basis(), cell, r.xi[q], r.eta[q]));
  }, path("u_mag"));
  export_samples_csv(ops, [&](int cell, int q, Point x) {
    const TriangleRule& r = ops.rule(cell);
    const auto v = uh.eval_vector(ops.basis(), cell, r.xi[q], r.eta[q]);
    const auto ue = exact.u(x.x, x.y);
    return std::hypot(v[0] - ue[0], v[1] - ue[1]);
  }, path("u_err"));
  export_samples_csv(ops, [&](int cell, int q, Point) {
    const TriangleRule& r = ops.rule(cell);
    return Lh.eval_tensor(ops.basis(), cell, r.xi[q], r.eta[q]).norm();
  }, path("L_mag"));
  export_samples_csv(ops, [&](int cell, int q, Point x) {
    const TriangleRule& r = ops.rule(cell);
    const Tensor2 d = Lh.eval_tensor(ops.basis(), cell, r.xi[q], r.eta[q]) -
                      exact.gradient(x.x, x.y);
    return d.norm();
  }, path("L_err"));
  export_samples_csv(ops, [&](int cell, int q, Point) {
    const TriangleRule& r = ops.rule(cell);
    return Ah.eval_tensor(ops.basis(), cell, r.xi[q], r.eta[q]).norm();
  }, path("A_mag"));
  export_samples_csv(ops, [&](int cell, int q, Point x) {
    const TriangleRule& r = ops.rule(cell);
    const Tensor2 d = Ah.eval_tensor(ops.basis(), cell, r.xi[q], r.eta[q]) -
                      exact.stress(x.x, x.y);
    return d.norm();
  }, path("A_err"));
  export_samples_csv(ops, [&](int cell, int q, Point) {
    const TriangleRule& r = ops.rule(cell);
    return lift_uh.eval_tensor(ops.basis(), cell, r.xi[q], r.eta[q]).norm();
  }, path("lift_mag"));
  export_samples_csv(ops, [&](int cell, int q, Point) {
    const TriangleRule& r = ops.rule(cell);
    return lift_err.eval_tensor(ops.basis(), cell, r.xi[q], r.eta[q]).norm();
  }, path("lift_err"));
  // e_grad integrand for error-localization checks.
  const BrokenField grad_h = local_gradient(ops, uh);
  export_samples_csv(ops, [&](int cell, int q, Point x) {
    const TriangleRule& r = ops.rule(cell);
    const Tensor2 d =
        map_F(nf, grad_h.eval_tensor(ops.basis(), cell, r.xi[q], r.eta[q])) -
        map_F(nf, exact.gradient(x.x, x.y));
    return d.dot(d);
  }, path("e_grad_density"));
}

StudyResult run_convergence_study(const RunConfig& cfg) {
  namespace fs = std::filesystem;
  if (cfg.levels < 1) throw std::invalid_argument("levels must be >= 1");
  fs::create_directories(cfg.out_dir);

  const NFunction nf(cfg.p, cfg.delta);
  const ExactSolution exact(nf, cfg.beta);
  const double w = cfg.domain_half_width;

  StudyResult result;
  Triangulation mesh = build_cartesian(-w, -w, w, w, cfg.h0);
  Eigen::VectorXd prev_u;
  int prev_degree_cells = 0;

  for (int level = 0; level <= cfg.levels; ++level) {
    if (level > 0) mesh = refine_regular(mesh);
    const DgOperators ops =
        DgOperators::with_defaults(mesh, cfg.degree, {{0.0, 0.0}});
    const Assembler assembler = make_assembler(ops, exact, cfg);

    Eigen::VectorXd guess = Eigen::VectorXd::Zero(assembler.n_dofs());
    if (cfg.continuation && prev_u.size() > 0) {
      // Children inherit the parent's cell mean: crude but effective warm
      // start (child 3 is the interior triangle; all four lie inside the
      // parent, so the P0 part transfers exactly and higher modes restart).
      const int nd = ops.ndof();
      for (int parent = 0; parent < prev_degree_cells; ++parent)
        for (int child = 0; child < 4; ++child)
          for (int c = 0; c < 2; ++c)
            guess[((static_cast<Eigen::Index>(4 * parent + child) * 2 + c) * nd)] =
                prev_u[(static_cast<Eigen::Index>(parent) * 2 + c) * nd];
    }

    NewtonOptions nopts;
    nopts.atol = cfg.atol;
    nopts.rtol = cfg.rtol;
    nopts.max_iter = cfg.max_iter;
    nopts.shift_mode = cfg.shift_mode;
    SolveReport report = newton_solve(assembler, std::move(guess), nopts);
    const bool ok = report.converged;

    if (ok) {
      EocRow row;
      row.level = level;
      row.h = mesh.grid_h;
      row.err = error_quantities(ops, assembler, exact, report.u);
      if (!result.rows.empty()) {
        const EocRow& prev = result.rows.back();
        row.eoc_grad = eoc(row.err.e_grad, prev.err.e_grad, row.h, prev.h);
        row.eoc_L = eoc(row.err.e_L, prev.err.e_L, row.h, prev.h);
        row.eoc_A = eoc(row.err.e_A, prev.err.e_A, row.h, prev.h);
        row.eoc_jump = eoc(row.err.e_jump, prev.err.e_jump, row.h, prev.h);
      } else {
        row.eoc_grad = row.eoc_L = row.eoc_A = row.eoc_jump =
            std::numeric_limits<double>::quiet_NaN();
      }
      result.rows.push_back(row);
      prev_u = report.u;
      prev_degree_cells = static_cast<int>(mesh.cells.size());
      if (cfg.export_fields && level == cfg.levels)
        write_field_csvs(cfg, ops, assembler, exact, report.u);
    }
    result.reports.push_back(std::move(report));
    if (!ok) {
      result.failure = "level " + std::to_string(level) +
                       " did not converge: " + result.reports.back().failure;
      break;
    }
    if (level == cfg.levels) result.completed = true;
  }

  write_eoc_csv(result.rows, (fs::path(cfg.out_dir) / "eoc.csv").string());
  write_report_json(result.reports, result, cfg,
                    (fs::path(cfg.out_dir) / "report.json").string());
  return result;
}

}  // namespace ldg
