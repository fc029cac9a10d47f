#include "ldg/field.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace ldg {

DgOperators::DgOperators(const Triangulation& mesh, int degree,
                         int quad_degree_volume, int quad_degree_face,
                         const std::vector<Point>& special_vertices)
    : mesh_(&mesh), degree_(degree), basis_(degree) {
  const int nc = static_cast<int>(mesh.cells.size());
  geom_.resize(nc);
  for (int c = 0; c < nc; ++c) {
    const auto& cell = mesh.cells[c];
    const Point& a = mesh.vertices[cell[0]];
    const Point& b = mesh.vertices[cell[1]];
    const Point& d = mesh.vertices[cell[2]];
    CellGeometry& g = geom_[c];
    g.p0 = a;
    g.jac[0][0] = b.x - a.x;
    g.jac[0][1] = d.x - a.x;
    g.jac[1][0] = b.y - a.y;
    g.jac[1][1] = d.y - a.y;
    g.det = g.jac[0][0] * g.jac[1][1] - g.jac[0][1] * g.jac[1][0];
    if (g.det <= 0.0) throw std::runtime_error("DgOperators: non-ccw cell");
    g.jinv[0][0] = g.jac[1][1] / g.det;
    g.jinv[0][1] = -g.jac[0][1] / g.det;
    g.jinv[1][0] = -g.jac[1][0] / g.det;
    g.jinv[1][1] = g.jac[0][0] / g.det;
  }

  rules_.push_back(triangle_rule(quad_degree_volume));
  rules_.push_back(triangle_rule(quad_degree_volume + 4));
  rule_id_.assign(nc, 0);
  if (!special_vertices.empty()) {
    for (int c = 0; c < nc; ++c) {
      for (int v : mesh.cells[c]) {
        for (const Point& s : special_vertices) {
          if (std::abs(mesh.vertices[v].x - s.x) < 1e-12 &&
              std::abs(mesh.vertices[v].y - s.y) < 1e-12) {
            rule_id_[c] = 1;
          }
        }
      }
    }
  }

  const int nd = basis_.size();
  for (const TriangleRule& r : rules_) {
    const int nq = static_cast<int>(r.size());
    Eigen::MatrixXd val(nq, nd), dxi(nq, nd), deta(nq, nd);
    for (int q = 0; q < nq; ++q) {
      for (int i = 0; i < nd; ++i) {
        val(q, i) = basis_.value(i, r.xi[q], r.eta[q]);
        const auto g = basis_.gradient(i, r.xi[q], r.eta[q]);
        dxi(q, i) = g[0];
        deta(q, i) = g[1];
      }
    }
    vol_val_.push_back(std::move(val));
    vol_dxi_.push_back(std::move(dxi));
    vol_deta_.push_back(std::move(deta));
  }

  // Exact reference gradient-mass matrices, used to expand local gradients.
  {
    const TriangleRule& r = rules_[0];
    grad_xi_ = Eigen::MatrixXd::Zero(nd, nd);
    grad_eta_ = Eigen::MatrixXd::Zero(nd, nd);
    for (std::size_t q = 0; q < r.size(); ++q) {
      for (int i = 0; i < nd; ++i)
        for (int j = 0; j < nd; ++j) {
          grad_xi_(i, j) += r.weights[q] * vol_dxi_[0](q, i) * vol_val_[0](q, j);
          grad_eta_(i, j) += r.weights[q] * vol_deta_[0](q, i) * vol_val_[0](q, j);
        }
    }
  }

  face_rule_ = segment_rule(quad_degree_face);
  const int nqf = static_cast<int>(face_rule_.points.size());
  faces_.resize(mesh.faces.size());
  for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
    const Face& face = mesh.faces[f];
    FaceTables& ft = faces_[f];
    const Point& a = mesh.vertices[face.v0];
    const Point& b = mesh.vertices[face.v1];
    ft.xq.resize(nqf);
    ft.wq.resize(nqf);
    ft.trace_left.resize(nqf, nd);
    if (face.interior()) ft.trace_right.resize(nqf, nd);
    for (int q = 0; q < nqf; ++q) {
      const double s = face_rule_.points[q];
      ft.xq[q] = {a.x + s * (b.x - a.x), a.y + s * (b.y - a.y)};
      ft.wq[q] = face_rule_.weights[q] * face.length;
      const auto xl = pull_back(face.left, ft.xq[q]);
      for (int i = 0; i < nd; ++i) ft.trace_left(q, i) = basis_.value(i, xl[0], xl[1]);
      if (face.interior()) {
        const auto xr = pull_back(face.right, ft.xq[q]);
        for (int i = 0; i < nd; ++i) ft.trace_right(q, i) = basis_.value(i, xr[0], xr[1]);
      }
    }
  }
}

void BrokenField::eval(const ReferenceBasis& basis, int cell, double xi,
                       double eta, double* out) const {
  const int nd = ndof();
  for (int c = 0; c < ncomp; ++c) {
    double s = 0.0;
    for (int i = 0; i < nd; ++i) s += coef[index(cell, c, i)] * basis.value(i, xi, eta);
    out[c] = s;
  }
}

std::array<double, 2> BrokenField::eval_vector(const ReferenceBasis& basis,
                                               int cell, double xi, double eta) const {
  std::array<double, 2> v{};
  eval(basis, cell, xi, eta, v.data());
  return v;
}

Tensor2 BrokenField::eval_tensor(const ReferenceBasis& basis, int cell,
                                 double xi, double eta) const {
  Tensor2 t;
  eval(basis, cell, xi, eta, t.e.data());
  return t;
}

void BrokenField::cell_mean(int cell, double* out) const {
  // The constant basis function equals sqrt(2) on the reference triangle,
  // so the mean is sqrt(2) times the leading coefficient.
  const double s = std::sqrt(2.0);
  for (int c = 0; c < ncomp; ++c) out[c] = s * coef[index(cell, c, 0)];
}

BrokenField l2_project(const DgOperators& ops, int ncomp,
                       const std::function<void(Point, double*)>& target) {
  BrokenField field(ops.mesh(), ops.degree(), ncomp);
  const int nd = ops.ndof();
  std::vector<double> vals(ncomp);
  for (int cell = 0; cell < static_cast<int>(ops.mesh().cells.size()); ++cell) {
    const TriangleRule& r = ops.rule(cell);
    const Eigen::MatrixXd& val = ops.values(cell);
    for (std::size_t q = 0; q < r.size(); ++q) {
      const Point x = ops.map_point(cell, r.xi[q], r.eta[q]);
      target(x, vals.data());
      for (int c = 0; c < ncomp; ++c) {
        const double wv = r.weights[q] * vals[c];
        for (int i = 0; i < nd; ++i)
          field.coef[field.index(cell, c, i)] += wv * val(q, i);
      }
    }
  }
  return field;
}

BrokenField l2_project(const DgOperators& ops, const BrokenField& source) {
  if (source.mesh != &ops.mesh())
    throw std::invalid_argument("l2_project: source lives on another mesh");
  const ReferenceBasis src_basis(source.degree);
  BrokenField field(ops.mesh(), ops.degree(), source.ncomp);
  const int nd = ops.ndof();
  std::vector<double> vals(source.ncomp);
  for (int cell = 0; cell < static_cast<int>(ops.mesh().cells.size()); ++cell) {
    const TriangleRule& r = ops.rule(cell);
    const Eigen::MatrixXd& val = ops.values(cell);
    for (std::size_t q = 0; q < r.size(); ++q) {
      source.eval(src_basis, cell, r.xi[q], r.eta[q], vals.data());
      for (int c = 0; c < source.ncomp; ++c) {
        const double wv = r.weights[q] * vals[c];
        for (int i = 0; i < nd; ++i)
          field.coef[field.index(cell, c, i)] += wv * val(q, i);
      }
    }
  }
  return field;
}

BrokenField local_gradient(const DgOperators& ops, const BrokenField& u) {
  if (u.ncomp != 2) throw std::invalid_argument("local_gradient: vector field expected");
  BrokenField g(ops.mesh(), ops.degree(), 4);
  const int nd = ops.ndof();
  const Eigen::MatrixXd& dxi = ops.grad_xi();
  const Eigen::MatrixXd& deta = ops.grad_eta();
  for (int cell = 0; cell < static_cast<int>(ops.mesh().cells.size()); ++cell) {
    const auto& geom = ops.geom(cell);
    for (int c = 0; c < 2; ++c) {
      for (int d = 0; d < 2; ++d) {
        const int m = 2 * c + d;
        for (int j = 0; j < nd; ++j) {
          double s = 0.0;
          for (int i = 0; i < nd; ++i) {
            const double di = geom.jinv[0][d] * dxi(i, j) + geom.jinv[1][d] * deta(i, j);
            s += u.coef[u.index(cell, c, i)] * di;
          }
          g.coef[g.index(cell, m, j)] = s;
        }
      }
    }
  }
  return g;
}

namespace {

void trace_values(const DgOperators& ops, const BrokenField& w, int face,
                  int side, int q, double* out) {
  const Face& f = ops.mesh().faces[face];
  const int cell = side == 0 ? f.left : f.right;
  if (cell < 0) throw std::invalid_argument("trace: no cell on requested side");
  const auto& ft = ops.face(face);
  const Eigen::MatrixXd& tr = side == 0 ? ft.trace_left : ft.trace_right;
  const int nd = w.ndof();
  for (int c = 0; c < w.ncomp; ++c) {
    double s = 0.0;
    for (int i = 0; i < nd; ++i) s += w.coef[w.index(cell, c, i)] * tr(q, i);
    out[c] = s;
  }
}

}  // namespace

std::array<double, 2> trace_vector(const DgOperators& ops, const BrokenField& u,
                                   int face, int side, int q) {
  std::array<double, 2> v{};
  trace_values(ops, u, face, side, q, v.data());
  return v;
}

Tensor2 trace_tensor(const DgOperators& ops, const BrokenField& X, int face,
                     int side, int q) {
  Tensor2 t;
  trace_values(ops, X, face, side, q, t.e.data());
  return t;
}

Tensor2 jump_tensor(const DgOperators& ops, const BrokenField& u, int face,
                    int q, const VectorFn& dirichlet_datum) {
  const Face& f = ops.mesh().faces[face];
  if (f.tag == BoundaryTag::neumann)
    throw std::invalid_argument("jump_tensor: jumps are not formed on Neumann faces");
  const auto& n = f.normal;
  if (f.interior()) {
    const auto tp = trace_vector(ops, u, face, 0, q);
    const auto tm = trace_vector(ops, u, face, 1, q);
    return Tensor2::outer({tp[0] - tm[0], tp[1] - tm[1]}, n);
  }
  auto tr = trace_vector(ops, u, face, 0, q);
  if (dirichlet_datum) {
    const Point& x = ops.face(face).xq[q];
    const auto ud = dirichlet_datum(x.x, x.y);
    tr[0] -= ud[0];
    tr[1] -= ud[1];
  }
  return Tensor2::outer(tr, n);
}

std::array<double, 2> average_vector(const DgOperators& ops, const BrokenField& u,
                                     int face, int q) {
  const Face& f = ops.mesh().faces[face];
  if (f.tag == BoundaryTag::neumann)
    throw std::invalid_argument("average_vector: not defined on Neumann faces");
  if (!f.interior()) return trace_vector(ops, u, face, 0, q);
  const auto tp = trace_vector(ops, u, face, 0, q);
  const auto tm = trace_vector(ops, u, face, 1, q);
  return {0.5 * (tp[0] + tm[0]), 0.5 * (tp[1] + tm[1])};
}

Tensor2 average_tensor(const DgOperators& ops, const BrokenField& X, int face,
                       int q) {
  const Face& f = ops.mesh().faces[face];
  if (f.tag == BoundaryTag::neumann)
    throw std::invalid_argument("average_tensor: not defined on Neumann faces");
  if (!f.interior()) return trace_tensor(ops, X, face, 0, q);
  const Tensor2 tp = trace_tensor(ops, X, face, 0, q);
  const Tensor2 tm = trace_tensor(ops, X, face, 1, q);
  return 0.5 * (tp + tm);
}

void export_samples_csv(const DgOperators& ops,
                        const std::function<double(int cell, int q, Point x)>& sample,
                        const std::string& path) {
  std::ofstream out(path);
  out << "x,y,value\n";
  out.precision(12);
  for (int cell = 0; cell < static_cast<int>(ops.mesh().cells.size()); ++cell) {
    const TriangleRule& r = ops.rule(cell);
    for (std::size_t q = 0; q < r.size(); ++q) {
      const Point x = ops.map_point(cell, r.xi[q], r.eta[q]);
      out << x.x << ',' << x.y << ',' << sample(cell, static_cast<int>(q), x) << '\n';
    }
  }
}

}  // namespace ldg
