#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>

#include "ldg/basis.hpp"
#include "ldg/mesh.hpp"
#include "ldg/quadrature.hpp"
#include "ldg/tensor.hpp"

namespace ldg {

using VectorFn = std::function<std::array<double, 2>(double, double)>;
using TensorFn = std::function<Tensor2(double, double)>;

/// Precomputed geometry, quadrature and basis-trace tables for one mesh and
/// polynomial degree. All downstream assembly and evaluation goes through
/// this structure; it is immutable after construction.
class DgOperators {
 public:
  struct CellGeometry {
    double jac[2][2];   // x = p0 + J xi
    double jinv[2][2];  // xi = Jinv (x - p0)
    double det;         // = 2 |K|
    Point p0;
  };

  struct FaceTables {
    std::vector<Point> xq;             // physical quadrature points
    std::vector<double> wq;            // weights scaled by face length
    Eigen::MatrixXd trace_left;        // nq x ndof, traces from the left cell
    Eigen::MatrixXd trace_right;       // nq x ndof, interior faces only
  };

  /// special_vertices: cells touching one of these points use a volume rule
  /// elevated by four degrees (integrands can be near-singular there).
  DgOperators(const Triangulation& mesh, int degree, int quad_degree_volume,
              int quad_degree_face,
              const std::vector<Point>& special_vertices = {});

  static DgOperators with_defaults(const Triangulation& mesh, int degree,
                                   const std::vector<Point>& special_vertices = {}) {
    return DgOperators(mesh, degree, 2 * degree + 6, 2 * degree + 6, special_vertices);
  }

  const Triangulation& mesh() const { return *mesh_; }
  int degree() const { return degree_; }
  int ndof() const { return basis_.size(); }
  const ReferenceBasis& basis() const { return basis_; }

  const CellGeometry& geom(int cell) const { return geom_[cell]; }
  const FaceTables& face(int f) const { return faces_[f]; }

  /// Volume rule for a cell (elevated near special vertices).
  const TriangleRule& rule(int cell) const { return rules_[rule_id_[cell]]; }
  const Eigen::MatrixXd& values(int cell) const { return vol_val_[rule_id_[cell]]; }
  const Eigen::MatrixXd& dxi(int cell) const { return vol_dxi_[rule_id_[cell]]; }
  const Eigen::MatrixXd& deta(int cell) const { return vol_deta_[rule_id_[cell]]; }

  /// Exact reference matrices int dphi_i/dxi phi_j and int dphi_i/deta phi_j.
  const Eigen::MatrixXd& grad_xi() const { return grad_xi_; }
  const Eigen::MatrixXd& grad_eta() const { return grad_eta_; }

  Point map_point(int cell, double xi, double eta) const {
    const CellGeometry& g = geom_[cell];
    return {g.p0.x + g.jac[0][0] * xi + g.jac[0][1] * eta,
            g.p0.y + g.jac[1][0] * xi + g.jac[1][1] * eta};
  }
  std::array<double, 2> pull_back(int cell, const Point& x) const {
    const CellGeometry& g = geom_[cell];
    const double dx = x.x - g.p0.x;
    const double dy = x.y - g.p0.y;
    return {g.jinv[0][0] * dx + g.jinv[0][1] * dy,
            g.jinv[1][0] * dx + g.jinv[1][1] * dy};
  }

 private:
  const Triangulation* mesh_;
  int degree_;
  ReferenceBasis basis_;
  std::vector<CellGeometry> geom_;
  std::vector<TriangleRule> rules_;
  std::vector<Eigen::MatrixXd> vol_val_, vol_dxi_, vol_deta_;
  std::vector<int> rule_id_;
  GaussRule1d face_rule_;
  std::vector<FaceTables> faces_;
  Eigen::MatrixXd grad_xi_, grad_eta_;
};

/// Coefficient vector of a piecewise-P_k vector (ncomp=2) or tensor
/// (ncomp=4) field; per-cell blocks of ncomp x ndof coefficients in the
/// orthonormal reference basis.
struct BrokenField {
  const Triangulation* mesh = nullptr;
  int degree = 0;
  int ncomp = 0;
  Eigen::VectorXd coef;

  BrokenField() = default;
  BrokenField(const Triangulation& m, int k, int components)
      : mesh(&m), degree(k), ncomp(components) {
    const int nd = (k + 1) * (k + 2) / 2;
    coef = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m.cells.size()) * components * nd);
  }

  int ndof() const { return (degree + 1) * (degree + 2) / 2; }
  Eigen::Index index(int cell, int comp, int i) const {
    return (static_cast<Eigen::Index>(cell) * ncomp + comp) * ndof() + i;
  }

  /// Pointwise evaluation in reference coordinates of a cell.
  void eval(const ReferenceBasis& basis, int cell, double xi, double eta,
            double* out) const;
  std::array<double, 2> eval_vector(const ReferenceBasis& basis, int cell,
                                    double xi, double eta) const;
  Tensor2 eval_tensor(const ReferenceBasis& basis, int cell, double xi,
                      double eta) const;

  /// Cell mean of every component (the P0 part).
  void cell_mean(int cell, double* out) const;
};

/// Local L2-projection of a pointwise target onto the broken space of the
/// operators' degree. The target receives the physical point and fills
/// ncomp values.
BrokenField l2_project(const DgOperators& ops, int ncomp,
                       const std::function<void(Point, double*)>& target);

/// Projection of a broken field of another degree (same mesh) onto ops' space.
BrokenField l2_project(const DgOperators& ops, const BrokenField& source);

/// Exact elementwise gradient of a vector field, expanded in the degree-k
/// tensor space (the gradient has degree k-1 and is stored exactly).
BrokenField local_gradient(const DgOperators& ops, const BrokenField& u);

/// Traces of a vector field at the quadrature points of a face.
/// side: 0 = left cell, 1 = right cell.
std::array<double, 2> trace_vector(const DgOperators& ops, const BrokenField& u,
                                   int face, int side, int q);
Tensor2 trace_tensor(const DgOperators& ops, const BrokenField& X, int face,
                     int side, int q);

/// Jump [[w (x) n]] at a face quadrature point. On interior faces this is
/// (tr+ - tr-) (x) n; on Dirichlet faces (tr - u_D) (x) n, with u_D = 0 when
/// no boundary datum is given. Throws on Neumann faces.
Tensor2 jump_tensor(const DgOperators& ops, const BrokenField& u, int face,
                    int q, const VectorFn& dirichlet_datum = nullptr);

/// Average {w} (vector) or {X} (tensor) at a face quadrature point; the
/// single trace on Dirichlet faces. Throws on Neumann faces.
std::array<double, 2> average_vector(const DgOperators& ops, const BrokenField& u,
                                     int face, int q);
Tensor2 average_tensor(const DgOperators& ops, const BrokenField& X, int face,
                       int q);

/// Per-point CSV export (x,y,value) of a scalar sample at all volume
/// quadrature points.
void export_samples_csv(const DgOperators& ops,
                        const std::function<double(int cell, int q, Point x)>& sample,
                        const std::string& path);

}  // namespace ldg
