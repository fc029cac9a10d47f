#include "ldg/operators.hpp"

namespace ldg {

JumpData jumps_of_field(const DgOperators& ops, const BrokenField& u,
                        VectorFn dirichlet_datum) {
  return [&ops, &u, datum = std::move(dirichlet_datum)](int face, int q) {
    return jump_tensor(ops, u, face, q, datum);
  };
}

JumpData jumps_of_boundary_datum(const DgOperators& ops, VectorFn u_D) {
  return [&ops, fn = std::move(u_D)](int face, int q) {
    const Face& f = ops.mesh().faces[face];
    if (f.interior()) return Tensor2{};
    const Point& x = ops.face(face).xq[q];
    const auto v = fn ? fn(x.x, x.y) : std::array<double, 2>{0.0, 0.0};
    return Tensor2::outer(v, f.normal);
  };
}

BrokenField lift(const DgOperators& ops, const JumpData& jumps) {
  BrokenField X(ops.mesh(), ops.degree(), 4);
  const int nd = ops.ndof();
  for (int fi = 0; fi < static_cast<int>(ops.mesh().faces.size()); ++fi) {
    const Face& f = ops.mesh().faces[fi];
    if (f.tag == BoundaryTag::neumann) continue;
    const auto& ft = ops.face(fi);
    const double avg_weight = f.interior() ? 0.5 : 1.0;
    for (std::size_t q = 0; q < ft.xq.size(); ++q) {
      const Tensor2 jmp = jumps(fi, static_cast<int>(q));
      const double w = ft.wq[q] * avg_weight;
      // Test against basis tensors on each adjacent cell; with the
      // orthonormal basis the local mass matrix is detJ times identity.
      for (int side = 0; side < (f.interior() ? 2 : 1); ++side) {
        const int cell = side == 0 ? f.left : f.right;
        const Eigen::MatrixXd& tr = side == 0 ? ft.trace_left : ft.trace_right;
        const double scale = w / ops.geom(cell).det;
        for (int m = 0; m < 4; ++m) {
          const double jm = jmp.e[m] * scale;
          if (jm == 0.0) continue;
          for (int i = 0; i < nd; ++i)
            X.coef[X.index(cell, m, i)] += jm * tr(q, i);
        }
      }
    }
  }
  return X;
}

BrokenField discrete_gradient(const DgOperators& ops, const BrokenField& u,
                              VectorFn dirichlet_extension) {
  BrokenField g = local_gradient(ops, u);
  const BrokenField r = lift(ops, jumps_of_field(ops, u, dirichlet_extension));
  g.coef -= r.coef;
  return g;
}

double modular_volume(const DgOperators& ops, const std::function<double(double)>& psi,
                      const BrokenField& X) {
  double total = 0.0;
  const int nd = ops.ndof();
  for (int cell = 0; cell < static_cast<int>(ops.mesh().cells.size()); ++cell) {
    const TriangleRule& r = ops.rule(cell);
    const Eigen::MatrixXd& val = ops.values(cell);
    const double det = ops.geom(cell).det;
    for (std::size_t q = 0; q < r.size(); ++q) {
      double norm2 = 0.0;
      for (int c = 0; c < X.ncomp; ++c) {
        double s = 0.0;
        for (int i = 0; i < nd; ++i) s += X.coef[X.index(cell, c, i)] * val(q, i);
        norm2 += s * s;
      }
      total += det * r.weights[q] * psi(std::sqrt(norm2));
    }
  }
  return total;
}

double modular_volume(const DgOperators& ops, const std::function<double(double)>& psi,
                      const TensorFn& X) {
  double total = 0.0;
  for (int cell = 0; cell < static_cast<int>(ops.mesh().cells.size()); ++cell) {
    const TriangleRule& r = ops.rule(cell);
    const double det = ops.geom(cell).det;
    for (std::size_t q = 0; q < r.size(); ++q) {
      const Point x = ops.map_point(cell, r.xi[q], r.eta[q]);
      total += det * r.weights[q] * psi(X(x.x, x.y).norm());
    }
  }
  return total;
}

double modular_jump(const DgOperators& ops,
                    const std::function<double(int face, double t)>& psi,
                    const JumpData& jumps, double h) {
  double total = 0.0;
  for (int fi = 0; fi < static_cast<int>(ops.mesh().faces.size()); ++fi) {
    const Face& f = ops.mesh().faces[fi];
    if (f.tag == BoundaryTag::neumann) continue;
    const auto& ft = ops.face(fi);
    for (std::size_t q = 0; q < ft.xq.size(); ++q) {
      const double t = jumps(fi, static_cast<int>(q)).norm() / h;
      total += ft.wq[q] * psi(fi, t);
    }
  }
  return h * total;
}

double modular_jump(const DgOperators& ops, const std::function<double(double)>& psi,
                    const JumpData& jumps, double h) {
  return modular_jump(ops, [&psi](int, double t) { return psi(t); }, jumps, h);
}

}  // namespace ldg
