#include "ldg/assembly.hpp"

#include <cmath>
#include <map>

namespace ldg {

Assembler::Assembler(const DgOperators& ops, ProblemData data)
    : ops_(&ops), data_(std::move(data)), nd_(ops.ndof()) {
  const Triangulation& mesh = ops.mesh();
  const int nc = static_cast<int>(mesh.cells.size());
  nu_ = static_cast<Eigen::Index>(nc) * 2 * nd_;
  nl_ = static_cast<Eigen::Index>(nc) * 4 * nd_;
  h_ = mesh.grid_h;

  detl_.resize(nl_);
  for (int cell = 0; cell < nc; ++cell)
    for (int r = 0; r < 4 * nd_; ++r) detl_[static_cast<Eigen::Index>(cell) * 4 * nd_ + r] = ops.geom(cell).det;

  // --- G: u-coefficients -> coefficients of grad_h u - R(u). ---
  std::vector<Eigen::Triplet<double>> trip;
  for (int cell = 0; cell < nc; ++cell) {
    const auto& geom = ops.geom(cell);
    for (int c = 0; c < 2; ++c)
      for (int d = 0; d < 2; ++d)
        for (int j = 0; j < nd_; ++j)
          for (int i = 0; i < nd_; ++i) {
            const double v = geom.jinv[0][d] * ops.grad_xi()(i, j) +
                             geom.jinv[1][d] * ops.grad_eta()(i, j);
            if (v != 0.0)
              trip.emplace_back(idx_l(cell, 2 * c + d, j), idx_u(cell, c, i), v);
          }
  }
  for (int fi = 0; fi < static_cast<int>(mesh.faces.size()); ++fi) {
    const Face& f = mesh.faces[fi];
    if (f.tag == BoundaryTag::neumann) continue;
    const auto& ft = ops.face(fi);
    const double avg_weight = f.interior() ? 0.5 : 1.0;
    const int n_sides = f.interior() ? 2 : 1;
    for (int sx = 0; sx < n_sides; ++sx) {
      const int cx = sx == 0 ? f.left : f.right;
      const Eigen::MatrixXd& trx = sx == 0 ? ft.trace_left : ft.trace_right;
      const double scale = avg_weight / ops.geom(cx).det;
      for (int su = 0; su < n_sides; ++su) {
        const int cu = su == 0 ? f.left : f.right;
        const Eigen::MatrixXd& tru = su == 0 ? ft.trace_left : ft.trace_right;
        const double sign = su == 0 ? 1.0 : -1.0;
        Eigen::MatrixXd mass = Eigen::MatrixXd::Zero(nd_, nd_);  // int_g phi_i^u phi_j^x
        for (std::size_t q = 0; q < ft.xq.size(); ++q)
          for (int i = 0; i < nd_; ++i)
            for (int j = 0; j < nd_; ++j)
              mass(i, j) += ft.wq[q] * tru(q, i) * trx(q, j);
        for (int c = 0; c < 2; ++c)
          for (int d = 0; d < 2; ++d) {
            const double w = -scale * sign * f.normal[d];
            if (w == 0.0) continue;
            for (int i = 0; i < nd_; ++i)
              for (int j = 0; j < nd_; ++j)
                if (mass(i, j) != 0.0)
                  trip.emplace_back(idx_l(cx, 2 * c + d, j), idx_u(cu, c, i),
                                    w * mass(i, j));
          }
      }
    }
  }
  G_.resize(nl_, nu_);
  G_.setFromTriplets(trip.begin(), trip.end());

  // --- c0: coefficients of R(u_D*), supported at Dirichlet faces. ---
  c0_ = Eigen::VectorXd::Zero(nl_);
  for (int fi = 0; fi < static_cast<int>(mesh.faces.size()); ++fi) {
    const Face& f = mesh.faces[fi];
    if (f.tag != BoundaryTag::dirichlet) continue;
    const auto& ft = ops.face(fi);
    const double scale = 1.0 / ops.geom(f.left).det;
    for (std::size_t q = 0; q < ft.xq.size(); ++q) {
      const auto ud = data_.u_D ? data_.u_D(ft.xq[q].x, ft.xq[q].y)
                                : std::array<double, 2>{0.0, 0.0};
      const Tensor2 jmp = Tensor2::outer(ud, f.normal);
      for (int m = 0; m < 4; ++m) {
        const double w = scale * ft.wq[q] * jmp.e[m];
        if (w == 0.0) continue;
        for (int j = 0; j < nd_; ++j)
          c0_[idx_l(f.left, m, j)] += w * ft.trace_left(q, j);
      }
    }
  }

  // --- b: (f, z) + (F, G z) + <a_N, z>_GammaN. ---
  b_ = Eigen::VectorXd::Zero(nu_);
  if (data_.f) {
    for (int cell = 0; cell < nc; ++cell) {
      const TriangleRule& r = ops.rule(cell);
      const Eigen::MatrixXd& val = ops.values(cell);
      const double det = ops.geom(cell).det;
      for (std::size_t q = 0; q < r.size(); ++q) {
        const Point x = ops.map_point(cell, r.xi[q], r.eta[q]);
        const auto fv = data_.f(x.x, x.y);
        for (int c = 0; c < 2; ++c) {
          const double w = det * r.weights[q] * fv[c];
          for (int i = 0; i < nd_; ++i) b_[idx_u(cell, c, i)] += w * val(q, i);
        }
      }
    }
  }
  if (data_.F) {
    Eigen::VectorXd fcoef = Eigen::VectorXd::Zero(nl_);
    for (int cell = 0; cell < nc; ++cell) {
      const TriangleRule& r = ops.rule(cell);
      const Eigen::MatrixXd& val = ops.values(cell);
      for (std::size_t q = 0; q < r.size(); ++q) {
        const Point x = ops.map_point(cell, r.xi[q], r.eta[q]);
        const Tensor2 fv = data_.F(x.x, x.y);
        for (int m = 0; m < 4; ++m) {
          const double w = r.weights[q] * fv.e[m];
          for (int j = 0; j < nd_; ++j) fcoef[idx_l(cell, m, j)] += w * val(q, j);
        }
      }
    }
    b_ += G_.transpose() * detl_.cwiseProduct(fcoef);
  }
  if (data_.a_N) {
    for (int fi = 0; fi < static_cast<int>(mesh.faces.size()); ++fi) {
      const Face& f = mesh.faces[fi];
      if (f.tag != BoundaryTag::neumann) continue;
      const auto& ft = ops.face(fi);
      for (std::size_t q = 0; q < ft.xq.size(); ++q) {
        const auto av = data_.a_N(ft.xq[q].x, ft.xq[q].y);
        for (int c = 0; c < 2; ++c) {
          const double w = ft.wq[q] * av[c];
          for (int i = 0; i < nd_; ++i)
            b_[idx_u(f.left, c, i)] += w * ft.trace_left(q, i);
        }
      }
    }
  }
}

Eigen::VectorXd Assembler::project_stress(const Eigen::VectorXd& lcoef) const {
  const int nc = static_cast<int>(ops_->mesh().cells.size());
  Eigen::VectorXd acoef = Eigen::VectorXd::Zero(nl_);
  for (int cell = 0; cell < nc; ++cell) {
    const TriangleRule& r = ops_->rule(cell);
    const Eigen::MatrixXd& val = ops_->values(cell);
    for (std::size_t q = 0; q < r.size(); ++q) {
      Tensor2 L;
      for (int m = 0; m < 4; ++m) {
        double s = 0.0;
        for (int j = 0; j < nd_; ++j) s += lcoef[idx_l(cell, m, j)] * val(q, j);
        L.e[m] = s;
      }
      const Tensor2 A = op_A(data_.nf, L);
      for (int m = 0; m < 4; ++m) {
        const double w = r.weights[q] * A.e[m];
        if (w == 0.0) continue;
        for (int j = 0; j < nd_; ++j) acoef[idx_l(cell, m, j)] += w * val(q, j);
      }
    }
  }
  return acoef;
}

Tensor2 Assembler::data_jump(const Eigen::VectorXd& u, int face, int q) const {
  const Face& f = ops_->mesh().faces[face];
  const auto& ft = ops_->face(face);
  if (f.interior()) {
    std::array<double, 2> d{0.0, 0.0};
    for (int c = 0; c < 2; ++c) {
      double sp = 0.0, sm = 0.0;
      for (int i = 0; i < nd_; ++i) {
        sp += u[idx_u(f.left, c, i)] * ft.trace_left(q, i);
        sm += u[idx_u(f.right, c, i)] * ft.trace_right(q, i);
      }
      d[c] = sp - sm;
    }
    return Tensor2::outer(d, f.normal);
  }
  std::array<double, 2> d{0.0, 0.0};
  for (int c = 0; c < 2; ++c)
    for (int i = 0; i < nd_; ++i) d[c] += u[idx_u(f.left, c, i)] * ft.trace_left(q, i);
  if (data_.u_D) {
    const auto ud = data_.u_D(ft.xq[q].x, ft.xq[q].y);
    d[0] -= ud[0];
    d[1] -= ud[1];
  }
  return Tensor2::outer(d, f.normal);
}

std::vector<double> Assembler::face_shifts(const Eigen::VectorXd& u) const {
  const Eigen::VectorXd lcoef = G_ * u + c0_;
  const Triangulation& mesh = ops_->mesh();
  std::vector<double> shifts(mesh.faces.size(), 0.0);
  const double s2 = std::sqrt(2.0);
  for (std::size_t fi = 0; fi < mesh.faces.size(); ++fi) {
    const Face& f = mesh.faces[fi];
    if (f.tag == BoundaryTag::neumann) continue;
    Tensor2 mean;
    for (int m = 0; m < 4; ++m) {
      double v = s2 * lcoef[idx_l(f.left, m, 0)];
      if (f.interior()) v = 0.5 * (v + s2 * lcoef[idx_l(f.right, m, 0)]);
      mean.e[m] = v;
    }
    shifts[fi] = mean.norm();
  }
  return shifts;
}

void Assembler::add_stabilization_residual(const Eigen::VectorXd& u,
                                           const std::vector<double>& shifts,
                                           Eigen::VectorXd& r) const {
  const Triangulation& mesh = ops_->mesh();
  for (int fi = 0; fi < static_cast<int>(mesh.faces.size()); ++fi) {
    const Face& f = mesh.faces[fi];
    if (f.tag == BoundaryTag::neumann) continue;
    const auto& ft = ops_->face(fi);
    const int n_sides = f.interior() ? 2 : 1;
    for (std::size_t q = 0; q < ft.xq.size(); ++q) {
      const Tensor2 jmp = (1.0 / h_) * data_jump(u, fi, static_cast<int>(q));
      const Tensor2 T = op_A_shifted(data_.nf, shifts[fi], jmp);
      // T : (phi_i e_c (x) sigma n) summed with quadrature weights.
      const std::array<double, 2> tn{T(0, 0) * f.normal[0] + T(0, 1) * f.normal[1],
                                     T(1, 0) * f.normal[0] + T(1, 1) * f.normal[1]};
      for (int s = 0; s < n_sides; ++s) {
        const int cell = s == 0 ? f.left : f.right;
        const double sigma = s == 0 ? 1.0 : -1.0;
        const Eigen::MatrixXd& tr = s == 0 ? ft.trace_left : ft.trace_right;
        for (int c = 0; c < 2; ++c) {
          const double w = data_.alpha * ft.wq[q] * sigma * tn[c];
          if (w == 0.0) continue;
          for (int i = 0; i < nd_; ++i) r[idx_u(cell, c, i)] += w * tr(q, i);
        }
      }
    }
  }
}

Eigen::VectorXd Assembler::residual(const Eigen::VectorXd& u) const {
  const Eigen::VectorXd lcoef = G_ * u + c0_;
  const Eigen::VectorXd acoef = project_stress(lcoef);
  Eigen::VectorXd r = G_.transpose() * detl_.cwiseProduct(acoef);
  add_stabilization_residual(u, face_shifts(u), r);
  r -= b_;
  return r;
}

Eigen::SparseMatrix<double> Assembler::jacobian(const Eigen::VectorXd& u,
                                                ShiftMode mode) const {
  const Triangulation& mesh = ops_->mesh();
  const int nc = static_cast<int>(mesh.cells.size());
  const Eigen::VectorXd lcoef = G_ * u + c0_;
  const std::vector<double> shifts = face_shifts(u);

  // Volume + face-coupling part: G^T diag(detJ) dPiA/dL G with a dense
  // projection block per cell.
  std::vector<Eigen::Triplet<double>> atrip;
  atrip.reserve(static_cast<std::size_t>(nc) * 16 * nd_ * nd_);
  for (int cell = 0; cell < nc; ++cell) {
    const TriangleRule& rule = ops_->rule(cell);
    const Eigen::MatrixXd& val = ops_->values(cell);
    const double det = ops_->geom(cell).det;
    Eigen::MatrixXd block = Eigen::MatrixXd::Zero(4 * nd_, 4 * nd_);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      Tensor2 L;
      for (int m = 0; m < 4; ++m) {
        double s = 0.0;
        for (int j = 0; j < nd_; ++j) s += lcoef[idx_l(cell, m, j)] * val(q, j);
        L.e[m] = s;
      }
      const Tensor4 DA = op_A_jacobian(data_.nf, L);
      const double w = det * rule.weights[q];
      for (int m = 0; m < 4; ++m)
        for (int n = 0; n < 4; ++n) {
          const double k = w * DA(m, n);
          if (k == 0.0) continue;
          for (int j = 0; j < nd_; ++j)
            for (int jp = 0; jp < nd_; ++jp)
              block(m * nd_ + j, n * nd_ + jp) += k * val(q, j) * val(q, jp);
        }
    }
    const Eigen::Index base = static_cast<Eigen::Index>(cell) * 4 * nd_;
    for (int a = 0; a < 4 * nd_; ++a)
      for (int bb = 0; bb < 4 * nd_; ++bb)
        if (block(a, bb) != 0.0) atrip.emplace_back(base + a, base + bb, block(a, bb));
  }
  Eigen::SparseMatrix<double> dPiA(nl_, nl_);
  dPiA.setFromTriplets(atrip.begin(), atrip.end());
  Eigen::SparseMatrix<double> J = G_.transpose() * (dPiA * G_).pruned();

  // Stabilization part.
  Eigen::SparseMatrix<double, Eigen::RowMajor> g_rows;
  if (mode == ShiftMode::full) g_rows = G_;
  std::vector<Eigen::Triplet<double>> strip;
  for (int fi = 0; fi < static_cast<int>(mesh.faces.size()); ++fi) {
    const Face& f = mesh.faces[fi];
    if (f.tag == BoundaryTag::neumann) continue;
    const auto& ft = ops_->face(fi);
    const int n_sides = f.interior() ? 2 : 1;
    const int ndofs_face = n_sides * 2 * nd_;
    Eigen::MatrixXd local = Eigen::MatrixXd::Zero(ndofs_face, ndofs_face);
    Eigen::VectorXd vda = Eigen::VectorXd::Zero(ndofs_face);
    bool have_da = false;
    for (std::size_t q = 0; q < ft.xq.size(); ++q) {
      const Tensor2 jmp = (1.0 / h_) * data_jump(u, fi, static_cast<int>(q));
      const Tensor4 K4 = op_A_shifted_jacobian(data_.nf, shifts[fi], jmp);
      // Contract test/trial directions with the normal.
      double kcc[2][2];
      for (int c = 0; c < 2; ++c)
        for (int cp = 0; cp < 2; ++cp) {
          double s = 0.0;
          for (int d = 0; d < 2; ++d)
            for (int dp = 0; dp < 2; ++dp)
              s += K4(2 * c + d, 2 * cp + dp) * f.normal[d] * f.normal[dp];
          kcc[c][cp] = s;
        }
      const double w = data_.alpha / h_ * ft.wq[q];
      for (int s = 0; s < n_sides; ++s) {
        const double sig = s == 0 ? 1.0 : -1.0;
        const Eigen::MatrixXd& tr = s == 0 ? ft.trace_left : ft.trace_right;
        for (int sp = 0; sp < n_sides; ++sp) {
          const double sigp = sp == 0 ? 1.0 : -1.0;
          const Eigen::MatrixXd& trp = sp == 0 ? ft.trace_left : ft.trace_right;
          for (int c = 0; c < 2; ++c)
            for (int cp = 0; cp < 2; ++cp) {
              const double k = w * sig * sigp * kcc[c][cp];
              if (k == 0.0) continue;
              for (int i = 0; i < nd_; ++i)
                for (int ip = 0; ip < nd_; ++ip)
                  local((s * 2 + c) * nd_ + i, (sp * 2 + cp) * nd_ + ip) +=
                      k * tr(q, i) * trp(q, ip);
            }
        }
      }
      if (mode == ShiftMode::full && shifts[fi] > 0.0) {
        const Tensor2 dAda = op_A_shifted_da(data_.nf, shifts[fi], jmp);
        const std::array<double, 2> tn{
            dAda(0, 0) * f.normal[0] + dAda(0, 1) * f.normal[1],
            dAda(1, 0) * f.normal[0] + dAda(1, 1) * f.normal[1]};
        for (int s = 0; s < n_sides; ++s) {
          const double sig = s == 0 ? 1.0 : -1.0;
          const Eigen::MatrixXd& tr = s == 0 ? ft.trace_left : ft.trace_right;
          for (int c = 0; c < 2; ++c) {
            const double w2 = data_.alpha * ft.wq[q] * sig * tn[c];
            for (int i = 0; i < nd_; ++i)
              vda[(s * 2 + c) * nd_ + i] += w2 * tr(q, i);
          }
        }
        have_da = true;
      }
    }
    const auto global_index = [&](int local_dof) {
      const int s = local_dof / (2 * nd_);
      const int rem = local_dof % (2 * nd_);
      const int cell = s == 0 ? f.left : f.right;
      return idx_u(cell, rem / nd_, rem % nd_);
    };
    for (int a = 0; a < ndofs_face; ++a)
      for (int bb = 0; bb < ndofs_face; ++bb)
        if (local(a, bb) != 0.0)
          strip.emplace_back(global_index(a), global_index(bb), local(a, bb));

    if (have_da) {
      // d a_gamma / du: a = |{Pi0 L}|, mean taken across the face.
      Tensor2 mean;
      const double s2 = std::sqrt(2.0);
      for (int m = 0; m < 4; ++m) {
        double v = s2 * lcoef[idx_l(f.left, m, 0)];
        if (f.interior()) v = 0.5 * (v + s2 * lcoef[idx_l(f.right, m, 0)]);
        mean.e[m] = v;
      }
      const double a = mean.norm();
      if (a > 0.0) {
        // da/du through the face-averaged cell means of L_h.
        std::map<Eigen::Index, double> row;
        const double cellw = f.interior() ? 0.5 : 1.0;
        for (int s = 0; s < n_sides; ++s) {
          const int cell = s == 0 ? f.left : f.right;
          for (int m = 0; m < 4; ++m) {
            const double factor = (mean.e[m] / a) * cellw * s2;
            if (factor == 0.0) continue;
            const Eigen::Index lrow = idx_l(cell, m, 0);
            for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(g_rows, lrow); it; ++it)
              row[it.col()] += factor * it.value();
          }
        }
        for (int adof = 0; adof < ndofs_face; ++adof) {
          if (vda[adof] == 0.0) continue;
          const Eigen::Index gi = global_index(adof);
          for (const auto& [col, rv] : row)
            strip.emplace_back(gi, col, vda[adof] * rv);
        }
      }
    }
  }
  Eigen::SparseMatrix<double> S(nu_, nu_);
  S.setFromTriplets(strip.begin(), strip.end());
  J += S;
  J.makeCompressed();
  return J;
}

BrokenField Assembler::flux_gradient(const Eigen::VectorXd& u) const {
  BrokenField L(ops_->mesh(), ops_->degree(), 4);
  L.coef = G_ * u + c0_;
  return L;
}

BrokenField Assembler::flux_stress(const Eigen::VectorXd& u) const {
  BrokenField A(ops_->mesh(), ops_->degree(), 4);
  A.coef = project_stress(G_ * u + c0_);
  return A;
}

BrokenField Assembler::to_field(const Eigen::VectorXd& u) const {
  BrokenField f(ops_->mesh(), ops_->degree(), 2);
  f.coef = u;
  return f;
}

}  // namespace ldg
