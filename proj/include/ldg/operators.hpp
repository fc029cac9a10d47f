#pragma once

#include "ldg/field.hpp"
#include "ldg/nfunction.hpp"

namespace ldg {

/// Jump data evaluated at a face quadrature point; called only for faces in
/// Gamma_I u Gamma_D.
using JumpData = std::function<Tensor2(int face, int q)>;

/// Jump data of a broken vector field, optionally against a Dirichlet datum
/// on boundary faces (for jumps of u_h - u_D*).
JumpData jumps_of_field(const DgOperators& ops, const BrokenField& u,
                        VectorFn dirichlet_datum = nullptr);

/// Jump data of a continuous Dirichlet extension: interior jumps vanish, on
/// Gamma_D the jump is u_D (x) n. Used to assemble R_h^k(u_D*).
JumpData jumps_of_boundary_datum(const DgOperators& ops, VectorFn u_D);

/// Lifting R_h^k: the unique tensor field X in X_h^k with
/// (X, Y) = <[[w (x) n]], {Y}> over Gamma_I u Gamma_D for all Y in X_h^k.
BrokenField lift(const DgOperators& ops, const JumpData& jumps);

/// Discrete gradient G_h^k u = grad_h u - R_h^k(u); with a Dirichlet
/// extension this returns L_h = grad_h u - R_h^k(u - u_D*).
BrokenField discrete_gradient(const DgOperators& ops, const BrokenField& u,
                              VectorFn dirichlet_extension = nullptr);

/// Volume modular int_Omega psi(|f|) dx of a tensor broken field.
double modular_volume(const DgOperators& ops, const std::function<double(double)>& psi,
                      const BrokenField& X);
/// Volume modular of a pointwise tensor function.
double modular_volume(const DgOperators& ops, const std::function<double(double)>& psi,
                      const TensorFn& X);

/// Face pseudo-modular m_{psi,h} = h sum_gamma int psi_gamma(h^{-1} |jump|) ds
/// over interior and Dirichlet faces. psi may depend on the face (per-face
/// shifts a_gamma).
double modular_jump(const DgOperators& ops,
                    const std::function<double(int face, double t)>& psi,
                    const JumpData& jumps, double h);
double modular_jump(const DgOperators& ops, const std::function<double(double)>& psi,
                    const JumpData& jumps, double h);

}  // namespace ldg
