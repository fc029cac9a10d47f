#pragma once

#include "ldg/nfunction.hpp"
#include "ldg/tensor.hpp"

namespace ldg {

/// A(P) = phi'(|P|)/|P| P = (delta + |P|)^(p-2) P, with A(0) = 0.
Tensor2 op_A(const NFunction& nf, const Tensor2& P);

/// DA(P)[Q] = phi'(r)/r Q + (phi''(r) - phi'(r)/r) (P:Q) P / r^2 with
/// r = max(|P|, eps). A negative eps selects the default floor
/// 1e-12 (1 + |P|). Throws for the genuinely singular case
/// P = 0, delta = 0, p < 2, eps = 0.
Tensor4 op_A_jacobian(const NFunction& nf, const Tensor2& P, double eps = -1.0);

/// Shifted operator A_a(P) = phi_a'(|P|)/|P| P = phi'(a+|P|)/(a+|P|) P.
Tensor2 op_A_shifted(const NFunction& nf, double a, const Tensor2& P);

/// Jacobian of A_a in its tensor argument (same rank-one plus scaled
/// identity structure as op_A_jacobian).
Tensor4 op_A_shifted_jacobian(const NFunction& nf, double a, const Tensor2& P,
                              double eps = -1.0);

/// Derivative of A_a(P) in the shift parameter a (needed for the
/// full-shift Newton linearization).
Tensor2 op_A_shifted_da(const NFunction& nf, double a, const Tensor2& P);

/// F(P) = sqrt(phi'(|P|)/|P|) P and F*(P) = sqrt((phi*)'(|P|)/|P|) P,
/// both extended by zero at P = 0.
Tensor2 map_F(const NFunction& nf, const Tensor2& P);
Tensor2 map_Fstar(const NFunction& nf, const Tensor2& P);

}  // namespace ldg
