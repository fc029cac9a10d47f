#pragma once

#include <stdexcept>

namespace ldg {

/// Member of the (p, delta) family of balanced N-functions,
///   phi'(t) = (delta + t)^(p-2) t,   phi(t) = int_0^t phi'(s) ds.
/// delta = 0 gives the p-Laplacian scaling t^p / p.
class NFunction {
 public:
  NFunction(double p, double delta);

  double p() const { return p_; }
  double delta() const { return delta_; }

  /// Characteristics of the family: gamma1 phi' <= t phi'' <= gamma2 phi'.
  double gamma1() const { return p_ < 2.0 ? p_ - 1.0 : 1.0; }
  double gamma2() const { return p_ < 2.0 ? 1.0 : p_ - 1.0; }

  double value(double t) const;
  double prime(double t) const;
  double second(double t) const;

  /// (phi*)'(s) = (phi')^{-1}(s), by safeguarded monotone root find.
  double conjugate_prime(double s) const;
  /// phi*(s) = s t - phi(t) with t = (phi')^{-1}(s).
  double conjugate_value(double s) const;

 private:
  double p_;
  double delta_;
};

/// Shifted N-function phi_a with phi_a'(t) = phi'(a+t) t/(a+t).
class ShiftedNFunction {
 public:
  ShiftedNFunction(NFunction base, double a);

  const NFunction& base() const { return base_; }
  double shift() const { return a_; }

  double prime(double t) const;
  /// phi_a(t) by adaptive quadrature of phi_a' (no closed form).
  double value(double t) const;

 private:
  NFunction base_;
  double a_;
};

}  // namespace ldg
