#include "ldg/nfunction.hpp"

#include <cmath>
#include <limits>

#include "ldg/quadrature.hpp"

namespace ldg {

NFunction::NFunction(double p, double delta) : p_(p), delta_(delta) {
  if (!(p > 1.0)) throw std::invalid_argument("NFunction: p must exceed 1");
  if (delta < 0.0) throw std::invalid_argument("NFunction: delta must be >= 0");
}

double NFunction::prime(double t) const {
  if (t < 0.0) throw std::domain_error("NFunction::prime: negative argument");
  if (t == 0.0) return 0.0;
  return std::pow(delta_ + t, p_ - 2.0) * t;
}

double NFunction::second(double t) const {
  if (t < 0.0) throw std::domain_error("NFunction::second: negative argument");
  if (t == 0.0 && delta_ == 0.0) {
    if (p_ < 2.0) throw std::domain_error("NFunction::second: singular at t=0 for p<2, delta=0");
    if (p_ == 2.0) return 1.0;
    return 0.0;
  }
  return std::pow(delta_ + t, p_ - 3.0) * ((p_ - 1.0) * t + delta_);
}

double NFunction::value(double t) const {
  if (t < 0.0) throw std::domain_error("NFunction::value: negative argument");
  if (t == 0.0) return 0.0;
  if (delta_ == 0.0) return std::pow(t, p_) / p_;
  if (t < delta_) {
    // Closed form cancels badly for t << delta; integrate phi' instead.
    const GaussRule1d g = gauss_legendre_unit(30);
    double sum = 0.0;
    for (std::size_t q = 0; q < g.points.size(); ++q) {
      const double s = g.points[q] * t;
      sum += g.weights[q] * prime(s);
    }
    return sum * t;
  }
  const double dt = delta_ + t;
  return (std::pow(dt, p_) - std::pow(delta_, p_)) / p_ -
         delta_ * (std::pow(dt, p_ - 1.0) - std::pow(delta_, p_ - 1.0)) / (p_ - 1.0);
}

double NFunction::conjugate_prime(double s) const {
  if (s < 0.0) throw std::domain_error("NFunction::conjugate_prime: negative argument");
  if (s == 0.0) return 0.0;
  if (delta_ == 0.0) return std::pow(s, 1.0 / (p_ - 1.0));
  // Bracket the root of phi'(t) = s.
  double lo = 0.0;
  double hi = std::max(1.0, std::pow(s, 1.0 / (p_ - 1.0)));
  while (prime(hi) < s) hi *= 2.0;
  double t = std::min(hi, std::pow(s, 1.0 / (p_ - 1.0)));
  if (!(t > lo && t < hi)) t = 0.5 * (lo + hi);
  for (int iter = 0; iter < 200; ++iter) {
    const double f = prime(t) - s;
    if (std::abs(f) <= 1e-13 * s) break;
    if (f > 0.0) hi = t; else lo = t;
    const double df = second(t);
    double tn = t - f / df;
    if (!(tn > lo && tn < hi)) tn = 0.5 * (lo + hi);
    if (tn == t) break;
    t = tn;
  }
  return t;
}

double NFunction::conjugate_value(double s) const {
  if (s < 0.0) throw std::domain_error("NFunction::conjugate_value: negative argument");
  if (s == 0.0) return 0.0;
  const double t = conjugate_prime(s);
  return s * t - value(t);
}

ShiftedNFunction::ShiftedNFunction(NFunction base, double a) : base_(base), a_(a) {
  if (a < 0.0) throw std::invalid_argument("ShiftedNFunction: shift must be >= 0");
}

double ShiftedNFunction::prime(double t) const {
  if (t < 0.0) throw std::domain_error("ShiftedNFunction::prime: negative argument");
  if (t == 0.0) return 0.0;
  if (a_ == 0.0) return base_.prime(t);
  return base_.prime(a_ + t) * t / (a_ + t);
}

double ShiftedNFunction::value(double t) const {
  if (t < 0.0) throw std::domain_error("ShiftedNFunction::value: negative argument");
  if (t == 0.0) return 0.0;
  if (a_ == 0.0) return base_.value(t);
  return integrate_adaptive([this](double s) { return prime(s); }, 0.0, t, 1e-12);
}

}  // namespace ldg
