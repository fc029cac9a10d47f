#include "ldg/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace ldg {

GaussRule1d gauss_legendre_unit(int npoints) {
  if (npoints < 1) throw std::invalid_argument("gauss_legendre_unit: npoints < 1");
  const int n = npoints;
  GaussRule1d rule;
  rule.points.resize(n);
  rule.weights.resize(n);
  // Nodes on (-1,1) by Newton iteration on P_n, then mapped to (0,1).
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      if (n == 1) p1 = x;
      for (int j = 2; j <= n; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      const double pn = (n == 1) ? x : p1;
      pp = n * (x * pn - p0) / (x * x - 1.0);
      const double dx = pn / pp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * pp * pp);
    rule.points[i] = 0.5 * (1.0 - x);
    rule.weights[i] = 0.5 * w;
    rule.points[n - 1 - i] = 0.5 * (1.0 + x);
    rule.weights[n - 1 - i] = 0.5 * w;
  }
  return rule;
}

GaussRule1d segment_rule(int degree) {
  if (degree < 0) throw std::invalid_argument("segment_rule: negative degree");
  return gauss_legendre_unit(degree / 2 + 1);
}

TriangleRule triangle_rule(int degree) {
  if (degree < 0) throw std::invalid_argument("triangle_rule: negative degree");
  // Duffy map (u,v) in (0,1)^2 -> (xi,eta) = (u, v(1-u)), Jacobian (1-u).
  // A degree-d integrand becomes degree <= d in v and <= d+1 in u.
  const int nu = (degree + 1) / 2 + 1;
  const int nv = degree / 2 + 1;
  const GaussRule1d gu = gauss_legendre_unit(nu);
  const GaussRule1d gv = gauss_legendre_unit(nv);
  TriangleRule rule;
  rule.xi.reserve(nu * nv);
  rule.eta.reserve(nu * nv);
  rule.weights.reserve(nu * nv);
  for (int i = 0; i < nu; ++i) {
    for (int j = 0; j < nv; ++j) {
      const double u = gu.points[i];
      const double v = gv.points[j];
      rule.xi.push_back(u);
      rule.eta.push_back(v * (1.0 - u));
      rule.weights.push_back(gu.weights[i] * gv.weights[j] * (1.0 - u));
    }
  }
  return rule;
}

namespace {

double simpson(const std::function<double(double)>& f, double a, double fa,
               double b, double fb, double m, double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_step(const std::function<double(double)>& f, double a, double fa,
                     double b, double fb, double m, double fm, double whole,
                     double tol, int depth) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson(f, a, fa, m, fm, lm, flm);
  const double right = simpson(f, m, fm, b, fb, rm, frm);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return adaptive_step(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         adaptive_step(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, double tol) {
  if (a == b) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a), fb = f(b), fm = f(m);
  const double whole = simpson(f, a, fa, b, fb, m, fm);
  return adaptive_step(f, a, fa, b, fb, m, fm, whole, tol, 50);
}

}  // namespace ldg
