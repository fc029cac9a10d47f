#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace ldg {

/// One-dimensional Gauss-Legendre rule on (0,1). Nodes are strictly
/// interior; an n-point rule integrates polynomials of degree 2n-1 exactly.
struct GaussRule1d {
  std::vector<double> points;
  std::vector<double> weights;
};

GaussRule1d gauss_legendre_unit(int npoints);

/// Quadrature on the reference triangle {xi>=0, eta>=0, xi+eta<=1}.
/// Exact for polynomials up to the requested total degree; all nodes
/// strictly interior (the rule is a collapsed tensor-product rule, so no
/// node touches an edge or vertex).
struct TriangleRule {
  std::vector<double> xi;
  std::vector<double> eta;
  std::vector<double> weights;  // sum to 1/2
  std::size_t size() const { return weights.size(); }
};

TriangleRule triangle_rule(int degree);

/// 1d rule on (0,1) exact for polynomials of the given degree, interior nodes.
GaussRule1d segment_rule(int degree);

/// Adaptive Simpson integration of f over [a,b] to absolute tolerance tol.
double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, double tol = 1e-12);

}  // namespace ldg
