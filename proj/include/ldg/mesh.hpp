#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

namespace ldg {

enum class BoundaryTag { interior, dirichlet, neumann };

struct Point {
  double x = 0.0;
  double y = 0.0;
};

/// Mesh face. For interior faces the normal points from the left cell to
/// the right cell; for boundary faces (right == -1) it points outward.
struct Face {
  int v0 = -1;
  int v1 = -1;
  int left = -1;
  int right = -1;
  BoundaryTag tag = BoundaryTag::interior;
  std::array<double, 2> normal{0.0, 0.0};
  double length = 0.0;

  bool interior() const { return right >= 0; }
};

/// Predicate classifying a boundary point (face midpoint) as Dirichlet.
using DirichletPredicate = std::function<bool(double, double)>;

/// Conforming triangulation of an axis-aligned rectangle. Immutable after
/// construction; refinement produces a new value.
struct Triangulation {
  std::vector<Point> vertices;
  std::vector<std::array<int, 3>> cells;  // counterclockwise vertex triples
  std::vector<Face> faces;
  std::vector<std::array<int, 3>> cell_faces;
  double grid_h = 0.0;  // cartesian cell spacing, the mesh parameter h
  int level = 0;
  DirichletPredicate dirichlet;  // retained so refinement can re-tag

  Point centroid(int cell) const {
    const auto& c = cells[cell];
    return {(vertices[c[0]].x + vertices[c[1]].x + vertices[c[2]].x) / 3.0,
            (vertices[c[0]].y + vertices[c[1]].y + vertices[c[2]].y) / 3.0};
  }
  double cell_area(int cell) const;
  /// diam(K) / (2 * inradius(K)); constant across refinement levels.
  double chunkiness(int cell) const;
};

/// Subdivides an h-spaced cartesian grid on [x0,x1]x[y0,y1] into triangles,
/// the diagonal direction alternating in a checkerboard pattern. Side
/// lengths must be integer multiples of h.
Triangulation build_cartesian(double x0, double y0, double x1, double y1,
                              double h, DirichletPredicate dirichlet = nullptr);

/// Red refinement: every triangle is split into four similar children by
/// connecting edge midpoints. Cell count x4, grid_h halved.
Triangulation refine_regular(const Triangulation& t);

/// Writes vertices.csv (id,x,y) and cells.csv (id,v0,v1,v2) into dir.
void export_mesh_csv(const Triangulation& t, const std::string& dir);

}  // namespace ldg
