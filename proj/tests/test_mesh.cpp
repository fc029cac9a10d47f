#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>

#include "doctest.h"
#include "ldg/mesh.hpp"

using namespace ldg;

namespace {
double signed_area(const Triangulation& t, int cell) {
  const auto& c = t.cells[cell];
  const Point a = t.vertices[c[0]], b = t.vertices[c[1]], d = t.vertices[c[2]];
  return 0.5 * ((b.x - a.x) * (d.y - a.y) - (b.y - a.y) * (d.x - a.x));
}
}  // namespace

TEST_CASE("cartesian mesh counts and area") {
  for (double h : {1.0, 0.5}) {
    const Triangulation t = build_cartesian(-2, -2, 2, 2, h);
    const int n = static_cast<int>(std::lround(4.0 / h));
    CHECK(static_cast<int>(t.cells.size()) == 2 * n * n);
    CHECK(static_cast<int>(t.vertices.size()) == (n + 1) * (n + 1));
    // Euler formula V - E + F = 1 for a disc (faces excluding the outside)
    CHECK(static_cast<int>(t.vertices.size()) -
              static_cast<int>(t.faces.size()) +
              static_cast<int>(t.cells.size()) ==
          1);
    double area = 0.0;
    for (int c = 0; c < static_cast<int>(t.cells.size()); ++c)
      area += t.cell_area(c);
    CHECK(area == doctest::Approx(16.0).epsilon(1e-13));
    CHECK(t.grid_h == h);
    CHECK(t.level == 0);
  }
}

TEST_CASE("cells are counterclockwise and areas match the cross product") {
  const Triangulation t = build_cartesian(0, 0, 3, 2, 0.5);
  for (int c = 0; c < static_cast<int>(t.cells.size()); ++c) {
    const double s = signed_area(t, c);
    CHECK(s > 0.0);
    CHECK(t.cell_area(c) == doctest::Approx(s).epsilon(1e-14));
    CHECK(t.cell_area(c) == doctest::Approx(0.5 * 0.5 / 2.0));
  }
}

TEST_CASE("non-multiple side length is rejected") {
  CHECK_THROWS_AS(build_cartesian(0, 0, 1, 1, 0.3), std::invalid_argument);
  CHECK_THROWS_AS(build_cartesian(0, 0, 1, 0, 0.5), std::invalid_argument);
}

TEST_CASE("face geometry: normals, lengths, orientation") {
  const Triangulation t = build_cartesian(-1, -1, 1, 1, 0.5);
  for (const Face& f : t.faces) {
    const Point a = t.vertices[f.v0], b = t.vertices[f.v1];
    CHECK(f.length == doctest::Approx(std::hypot(b.x - a.x, b.y - a.y)));
    // unit normal, orthogonal to the face
    CHECK(std::hypot(f.normal[0], f.normal[1]) == doctest::Approx(1.0));
    CHECK(f.normal[0] * (b.x - a.x) + f.normal[1] * (b.y - a.y) ==
          doctest::Approx(0.0).epsilon(1e-14));
    // normal points away from the left cell's centroid
    const Point cl = t.centroid(f.left);
    const Point mid{0.5 * (a.x + b.x), 0.5 * (a.y + b.y)};
    CHECK(f.normal[0] * (mid.x - cl.x) + f.normal[1] * (mid.y - cl.y) > 0.0);
    if (f.interior()) {
      // and toward the right cell's centroid
      const Point cr = t.centroid(f.right);
      CHECK(f.normal[0] * (cr.x - mid.x) + f.normal[1] * (cr.y - mid.y) > 0.0);
      CHECK(f.tag == BoundaryTag::interior);
    } else {
      CHECK(f.right == -1);
      CHECK(f.tag != BoundaryTag::interior);
    }
  }
}

TEST_CASE("cell_faces is consistent with the face list") {
  const Triangulation t = build_cartesian(0, 0, 2, 2, 1.0);
  std::map<int, int> incidence;  // face -> number of cells referencing it
  for (int c = 0; c < static_cast<int>(t.cells.size()); ++c) {
    for (int e = 0; e < 3; ++e) {
      const int fi = t.cell_faces[c][e];
      const Face& f = t.faces[fi];
      CHECK((f.left == c || f.right == c));
      // the face's vertices belong to the cell
      const auto& cv = t.cells[c];
      for (int v : {f.v0, f.v1})
        CHECK((v == cv[0] || v == cv[1] || v == cv[2]));
      ++incidence[fi];
    }
  }
  for (int fi = 0; fi < static_cast<int>(t.faces.size()); ++fi)
    CHECK(incidence[fi] == (t.faces[fi].interior() ? 2 : 1));
}

TEST_CASE("boundary tagging via Dirichlet predicate") {
  // default: everything Dirichlet
  const Triangulation all = build_cartesian(0, 0, 2, 2, 1.0);
  for (const Face& f : all.faces)
    if (!f.interior()) CHECK(f.tag == BoundaryTag::dirichlet);

  // x = 0 side Neumann, rest Dirichlet
  const Triangulation mix = build_cartesian(
      0, 0, 2, 2, 1.0, [](double x, double) { return x > 1e-12; });
  int nneu = 0, ndir = 0;
  for (const Face& f : mix.faces) {
    if (f.interior()) continue;
    if (f.tag == BoundaryTag::neumann) {
      ++nneu;
      const Point mid{0.5 * (mix.vertices[f.v0].x + mix.vertices[f.v1].x),
                      0.5 * (mix.vertices[f.v0].y + mix.vertices[f.v1].y)};
      CHECK(mid.x == doctest::Approx(0.0));
    } else {
      ++ndir;
    }
  }
  CHECK(nneu == 2);
  CHECK(ndir == 6);
  // the predicate survives refinement
  const Triangulation fine = refine_regular(mix);
  int nneu_f = 0;
  for (const Face& f : fine.faces)
    if (!f.interior() && f.tag == BoundaryTag::neumann) ++nneu_f;
  CHECK(nneu_f == 4);
}

TEST_CASE("red refinement: counts, nesting, shape preservation") {
  Triangulation t = build_cartesian(-2, -2, 2, 2, 1.0);
  const double a0 = t.cell_area(0);
  std::vector<double> chunk;
  for (int c = 0; c < static_cast<int>(t.cells.size()); ++c)
    chunk.push_back(t.chunkiness(c));

  const Triangulation f = refine_regular(t);
  CHECK(f.cells.size() == 4 * t.cells.size());
  CHECK(f.grid_h == doctest::Approx(0.5 * t.grid_h));
  CHECK(f.level == t.level + 1);
  // vertex count for a refined triangulated disc: V' = V + E
  CHECK(f.vertices.size() == t.vertices.size() + t.faces.size());

  double area = 0.0;
  for (int c = 0; c < static_cast<int>(f.cells.size()); ++c) {
    area += f.cell_area(c);
    CHECK(signed_area(f, c) > 0.0);
  }
  CHECK(area == doctest::Approx(16.0).epsilon(1e-13));

  // children are similar to the parent: area/4 and identical chunkiness
  for (int c = 0; c < static_cast<int>(f.cells.size()); ++c) {
    CHECK(f.cell_area(c) == doctest::Approx(a0 / 4.0));
    CHECK(f.chunkiness(c) == doctest::Approx(chunk[c / 4]).epsilon(1e-12));
  }

  // children c*4+k live inside parent c: centroid containment check
  for (int parent = 0; parent < static_cast<int>(t.cells.size()); ++parent) {
    const auto& pv = t.cells[parent];
    const Point A = t.vertices[pv[0]], B = t.vertices[pv[1]],
                C = t.vertices[pv[2]];
    const double det =
        (B.x - A.x) * (C.y - A.y) - (B.y - A.y) * (C.x - A.x);
    for (int k = 0; k < 4; ++k) {
      const Point g = f.centroid(4 * parent + k);
      const double l1 =
          ((g.x - A.x) * (C.y - A.y) - (g.y - A.y) * (C.x - A.x)) / det;
      const double l2 =
          ((B.x - A.x) * (g.y - A.y) - (B.y - A.y) * (g.x - A.x)) / det;
      CHECK(l1 >= 0.0);
      CHECK(l2 >= 0.0);
      CHECK(l1 + l2 <= 1.0);
    }
  }
}

TEST_CASE("chunkiness is the right-triangle constant") {
  // for an isoceles right triangle with legs h: diam = h sqrt(2),
  // inradius = h (2 - sqrt(2)) / 2, so chunkiness = sqrt(2) / (2 - sqrt(2)).
  const Triangulation t = build_cartesian(0, 0, 1, 1, 1.0);
  const double expected = std::sqrt(2.0) / (2.0 - std::sqrt(2.0));
  for (int c = 0; c < static_cast<int>(t.cells.size()); ++c)
    CHECK(t.chunkiness(c) == doctest::Approx(expected).epsilon(1e-13));
}

TEST_CASE("export_mesh_csv writes well-formed files") {
  const Triangulation t = build_cartesian(0, 0, 1, 1, 0.5);
  const std::string dir = "/tmp/ldg_mesh_csv_test";
  std::filesystem::create_directories(dir);
  export_mesh_csv(t, dir);
  std::ifstream vf(dir + "/vertices.csv"), cf(dir + "/cells.csv");
  REQUIRE(vf.good());
  REQUIRE(cf.good());
  std::string line;
  int nv = -1;  // header
  while (std::getline(vf, line))
    if (!line.empty()) ++nv;
  int nc = -1;
  while (std::getline(cf, line))
    if (!line.empty()) ++nc;
  CHECK(nv == static_cast<int>(t.vertices.size()));
  CHECK(nc == static_cast<int>(t.cells.size()));
  std::filesystem::remove_all(dir);
}
