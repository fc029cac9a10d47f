#include "ldg/mesh.hpp"

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <stdexcept>

namespace ldg {

namespace {

double signed_area2(const Point& a, const Point& b, const Point& c) {
  return (b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y);
}

/// Builds face topology from cell connectivity and tags boundary faces.
void build_faces(Triangulation& t) {
  t.faces.clear();
  t.cell_faces.assign(t.cells.size(), {-1, -1, -1});
  std::map<std::pair<int, int>, int> edge_to_face;
  for (int c = 0; c < static_cast<int>(t.cells.size()); ++c) {
    const auto& cell = t.cells[c];
    for (int e = 0; e < 3; ++e) {
      const int a = cell[e];
      const int b = cell[(e + 1) % 3];
      const auto key = std::minmax(a, b);
      auto it = edge_to_face.find(key);
      if (it == edge_to_face.end()) {
        Face f;
        f.v0 = a;
        f.v1 = b;
        f.left = c;
        edge_to_face.emplace(key, static_cast<int>(t.faces.size()));
        t.cell_faces[c][e] = static_cast<int>(t.faces.size());
        t.faces.push_back(f);
      } else {
        Face& f = t.faces[it->second];
        if (f.right >= 0) throw std::runtime_error("mesh: non-conforming edge");
        f.right = c;
        t.cell_faces[c][e] = it->second;
      }
    }
  }
  for (Face& f : t.faces) {
    const Point& a = t.vertices[f.v0];
    const Point& b = t.vertices[f.v1];
    const double dx = b.x - a.x;
    const double dy = b.y - a.y;
    f.length = std::hypot(dx, dy);
    f.normal = {dy / f.length, -dx / f.length};
    // Orient the normal from left cell to right cell (outward on boundary).
    const Point cl = t.centroid(f.left);
    const double mx = 0.5 * (a.x + b.x);
    const double my = 0.5 * (a.y + b.y);
    if ((mx - cl.x) * f.normal[0] + (my - cl.y) * f.normal[1] < 0.0) {
      std::swap(f.v0, f.v1);
      f.normal = {-f.normal[0], -f.normal[1]};
    }
    if (!f.interior()) {
      const bool dir = !t.dirichlet || t.dirichlet(mx, my);
      f.tag = dir ? BoundaryTag::dirichlet : BoundaryTag::neumann;
    }
  }
}

}  // namespace

double Triangulation::cell_area(int cell) const {
  const auto& c = cells[cell];
  return 0.5 * signed_area2(vertices[c[0]], vertices[c[1]], vertices[c[2]]);
}

double Triangulation::chunkiness(int cell) const {
  const auto& c = cells[cell];
  const Point& a = vertices[c[0]];
  const Point& b = vertices[c[1]];
  const Point& d = vertices[c[2]];
  const double la = std::hypot(b.x - a.x, b.y - a.y);
  const double lb = std::hypot(d.x - b.x, d.y - b.y);
  const double lc = std::hypot(a.x - d.x, a.y - d.y);
  const double diam = std::max({la, lb, lc});
  const double s = 0.5 * (la + lb + lc);
  const double inradius = cell_area(cell) / s;
  return diam / (2.0 * inradius);
}

Triangulation build_cartesian(double x0, double y0, double x1, double y1,
                              double h, DirichletPredicate dirichlet) {
  if (h <= 0.0) throw std::invalid_argument("build_cartesian: h must be positive");
  const double wx = (x1 - x0) / h;
  const double wy = (y1 - y0) / h;
  const int nx = static_cast<int>(std::lround(wx));
  const int ny = static_cast<int>(std::lround(wy));
  if (nx < 1 || ny < 1 || std::abs(wx - nx) > 1e-9 || std::abs(wy - ny) > 1e-9) {
    throw std::invalid_argument("build_cartesian: side lengths must be integer multiples of h");
  }
  Triangulation t;
  t.grid_h = h;
  t.level = 0;
  t.dirichlet = std::move(dirichlet);
  t.vertices.reserve((nx + 1) * (ny + 1));
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i)
      t.vertices.push_back({x0 + i * h, y0 + j * h});
  const auto vid = [nx](int i, int j) { return j * (nx + 1) + i; };
  t.cells.reserve(2 * nx * ny);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int v00 = vid(i, j), v10 = vid(i + 1, j);
      const int v11 = vid(i + 1, j + 1), v01 = vid(i, j + 1);
      if ((i + j) % 2 == 0) {
        t.cells.push_back({v00, v10, v11});
        t.cells.push_back({v00, v11, v01});
      } else {
        t.cells.push_back({v00, v10, v01});
        t.cells.push_back({v10, v11, v01});
      }
    }
  }
  build_faces(t);
  return t;
}

Triangulation refine_regular(const Triangulation& parent) {
  Triangulation t;
  t.grid_h = 0.5 * parent.grid_h;
  t.level = parent.level + 1;
  t.dirichlet = parent.dirichlet;
  t.vertices = parent.vertices;
  std::map<std::pair<int, int>, int> midpoint;
  const auto mid = [&](int a, int b) {
    const auto key = std::minmax(a, b);
    auto it = midpoint.find(key);
    if (it != midpoint.end()) return it->second;
    const Point& pa = t.vertices[a];
    const Point& pb = t.vertices[b];
    const int id = static_cast<int>(t.vertices.size());
    t.vertices.push_back({0.5 * (pa.x + pb.x), 0.5 * (pa.y + pb.y)});
    midpoint.emplace(key, id);
    return id;
  };
  t.cells.reserve(4 * parent.cells.size());
  for (const auto& c : parent.cells) {
    const int m01 = mid(c[0], c[1]);
    const int m12 = mid(c[1], c[2]);
    const int m20 = mid(c[2], c[0]);
    t.cells.push_back({c[0], m01, m20});
    t.cells.push_back({c[1], m12, m01});
    t.cells.push_back({c[2], m20, m12});
    t.cells.push_back({m01, m12, m20});
  }
  build_faces(t);
  return t;
}

void export_mesh_csv(const Triangulation& t, const std::string& dir) {
  std::filesystem::create_directories(dir);
  std::ofstream vf(dir + "/vertices.csv");
  vf << "id,x,y\n";
  vf.precision(17);
  for (std::size_t i = 0; i < t.vertices.size(); ++i)
    vf << i << ',' << t.vertices[i].x << ',' << t.vertices[i].y << '\n';
  std::ofstream cf(dir + "/cells.csv");
  cf << "id,v0,v1,v2\n";
  for (std::size_t i = 0; i < t.cells.size(); ++i)
    cf << i << ',' << t.cells[i][0] << ',' << t.cells[i][1] << ',' << t.cells[i][2] << '\n';
}

}  // namespace ldg
