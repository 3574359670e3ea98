#include "poromulti/mesh.hpp"

#include "poromulti/error.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <unordered_map>

namespace poromulti {

std::string_view to_string(BoundaryTag tag) {
  switch (tag) {
    case BoundaryTag::Left: return "LEFT";
    case BoundaryTag::Right: return "RIGHT";
    case BoundaryTag::Top: return "TOP";
    case BoundaryTag::Bottom: return "BOTTOM";
  }
  return "?";
}

BoundaryTag parse_boundary_tag(std::string_view text) {
  for (BoundaryTag tag : kAllBoundaryTags)
    if (text == to_string(tag)) return tag;
  throw ConfigError("unknown boundary tag '" + std::string(text) + "'");
}

double TriMesh::signed_area(int cell) const {
  const Cell& c = cells[cell];
  const Point e1 = nodes[c[1]] - nodes[c[0]];
  const Point e2 = nodes[c[2]] - nodes[c[0]];
  return 0.5 * (e1.x() * e2.y() - e1.y() * e2.x());
}

Point TriMesh::centroid(int cell) const {
  const Cell& c = cells[cell];
  return (nodes[c[0]] + nodes[c[1]] + nodes[c[2]]) / 3.0;
}

double TriMesh::total_area() const {
  double sum = 0.0;
  for (int c = 0; c < num_cells(); ++c) sum += signed_area(c);
  return sum;
}

std::vector<char> TriMesh::boundary_node_mask(BoundaryTag tag) const {
  std::vector<char> mask(nodes.size(), 0);
  for (const BoundaryEdge& e : boundary_edges) {
    if (e.tag != tag) continue;
    mask[e.a] = 1;
    mask[e.b] = 1;
  }
  return mask;
}

std::vector<int> TriMesh::boundary_nodes(BoundaryTag tag) const {
  const std::vector<char> mask = boundary_node_mask(tag);
  std::vector<int> out;
  for (int i = 0; i < num_nodes(); ++i)
    if (mask[i]) out.push_back(i);
  return out;
}

TriMesh build_structured_mesh(int n) {
  if (n < 1) throw std::invalid_argument("build_structured_mesh: n must be >= 1");
  TriMesh mesh;
  const int np = n + 1;
  auto id = [np](int i, int j) { return j * np + i; };

  mesh.nodes.reserve(static_cast<std::size_t>(np) * np);
  for (int j = 0; j < np; ++j)
    for (int i = 0; i < np; ++i)
      mesh.nodes.emplace_back(static_cast<double>(i) / n, static_cast<double>(j) / n);

  mesh.cells.reserve(2 * static_cast<std::size_t>(n) * n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int v00 = id(i, j), v10 = id(i + 1, j), v01 = id(i, j + 1), v11 = id(i + 1, j + 1);
      mesh.cells.push_back({v00, v10, v11});
      mesh.cells.push_back({v00, v11, v01});
    }
  }

  // Counterclockwise walk around the square.
  for (int i = 0; i < n; ++i) mesh.boundary_edges.push_back({id(i, 0), id(i + 1, 0), BoundaryTag::Bottom});
  for (int j = 0; j < n; ++j) mesh.boundary_edges.push_back({id(n, j), id(n, j + 1), BoundaryTag::Right});
  for (int i = n; i > 0; --i) mesh.boundary_edges.push_back({id(i, n), id(i - 1, n), BoundaryTag::Top});
  for (int j = n; j > 0; --j) mesh.boundary_edges.push_back({id(0, j), id(0, j - 1), BoundaryTag::Left});
  return mesh;
}

void validate_mesh(const TriMesh& mesh) {
  const int nn = mesh.num_nodes();
  auto in_range = [nn](int i) { return i >= 0 && i < nn; };
  for (int c = 0; c < mesh.num_cells(); ++c) {
    for (int v : mesh.cells[c])
      if (!in_range(v)) throw ConfigError("cell " + std::to_string(c) + " references missing node");
    if (!(mesh.signed_area(c) > 0.0))
      throw ConfigError("cell " + std::to_string(c) + " has non-positive signed area");
  }
  for (const BoundaryEdge& e : mesh.boundary_edges)
    if (!in_range(e.a) || !in_range(e.b)) throw ConfigError("boundary edge references missing node");
}

Eigen::Vector3d barycentric(const TriMesh& mesh, int cell, const Point& x) {
  const Cell& c = mesh.cells[cell];
  const Point& a = mesh.nodes[c[0]];
  Eigen::Matrix2d T;
  T.col(0) = mesh.nodes[c[1]] - a;
  T.col(1) = mesh.nodes[c[2]] - a;
  const Eigen::Vector2d st = T.inverse() * (x - a);
  return {1.0 - st.x() - st.y(), st.x(), st.y()};
}

TriMesh submesh(const TriMesh& mesh, std::span<const int> cells, std::vector<int>& local_to_global) {
  local_to_global.clear();
  for (int c : cells)
    for (int v : mesh.cells[c]) local_to_global.push_back(v);
  std::sort(local_to_global.begin(), local_to_global.end());
  local_to_global.erase(std::unique(local_to_global.begin(), local_to_global.end()), local_to_global.end());

  std::unordered_map<int, int> global_to_local;
  global_to_local.reserve(local_to_global.size());
  TriMesh sub;
  sub.nodes.reserve(local_to_global.size());
  for (int i = 0; i < static_cast<int>(local_to_global.size()); ++i) {
    global_to_local.emplace(local_to_global[i], i);
    sub.nodes.push_back(mesh.nodes[local_to_global[i]]);
  }
  sub.cells.reserve(cells.size());
  for (int c : cells) {
    const Cell& g = mesh.cells[c];
    sub.cells.push_back({global_to_local.at(g[0]), global_to_local.at(g[1]), global_to_local.at(g[2])});
  }
  return sub;
}

void write_mesh(std::ostream& os, const TriMesh& mesh) {
  os << "nodes " << mesh.num_nodes() << " cells " << mesh.num_cells() << " bedges "
     << mesh.boundary_edges.size() << '\n';
  os.precision(17);
  for (const Point& p : mesh.nodes) os << p.x() << ' ' << p.y() << '\n';
  for (const Cell& c : mesh.cells) os << c[0] << ' ' << c[1] << ' ' << c[2] << '\n';
  for (const BoundaryEdge& e : mesh.boundary_edges) os << e.a << ' ' << e.b << ' ' << to_string(e.tag) << '\n';
}

TriMesh read_mesh(std::istream& is) {
  std::string kw_nodes, kw_cells, kw_bedges;
  long n_nodes = -1, n_cells = -1, n_bedges = -1;
  if (!(is >> kw_nodes >> n_nodes >> kw_cells >> n_cells >> kw_bedges >> n_bedges) || kw_nodes != "nodes" ||
      kw_cells != "cells" || kw_bedges != "bedges" || n_nodes < 0 || n_cells < 0 || n_bedges < 0)
    throw ConfigError("mesh: malformed header, expected 'nodes N cells M bedges K'");

  TriMesh mesh;
  mesh.nodes.resize(n_nodes);
  for (auto& p : mesh.nodes)
    if (!(is >> p.x() >> p.y())) throw ConfigError("mesh: truncated node block");
  mesh.cells.resize(n_cells);
  for (auto& c : mesh.cells)
    if (!(is >> c[0] >> c[1] >> c[2])) throw ConfigError("mesh: truncated cell block");
  mesh.boundary_edges.resize(n_bedges);
  for (auto& e : mesh.boundary_edges) {
    std::string tag;
    if (!(is >> e.a >> e.b >> tag)) throw ConfigError("mesh: truncated boundary-edge block");
    e.tag = parse_boundary_tag(tag);
  }
  validate_mesh(mesh);
  return mesh;
}

}  // namespace poromulti
