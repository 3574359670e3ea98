#include "poromulti/neighborhood.hpp"

#include "poromulti/error.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <utility>

namespace poromulti {
namespace {

constexpr double kContainTol = 1e-12;

bool inside(const Eigen::Vector3d& bary) { return bary.minCoeff() >= -kContainTol; }

// Coarse cell containing each fine cell; throws when the pair is not nested.
std::vector<int> locate_fine_cells(const TriMesh& coarse, const TriMesh& fine) {
  std::vector<int> parent(fine.num_cells(), -1);
  int hint = 0;
  for (int f = 0; f < fine.num_cells(); ++f) {
    const Point x = fine.centroid(f);
    int found = -1;
    for (int k = 0; k < coarse.num_cells() && found < 0; ++k) {
      const int c = (hint + k) % coarse.num_cells();
      if (inside(barycentric(coarse, c, x))) found = c;
    }
    if (found < 0)
      throw ConfigError("containment failure: fine cell " + std::to_string(f) + " lies outside the coarse mesh");
    for (int v : fine.cells[f]) {
      if (!inside(barycentric(coarse, found, fine.nodes[v])))
        throw ConfigError("containment failure: fine cell " + std::to_string(f) +
                          " straddles coarse cell " + std::to_string(found) + " (meshes are not nested)");
    }
    parent[f] = found;
    hint = found;
  }

  std::vector<double> covered(coarse.num_cells(), 0.0);
  for (int f = 0; f < fine.num_cells(); ++f) covered[parent[f]] += fine.signed_area(f);
  for (int c = 0; c < coarse.num_cells(); ++c) {
    const double area = coarse.signed_area(c);
    if (std::abs(covered[c] - area) > 1e-10 * std::max(1.0, area))
      throw ConfigError("containment failure: coarse cell " + std::to_string(c) +
                        " is not exactly covered by fine cells");
  }
  return parent;
}

std::vector<int> node_parents(const TriMesh& fine, const std::vector<int>& cell_parent) {
  std::vector<int> parent(fine.num_nodes(), -1);
  for (int f = 0; f < fine.num_cells(); ++f)
    for (int v : fine.cells[f])
      if (parent[v] < 0) parent[v] = cell_parent[f];
  return parent;
}

}  // namespace

NeighborhoodMap build_neighborhoods(const TriMesh& coarse, const TriMesh& fine) {
  NeighborhoodMap map;
  map.fine_cell_parent = locate_fine_cells(coarse, fine);
  map.fine_node_parent = node_parents(fine, map.fine_cell_parent);

  std::vector<std::vector<int>> children(coarse.num_cells());
  for (int f = 0; f < fine.num_cells(); ++f) children[map.fine_cell_parent[f]].push_back(f);

  map.hoods.resize(coarse.num_nodes());
  for (int i = 0; i < coarse.num_nodes(); ++i) map.hoods[i].coarse_node = i;
  for (int c = 0; c < coarse.num_cells(); ++c)
    for (int v : coarse.cells[c]) map.hoods[v].coarse_cells.push_back(c);

  for (Neighborhood& hood : map.hoods) {
    for (int c : hood.coarse_cells)
      hood.fine_cells.insert(hood.fine_cells.end(), children[c].begin(), children[c].end());
    std::sort(hood.fine_cells.begin(), hood.fine_cells.end());

    std::map<std::pair<int, int>, int> edge_count;
    for (int f : hood.fine_cells) {
      const Cell& cell = fine.cells[f];
      hood.area += fine.signed_area(f);
      for (int e = 0; e < 3; ++e) {
        const int a = cell[e], b = cell[(e + 1) % 3];
        ++edge_count[{std::min(a, b), std::max(a, b)}];
        hood.fine_nodes.push_back(a);
      }
    }
    std::sort(hood.fine_nodes.begin(), hood.fine_nodes.end());
    hood.fine_nodes.erase(std::unique(hood.fine_nodes.begin(), hood.fine_nodes.end()), hood.fine_nodes.end());

    for (const auto& [edge, count] : edge_count) {
      if (count != 1) continue;
      hood.boundary_nodes.push_back(edge.first);
      hood.boundary_nodes.push_back(edge.second);
    }
    std::sort(hood.boundary_nodes.begin(), hood.boundary_nodes.end());
    hood.boundary_nodes.erase(std::unique(hood.boundary_nodes.begin(), hood.boundary_nodes.end()),
                              hood.boundary_nodes.end());
    std::set_difference(hood.fine_nodes.begin(), hood.fine_nodes.end(), hood.boundary_nodes.begin(),
                        hood.boundary_nodes.end(), std::back_inserter(hood.interior_nodes));
  }
  return map;
}

PartitionOfUnity build_pou(const TriMesh& coarse, const TriMesh& fine) {
  const std::vector<int> parent = node_parents(fine, locate_fine_cells(coarse, fine));
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(3 * fine.num_nodes());
  for (int v = 0; v < fine.num_nodes(); ++v) {
    const int c = parent[v];
    if (c < 0) throw ConfigError("fine node " + std::to_string(v) + " belongs to no cell");
    Eigen::Vector3d bary = barycentric(coarse, c, fine.nodes[v]).cwiseMax(0.0).cwiseMin(1.0);
    for (int k = 0; k < 3; ++k)
      if (bary[k] < 1e-13) bary[k] = 0.0;
    bary /= bary.sum();
    for (int k = 0; k < 3; ++k)
      if (bary[k] > 0.0) entries.emplace_back(coarse.cells[c][k], v, bary[k]);
  }
  PartitionOfUnity pou;
  pou.values.resize(coarse.num_nodes(), fine.num_nodes());
  pou.values.setFromTriplets(entries.begin(), entries.end());
  return pou;
}

}  // namespace poromulti
