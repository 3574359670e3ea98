#pragma once

#include "poromulti/mesh.hpp"

#include <Eigen/SparseCore>

#include <vector>

namespace poromulti {

/// Fine-grid content of the coarse neighborhood of one coarse node: the union
/// of coarse cells sharing that node.
struct Neighborhood {
  int coarse_node = -1;
  std::vector<int> coarse_cells;
  std::vector<int> fine_cells;      // sorted
  std::vector<int> fine_nodes;      // all fine nodes in the closure, sorted
  std::vector<int> interior_nodes;  // sorted
  std::vector<int> boundary_nodes;  // fine nodes on the patch boundary, sorted
  double area = 0.0;
};

struct NeighborhoodMap {
  std::vector<Neighborhood> hoods;     // indexed by coarse node
  std::vector<int> fine_cell_parent;   // coarse cell containing each fine cell
  std::vector<int> fine_node_parent;   // one coarse cell containing each fine node

  int size() const { return static_cast<int>(hoods.size()); }
};

/// Requires `fine` to be nested in `coarse`; throws ConfigError otherwise.
NeighborhoodMap build_neighborhoods(const TriMesh& coarse, const TriMesh& fine);

/// Coarse P1 hat functions sampled at fine nodes.
struct PartitionOfUnity {
  Eigen::SparseMatrix<double, Eigen::RowMajor> values;  // coarse nodes x fine nodes

  double operator()(int coarse_node, int fine_node) const {
    return values.coeff(coarse_node, fine_node);
  }
};

PartitionOfUnity build_pou(const TriMesh& coarse, const TriMesh& fine);

}  // namespace poromulti
