#include "poromulti/gmsfem.hpp"

#include <algorithm>
#include <stdexcept>

namespace poromulti {

LocalDomain make_local_domain(const TriMesh& fine, const Neighborhood& hood, std::span<const int> fine_regions,
                              const CoefficientModel& model) {
  if (hood.fine_cells.empty()) throw std::invalid_argument("make_local_domain: empty neighborhood");
  LocalDomain d;
  d.hood = hood.coarse_node;
  d.global_cells = hood.fine_cells;
  d.mesh = submesh(fine, hood.fine_cells, d.global_nodes);
  d.area = hood.area;

  // hood.fine_nodes and global_nodes are both the sorted vertex set of the patch.
  auto local_index = [&d](int g) {
    return static_cast<int>(std::lower_bound(d.global_nodes.begin(), d.global_nodes.end(), g) -
                            d.global_nodes.begin());
  };
  for (int g : hood.boundary_nodes) d.boundary.push_back(local_index(g));
  for (int g : hood.interior_nodes) d.interior.push_back(local_index(g));

  std::vector<int> regions(d.global_cells.size());
  for (std::size_t c = 0; c < regions.size(); ++c) regions[c] = fine_regions[d.global_cells[c]];
  d.materials = CellMaterials::build(model, regions);
  return d;
}

std::vector<LocalDomain> make_local_domains(const TriMesh& fine, const NeighborhoodMap& hoods,
                                            std::span<const int> fine_regions, const CoefficientModel& model) {
  std::vector<LocalDomain> out;
  out.reserve(hoods.hoods.size());
  for (const Neighborhood& h : hoods.hoods) out.push_back(make_local_domain(fine, h, fine_regions, model));
  return out;
}

void SnapshotSpace::append_block(const Eigen::MatrixXd& block, int j, std::span<const int> generators,
                                 int duplicate) {
  if (static_cast<Eigen::Index>(generators.size()) != block.cols())
    throw std::invalid_argument("append_block: one generator label per column");
  if (columns.size() > 0 && columns.rows() != block.rows())
    throw std::invalid_argument("append_block: row count mismatch");
  const Eigen::Index start = columns.cols();
  Eigen::MatrixXd grown(block.rows(), start + block.cols());
  if (start > 0) grown.leftCols(start) = columns;
  grown.rightCols(block.cols()) = block;
  columns = std::move(grown);
  block_start.push_back(static_cast<int>(start));
  duplicate_of.push_back(duplicate);
  for (int g : generators) {
    param_index.push_back(j);
    generator.push_back(g);
  }
}

int SnapshotSpace::block_width(int b) const {
  const int end = b + 1 < num_blocks() ? block_start[b + 1] : size();
  return end - block_start[b];
}

Eigen::MatrixXd SnapshotSpace::distinct_columns() const {
  Eigen::Index count = 0;
  for (int b = 0; b < num_blocks(); ++b)
    if (duplicate_of[b] < 0) count += block_width(b);
  Eigen::MatrixXd out(columns.rows(), count);
  Eigen::Index at = 0;
  for (int b = 0; b < num_blocks(); ++b) {
    if (duplicate_of[b] >= 0) continue;
    out.middleCols(at, block_width(b)) = block(b);
    at += block_width(b);
  }
  return out;
}

std::vector<double> uniform_weights(int samples) {
  if (samples < 1) throw std::invalid_argument("uniform_weights: need at least one sample");
  return std::vector<double>(samples, 1.0 / samples);
}

int default_offline_size(std::span<const int> online_sizes, int spare) {
  int largest = 0;
  for (int n : online_sizes) largest = std::max(largest, n);
  return largest + spare;
}

}  // namespace poromulti
