#pragma once

#include "poromulti/assembly.hpp"
#include "poromulti/gmsfem.hpp"

#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

namespace poromulti::detail {

/// Harmonic extension of unit data at each boundary dof of a local operator.
Eigen::MatrixXd harmonic_extension(const SparseMatrix& A, const std::vector<int>& interior,
                                   const std::vector<int>& boundary);

/// Builds one snapshot block per parameter sample. Samples whose coefficients
/// coincide with an earlier sample reuse that block and are marked as copies.
template <typename CoeffFn, typename BlockFn>
SnapshotSpace collect_blocks(int hood, int samples, CoeffFn&& coefficients_of, BlockFn&& block_of) {
  if (samples < 1) throw std::invalid_argument("snapshots: empty parameter grid");
  using Coeff = decltype(coefficients_of(0));
  SnapshotSpace space;
  space.hood = hood;
  std::vector<std::pair<Coeff, int>> distinct;
  for (int j = 0; j < samples; ++j) {
    Coeff c = coefficients_of(j);
    int source = -1;
    for (const auto& [seen, block] : distinct)
      if (seen == c) source = block;
    const Eigen::MatrixXd block = source >= 0 ? space.block(source) : block_of(c);
    std::vector<int> generators(block.cols());
    std::iota(generators.begin(), generators.end(), 0);
    space.append_block(block, j, generators, source);
    if (source < 0) distinct.emplace_back(std::move(c), j);
  }
  return space;
}

}  // namespace poromulti::detail
