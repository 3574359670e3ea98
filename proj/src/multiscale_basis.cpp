#include "poromulti/gmsfem.hpp"

#include <cmath>
#include <iostream>
#include <stdexcept>

namespace poromulti {

namespace {

// Accumulates candidate rows and keeps those that survive Dirichlet zeroing.
class RowBuilder {
public:
  explicit RowBuilder(int cols) : cols_(cols) {}

  void begin() { entries_.clear(); raw_norm_ = 0.0; }
  void add(int col, double value, bool constrained) {
    raw_norm_ += value * value;
    if (!constrained && value != 0.0) entries_.emplace_back(col, value);
  }
  void finish(int hood) {
    double kept = 0.0;
    for (const auto& [c, v] : entries_) kept += v * v;
    if (kept <= 1e-24 * raw_norm_ || kept == 0.0) {
      ++basis_.dropped_rows;
      return;
    }
    const int row = static_cast<int>(basis_.row_hood.size());
    for (const auto& [c, v] : entries_) triplets_.emplace_back(row, c, v);
    basis_.row_hood.push_back(hood);
  }

  MultiscaleBasis take(const char* name) {
    basis_.R.resize(static_cast<Eigen::Index>(basis_.row_hood.size()), cols_);
    basis_.R.setFromTriplets(triplets_.begin(), triplets_.end());
    basis_.R.makeCompressed();
    if (basis_.dropped_rows > 0)
      std::cerr << "warning: " << name << ": dropped " << basis_.dropped_rows
                << " basis rows that vanish after Dirichlet zeroing\n";
    return std::move(basis_);
  }

private:
  int cols_;
  MultiscaleBasis basis_;
  std::vector<std::pair<int, double>> entries_;
  std::vector<Eigen::Triplet<double>> triplets_;
  double raw_norm_ = 0.0;
};

void check_inputs(std::span<const OnlineSpace> spaces, std::span<const LocalDomain> domains,
                  const PartitionOfUnity& pou, int fine_nodes) {
  if (spaces.size() != domains.size() || static_cast<Eigen::Index>(spaces.size()) != pou.values.rows())
    throw std::invalid_argument("assemble basis: one online space and domain per coarse node");
  if (pou.values.cols() != fine_nodes) throw std::invalid_argument("assemble basis: partition of unity size");
}

}  // namespace

MultiscaleBasis assemble_Rp(std::span<const OnlineSpace> spaces, std::span<const LocalDomain> domains,
                            const PartitionOfUnity& pou, const DirichletConstraints& pressure_bc, int fine_nodes) {
  check_inputs(spaces, domains, pou, fine_nodes);
  const std::vector<char> fixed = pressure_bc.mask(fine_nodes);
  RowBuilder rows(fine_nodes);
  for (std::size_t i = 0; i < spaces.size(); ++i) {
    const LocalDomain& d = domains[i];
    if (spaces[i].basis.rows() != d.num_nodes()) throw std::invalid_argument("assemble_Rp: basis row count");
    for (int k = 0; k < spaces[i].size(); ++k) {
      rows.begin();
      for (int l = 0; l < d.num_nodes(); ++l) {
        const int g = d.global_nodes[l];
        rows.add(g, pou(static_cast<int>(i), g) * spaces[i].basis(l, k), fixed[g]);
      }
      rows.finish(static_cast<int>(i));
    }
  }
  return rows.take("R_p");
}

MultiscaleBasis assemble_Ru(std::span<const OnlineSpace> spaces, std::span<const LocalDomain> domains,
                            const PartitionOfUnity& pou, const DirichletConstraints& displacement_bc,
                            int fine_nodes) {
  check_inputs(spaces, domains, pou, fine_nodes);
  const std::vector<char> fixed = displacement_bc.mask(2 * fine_nodes);
  RowBuilder rows(2 * fine_nodes);
  for (std::size_t i = 0; i < spaces.size(); ++i) {
    const LocalDomain& d = domains[i];
    if (spaces[i].basis.rows() != 2 * d.num_nodes()) throw std::invalid_argument("assemble_Ru: basis row count");
    for (int k = 0; k < spaces[i].size(); ++k) {
      for (int comp = 0; comp < 2; ++comp) {
        rows.begin();
        for (int l = 0; l < d.num_nodes(); ++l) {
          const int g = d.global_nodes[l];
          const int dof = DofMap::displacement(g, comp);
          rows.add(dof, pou(static_cast<int>(i), g) * spaces[i].basis(DofMap::displacement(l, comp), k), fixed[dof]);
        }
        rows.finish(static_cast<int>(i));
      }
    }
  }
  return rows.take("R_u");
}

}  // namespace poromulti
