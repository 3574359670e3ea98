#include "poromulti/gmsfem.hpp"

#include "poromulti/error.hpp"
#include "poromulti/numerics.hpp"
#include "snapshot_blocks.hpp"

#include <Eigen/SparseCholesky>

#include <stdexcept>
#include <string>

namespace poromulti {
Eigen::MatrixXd detail::harmonic_extension(const SparseMatrix& A, const std::vector<int>& interior,
                                           const std::vector<int>& boundary) {
  const int n = static_cast<int>(A.rows());
  std::vector<int> slot(n, -1);
  std::vector<char> on_boundary(n, 0);
  for (std::size_t i = 0; i < interior.size(); ++i) slot[interior[i]] = static_cast<int>(i);
  for (std::size_t i = 0; i < boundary.size(); ++i) {
    slot[boundary[i]] = static_cast<int>(i);
    on_boundary[boundary[i]] = 1;
  }
  const int ni = static_cast<int>(interior.size()), nb = static_cast<int>(boundary.size());

  std::vector<Eigen::Triplet<double>> tii, tib;
  for (int k = 0; k < A.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(A, k); it; ++it) {
      const int r = static_cast<int>(it.row()), c = static_cast<int>(it.col());
      if (on_boundary[r] || slot[r] < 0) continue;
      if (on_boundary[c])
        tib.emplace_back(slot[r], slot[c], it.value());
      else if (slot[c] >= 0)
        tii.emplace_back(slot[r], slot[c], it.value());
    }
  }

  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, nb);
  for (int b = 0; b < nb; ++b) out(boundary[b], b) = 1.0;
  if (ni == 0) return out;

  SparseMatrix Aii(ni, ni), Aib(ni, nb);
  Aii.setFromTriplets(tii.begin(), tii.end());
  Aib.setFromTriplets(tib.begin(), tib.end());
  const Eigen::SimplicialLDLT<SparseMatrix> ldlt(Aii);
  if (ldlt.info() != Eigen::Success) throw NumericalError("harmonic extension: singular local interior system");
  const Eigen::MatrixXd xi = ldlt.solve(-Eigen::MatrixXd(Aib));
  if (ldlt.info() != Eigen::Success) throw NumericalError("harmonic extension: local solve failed");
  for (int i = 0; i < ni; ++i) out.row(interior[i]) = xi.row(i);
  return out;
}

std::vector<double> local_permeability(const LocalDomain& domain, const CoefficientModel& model, double p_bar) {
  return cell_permeability(model, domain.materials.region, p_bar);
}

Eigen::MatrixXd harmonic_block_p(const LocalDomain& domain, std::span<const double> k) {
  return detail::harmonic_extension(pressure_stiffness(domain.mesh, k), domain.interior, domain.boundary);
}

Eigen::MatrixXd spectral_block_p(const LocalDomain& domain, std::span<const double> k, int l) {
  if (l < 1 || l > domain.num_nodes())
    throw std::invalid_argument("spectral snapshots: l must lie in [1, local dofs]");
  return smallest_eigs(pressure_stiffness(domain.mesh, k), weighted_mass(domain.mesh, k), l).vectors;
}

SnapshotSpace snapshots_harmonic_p(const LocalDomain& domain, const CoefficientModel& model,
                                   std::span<const double> p_samples) {
  SnapshotSpace s = detail::collect_blocks(
      domain.hood, static_cast<int>(p_samples.size()),
      [&](int j) { return local_permeability(domain, model, p_samples[j]); },
      [&](const std::vector<double>& k) { return harmonic_block_p(domain, k); });
  // Generators of harmonic snapshots are boundary node ids.
  for (int c = 0; c < s.size(); ++c) s.generator[c] = domain.boundary[s.generator[c]];
  return s;
}

SnapshotSpace snapshots_spectral_p(const LocalDomain& domain, const CoefficientModel& model,
                                   std::span<const double> p_samples, int l) {
  return detail::collect_blocks(
      domain.hood, static_cast<int>(p_samples.size()),
      [&](int j) { return local_permeability(domain, model, p_samples[j]); },
      [&](const std::vector<double>& k) { return spectral_block_p(domain, k, l); });
}

OfflineSpace offline_space_p(const SnapshotSpace& snapshots, const LocalDomain& domain,
                             const CoefficientModel& model, std::span<const double> p_samples,
                             std::span<const double> weights, int n_off) {
  if (p_samples.size() != weights.size()) throw std::invalid_argument("offline: one weight per parameter sample");
  if (n_off < 1) throw std::invalid_argument("offline: n_off must be >= 1");
  std::vector<double> k_bar(domain.mesh.num_cells(), 0.0);
  for (std::size_t j = 0; j < p_samples.size(); ++j) {
    if (weights[j] < 0.0) throw std::invalid_argument("offline: weights must be non-negative");
    const std::vector<double> k = local_permeability(domain, model, p_samples[j]);
    for (std::size_t c = 0; c < k.size(); ++c) k_bar[c] += weights[j] * k[c];
  }

  const Eigen::MatrixXd Q = orthonormal_range(snapshots.distinct_columns());
  if (Q.cols() == 0) throw NumericalError("offline: snapshot space of neighborhood " + std::to_string(domain.hood) + " is empty");
  const Eigen::MatrixXd Bq = project(pressure_stiffness(domain.mesh, k_bar), Q);
  const Eigen::MatrixXd Mq = project(weighted_mass(domain.mesh, k_bar), Q);
  const EigenPairs eig = smallest_eigs(Bq, Mq, std::min<int>(n_off, static_cast<int>(Q.cols())));

  OfflineSpace out;
  out.hood = domain.hood;
  out.basis = Q * eig.vectors;
  out.eigenvalues = eig.values;
  out.snapshot_rank = static_cast<int>(Q.cols());
  return out;
}

OnlineSpace online_space_p(const OfflineSpace& offline, const LocalDomain& domain, const CoefficientModel& model,
                           const Mu& mu, int n_on) {
  if (n_on < 1) throw std::invalid_argument("online: n_on must be >= 1");
  const std::vector<double> k = local_permeability(domain, model, mu.p_bar);
  const Eigen::MatrixXd Bo = project(pressure_stiffness(domain.mesh, k), offline.basis);
  const Eigen::MatrixXd Mo = project(weighted_mass(domain.mesh, k), offline.basis);
  const EigenPairs eig = smallest_eigs(Bo, Mo, std::min(n_on, offline.size()));
  OnlineSpace out;
  out.hood = domain.hood;
  out.mu = mu;
  out.basis = offline.basis * eig.vectors;
  out.eigenvalues = eig.values;
  return out;
}

}  // namespace poromulti
