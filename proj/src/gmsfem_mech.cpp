#include "poromulti/gmsfem.hpp"

#include "poromulti/error.hpp"
#include "poromulti/numerics.hpp"
#include "snapshot_blocks.hpp"

#include <stdexcept>
#include <string>

namespace poromulti {

namespace {

std::vector<int> vector_dofs(const std::vector<int>& nodes) {
  std::vector<int> dofs;
  dofs.reserve(2 * nodes.size());
  for (int n : nodes) {
    dofs.push_back(DofMap::displacement(n, 0));
    dofs.push_back(DofMap::displacement(n, 1));
  }
  return dofs;
}

LocalElasticity weighted_average(const LocalDomain& domain, std::span<const double> p_samples,
                                 std::span<const double> weights) {
  const std::size_t cells = domain.mesh.num_cells();
  LocalElasticity bar{std::vector<double>(cells, 0.0), std::vector<double>(cells, 0.0),
                      std::vector<double>(cells, 0.0)};
  for (std::size_t j = 0; j < p_samples.size(); ++j) {
    if (weights[j] < 0.0) throw std::invalid_argument("offline: weights must be non-negative");
    const LocalElasticity c = local_elasticity(domain, Mu{p_samples[j], 0.0});
    for (std::size_t e = 0; e < cells; ++e) {
      bar.lambda[e] += weights[j] * c.lambda[e];
      bar.mu[e] += weights[j] * c.mu[e];
      bar.p_wave[e] += weights[j] * c.p_wave[e];
    }
  }
  return bar;
}

}  // namespace

LocalElasticity local_elasticity(const LocalDomain& domain, const Mu&) {
  return {domain.materials.lame_lambda, domain.materials.lame_mu, domain.materials.p_wave};
}

Eigen::MatrixXd harmonic_block_u(const LocalDomain& domain, const LocalElasticity& c) {
  return detail::harmonic_extension(elasticity_stiffness(domain.mesh, c.lambda, c.mu), vector_dofs(domain.interior),
                                    vector_dofs(domain.boundary));
}

Eigen::MatrixXd spectral_block_u(const LocalDomain& domain, const LocalElasticity& c, int l) {
  if (l < 1 || l > 2 * domain.num_nodes())
    throw std::invalid_argument("spectral snapshots: l must lie in [1, local dofs]");
  return smallest_eigs(elasticity_stiffness(domain.mesh, c.lambda, c.mu), vector_mass(domain.mesh, c.p_wave), l)
      .vectors;
}

SnapshotSpace snapshots_harmonic_u(const LocalDomain& domain, std::span<const double> p_samples) {
  SnapshotSpace s = detail::collect_blocks(
      domain.hood, static_cast<int>(p_samples.size()),
      [&](int j) { return local_elasticity(domain, Mu{p_samples[j], 0.0}); },
      [&](const LocalElasticity& c) { return harmonic_block_u(domain, c); });
  // Generators are boundary dofs 2 l + c in local numbering.
  for (int c = 0; c < s.size(); ++c) {
    const int g = s.generator[c];
    s.generator[c] = DofMap::displacement(domain.boundary[g / 2], g % 2);
  }
  return s;
}

SnapshotSpace snapshots_spectral_u(const LocalDomain& domain, std::span<const double> p_samples, int l) {
  return detail::collect_blocks(
      domain.hood, static_cast<int>(p_samples.size()),
      [&](int j) { return local_elasticity(domain, Mu{p_samples[j], 0.0}); },
      [&](const LocalElasticity& c) { return spectral_block_u(domain, c, l); });
}

OfflineSpace offline_space_u(const SnapshotSpace& snapshots, const LocalDomain& domain,
                             std::span<const double> p_samples, std::span<const double> weights, int n_off) {
  if (p_samples.size() != weights.size()) throw std::invalid_argument("offline: one weight per parameter sample");
  if (n_off < 1) throw std::invalid_argument("offline: n_off must be >= 1");
  const LocalElasticity bar = weighted_average(domain, p_samples, weights);

  const Eigen::MatrixXd Q = orthonormal_range(snapshots.distinct_columns());
  if (Q.cols() == 0) throw NumericalError("offline: snapshot space of neighborhood " + std::to_string(domain.hood) + " is empty");
  const Eigen::MatrixXd Aq = project(elasticity_stiffness(domain.mesh, bar.lambda, bar.mu), Q);
  const Eigen::MatrixXd Nq = project(vector_mass(domain.mesh, bar.p_wave), Q);
  const EigenPairs eig = smallest_eigs(Aq, Nq, std::min<int>(n_off, static_cast<int>(Q.cols())));

  OfflineSpace out;
  out.hood = domain.hood;
  out.basis = Q * eig.vectors;
  out.eigenvalues = eig.values;
  out.snapshot_rank = static_cast<int>(Q.cols());
  return out;
}

OnlineSpace online_space_u(const OfflineSpace& offline, const LocalDomain& domain, const Mu& mu, int n_on) {
  if (n_on < 1) throw std::invalid_argument("online: n_on must be >= 1");
  const LocalElasticity c = local_elasticity(domain, mu);
  const Eigen::MatrixXd Ao = project(elasticity_stiffness(domain.mesh, c.lambda, c.mu), offline.basis);
  const Eigen::MatrixXd No = project(vector_mass(domain.mesh, c.p_wave), offline.basis);
  const EigenPairs eig = smallest_eigs(Ao, No, std::min(n_on, offline.size()));
  OnlineSpace out;
  out.hood = domain.hood;
  out.mu = mu;
  out.basis = offline.basis * eig.vectors;
  out.eigenvalues = eig.values;
  return out;
}

}  // namespace poromulti
