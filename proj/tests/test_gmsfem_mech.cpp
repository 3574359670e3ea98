#include "gmsfem_fixture.hpp"
#include "oracles.hpp"

#include "poromulti/numerics.hpp"

#include <gtest/gtest.h>

using namespace poromulti;

namespace {

struct MechSetup {
  FineProblem fine;
  CoarseGrid grid;
  const LocalDomain& domain() const { return grid.domains[fixture::interior_hood(4)]; }
};

MechSetup setup(bool homogeneous = false) {
  FineProblem fine = fixture::fine_problem(24, PermeabilityLaw::ExpPressure, homogeneous);
  CoarseGrid grid = build_coarse_grid(build_structured_mesh(4), fine);
  return {std::move(fine), std::move(grid)};
}

Eigen::VectorXd boundary_data(const LocalDomain& d, const std::function<Eigen::Vector2d(const Point&)>& f) {
  Eigen::VectorXd g(2 * d.boundary.size());
  for (std::size_t b = 0; b < d.boundary.size(); ++b) g.segment<2>(2 * b) = f(d.mesh.nodes[d.boundary[b]]);
  return g;
}

}  // namespace

TEST(DisplacementSnapshots, HarmonicReproducesRigidAndAffineData) {
  const MechSetup s = setup();
  const LocalDomain& d = s.domain();
  const Eigen::MatrixXd X = harmonic_block_u(d, local_elasticity(d, Mu{}));
  ASSERT_EQ(X.rows(), 2 * d.num_nodes());
  ASSERT_EQ(X.cols(), static_cast<Eigen::Index>(2 * d.boundary.size()));

  const auto translation = [](const Point&) { return Eigen::Vector2d(1.0, 0.0); };
  EXPECT_LT((X * boundary_data(d, translation) - oracle::nodal2(d.mesh, translation)).cwiseAbs().maxCoeff(), 1e-10);

  // x-components sum to (1, 0) at every node.
  Eigen::VectorXd xsum = Eigen::VectorXd::Zero(X.rows());
  for (Eigen::Index c = 0; c < X.cols(); c += 2) xsum += X.col(c);
  for (int l = 0; l < d.num_nodes(); ++l) {
    EXPECT_NEAR(xsum[2 * l], 1.0, 1e-10);
    EXPECT_NEAR(xsum[2 * l + 1], 0.0, 1e-10);
  }

  const MechSetup h = setup(true);
  const LocalDomain& dh = h.domain();
  const Eigen::MatrixXd Xh = harmonic_block_u(dh, local_elasticity(dh, Mu{}));
  const auto stretch = [](const Point& x) { return Eigen::Vector2d(x.x(), 0.0); };
  EXPECT_LT((Xh * boundary_data(dh, stretch) - oracle::nodal2(dh.mesh, stretch)).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(DisplacementSnapshots, ThreeRigidModesAndScaling) {
  const MechSetup s = setup();
  const LocalDomain& d = s.domain();
  const LocalElasticity c = local_elasticity(d, Mu{});
  const SparseMatrix A = elasticity_stiffness(d.mesh, c.lambda, c.mu);
  const SparseMatrix N = vector_mass(d.mesh, c.p_wave);
  const EigenPairs e = smallest_eigs(A, N, 6);
  for (int j = 0; j < 3; ++j) EXPECT_NEAR(e.values[j], 0.0, 1e-8);
  EXPECT_GT(e.values[3], 1e-3);

  LocalElasticity scaled = c;
  for (auto* v : {&scaled.lambda, &scaled.mu, &scaled.p_wave})
    for (double& x : *v) x *= 3.0;
  const EigenPairs f = smallest_eigs(elasticity_stiffness(d.mesh, scaled.lambda, scaled.mu),
                                     vector_mass(d.mesh, scaled.p_wave), 6);
  for (int j = 3; j < 6; ++j) EXPECT_NEAR(f.values[j], e.values[j], 1e-8 * e.values[j]);
}

TEST(DisplacementSnapshots, ParameterBlocksCollapse) {
  const MechSetup s = setup();
  const LocalDomain& d = s.domain();
  const std::vector<double> ps = {0.0, 0.5, 1.0};
  const SnapshotSpace h = snapshots_harmonic_u(d, ps);
  EXPECT_EQ(h.size(), static_cast<int>(3 * 2 * d.boundary.size()));
  EXPECT_EQ(h.duplicate_of, (std::vector<int>{-1, 0, 0}));
  EXPECT_EQ(h.distinct_columns().cols(), static_cast<Eigen::Index>(2 * d.boundary.size()));
  for (int c = 0; c < h.size(); ++c) {
    const int dof = h.generator[c];
    EXPECT_NEAR(h.columns(dof, c), 1.0, 1e-12);
  }
  const SnapshotSpace sp = snapshots_spectral_u(d, ps, 8);
  EXPECT_EQ(sp.size(), 24);
  EXPECT_EQ(sp.distinct_columns().cols(), 8);
}

TEST(DisplacementOnline, IndependentOfParameter) {
  const MechSetup s = setup();
  const LocalDomain& d = s.domain();
  const std::vector<double> ps = {0.0, 1.0};
  const OfflineSpace off = offline_space_u(snapshots_spectral_u(d, ps, 12), d, ps, uniform_weights(2), 12);
  EXPECT_EQ(off.size(), 12);
  const OnlineSpace a = online_space_u(off, d, Mu{0.1, 0.0}, 6);
  const OnlineSpace b = online_space_u(off, d, Mu{0.9, 0.3}, 6);
  EXPECT_LT((a.basis - b.basis).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT(oracle::projection_residual(off.basis, a.basis), 1e-10);
}

TEST(DisplacementBasis, ComponentRowsAndDimensions) {
  const FineProblem fine = fixture::fine_problem(60, PermeabilityLaw::Linear);
  for (auto [n, n_on_p, n_on_u, expected] : {std::tuple{5, 2, 4, 360}, std::tuple{10, 12, 12, 4356}}) {
    const CoarseGrid grid = build_coarse_grid(build_structured_mesh(n), fine);
    OfflineOptions opt;
    opt.snapshot = SnapshotKind::Spectral;
    opt.box.n_p = 1;
    opt.spectral_l = 16;
    opt.n_off_p = opt.n_off_u = 16;
    const OfflineStage stage = build_offline_stage(grid, fine.model(), opt);
    ASSERT_EQ(stage.pressure.size(), static_cast<std::size_t>(grid.num_nodes()));

    std::vector<OnlineSpace> p_spaces, u_spaces;
    for (int i = 0; i < grid.num_nodes(); ++i) {
      p_spaces.push_back(online_space_p(stage.pressure[i], grid.domains[i], fine.model(), Mu{}, n_on_p));
      u_spaces.push_back(online_space_u(stage.displacement[i], grid.domains[i], Mu{}, n_on_u));
    }
    const int nf = fine.mesh().num_nodes();
    const MultiscaleBasis Rp =
        assemble_Rp(p_spaces, grid.domains, grid.pou, pressure_constraints(fine.mesh(), fine.boundary_conditions()), nf);
    const MultiscaleBasis Ru = assemble_Ru(u_spaces, grid.domains, grid.pou,
                                           displacement_constraints(fine.mesh(), fine.boundary_conditions()), nf);
    EXPECT_EQ(Rp.size() + Ru.size(), expected) << "coarse n = " << n;
    EXPECT_EQ(Ru.R.cols(), 2 * nf);

    if (n != 5) continue;
    // Each eigenfunction contributes one row carrying only x dofs and one carrying only y dofs.
    const Eigen::MatrixXd R(Ru.R);
    for (int r = 0; r < Ru.size(); ++r) {
      bool has_x = false, has_y = false;
      for (int v = 0; v < nf; ++v) {
        has_x |= R(r, 2 * v) != 0.0;
        has_y |= R(r, 2 * v + 1) != 0.0;
      }
      EXPECT_FALSE(has_x && has_y) << "row " << r;
    }
    // Without constraints their sum is the unsplit function.
    const MultiscaleBasis free = assemble_Ru(u_spaces, grid.domains, grid.pou, DirichletConstraints{}, nf);
    const Eigen::MatrixXd F(free.R);
    const int i = fixture::interior_hood(n);
    const LocalDomain& d = grid.domains[i];
    int row = 0;
    while (free.row_hood[row] != i) ++row;
    const Eigen::VectorXd sum = F.row(row) + F.row(row + 1);
    for (int l = 0; l < d.num_nodes(); ++l) {
      const int g = d.global_nodes[l];
      for (int c = 0; c < 2; ++c)
        EXPECT_NEAR(sum[2 * g + c], grid.pou(i, g) * u_spaces[i].basis(2 * l + c, 0), 1e-12);
    }
  }
}
