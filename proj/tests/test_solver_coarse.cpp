#include "gmsfem_fixture.hpp"
#include "oracles.hpp"

#include "poromulti/numerics.hpp"

#include <gtest/gtest.h>

using namespace poromulti;

namespace {

// Rows e_k for every dof not in `bc`.
MultiscaleBasis selection(int n, const DirichletConstraints& bc) {
  const std::vector<char> fixed = bc.mask(n);
  std::vector<Eigen::Triplet<double>> t;
  MultiscaleBasis b;
  for (int k = 0; k < n; ++k)
    if (!fixed[k]) {
      t.emplace_back(static_cast<int>(b.row_hood.size()), k, 1.0);
      b.row_hood.push_back(0);
    }
  b.R.resize(static_cast<Eigen::Index>(b.row_hood.size()), n);
  b.R.setFromTriplets(t.begin(), t.end());
  return b;
}

FineBlocks blocks_of(const FineProblem& f, const Vector& p, double tau) {
  return {f.elasticity(), f.coupling().G, f.coupling().D, f.pressure_block(p, tau)};
}

OfflineOptions cheap_options() {
  OfflineOptions opt;
  opt.snapshot = SnapshotKind::Spectral;
  opt.box.n_p = 1;
  opt.spectral_l = 8;
  opt.n_off_p = opt.n_off_u = 8;
  return opt;
}

SolverConfig short_run() {
  SolverConfig c = SolverConfig::from_final_time(0.011, 2);
  return c;
}

}  // namespace

TEST(CoarseProjection, IdentityBasisReproducesFineStep) {
  const FineProblem fine = fixture::fine_problem(12, PermeabilityLaw::ExpPressure);
  const int n = fine.mesh().num_nodes();
  const MultiscaleBasis Rp = selection(n, pressure_constraints(fine.mesh(), fine.boundary_conditions()));
  const MultiscaleBasis Ru = selection(2 * n, displacement_constraints(fine.mesh(), fine.boundary_conditions()));
  const SolverConfig config = short_run();
  const PoroState prev = fine.initial_state(config);
  PoroState iterate = prev;
  iterate.p = oracle::nodal(fine.mesh(), [](const Point& x) { return x.y() * x.y(); });
  const Vector lift = fine.constraints().lift(fine.dofs().total());

  const CoarseSystem sys = project_system(Rp, Ru, blocks_of(fine, iterate.p, config.tau), fine.system_rhs(prev, config.tau), lift);
  EXPECT_EQ(sys.size(), Rp.size() + Ru.size());
  const Vector c = solve_sparse(sys.matrix, sys.rhs);
  const Vector u = prolong(Ru.R, c.head(Ru.size()), lift.head(2 * n));
  const Vector p = prolong(Rp.R, c.tail(Rp.size()), lift.tail(n));

  const PoroState ref = picard_step(fine, prev, iterate, config.tau);
  EXPECT_LT((p - ref.p).cwiseAbs().maxCoeff(), 1e-9);
  EXPECT_LT((u - ref.u).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(CoarseProjection, ConstantRowHasNoStiffnessAndBlocksStaySymmetric) {
  const FineProblem fine = fixture::fine_problem(12, PermeabilityLaw::Linear);
  const int n = fine.mesh().num_nodes();
  MultiscaleBasis Rp;
  Rp.R = Eigen::MatrixXd::Ones(1, n).sparseView();
  Rp.row_hood = {0};
  MultiscaleBasis Ru = selection(2 * n, DirichletConstraints{});
  const SparseMatrix B = pressure_stiffness(fine.mesh(), cell_permeability(fine.model(), fine.regions(), 0.0));
  const FineBlocks blocks{fine.elasticity(), fine.coupling().G, fine.coupling().D, B};
  const Vector zero = Vector::Zero(3 * n);
  const CoarseSystem sys = project_system(Rp, Ru, blocks, zero, zero);
  const Eigen::MatrixXd K(sys.matrix);
  EXPECT_NEAR(K(2 * n, 2 * n), 0.0, 1e-10 * B.diagonal().maxCoeff());
  const Eigen::MatrixXd Auu = K.topLeftCorner(2 * n, 2 * n);
  EXPECT_LT((Auu - Auu.transpose()).cwiseAbs().maxCoeff(), 1e-12 * Auu.cwiseAbs().maxCoeff());

  // R K R' for any R keeps the elastic block symmetric.
  Ru.R = (Eigen::MatrixXd::Random(5, 2 * n)).sparseView();
  const CoarseSystem small = project_system(Rp, Ru, blocks, zero, zero);
  const Eigen::MatrixXd S = Eigen::MatrixXd(small.matrix).topLeftCorner(5, 5);
  EXPECT_LT((S - S.transpose()).cwiseAbs().maxCoeff(), 1e-10 * S.cwiseAbs().maxCoeff());
}

TEST(CoarseProjection, ProlongationAndLeastSquaresRoundTrip) {
  const Eigen::MatrixXd Rd = Eigen::MatrixXd::Random(4, 10);
  const SparseMatrix R = Rd.sparseView();
  const Vector lift = Vector::LinSpaced(10, 0.0, 1.0);
  EXPECT_EQ(prolong(R, Vector::Zero(4), lift), lift);

  const Vector c = Vector::Random(4);
  const Vector fine_vec = prolong(R, c, Vector::Zero(10));
  const Vector back = Rd.transpose().colPivHouseholderQr().solve(fine_vec);
  EXPECT_LT((back - c).norm(), 1e-10);
  EXPECT_THROW(prolong(R, Vector::Zero(3), lift), std::invalid_argument);
}

TEST(MultiscaleSolver, LinearLawAndRefreshCounts) {
  const FineProblem fine = fixture::fine_problem(24, PermeabilityLaw::Linear);
  const CoarseGrid grid = build_coarse_grid(build_structured_mesh(4), fine);
  const OfflineStage stage = build_offline_stage(grid, fine.model(), cheap_options());
  MultiscaleSolver solver(fine, grid, stage, MultiscaleOptions{4, 4});
  const MultiscaleHistory h = solver.run(short_run());
  ASSERT_EQ(h.fine.states.size(), 3u);
  int total = 0;
  for (const PicardTrace& tr : h.fine.picard) {
    EXPECT_TRUE(tr.converged);
    EXPECT_LE(tr.iterations(), 2);
    total += tr.iterations();
  }
  EXPECT_EQ(h.pressure_refreshes, total);
  EXPECT_EQ(h.displacement_refreshes, 1);
  EXPECT_EQ(h.dimension, h.dimension_p + h.dimension_u);
  EXPECT_EQ(h.dimension_p, solver.pressure_basis().size());
  // Split rigid modes leave dependent rows; the solve keeps a spanning subset.
  const Eigen::MatrixXd all(solver.displacement_basis().R), used(solver.displacement_solve_basis().R);
  EXPECT_LT(h.solve_dimension, h.dimension);
  EXPECT_EQ(h.solve_dimension, h.dimension_p + used.rows());
  EXPECT_LT(oracle::projection_residual(used.transpose(), all.transpose()), 1e-8);

  MultiscaleSolver per_step(fine, grid, stage, MultiscaleOptions{4, 4, RefreshPolicy::PerStep});
  EXPECT_EQ(per_step.run(short_run()).pressure_refreshes, 2);
}

TEST(MultiscaleSolver, NonlinearRunIsDeterministic) {
  const FineProblem fine = fixture::fine_problem(24, PermeabilityLaw::ExpPressure);
  const CoarseGrid grid = build_coarse_grid(build_structured_mesh(4), fine);
  const OfflineStage stage = build_offline_stage(grid, fine.model(), cheap_options());
  MultiscaleSolver a(fine, grid, stage, MultiscaleOptions{4, 4});
  MultiscaleSolver b(fine, grid, stage, MultiscaleOptions{4, 4});
  const MultiscaleHistory ha = a.run(short_run()), hb = b.run(short_run());
  for (std::size_t s = 0; s < ha.fine.states.size(); ++s) {
    EXPECT_EQ(ha.fine.states[s].p, hb.fine.states[s].p);
    EXPECT_EQ(ha.fine.states[s].u, hb.fine.states[s].u);
  }
  // Dirichlet values hold exactly on the prolonged pressure.
  const DirichletConstraints bc = pressure_constraints(fine.mesh(), fine.boundary_conditions());
  for (int k = 0; k < bc.size(); ++k) EXPECT_EQ(ha.fine.states.back().p[bc.dofs()[k]], bc.values()[k]);
}

TEST(MultiscaleSolver, ConstantDataStayConstant) {
  const TriMesh mesh = build_structured_mesh(24);
  CoefficientModel model;
  const FineProblem fine(mesh, cell_regions(mesh, GeometrySpec::default_layout()), model,
                         BoundaryConditions::standard(0.5, 0.5));
  const CoarseGrid grid = build_coarse_grid(build_structured_mesh(4), fine);
  const OfflineStage stage = build_offline_stage(grid, model, cheap_options());
  MultiscaleSolver solver(fine, grid, stage, MultiscaleOptions{2, 4});
  SolverConfig config = short_run();
  config.p_init = 0.5;
  const MultiscaleHistory h = solver.run(config);
  EXPECT_LT((h.fine.states.back().p.array() - 0.5).abs().maxCoeff(), 1e-9);
  EXPECT_LT(h.fine.states.back().u.cwiseAbs().maxCoeff(), 1e-9);
}
