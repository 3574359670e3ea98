#include "poromulti/solver_coarse.hpp"

#include "poromulti/error.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <string>

namespace poromulti {

CoarseGrid build_coarse_grid(TriMesh coarse, const FineProblem& fine) {
  validate_mesh(coarse);
  CoarseGrid g;
  g.mesh = std::move(coarse);
  g.hoods = build_neighborhoods(g.mesh, fine.mesh());
  g.pou = build_pou(g.mesh, fine.mesh());
  g.domains = make_local_domains(fine.mesh(), g.hoods, fine.regions(), fine.model());
  return g;
}

OfflineStage build_offline_stage(const CoarseGrid& grid, const CoefficientModel& model,
                                 const OfflineOptions& options) {
  if (options.n_off_p < 1 || options.n_off_u < 1) throw std::invalid_argument("offline stage: n_off must be >= 1");
  OfflineStage stage;
  stage.options = options;
  stage.p_samples = parameter_grid(options.box).p;
  stage.weights = uniform_weights(static_cast<int>(stage.p_samples.size()));
  for (const LocalDomain& d : grid.domains) {
    const bool spectral = options.snapshot == SnapshotKind::Spectral;
    {
      const SnapshotSpace snap = spectral
                                     ? snapshots_spectral_p(d, model, stage.p_samples,
                                                            std::min(options.spectral_l, d.num_nodes()))
                                     : snapshots_harmonic_p(d, model, stage.p_samples);
      stage.pressure.push_back(offline_space_p(snap, d, model, stage.p_samples, stage.weights, options.n_off_p));
    }
    {
      const SnapshotSpace snap = spectral ? snapshots_spectral_u(d, stage.p_samples,
                                                                 std::min(options.spectral_l, 2 * d.num_nodes()))
                                          : snapshots_harmonic_u(d, stage.p_samples);
      stage.displacement.push_back(offline_space_u(snap, d, stage.p_samples, stage.weights, options.n_off_u));
    }
  }
  return stage;
}

CoarseSystem project_system(const MultiscaleBasis& Rp, const MultiscaleBasis& Ru, const FineBlocks& blocks,
                            const Vector& rhs, const Vector& lift) {
  const Eigen::Index nu = blocks.A.rows(), np = blocks.C.rows();
  if (blocks.A.cols() != nu || blocks.C.cols() != np || blocks.G.rows() != nu || blocks.G.cols() != np ||
      blocks.D.rows() != np || blocks.D.cols() != nu)
    throw std::invalid_argument("project_system: inconsistent fine blocks");
  if (Ru.R.cols() != nu || Rp.R.cols() != np) throw std::invalid_argument("project_system: basis does not match blocks");
  if (rhs.size() != nu + np || lift.size() != nu + np) throw std::invalid_argument("project_system: vector length");

  const SparseMatrix RuT = Ru.R.transpose();
  const SparseMatrix RpT = Rp.R.transpose();
  const SparseMatrix Acc = (Ru.R * (blocks.A * RuT)).pruned();
  const SparseMatrix Gcc = (Ru.R * (blocks.G * RpT)).pruned();
  const SparseMatrix Dcc = (Rp.R * (blocks.D * RuT)).pruned();
  const SparseMatrix Ccc = (Rp.R * (blocks.C * RpT)).pruned();

  const Vector gu = lift.head(nu), gp = lift.tail(np);
  const Vector ru = rhs.head(nu) - blocks.A * gu - blocks.G * gp;
  const Vector rp = rhs.tail(np) - blocks.D * gu - blocks.C * gp;

  CoarseSystem sys;
  sys.matrix = block_system(Acc, Gcc, Dcc, Ccc);
  sys.matrix.makeCompressed();
  sys.rhs.resize(Ru.size() + Rp.size());
  sys.rhs.head(Ru.size()) = Ru.R * ru;
  sys.rhs.tail(Rp.size()) = Rp.R * rp;
  return sys;
}

Vector prolong(const SparseMatrix& R, const Vector& coarse, const Vector& lift) {
  if (R.rows() != coarse.size() || R.cols() != lift.size()) throw std::invalid_argument("prolong: dimension mismatch");
  return R.transpose() * coarse + lift;
}

MultiscaleSolver::MultiscaleSolver(const FineProblem& fine, const CoarseGrid& grid, const OfflineStage& offline,
                                   MultiscaleOptions options)
    : fine_(fine), grid_(grid), offline_(offline), options_(options) {
  if (options_.n_on_p < 1 || options_.n_on_u < 1) throw std::invalid_argument("multiscale: N_on must be >= 1");
  const int nodes = static_cast<int>(grid_.domains.size());
  if (nodes != grid_.num_nodes() || static_cast<int>(offline_.pressure.size()) != nodes ||
      static_cast<int>(offline_.displacement.size()) != nodes)
    throw std::invalid_argument("multiscale: offline stage does not match coarse grid");
  pressure_bc_ = pressure_constraints(fine_.mesh(), fine_.boundary_conditions());
  displacement_bc_ = displacement_constraints(fine_.mesh(), fine_.boundary_conditions());
  lift_ = fine_.constraints().lift(fine_.dofs().total());
}

void MultiscaleSolver::refresh_pressure(const PoroState& iterate) {
  const std::vector<Mu> mus = neighborhood_parameters(iterate.p, iterate.u, fine_.mesh(), grid_.hoods);
  std::vector<OnlineSpace> spaces;
  spaces.reserve(mus.size());
  for (std::size_t i = 0; i < mus.size(); ++i)
    spaces.push_back(online_space_p(offline_.pressure[i], grid_.domains[i], fine_.model(), mus[i], options_.n_on_p));
  rp_ = assemble_Rp(spaces, grid_.domains, grid_.pou, pressure_bc_, fine_.mesh().num_nodes());
  ++pressure_refreshes_;
}

void MultiscaleSolver::refresh_displacement(const PoroState& iterate) {
  const std::vector<Mu> mus = neighborhood_parameters(iterate.p, iterate.u, fine_.mesh(), grid_.hoods);
  std::vector<OnlineSpace> spaces;
  spaces.reserve(mus.size());
  for (std::size_t i = 0; i < mus.size(); ++i)
    spaces.push_back(online_space_u(offline_.displacement[i], grid_.domains[i], mus[i], options_.n_on_u));
  ru_ = assemble_Ru(spaces, grid_.domains, grid_.pou, displacement_bc_, fine_.mesh().num_nodes());
  const std::vector<int> rows = independent_rows(ru_.R);
  std::vector<Eigen::Triplet<double>> pick;
  ru_active_ = {};
  for (std::size_t k = 0; k < rows.size(); ++k) {
    pick.emplace_back(static_cast<int>(k), rows[k], 1.0);
    ru_active_.row_hood.push_back(ru_.row_hood[rows[k]]);
  }
  SparseMatrix S(static_cast<Eigen::Index>(rows.size()), ru_.R.rows());
  S.setFromTriplets(pick.begin(), pick.end());
  ru_active_.R = S * ru_.R;
  ru_active_.R.makeCompressed();
  ++displacement_refreshes_;
}

PoroState MultiscaleSolver::coarse_picard_step(const PoroState& previous, const PoroState& iterate, double tau,
                                               bool refresh) {
  if (refresh || rp_.size() == 0) refresh_pressure(iterate);
  if (ru_.size() == 0) refresh_displacement(iterate);

  const FineBlocks blocks{fine_.elasticity(), fine_.coupling().G, fine_.coupling().D,
                          fine_.pressure_block(iterate.p, tau)};
  const CoarseSystem sys = project_system(rp_, ru_active_, blocks, fine_.system_rhs(previous, tau), lift_);
  lu_.factorize(sys.matrix);
  // Projected systems can be poorly conditioned; a few steps of iterative
  // refinement bring the residual back to the LU backward error.
  const double bound = 1e-8 * std::max(sys.rhs.norm(), 1e-300);
  Vector c = lu_.solve(sys.rhs);
  Vector r = sys.rhs - sys.matrix * c;
  for (int k = 0; k < 3 && r.norm() > bound; ++k) {
    c += lu_.solve(r);
    r = sys.rhs - sys.matrix * c;
  }
  const double rn = r.norm();
  if (!std::isfinite(rn) || rn > bound) {
    char msg[96];
    std::snprintf(msg, sizeof msg, "coarse coupled solve residual too large: %.3e relative", rn / (bound * 1e8));
    throw NumericalError(msg);
  }

  const int nu = fine_.dofs().displacement_dofs(), np = fine_.dofs().pressure_dofs();
  PoroState next;
  next.u = prolong(ru_active_.R, c.head(ru_active_.size()), lift_.head(nu));
  next.p = prolong(rp_.R, c.tail(rp_.size()), lift_.tail(np));
  next.t = previous.t + tau;
  return next;
}

MultiscaleHistory MultiscaleSolver::run(const SolverConfig& config) {
  config.validate();
  rp_ = {};
  ru_ = {};
  ru_active_ = {};
  pressure_refreshes_ = displacement_refreshes_ = 0;
  MultiscaleHistory out;
  out.fine.states.push_back(fine_.initial_state(config));
  for (int n = 0; n < config.steps; ++n) {
    const PoroState& previous = out.fine.states.back();
    PoroState iterate = previous;
    PicardTrace trace;
    for (int j = 0; j < config.max_picard; ++j) {
      const bool refresh = options_.refresh == RefreshPolicy::PerIteration || j == 0;
      PoroState next = coarse_picard_step(previous, iterate, config.tau, refresh);
      const double diff = fine_.l2_norm(next.p - iterate.p);
      trace.residuals.push_back(diff);
      iterate = std::move(next);
      if (diff <= config.picard_tol) {
        trace.converged = true;
        break;
      }
    }
    if (!trace.converged) {
      std::ostringstream msg;
      msg << "multiscale Picard iteration did not converge in step " << n + 1 << "; residuals:";
      for (double r : trace.residuals) msg << ' ' << r;
      throw NumericalError(msg.str());
    }
    out.fine.picard.push_back(std::move(trace));
    out.fine.states.push_back(std::move(iterate));
  }
  out.dimension_p = rp_.size();
  out.dimension_u = ru_.size();
  out.dimension = out.dimension_p + out.dimension_u;
  out.solve_dimension = out.dimension_p + ru_active_.size();
  out.pressure_refreshes = pressure_refreshes_;
  out.displacement_refreshes = displacement_refreshes_;
  return out;
}

}  // namespace poromulti
