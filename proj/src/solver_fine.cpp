#include "poromulti/solver_fine.hpp"

#include "poromulti/error.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

namespace poromulti {

void SolverConfig::validate() const {
  if (!(tau > 0.0)) throw ConfigError("time step must be positive");
  if (steps < 1) throw ConfigError("number of time steps must be >= 1");
  if (!(picard_tol > 0.0)) throw ConfigError("Picard tolerance must be positive");
  if (max_picard < 1) throw ConfigError("Picard iteration cap must be >= 1");
}

SolverConfig SolverConfig::from_final_time(double t_max, int steps) {
  SolverConfig c;
  c.steps = steps;
  c.tau = t_max / steps;
  return c;
}

double SolutionHistory::mean_picard_iterations() const {
  if (picard.empty()) return 0.0;
  double sum = 0.0;
  for (const PicardTrace& t : picard) sum += t.iterations();
  return sum / static_cast<double>(picard.size());
}

FineProblem::FineProblem(TriMesh mesh, std::vector<int> regions, CoefficientModel model, BoundaryConditions bc,
                         double coupling_sign)
    : mesh_(std::move(mesh)), regions_(std::move(regions)), model_(model), bc_(bc) {
  model_.validate();
  validate_mesh(mesh_);
  if (static_cast<int>(regions_.size()) != mesh_.num_cells())
    throw std::invalid_argument("FineProblem: one region id per cell required");
  materials_ = CellMaterials::build(model_, regions_);
  dofs_.num_nodes = mesh_.num_nodes();
  constraints_ = coupled_constraints(mesh_, bc_);
  elasticity_ = elasticity_stiffness(mesh_, materials_.lame_lambda, materials_.lame_mu);
  storage_ = weighted_mass(mesh_, materials_.inv_biot);
  mass_ = weighted_mass(mesh_, std::vector<double>(mesh_.num_cells(), 1.0));
  coupling_ = coupling_matrices(mesh_, model_.alpha);
  coupling_.G *= coupling_sign;
  load_ = Vector::Zero(mesh_.num_nodes());
}

void FineProblem::set_source(const std::function<double(const Point&)>& f) {
  Vector nodal(mesh_.num_nodes());
  for (int v = 0; v < mesh_.num_nodes(); ++v) nodal[v] = f(mesh_.nodes[v]);
  load_ = mass_ * nodal;
}

SparseMatrix FineProblem::pressure_block(const Vector& pressure_iterate, double tau) const {
  const std::vector<double> k =
      cell_permeability(model_, mesh_, regions_, {pressure_iterate.data(), static_cast<std::size_t>(pressure_iterate.size())});
  SparseMatrix block = pressure_stiffness(mesh_, k);
  block *= tau;
  block += storage_;
  return block;
}

SparseMatrix FineProblem::system_matrix(const Vector& pressure_iterate, double tau) const {
  return block_system(elasticity_, coupling_.G, coupling_.D, pressure_block(pressure_iterate, tau));
}

Vector FineProblem::system_rhs(const PoroState& previous, double tau) const {
  Vector rhs = Vector::Zero(dofs_.total());
  rhs.tail(dofs_.pressure_dofs()) = tau * load_ + storage_ * previous.p + coupling_.D * previous.u;
  return rhs;
}

PoroState FineProblem::initial_state(const SolverConfig& config) const {
  PoroState s;
  s.t = 0.0;
  s.p = Vector::Constant(mesh_.num_nodes(), config.p_init);
  s.u = Vector::Zero(dofs_.displacement_dofs());
  const int nu = dofs_.displacement_dofs();
  for (int k = 0; k < constraints_.size(); ++k) {
    const int d = constraints_.dofs()[k];
    if (d < nu)
      s.u[d] = constraints_.values()[k];
    else
      s.p[d - nu] = constraints_.values()[k];
  }
  return s;
}

double FineProblem::l2_norm(const Vector& nodal) const { return std::sqrt(std::max(0.0, nodal.dot(mass_ * nodal))); }

namespace {

PoroState split(const FineProblem& problem, const Vector& x, double t) {
  PoroState s;
  s.u = x.head(problem.dofs().displacement_dofs());
  s.p = x.tail(problem.dofs().pressure_dofs());
  s.t = t;
  return s;
}

PoroState solve_linearized(const FineProblem& problem, SparseLUSolver& lu, const PoroState& previous,
                           const PoroState& iterate, double tau) {
  SparseMatrix K = problem.system_matrix(iterate.p, tau);
  Vector rhs = problem.system_rhs(previous, tau);
  apply_dirichlet(K, rhs, problem.constraints());
  K.makeCompressed();
  lu.factorize(K);
  const Vector x = lu.solve(rhs);
  const double rn = (K * x - rhs).norm();
  if (!std::isfinite(rn) || rn > 1e-10 * std::max(rhs.norm(), 1e-300))
    throw NumericalError("fine coupled solve residual too large");
  return split(problem, x, previous.t + tau);
}

}  // namespace

PoroState picard_step(const FineProblem& problem, const PoroState& previous, const PoroState& iterate, double tau) {
  SparseLUSolver lu;
  return solve_linearized(problem, lu, previous, iterate, tau);
}

SolutionHistory run_fine(const FineProblem& problem, const SolverConfig& config) {
  config.validate();
  SolutionHistory history;
  history.states.push_back(problem.initial_state(config));
  SparseLUSolver lu;
  for (int n = 0; n < config.steps; ++n) {
    const PoroState& previous = history.states.back();
    PoroState iterate = previous;
    PicardTrace trace;
    for (int j = 0; j < config.max_picard; ++j) {
      PoroState next = solve_linearized(problem, lu, previous, iterate, config.tau);
      const double diff = problem.l2_norm(next.p - iterate.p);
      trace.residuals.push_back(diff);
      iterate = std::move(next);
      if (diff <= config.picard_tol) {
        trace.converged = true;
        break;
      }
    }
    if (!trace.converged) {
      std::ostringstream msg;
      msg << "Picard iteration did not converge in step " << n + 1 << "; residuals:";
      for (double r : trace.residuals) msg << ' ' << r;
      throw NumericalError(msg.str());
    }
    history.picard.push_back(std::move(trace));
    history.states.push_back(std::move(iterate));
  }
  return history;
}

}  // namespace poromulti
