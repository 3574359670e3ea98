#pragma once

#include "poromulti/assembly.hpp"
#include "poromulti/fields.hpp"
#include "poromulti/mesh.hpp"
#include "poromulti/numerics.hpp"

#include <functional>
#include <vector>

namespace poromulti {

struct SolverConfig {
  double tau = 0.0055;
  int steps = 10;
  double picard_tol = 1e-5;
  int max_picard = 50;
  double p_init = 0.0;

  void validate() const;
  static SolverConfig from_final_time(double t_max, int steps);
};

struct PoroState {
  Vector p;  // N_f
  Vector u;  // 2 N_f, interleaved
  double t = 0.0;
};

struct PicardTrace {
  std::vector<double> residuals;  // successive-iterate L2 pressure differences
  bool converged = false;

  int iterations() const { return static_cast<int>(residuals.size()); }
};

struct SolutionHistory {
  std::vector<PoroState> states;     // steps + 1, starting with the initial state
  std::vector<PicardTrace> picard;   // one per step

  double mean_picard_iterations() const;
};

/// Fine-grid P1 discretization of the coupled system. Parameter-independent
/// blocks are assembled once at construction.
class FineProblem {
public:
  FineProblem(TriMesh mesh, std::vector<int> regions, CoefficientModel model, BoundaryConditions bc,
              double coupling_sign = 1.0);

  /// Nodal interpolant of f, integrated against the P1 basis.
  void set_source(const std::function<double(const Point&)>& f);

  const TriMesh& mesh() const { return mesh_; }
  const std::vector<int>& regions() const { return regions_; }
  const CoefficientModel& model() const { return model_; }
  const BoundaryConditions& boundary_conditions() const { return bc_; }
  const CellMaterials& materials() const { return materials_; }
  const DofMap& dofs() const { return dofs_; }
  const DirichletConstraints& constraints() const { return constraints_; }

  const SparseMatrix& elasticity() const { return elasticity_; }
  const SparseMatrix& storage() const { return storage_; }
  const SparseMatrix& mass() const { return mass_; }
  const CouplingMatrices& coupling() const { return coupling_; }
  const Vector& load() const { return load_; }

  /// S + tau B(K) with K evaluated per cell at the centroid of `pressure_iterate`.
  SparseMatrix pressure_block(const Vector& pressure_iterate, double tau) const;
  /// Unconstrained coupled matrix [[A, G], [D, S + tau B]].
  SparseMatrix system_matrix(const Vector& pressure_iterate, double tau) const;
  /// [0; tau F + S p^n + D u^n].
  Vector system_rhs(const PoroState& previous, double tau) const;

  /// p = p_init with Dirichlet values imposed; u = 0.
  PoroState initial_state(const SolverConfig& config) const;

  double l2_norm(const Vector& nodal) const;

private:
  TriMesh mesh_;
  std::vector<int> regions_;
  CoefficientModel model_;
  BoundaryConditions bc_;
  CellMaterials materials_;
  DofMap dofs_;
  DirichletConstraints constraints_;
  SparseMatrix elasticity_;
  SparseMatrix storage_;
  SparseMatrix mass_;
  CouplingMatrices coupling_;
  Vector load_;
};

/// One linearized coupled solve with coefficients frozen at `iterate`.
PoroState picard_step(const FineProblem& problem, const PoroState& previous, const PoroState& iterate,
                      double tau);

/// Fully implicit time stepping with a Picard loop per step. Throws
/// NumericalError (carrying the residual trace) when a step does not converge.
SolutionHistory run_fine(const FineProblem& problem, const SolverConfig& config);

}  // namespace poromulti
