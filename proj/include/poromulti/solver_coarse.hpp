#pragma once

#include "poromulti/gmsfem.hpp"
#include "poromulti/neighborhood.hpp"
#include "poromulti/solver_fine.hpp"

#include <vector>

namespace poromulti {

/// Coarse mesh nested in the fine mesh, with neighborhoods, partition of unity
/// and local domains.
struct CoarseGrid {
  TriMesh mesh;
  NeighborhoodMap hoods;
  PartitionOfUnity pou;
  std::vector<LocalDomain> domains;

  int num_nodes() const { return mesh.num_nodes(); }
};

CoarseGrid build_coarse_grid(TriMesh coarse, const FineProblem& fine);

struct OfflineOptions {
  SnapshotKind snapshot = SnapshotKind::Harmonic;
  ParameterBox box;
  int spectral_l = 16;  // snapshots per parameter sample (spectral)
  int n_off_p = 16;
  int n_off_u = 16;
};

/// Parameter-independent spaces of every neighborhood.
struct OfflineStage {
  OfflineOptions options;
  std::vector<double> p_samples;
  std::vector<double> weights;
  std::vector<OfflineSpace> pressure;
  std::vector<OfflineSpace> displacement;
};

/// Builds snapshots one neighborhood at a time and keeps only the reduced spaces.
OfflineStage build_offline_stage(const CoarseGrid& grid, const CoefficientModel& model,
                                 const OfflineOptions& options);

/// Fine blocks of the linearized coupled system at one Picard iterate.
struct FineBlocks {
  SparseMatrix A;  // elasticity
  SparseMatrix G;  // 2N x N
  SparseMatrix D;  // N x 2N
  SparseMatrix C;  // S + tau B(K)
};

struct CoarseSystem {
  SparseMatrix matrix;  // [[Ru A Ru', Ru G Rp'], [Rp D Ru', Rp C Rp']]
  Vector rhs;

  int size() const { return static_cast<int>(rhs.size()); }
};

/// Galerkin projection of the fine system. `rhs` is the fine right-hand side
/// in coupled numbering and `lift` carries the Dirichlet values.
CoarseSystem project_system(const MultiscaleBasis& Rp, const MultiscaleBasis& Ru, const FineBlocks& blocks,
                            const Vector& rhs, const Vector& lift);

/// R' c + lift.
Vector prolong(const SparseMatrix& R, const Vector& coarse, const Vector& lift);

enum class RefreshPolicy { PerIteration, PerStep };

struct MultiscaleOptions {
  int n_on_p = 12;
  int n_on_u = 12;
  RefreshPolicy refresh = RefreshPolicy::PerIteration;
};

struct MultiscaleHistory {
  SolutionHistory fine;  // prolonged states and Picard traces
  int dimension = 0;     // multiscale basis functions
  int dimension_p = 0;
  int dimension_u = 0;
  int solve_dimension = 0;  // independent basis functions in the coarse solve
  int pressure_refreshes = 0;
  int displacement_refreshes = 0;
};

/// Time stepping on the multiscale space. Pressure online spaces are rebuilt
/// from neighborhood averages of the current iterate; the elastic law does not
/// depend on the parameter, so displacement spaces are built once.
///
/// Splitting rigid modes into x and y rows yields linearly dependent rows
/// (the x parts of two translations and a rotation span only {1, y}). The
/// coarse solve uses an independent subset; the span is unchanged.
class MultiscaleSolver {
public:
  MultiscaleSolver(const FineProblem& fine, const CoarseGrid& grid, const OfflineStage& offline,
                   MultiscaleOptions options);

  MultiscaleHistory run(const SolverConfig& config);

  /// One linearized coarse solve from `previous` at coefficients of `iterate`,
  /// refreshing the pressure spaces first when `refresh` is set.
  PoroState coarse_picard_step(const PoroState& previous, const PoroState& iterate, double tau, bool refresh);

  const MultiscaleBasis& pressure_basis() const { return rp_; }
  const MultiscaleBasis& displacement_basis() const { return ru_; }
  /// Independent rows of the displacement basis used in the solve.
  const MultiscaleBasis& displacement_solve_basis() const { return ru_active_; }
  int pressure_refreshes() const { return pressure_refreshes_; }
  int displacement_refreshes() const { return displacement_refreshes_; }

private:
  void refresh_pressure(const PoroState& iterate);
  void refresh_displacement(const PoroState& iterate);

  const FineProblem& fine_;
  const CoarseGrid& grid_;
  const OfflineStage& offline_;
  MultiscaleOptions options_;
  DirichletConstraints pressure_bc_;
  DirichletConstraints displacement_bc_;
  Vector lift_;
  MultiscaleBasis rp_;
  MultiscaleBasis ru_;
  MultiscaleBasis ru_active_;
  SparseLUSolver lu_;
  int pressure_refreshes_ = 0;
  int displacement_refreshes_ = 0;
};

}  // namespace poromulti
