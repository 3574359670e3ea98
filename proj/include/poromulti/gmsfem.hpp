#pragma once

#include "poromulti/assembly.hpp"
#include "poromulti/fields.hpp"
#include "poromulti/mesh.hpp"
#include "poromulti/neighborhood.hpp"

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace poromulti {

enum class SnapshotKind { Harmonic, Spectral };

/// Fine-grid restriction to one coarse neighborhood, with local numbering.
struct LocalDomain {
  int hood = -1;
  TriMesh mesh;
  std::vector<int> global_nodes;  // local node -> fine node
  std::vector<int> global_cells;  // local cell -> fine cell
  std::vector<int> boundary;      // local nodes on the patch boundary
  std::vector<int> interior;      // remaining local nodes
  CellMaterials materials;
  double area = 0.0;

  int num_nodes() const { return mesh.num_nodes(); }
};

LocalDomain make_local_domain(const TriMesh& fine, const Neighborhood& hood, std::span<const int> fine_regions,
                              const CoefficientModel& model);
std::vector<LocalDomain> make_local_domains(const TriMesh& fine, const NeighborhoodMap& hoods,
                                            std::span<const int> fine_regions, const CoefficientModel& model);

/// Local snapshot functions, grouped into one block per parameter sample.
struct SnapshotSpace {
  int hood = -1;
  Eigen::MatrixXd columns;        // local nodal values (one or two rows per node)
  std::vector<int> param_index;   // parameter sample j of each column
  std::vector<int> generator;     // boundary dof (harmonic) or eigen index (spectral)
  std::vector<int> block_start;   // first column of each parameter block
  std::vector<int> duplicate_of;  // per block: earlier block with identical coefficients, or -1

  int size() const { return static_cast<int>(columns.cols()); }
  int num_blocks() const { return static_cast<int>(block_start.size()); }
  int block_width(int b) const;
  Eigen::MatrixXd block(int b) const { return columns.middleCols(block_start[b], block_width(b)); }
  /// Appends a block computed for parameter sample `j`.
  void append_block(const Eigen::MatrixXd& block, int j, std::span<const int> generators, int duplicate = -1);
  /// Columns of all blocks that are not copies of earlier blocks.
  Eigen::MatrixXd distinct_columns() const;
};

struct OfflineSpace {
  int hood = -1;
  Eigen::MatrixXd basis;        // local nodal coordinates, one column per function
  Eigen::VectorXd eigenvalues;  // ascending
  int snapshot_rank = 0;

  int size() const { return static_cast<int>(basis.cols()); }
};

struct OnlineSpace {
  int hood = -1;
  Mu mu;
  Eigen::MatrixXd basis;
  Eigen::VectorXd eigenvalues;

  int size() const { return static_cast<int>(basis.cols()); }
};

/// Uniform weights 1/(N+1).
std::vector<double> uniform_weights(int samples);

/// Number of offline functions to keep: the largest online request plus spare directions.
int default_offline_size(std::span<const int> online_sizes, int spare = 4);

// ---- pressure ----------------------------------------------------------------

/// K(x; p_bar) on the cells of a local domain.
std::vector<double> local_permeability(const LocalDomain& domain, const CoefficientModel& model, double p_bar);

/// Harmonic extensions of Kronecker boundary data for one parameter sample.
Eigen::MatrixXd harmonic_block_p(const LocalDomain& domain, std::span<const double> k);
/// The l smallest Neumann eigenfunctions of B(K) psi = lambda M(K) psi.
Eigen::MatrixXd spectral_block_p(const LocalDomain& domain, std::span<const double> k, int l);

SnapshotSpace snapshots_harmonic_p(const LocalDomain& domain, const CoefficientModel& model,
                                   std::span<const double> p_samples);
SnapshotSpace snapshots_spectral_p(const LocalDomain& domain, const CoefficientModel& model,
                                   std::span<const double> p_samples, int l);

/// Dimension reduction of the snapshot span with K_bar = sum_j t_j K(x, p_j).
OfflineSpace offline_space_p(const SnapshotSpace& snapshots, const LocalDomain& domain,
                             const CoefficientModel& model, std::span<const double> p_samples,
                             std::span<const double> weights, int n_off);

OnlineSpace online_space_p(const OfflineSpace& offline, const LocalDomain& domain, const CoefficientModel& model,
                           const Mu& mu, int n_on);

// ---- displacement -------------------------------------------------------------

struct LocalElasticity {
  std::vector<double> lambda;
  std::vector<double> mu;
  std::vector<double> p_wave;  // mass weight lambda + 2 mu

  bool operator==(const LocalElasticity&) const = default;
};

/// Elastic coefficients on a local domain for a parameter value. The shipped
/// elastic law does not depend on the parameter.
LocalElasticity local_elasticity(const LocalDomain& domain, const Mu& mu);

Eigen::MatrixXd harmonic_block_u(const LocalDomain& domain, const LocalElasticity& c);
Eigen::MatrixXd spectral_block_u(const LocalDomain& domain, const LocalElasticity& c, int l);

SnapshotSpace snapshots_harmonic_u(const LocalDomain& domain, std::span<const double> p_samples);
SnapshotSpace snapshots_spectral_u(const LocalDomain& domain, std::span<const double> p_samples, int l);

OfflineSpace offline_space_u(const SnapshotSpace& snapshots, const LocalDomain& domain,
                             std::span<const double> p_samples, std::span<const double> weights, int n_off);

OnlineSpace online_space_u(const OfflineSpace& offline, const LocalDomain& domain, const Mu& mu, int n_on);

// ---- global basis ---------------------------------------------------------------

/// Rows are multiscale basis functions in fine nodal coordinates.
struct MultiscaleBasis {
  SparseMatrix R;
  std::vector<int> row_hood;
  int dropped_rows = 0;

  int size() const { return static_cast<int>(R.rows()); }
};

/// Rows chi_i psi_k, zeroed at pressure-Dirichlet fine nodes.
MultiscaleBasis assemble_Rp(std::span<const OnlineSpace> spaces, std::span<const LocalDomain> domains,
                            const PartitionOfUnity& pou, const DirichletConstraints& pressure_bc, int fine_nodes);

/// Two rows per eigenfunction (x part, y part) times xi_i; constrained components zeroed.
MultiscaleBasis assemble_Ru(std::span<const OnlineSpace> spaces, std::span<const LocalDomain> domains,
                            const PartitionOfUnity& pou, const DirichletConstraints& displacement_bc,
                            int fine_nodes);

}  // namespace poromulti
