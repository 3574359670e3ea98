#pragma once

#include "poromulti/element.hpp"
#include "poromulti/mesh.hpp"

#include <Eigen/SparseCore>

#include <array>
#include <optional>
#include <span>
#include <vector>

namespace poromulti {

using SparseMatrix = Eigen::SparseMatrix<double>;
using Vector = Eigen::VectorXd;

/// Pressure dof = node; displacement dofs interleaved (2 node + component). The
/// coupled system stacks displacement first, then pressure.
struct DofMap {
  int num_nodes = 0;

  int pressure_dofs() const { return num_nodes; }
  int displacement_dofs() const { return 2 * num_nodes; }
  int total() const { return 3 * num_nodes; }
  static int displacement(int node, int component) { return 2 * node + component; }
  int coupled_pressure(int node) const { return 2 * num_nodes + node; }
};

P1Triangle<double> cell_geometry(const TriMesh& mesh, int cell);

SparseMatrix pressure_stiffness(const TriMesh& mesh, std::span<const double> k);
SparseMatrix weighted_mass(const TriMesh& mesh, std::span<const double> w);
/// Block-diagonal mass acting on interleaved vector dofs.
SparseMatrix vector_mass(const TriMesh& mesh, std::span<const double> w);
SparseMatrix elasticity_stiffness(const TriMesh& mesh, std::span<const double> lambda, std::span<const double> mu);

struct CouplingMatrices {
  SparseMatrix G;  // 2N x N: pressure gradient tested with displacement
  SparseMatrix D;  // N x 2N: displacement divergence tested with pressure
};

CouplingMatrices coupling_matrices(const TriMesh& mesh, double alpha);

/// [[A, G], [D, C]] with A square on displacement, C square on pressure.
SparseMatrix block_system(const SparseMatrix& A, const SparseMatrix& G, const SparseMatrix& D,
                          const SparseMatrix& C);

/// Sorted dof -> prescribed value set.
class DirichletConstraints {
public:
  /// Throws std::invalid_argument when `dof` is already fixed to a different value.
  void add(int dof, double value);
  /// Re-indexes every dof by `offset` and merges into this set.
  void merge(const DirichletConstraints& other, int offset = 0);

  std::span<const int> dofs() const { return dofs_; }
  std::span<const double> values() const { return values_; }
  int size() const { return static_cast<int>(dofs_.size()); }
  bool contains(int dof) const;

  /// Vector of length n holding the prescribed values and zeros elsewhere.
  Vector lift(int n) const;
  /// 1 at constrained dofs.
  std::vector<char> mask(int n) const;

private:
  std::vector<int> dofs_;
  std::vector<double> values_;
};

/// Dirichlet data. Each pressure side is either fixed to a value or natural; the
/// displacement constraints are componentwise zero conditions.
struct BoundaryConditions {
  std::array<std::optional<double>, 4> pressure;  // indexed by BoundaryTag
  std::array<bool, 4> fix_ux{};
  std::array<bool, 4> fix_uy{};

  /// p = p_top on TOP, p = p_bottom on BOTTOM, u_x = 0 on LEFT, u_y = 0 on BOTTOM.
  static BoundaryConditions standard(double p_top, double p_bottom);
};

DirichletConstraints pressure_constraints(const TriMesh& mesh, const BoundaryConditions& bc);
DirichletConstraints displacement_constraints(const TriMesh& mesh, const BoundaryConditions& bc);
/// Constraints in coupled numbering (displacement block first).
DirichletConstraints coupled_constraints(const TriMesh& mesh, const BoundaryConditions& bc);

/// Symmetric elimination with lifting: constrained rows and columns become
/// identity, their contribution moves to the right-hand side.
void apply_dirichlet(SparseMatrix& A, Vector& rhs, const DirichletConstraints& constraints);

}  // namespace poromulti
