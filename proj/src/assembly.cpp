#include "poromulti/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace poromulti {
namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

void check_size(std::span<const double> values, const TriMesh& mesh, const char* what) {
  if (static_cast<int>(values.size()) != mesh.num_cells())
    throw std::invalid_argument(std::string(what) + ": expected one value per cell");
}

SparseMatrix from_triplets(int rows, int cols, const Triplets& t) {
  SparseMatrix m(rows, cols);
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

template <typename Local>
void scatter_scalar(Triplets& t, const Cell& cell, const Local& local) {
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) t.emplace_back(cell[i], cell[j], local(i, j));
}

int vdof(const Cell& cell, int local) { return 2 * cell[local / 2] + local % 2; }

}  // namespace

P1Triangle<double> cell_geometry(const TriMesh& mesh, int cell) {
  const Cell& c = mesh.cells[cell];
  try {
    return p1_triangle<double>(mesh.nodes[c[0]], mesh.nodes[c[1]], mesh.nodes[c[2]]);
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument("degenerate cell " + std::to_string(cell));
  }
}

SparseMatrix pressure_stiffness(const TriMesh& mesh, std::span<const double> k) {
  check_size(k, mesh, "pressure_stiffness");
  Triplets t;
  t.reserve(9 * mesh.cells.size());
  for (int c = 0; c < mesh.num_cells(); ++c) scatter_scalar(t, mesh.cells[c], p1_stiffness(cell_geometry(mesh, c), k[c]));
  return from_triplets(mesh.num_nodes(), mesh.num_nodes(), t);
}

SparseMatrix weighted_mass(const TriMesh& mesh, std::span<const double> w) {
  check_size(w, mesh, "weighted_mass");
  Triplets t;
  t.reserve(9 * mesh.cells.size());
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const double area = mesh.signed_area(c);
    if (!(area > 0.0)) throw std::invalid_argument("degenerate cell " + std::to_string(c));
    const double s = w[c] * area / 12.0;
    const Cell& cell = mesh.cells[c];
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) t.emplace_back(cell[i], cell[j], i == j ? 2.0 * s : s);
  }
  return from_triplets(mesh.num_nodes(), mesh.num_nodes(), t);
}

SparseMatrix vector_mass(const TriMesh& mesh, std::span<const double> w) {
  check_size(w, mesh, "vector_mass");
  Triplets t;
  t.reserve(18 * mesh.cells.size());
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const double s = w[c] * mesh.signed_area(c) / 12.0;
    const Cell& cell = mesh.cells[c];
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int comp = 0; comp < 2; ++comp)
          t.emplace_back(2 * cell[i] + comp, 2 * cell[j] + comp, i == j ? 2.0 * s : s);
  }
  return from_triplets(2 * mesh.num_nodes(), 2 * mesh.num_nodes(), t);
}

SparseMatrix elasticity_stiffness(const TriMesh& mesh, std::span<const double> lambda, std::span<const double> mu) {
  check_size(lambda, mesh, "elasticity_stiffness");
  check_size(mu, mesh, "elasticity_stiffness");
  Triplets t;
  t.reserve(36 * mesh.cells.size());
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const Eigen::Matrix<double, 6, 6> local = p1_elasticity(cell_geometry(mesh, c), lambda[c], mu[c]);
    const Cell& cell = mesh.cells[c];
    for (int a = 0; a < 6; ++a)
      for (int b = 0; b < 6; ++b) t.emplace_back(vdof(cell, a), vdof(cell, b), local(a, b));
  }
  return from_triplets(2 * mesh.num_nodes(), 2 * mesh.num_nodes(), t);
}

CouplingMatrices coupling_matrices(const TriMesh& mesh, double alpha) {
  Triplets tg, td;
  tg.reserve(18 * mesh.cells.size());
  td.reserve(18 * mesh.cells.size());
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const P1Triangle<double> geo = cell_geometry(mesh, c);
    const Eigen::Matrix<double, 6, 3> g = p1_gradient_coupling(geo, alpha);
    const Eigen::Matrix<double, 3, 6> d = p1_divergence_coupling(geo, alpha);
    const Cell& cell = mesh.cells[c];
    for (int a = 0; a < 6; ++a)
      for (int b = 0; b < 3; ++b) {
        tg.emplace_back(vdof(cell, a), cell[b], g(a, b));
        td.emplace_back(cell[b], vdof(cell, a), d(b, a));
      }
  }
  const int n = mesh.num_nodes();
  CouplingMatrices out{from_triplets(2 * n, n, tg), from_triplets(n, 2 * n, td)};
  if (alpha == 0.0) {
    out.G.setZero();
    out.D.setZero();
  }
  return out;
}

SparseMatrix block_system(const SparseMatrix& A, const SparseMatrix& G, const SparseMatrix& D,
                          const SparseMatrix& C) {
  const Eigen::Index nu = A.rows(), np = C.rows();
  if (A.cols() != nu || C.cols() != np || G.rows() != nu || G.cols() != np || D.rows() != np || D.cols() != nu)
    throw std::invalid_argument("block_system: inconsistent block dimensions");
  Triplets t;
  t.reserve(A.nonZeros() + G.nonZeros() + D.nonZeros() + C.nonZeros());
  auto add = [&t](const SparseMatrix& m, Eigen::Index r0, Eigen::Index c0) {
    for (int k = 0; k < m.outerSize(); ++k)
      for (SparseMatrix::InnerIterator it(m, k); it; ++it)
        t.emplace_back(static_cast<int>(it.row() + r0), static_cast<int>(it.col() + c0), it.value());
  };
  add(A, 0, 0);
  add(G, 0, nu);
  add(D, nu, 0);
  add(C, nu, nu);
  return from_triplets(static_cast<int>(nu + np), static_cast<int>(nu + np), t);
}

void DirichletConstraints::add(int dof, double value) {
  const auto it = std::lower_bound(dofs_.begin(), dofs_.end(), dof);
  const auto pos = it - dofs_.begin();
  if (it != dofs_.end() && *it == dof) {
    if (values_[pos] != value)
      throw std::invalid_argument("conflicting Dirichlet values on dof " + std::to_string(dof));
    return;
  }
  dofs_.insert(it, dof);
  values_.insert(values_.begin() + pos, value);
}

void DirichletConstraints::merge(const DirichletConstraints& other, int offset) {
  for (int k = 0; k < other.size(); ++k) add(other.dofs_[k] + offset, other.values_[k]);
}

bool DirichletConstraints::contains(int dof) const { return std::binary_search(dofs_.begin(), dofs_.end(), dof); }

Vector DirichletConstraints::lift(int n) const {
  Vector g = Vector::Zero(n);
  for (int k = 0; k < size(); ++k) g[dofs_[k]] = values_[k];
  return g;
}

std::vector<char> DirichletConstraints::mask(int n) const {
  std::vector<char> m(n, 0);
  for (int d : dofs_) m[d] = 1;
  return m;
}

BoundaryConditions BoundaryConditions::standard(double p_top, double p_bottom) {
  BoundaryConditions bc;
  bc.pressure[static_cast<int>(BoundaryTag::Top)] = p_top;
  bc.pressure[static_cast<int>(BoundaryTag::Bottom)] = p_bottom;
  bc.fix_ux[static_cast<int>(BoundaryTag::Left)] = true;
  bc.fix_uy[static_cast<int>(BoundaryTag::Bottom)] = true;
  return bc;
}

DirichletConstraints pressure_constraints(const TriMesh& mesh, const BoundaryConditions& bc) {
  DirichletConstraints out;
  for (BoundaryTag tag : kAllBoundaryTags) {
    const auto& value = bc.pressure[static_cast<int>(tag)];
    if (!value) continue;
    for (int v : mesh.boundary_nodes(tag)) out.add(v, *value);
  }
  return out;
}

DirichletConstraints displacement_constraints(const TriMesh& mesh, const BoundaryConditions& bc) {
  DirichletConstraints out;
  for (BoundaryTag tag : kAllBoundaryTags) {
    const int t = static_cast<int>(tag);
    if (!bc.fix_ux[t] && !bc.fix_uy[t]) continue;
    for (int v : mesh.boundary_nodes(tag)) {
      if (bc.fix_ux[t]) out.add(DofMap::displacement(v, 0), 0.0);
      if (bc.fix_uy[t]) out.add(DofMap::displacement(v, 1), 0.0);
    }
  }
  return out;
}

DirichletConstraints coupled_constraints(const TriMesh& mesh, const BoundaryConditions& bc) {
  DirichletConstraints out = displacement_constraints(mesh, bc);
  out.merge(pressure_constraints(mesh, bc), 2 * mesh.num_nodes());
  return out;
}

void apply_dirichlet(SparseMatrix& A, Vector& rhs, const DirichletConstraints& constraints) {
  const int n = static_cast<int>(A.rows());
  if (A.cols() != n || rhs.size() != n) throw std::invalid_argument("apply_dirichlet: dimension mismatch");
  if (constraints.size() == 0) return;
  if (constraints.dofs().back() >= n || constraints.dofs().front() < 0)
    throw std::invalid_argument("apply_dirichlet: constrained dof out of range");

  const Vector g = constraints.lift(n);
  rhs -= A * g;
  const std::vector<char> fixed = constraints.mask(n);
  A.prune([&fixed](Eigen::Index row, Eigen::Index col, double) { return !fixed[row] && !fixed[col]; });
  SparseMatrix identity(n, n);
  Triplets t;
  t.reserve(constraints.size());
  for (int d : constraints.dofs()) t.emplace_back(d, d, 1.0);
  identity.setFromTriplets(t.begin(), t.end());
  A += identity;
  for (int k = 0; k < constraints.size(); ++k) rhs[constraints.dofs()[k]] = constraints.values()[k];
}

}  // namespace poromulti
