#include "poromulti/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace poromulti {
namespace {

double quadratic(const SparseMatrix& A, const Vector& x) { return x.dot(A * x); }

ErrorPair relative(const SparseMatrix& mass, const SparseMatrix& stiff, const Vector& ref, const Vector& approx,
                   const char* what) {
  const Vector e = ref - approx;
  const double l2_den = quadratic(mass, ref), h1_den = quadratic(stiff, ref);
  if (!(l2_den > 0.0) || !(h1_den > 0.0))
    throw std::invalid_argument(std::string(what) + ": reference field has zero norm");
  return {std::sqrt(std::max(0.0, quadratic(mass, e)) / l2_den), std::sqrt(std::max(0.0, quadratic(stiff, e)) / h1_den)};
}

}  // namespace

ErrorPair error_pressure(const Vector& p_f, const Vector& p_ms, const TriMesh& mesh, std::span<const int> regions,
                         const CoefficientModel& model) {
  if (p_f.size() != mesh.num_nodes() || p_ms.size() != mesh.num_nodes())
    throw std::invalid_argument("error_pressure: fields must live on the mesh nodes");
  const std::vector<double> k =
      cell_permeability(model, mesh, regions, {p_f.data(), static_cast<std::size_t>(p_f.size())});
  return relative(weighted_mass(mesh, k), pressure_stiffness(mesh, k), p_f, p_ms, "error_pressure");
}

ErrorPair error_displacement(const Vector& u_f, const Vector& u_ms, const TriMesh& mesh,
                             std::span<const int> regions, const CoefficientModel& model) {
  if (u_f.size() != 2 * mesh.num_nodes() || u_ms.size() != 2 * mesh.num_nodes())
    throw std::invalid_argument("error_displacement: fields must live on the mesh nodes");
  const CellMaterials m = CellMaterials::build(model, regions);
  return relative(vector_mass(mesh, m.p_wave), elasticity_stiffness(mesh, m.lame_lambda, m.lame_mu), u_f, u_ms,
                  "error_displacement");
}

ErrorReport compare_histories(const SolutionHistory& fine, const SolutionHistory& multiscale, const TriMesh& mesh,
                              std::span<const int> regions, const CoefficientModel& model) {
  if (fine.states.size() != multiscale.states.size())
    throw std::invalid_argument("compare_histories: histories have different lengths");
  ErrorReport report;
  for (std::size_t n = 1; n < fine.states.size(); ++n) {
    const PoroState& a = fine.states[n];
    const PoroState& b = multiscale.states[n];
    if (std::abs(a.t - b.t) > 1e-12 * std::max(1.0, std::abs(a.t)))
      throw std::invalid_argument("compare_histories: time levels differ");
    report.steps.push_back({a.t, error_pressure(a.p, b.p, mesh, regions, model),
                            error_displacement(a.u, b.u, mesh, regions, model)});
  }
  return report;
}

void write_error_csv(std::ostream& os, const ErrorReport& report) {
  os << "t,eps_p_L2,eps_p_H1,eps_u_L2,eps_u_H1\n";
  char line[160];
  for (const ErrorRow& r : report.steps) {
    std::snprintf(line, sizeof line, "%.6g,%.10e,%.10e,%.10e,%.10e\n", r.t, r.p.l2, r.p.h1, r.u.l2, r.u.h1);
    os << line;
  }
}

}  // namespace poromulti
