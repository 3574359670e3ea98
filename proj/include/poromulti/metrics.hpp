#pragma once

#include "poromulti/assembly.hpp"
#include "poromulti/fields.hpp"
#include "poromulti/solver_fine.hpp"

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace poromulti {

struct ErrorPair {
  double l2 = 0.0;
  double h1 = 0.0;
};

/// Relative errors weighted by K(p_f), with K taken at the cell centroid of p_f.
ErrorPair error_pressure(const Vector& p_f, const Vector& p_ms, const TriMesh& mesh, std::span<const int> regions,
                         const CoefficientModel& model);

/// Relative L2 error weighted by lambda + 2 mu and relative energy-norm error.
ErrorPair error_displacement(const Vector& u_f, const Vector& u_ms, const TriMesh& mesh,
                             std::span<const int> regions, const CoefficientModel& model);

struct ErrorRow {
  double t = 0.0;
  ErrorPair p;
  ErrorPair u;
};

struct ErrorReport {
  std::vector<ErrorRow> steps;  // one per time step, initial state excluded
  int coarse_n = 0;
  std::string law;
  std::string snapshot;
  int n_on_p = 0;
  int n_on_u = 0;
  int dimension = 0;

  const ErrorRow& final() const { return steps.back(); }
};

/// Compares two histories over the same time levels.
ErrorReport compare_histories(const SolutionHistory& fine, const SolutionHistory& multiscale, const TriMesh& mesh,
                              std::span<const int> regions, const CoefficientModel& model);

/// Rows `t,eps_p_L2,eps_p_H1,eps_u_L2,eps_u_H1`.
void write_error_csv(std::ostream& os, const ErrorReport& report);

}  // namespace poromulti
