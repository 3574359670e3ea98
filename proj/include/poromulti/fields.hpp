#pragma once

#include "poromulti/mesh.hpp"
#include "poromulti/neighborhood.hpp"

#include <Eigen/Core>

#include <array>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <variant>
#include <vector>

namespace poromulti {

// Region ids: 1 = background, 2 = inclusions.
inline constexpr int kBackground = 1;
inline constexpr int kInclusion = 2;

struct Circle {
  Point center;
  double radius = 0.0;
};

/// Axis-aligned rectangle from its lower-left corner.
struct Rect {
  Point corner;
  Point extents;
};

using Shape = std::variant<Circle, Rect>;

struct GeometrySpec {
  std::vector<Shape> inclusions;

  /// Built-in layout of circular particles and thin strips covering about a fifth of the square.
  static GeometrySpec default_layout();
};

/// 2 when `x` lies in any (closed) inclusion, else 1.
int region_of(const GeometrySpec& spec, const Point& x);

/// Region per cell, evaluated at cell centroids.
std::vector<int> cell_regions(const TriMesh& mesh, const GeometrySpec& spec);

// Geometry file: "circle cx cy r" or "rect x0 y0 w h" per line, '#' comments.
GeometrySpec read_geometry(std::istream& is);
GeometrySpec load_geometry(const std::filesystem::path& path);
void write_geometry(std::ostream& os, const GeometrySpec& spec);

enum class PermeabilityLaw { Linear, ExpPressure };

/// Material laws for the two regions. Index 0 is region 1, index 1 is region 2.
struct CoefficientModel {
  std::array<double, 2> biot_modulus = {1.0, 10.0};
  PermeabilityLaw law = PermeabilityLaw::Linear;
  std::array<double, 2> linear_log_permeability = {1.0, 10.0};  // K = exp(c)
  std::array<double, 2> pressure_rate = {1.0, 10.0};            // K = exp(rate * p)
  std::array<double, 2> youngs_modulus = {10.0, 1.0};
  double poisson_ratio = 0.22;
  double alpha = 0.9;

  void validate() const;
  bool permeability_depends_on_pressure() const { return law == PermeabilityLaw::ExpPressure; }
};

double permeability(const CoefficientModel& model, int region, double p_bar);

struct LameParameters {
  double mu = 0.0;
  double lambda = 0.0;
};

LameParameters lame_from_E_eta(double youngs, double poisson);
LameParameters lame_parameters(const CoefficientModel& model, int region);

struct ParameterBox {
  double p_min = 0.0;
  double p_max = 1.0;
  double u_min = 0.0;
  double u_max = 1.0;
  int n_p = 20;
  int n_u = 20;
};

struct ParameterGrid {
  std::vector<double> p;
  std::vector<double> u;
};

/// N+1 equally spaced samples per variable, endpoints exact.
ParameterGrid parameter_grid(const ParameterBox& box);

/// Per-neighborhood parameter state (average pressure and displacement magnitude).
struct Mu {
  double p_bar = 0.0;
  double u_bar = 0.0;
};

/// Area-weighted mean of a P1 nodal field over the fine cells of a neighborhood.
double average_over(std::span<const double> values, const TriMesh& fine, const Neighborhood& hood);

/// Per-neighborhood averages of pressure and of the displacement magnitude.
std::vector<Mu> neighborhood_parameters(const Eigen::VectorXd& p, const Eigen::VectorXd& u,
                                        const TriMesh& fine, const NeighborhoodMap& hoods);

/// Per-cell material data on a mesh.
struct CellMaterials {
  std::vector<int> region;
  std::vector<double> inv_biot;      // 1/M
  std::vector<double> lame_mu;
  std::vector<double> lame_lambda;
  std::vector<double> p_wave;        // lambda + 2 mu

  static CellMaterials build(const CoefficientModel& model, std::span<const int> regions);
};

/// K per cell from the centroid value of the nodal pressure field.
std::vector<double> cell_permeability(const CoefficientModel& model, const TriMesh& mesh,
                                      std::span<const int> regions, std::span<const double> pressure);

/// K per cell for one scalar parameter value shared by all cells.
std::vector<double> cell_permeability(const CoefficientModel& model, std::span<const int> regions,
                                      double p_bar);

}  // namespace poromulti
