#include "poromulti/fields.hpp"

#include "poromulti/error.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace poromulti {
namespace {

constexpr double kMaxExponent = 700.0;

double guarded_exp(double exponent) {
  if (!std::isfinite(exponent) || std::abs(exponent) > kMaxExponent)
    throw NumericalError("permeability exponent " + std::to_string(exponent) + " outside [-700, 700]");
  return std::exp(exponent);
}

int region_index(int region) {
  if (region != kBackground && region != kInclusion)
    throw std::invalid_argument("region id must be 1 or 2, got " + std::to_string(region));
  return region - 1;
}

}  // namespace

GeometrySpec GeometrySpec::default_layout() {
  GeometrySpec spec;
  spec.inclusions = {
      Circle{{0.18, 0.82}, 0.08}, Circle{{0.47, 0.85}, 0.06}, Circle{{0.80, 0.80}, 0.08},
      Circle{{0.30, 0.58}, 0.07}, Circle{{0.82, 0.48}, 0.07}, Circle{{0.20, 0.22}, 0.08},
      Circle{{0.55, 0.30}, 0.07}, Circle{{0.84, 0.14}, 0.06},
      Rect{{0.08, 0.40}, {0.60, 0.05}},  // horizontal strip
      Rect{{0.63, 0.12}, {0.05, 0.55}},  // vertical strip
  };
  return spec;
}

int region_of(const GeometrySpec& spec, const Point& x) {
  for (const Shape& shape : spec.inclusions) {
    const bool hit = std::visit(
        [&x](const auto& s) {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, Circle>) {
            return (x - s.center).squaredNorm() <= s.radius * s.radius;
          } else {
            const Point d = x - s.corner;
            return d.x() >= 0.0 && d.y() >= 0.0 && d.x() <= s.extents.x() && d.y() <= s.extents.y();
          }
        },
        shape);
    if (hit) return kInclusion;
  }
  return kBackground;
}

std::vector<int> cell_regions(const TriMesh& mesh, const GeometrySpec& spec) {
  std::vector<int> regions(mesh.num_cells());
  for (int c = 0; c < mesh.num_cells(); ++c) regions[c] = region_of(spec, mesh.centroid(c));
  return regions;
}

GeometrySpec read_geometry(std::istream& is) {
  GeometrySpec spec;
  std::string line;
  int line_no = 0;
  auto in_unit_square = [](double v) { return v >= 0.0 && v <= 1.0; };
  while (std::getline(is, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string kind;
    if (!(ls >> kind)) continue;
    const std::string where = "geometry line " + std::to_string(line_no);
    if (kind == "circle") {
      Circle c;
      if (!(ls >> c.center.x() >> c.center.y() >> c.radius) || !(c.radius > 0.0))
        throw ConfigError(where + ": expected 'circle cx cy r' with r > 0");
      if (!in_unit_square(c.center.x()) || !in_unit_square(c.center.y()))
        throw ConfigError(where + ": circle center outside [0,1]^2");
      spec.inclusions.emplace_back(c);
    } else if (kind == "rect") {
      Rect r;
      if (!(ls >> r.corner.x() >> r.corner.y() >> r.extents.x() >> r.extents.y()) || !(r.extents.x() > 0.0) ||
          !(r.extents.y() > 0.0))
        throw ConfigError(where + ": expected 'rect x0 y0 w h' with w, h > 0");
      const Point far = r.corner + r.extents;
      if (!in_unit_square(r.corner.x()) || !in_unit_square(r.corner.y()) || far.x() > 1.0 + 1e-12 ||
          far.y() > 1.0 + 1e-12)
        throw ConfigError(where + ": rect leaves [0,1]^2");
      spec.inclusions.emplace_back(r);
    } else {
      throw ConfigError(where + ": unknown shape '" + kind + "'");
    }
    std::string extra;
    if (ls >> extra) throw ConfigError(where + ": trailing tokens");
  }
  return spec;
}

GeometrySpec load_geometry(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open geometry file " + path.string());
  return read_geometry(in);
}

void write_geometry(std::ostream& os, const GeometrySpec& spec) {
  for (const Shape& shape : spec.inclusions) {
    if (const auto* c = std::get_if<Circle>(&shape))
      os << "circle " << c->center.x() << ' ' << c->center.y() << ' ' << c->radius << '\n';
    else if (const auto* r = std::get_if<Rect>(&shape))
      os << "rect " << r->corner.x() << ' ' << r->corner.y() << ' ' << r->extents.x() << ' ' << r->extents.y()
         << '\n';
  }
}

void CoefficientModel::validate() const {
  for (int r = 0; r < 2; ++r) {
    if (!(biot_modulus[r] > 0.0)) throw ConfigError("Biot modulus must be positive");
    if (!(youngs_modulus[r] > 0.0)) throw ConfigError("elastic modulus must be positive");
  }
  if (!(poisson_ratio > 0.0 && poisson_ratio < 0.5)) throw ConfigError("Poisson ratio must lie in (0, 0.5)");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ConfigError("coupling coefficient must lie in [0, 1]");
}

double permeability(const CoefficientModel& model, int region, double p_bar) {
  const int r = region_index(region);
  switch (model.law) {
    case PermeabilityLaw::Linear: return guarded_exp(model.linear_log_permeability[r]);
    case PermeabilityLaw::ExpPressure: return guarded_exp(model.pressure_rate[r] * p_bar);
  }
  throw std::logic_error("unknown permeability law");
}

LameParameters lame_from_E_eta(double youngs, double poisson) {
  if (!(youngs > 0.0)) throw std::invalid_argument("lame_from_E_eta: E must be positive");
  if (!(poisson >= 0.0 && poisson < 0.5 - 1e-12))
    throw std::invalid_argument("lame_from_E_eta: Poisson ratio must lie in [0, 0.5)");
  return {youngs / (2.0 * (1.0 + poisson)), youngs * poisson / ((1.0 + poisson) * (1.0 - 2.0 * poisson))};
}

LameParameters lame_parameters(const CoefficientModel& model, int region) {
  return lame_from_E_eta(model.youngs_modulus[region_index(region)], model.poisson_ratio);
}

ParameterGrid parameter_grid(const ParameterBox& box) {
  if (!(box.p_min < box.p_max)) throw std::invalid_argument("parameter box needs p_min < p_max");
  if (!(box.u_min <= box.u_max)) throw std::invalid_argument("parameter box needs u_min <= u_max");
  if (box.n_p < 1 || box.n_u < 1) throw std::invalid_argument("parameter box needs N >= 1");
  auto samples = [](double lo, double hi, int n) {
    std::vector<double> out(n + 1);
    for (int j = 0; j <= n; ++j) out[j] = lo + j * (hi - lo) / n;
    out.back() = hi;
    return out;
  };
  return {samples(box.p_min, box.p_max, box.n_p), samples(box.u_min, box.u_max, box.n_u)};
}

double average_over(std::span<const double> values, const TriMesh& fine, const Neighborhood& hood) {
  if (hood.fine_cells.empty() || !(hood.area > 0.0))
    throw std::invalid_argument("average_over: empty neighborhood");
  double integral = 0.0;
  for (int c : hood.fine_cells) {
    const Cell& cell = fine.cells[c];
    integral += fine.signed_area(c) * (values[cell[0]] + values[cell[1]] + values[cell[2]]) / 3.0;
  }
  return integral / hood.area;
}

std::vector<Mu> neighborhood_parameters(const Eigen::VectorXd& p, const Eigen::VectorXd& u,
                                        const TriMesh& fine, const NeighborhoodMap& hoods) {
  Eigen::VectorXd magnitude(fine.num_nodes());
  for (int v = 0; v < fine.num_nodes(); ++v) magnitude[v] = u.segment<2>(2 * v).norm();
  std::vector<Mu> out(hoods.size());
  for (int i = 0; i < hoods.size(); ++i) {
    out[i].p_bar = average_over({p.data(), static_cast<std::size_t>(p.size())}, fine, hoods.hoods[i]);
    out[i].u_bar = average_over({magnitude.data(), static_cast<std::size_t>(magnitude.size())}, fine,
                                hoods.hoods[i]);
  }
  return out;
}

CellMaterials CellMaterials::build(const CoefficientModel& model, std::span<const int> regions) {
  CellMaterials m;
  m.region.assign(regions.begin(), regions.end());
  const std::size_t n = regions.size();
  m.inv_biot.resize(n);
  m.lame_mu.resize(n);
  m.lame_lambda.resize(n);
  m.p_wave.resize(n);
  const std::array<LameParameters, 2> lame = {lame_parameters(model, 1), lame_parameters(model, 2)};
  for (std::size_t c = 0; c < n; ++c) {
    const int r = region_index(regions[c]);
    m.inv_biot[c] = 1.0 / model.biot_modulus[r];
    m.lame_mu[c] = lame[r].mu;
    m.lame_lambda[c] = lame[r].lambda;
    m.p_wave[c] = lame[r].lambda + 2.0 * lame[r].mu;
  }
  return m;
}

std::vector<double> cell_permeability(const CoefficientModel& model, const TriMesh& mesh,
                                      std::span<const int> regions, std::span<const double> pressure) {
  std::vector<double> k(mesh.num_cells());
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const Cell& cell = mesh.cells[c];
    const double p_centroid = (pressure[cell[0]] + pressure[cell[1]] + pressure[cell[2]]) / 3.0;
    k[c] = permeability(model, regions[c], p_centroid);
  }
  return k;
}

std::vector<double> cell_permeability(const CoefficientModel& model, std::span<const int> regions,
                                      double p_bar) {
  const std::array<double, 2> per_region = {permeability(model, 1, p_bar), permeability(model, 2, p_bar)};
  std::vector<double> k(regions.size());
  for (std::size_t c = 0; c < regions.size(); ++c) k[c] = per_region[region_index(regions[c])];
  return k;
}

}  // namespace poromulti
