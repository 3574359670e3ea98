#include "poromulti/experiment.hpp"

#include "poromulti/error.hpp"
#include "poromulti/io.hpp"

#include <cstdio>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

namespace poromulti {
namespace {

std::string hex_hash(const std::string& s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016zx", std::hash<std::string>{}(s));
  return buf;
}

std::string combo_name(int coarse_n, PermeabilityLaw law, SnapshotKind snapshot) {
  return "c" + std::to_string(coarse_n) + "_" + to_string(law) + "_" + to_string(snapshot);
}

}  // namespace

Experiment::Experiment(ExperimentConfig config) : config_(std::move(config)) {
  config_.validate();
  const GeometrySpec geometry =
      config_.geometry.empty() ? GeometrySpec::default_layout() : load_geometry(config_.geometry);
  std::ostringstream g;
  g.precision(17);
  write_geometry(g, geometry);
  geometry_text_ = g.str();
  mesh_ = build_structured_mesh(config_.fine_n);
  regions_ = cell_regions(mesh_, geometry);
}

const FineProblem& Experiment::problem(PermeabilityLaw law) {
  auto& slot = problems_[law];
  if (!slot) {
    CoefficientModel model = config_.model;
    model.law = law;
    slot = std::make_unique<FineProblem>(mesh_, regions_, model,
                                         BoundaryConditions::standard(config_.p_top, config_.p_bottom));
  }
  return *slot;
}

const SolutionHistory& Experiment::fine_history(PermeabilityLaw law) {
  auto it = fine_.find(law);
  if (it == fine_.end()) {
    it = fine_.emplace(law, run_fine(problem(law), config_.solver())).first;
    ++counters_.fine_runs;
  }
  return it->second;
}

const CoarseGrid& Experiment::coarse_grid(int coarse_n, PermeabilityLaw law) {
  auto& slot = grids_[{coarse_n, law}];
  if (!slot) slot = std::make_unique<CoarseGrid>(build_coarse_grid(build_structured_mesh(coarse_n), problem(law)));
  return *slot;
}

std::string Experiment::offline_key(int coarse_n, PermeabilityLaw law, SnapshotKind snapshot) const {
  const OfflineOptions o = config_.offline(snapshot);
  const CoefficientModel& m = config_.model;
  std::ostringstream k;
  k.precision(17);
  k << "fine " << config_.fine_n << " coarse " << coarse_n << " law " << to_string(law) << " snapshot "
    << to_string(snapshot) << " N " << o.box.n_p << " box " << o.box.p_min << ' ' << o.box.p_max << " l "
    << o.spectral_l << " off " << o.n_off_p << ' ' << o.n_off_u << " M " << m.biot_modulus[0] << ' '
    << m.biot_modulus[1] << " logK " << m.linear_log_permeability[0] << ' ' << m.linear_log_permeability[1]
    << " rate " << m.pressure_rate[0] << ' ' << m.pressure_rate[1] << " E " << m.youngs_modulus[0] << ' '
    << m.youngs_modulus[1] << " nu " << m.poisson_ratio << " geometry " << hex_hash(geometry_text_);
  return k.str();
}

const OfflineStage& Experiment::offline_stage(int coarse_n, PermeabilityLaw law, SnapshotKind snapshot) {
  auto& slot = offline_[{coarse_n, law, snapshot}];
  if (slot) return *slot;

  const CoarseGrid& grid = coarse_grid(coarse_n, law);
  const OfflineOptions options = config_.offline(snapshot);
  const std::string key = offline_key(coarse_n, law, snapshot);
  const std::filesystem::path file =
      config_.output / "cache" / ("offline_" + combo_name(coarse_n, law, snapshot) + ".bin");

  auto stage = std::make_unique<OfflineStage>();
  bool loaded = false;
  if (config_.cache) {
    std::ifstream in(file, std::ios::binary);
    try {
      loaded = in && read_offline_stage(in, key, *stage) &&
               static_cast<int>(stage->pressure.size()) == grid.num_nodes();
    } catch (const ConfigError&) {
      loaded = false;
    }
  }
  if (loaded) {
    stage->options = options;
    ++counters_.offline_cache_loads;
  } else {
    *stage = build_offline_stage(grid, problem(law).model(), options);
    ++counters_.offline_builds;
    if (config_.cache) {
      std::filesystem::create_directories(file.parent_path());
      std::ofstream out(file, std::ios::binary);
      write_offline_stage(out, key, *stage);
      if (!out) throw Error("failed writing offline cache " + file.string());
    }
  }
  slot = std::move(stage);
  return *slot;
}

MultiscaleResult Experiment::multiscale(int coarse_n, PermeabilityLaw law, SnapshotKind snapshot, int n_on_p,
                                        int n_on_u) {
  const SolutionHistory& reference = fine_history(law);
  const CoarseGrid& grid = coarse_grid(coarse_n, law);
  const OfflineStage& offline = offline_stage(coarse_n, law, snapshot);
  MultiscaleSolver solver(problem(law), grid, offline, {n_on_p, n_on_u, config_.refresh});
  MultiscaleResult r;
  r.history = solver.run(config_.solver());
  ++counters_.multiscale_runs;
  r.report = compare_histories(reference, r.history.fine, mesh_, regions_, problem(law).model());
  r.report.coarse_n = coarse_n;
  r.report.law = to_string(law);
  r.report.snapshot = to_string(snapshot);
  r.report.n_on_p = n_on_p;
  r.report.n_on_u = n_on_u;
  r.report.dimension = r.history.dimension;
  return r;
}

void write_table_csv(std::ostream& os, const std::vector<TableRow>& rows) {
  os << "n_on_p,n_on_u,dim,eps_p_L2,eps_p_H1,eps_u_L2,eps_u_H1\n";
  char line[200];
  for (const TableRow& r : rows) {
    std::snprintf(line, sizeof line, "%d,%d,%d,%.6e,%.6e,%.6e,%.6e\n", r.n_on_p, r.n_on_u, r.dimension, r.p.l2,
                  r.p.h1, r.u.l2, r.u.h1);
    os << line;
  }
}

void run_experiment(const ExperimentConfig& config, std::ostream& log) {
  Experiment ex(config);
  const std::filesystem::path& out = config.output;
  for (PermeabilityLaw law : config.laws) {
    const SolutionHistory& fine = ex.fine_history(law);
    log << "fine " << to_string(law) << ": " << fine.states.size() - 1 << " steps, mean Picard iterations "
        << fine.mean_picard_iterations() << '\n';
    if (config.vtk) export_vtk(out / "vtk" / ("fine_" + to_string(law) + ".vtk"), ex.fine_mesh(), fine.states.back());
    for (int coarse_n : config.coarse_n) {
      for (SnapshotKind snapshot : config.snapshots) {
        const std::string name = combo_name(coarse_n, law, snapshot);
        std::vector<TableRow> rows;
        for (const auto& [p, u] : config.enrichment_pairs()) {
          const MultiscaleResult r = ex.multiscale(coarse_n, law, snapshot, p, u);
          const ErrorRow& f = r.report.final();
          rows.push_back({p, u, r.report.dimension, f.p, f.u});
          const std::string tag = name + "_p" + std::to_string(p) + "_u" + std::to_string(u);
          std::ofstream csv = open_output(out / "errors" / (tag + ".csv"));
          write_error_csv(csv, r.report);
          if (config.vtk) export_vtk(out / "vtk" / (tag + ".vtk"), ex.fine_mesh(), r.history.fine.states.back());
          log << name << " N_on=(" << p << "," << u << ") dim " << r.report.dimension << " (solve " << r.history.solve_dimension << ")"
              << " eps_p_L2 " << f.p.l2
              << " eps_u_L2 " << f.u.l2 << '\n';
        }
        std::ofstream table = open_output(out / ("table_" + name + ".csv"));
        write_table_csv(table, rows);
      }
    }
  }
  const StageCounters& c = ex.counters();
  std::ofstream stages = open_output(out / "stages.csv");
  stages << "fine_runs,offline_builds,offline_cache_loads,multiscale_runs\n"
         << c.fine_runs << ',' << c.offline_builds << ',' << c.offline_cache_loads << ',' << c.multiscale_runs << '\n';
}

void run_fine_only(const ExperimentConfig& config, std::ostream& log) {
  Experiment ex(config);
  for (PermeabilityLaw law : config.laws) {
    const SolutionHistory& fine = ex.fine_history(law);
    const std::filesystem::path dir = config.output / ("fine_" + to_string(law));
    std::ofstream picard = open_output(dir / "picard.csv");
    picard << "step,iterations,last_difference\n";
    for (std::size_t n = 0; n < fine.picard.size(); ++n)
      picard << n + 1 << ',' << fine.picard[n].iterations() << ',' << fine.picard[n].residuals.back() << '\n';
    char name[32];
    for (std::size_t n = 0; n < fine.states.size(); ++n) {
      std::snprintf(name, sizeof name, "state_%03zu.txt", n);
      save_state(dir / name, ex.fine_mesh(), fine.states[n]);
    }
    if (config.vtk) export_vtk(dir / "final.vtk", ex.fine_mesh(), fine.states.back());
    log << "fine " << to_string(law) << ": " << fine.states.size() - 1 << " steps, mean Picard iterations "
        << fine.mean_picard_iterations() << ", states in " << dir.string() << '\n';
  }
}

}  // namespace poromulti
