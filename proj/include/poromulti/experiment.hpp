#pragma once

#include "poromulti/config.hpp"
#include "poromulti/metrics.hpp"
#include "poromulti/solver_coarse.hpp"
#include "poromulti/solver_fine.hpp"

#include <iosfwd>
#include <map>
#include <memory>
#include <tuple>

namespace poromulti {

struct StageCounters {
  int fine_runs = 0;
  int offline_builds = 0;
  int offline_cache_loads = 0;
  int multiscale_runs = 0;
};

struct MultiscaleResult {
  MultiscaleHistory history;
  ErrorReport report;
};

struct TableRow {
  int n_on_p = 0;
  int n_on_u = 0;
  int dimension = 0;
  ErrorPair p;
  ErrorPair u;
};

/// Owns the fine reference runs and offline stages of one configuration and
/// reuses them across multiscale runs.
class Experiment {
public:
  explicit Experiment(ExperimentConfig config);

  const ExperimentConfig& config() const { return config_; }
  const TriMesh& fine_mesh() const { return mesh_; }
  const std::vector<int>& regions() const { return regions_; }

  const FineProblem& problem(PermeabilityLaw law);
  const SolutionHistory& fine_history(PermeabilityLaw law);
  const CoarseGrid& coarse_grid(int coarse_n, PermeabilityLaw law);
  /// Memory cache first, then the disk cache under `output/cache` when enabled.
  const OfflineStage& offline_stage(int coarse_n, PermeabilityLaw law, SnapshotKind snapshot);
  MultiscaleResult multiscale(int coarse_n, PermeabilityLaw law, SnapshotKind snapshot, int n_on_p, int n_on_u);

  const StageCounters& counters() const { return counters_; }

private:
  std::string offline_key(int coarse_n, PermeabilityLaw law, SnapshotKind snapshot) const;

  ExperimentConfig config_;
  TriMesh mesh_;
  std::vector<int> regions_;
  std::string geometry_text_;
  std::map<PermeabilityLaw, std::unique_ptr<FineProblem>> problems_;
  std::map<PermeabilityLaw, SolutionHistory> fine_;
  std::map<std::pair<int, PermeabilityLaw>, std::unique_ptr<CoarseGrid>> grids_;
  std::map<std::tuple<int, PermeabilityLaw, SnapshotKind>, std::unique_ptr<OfflineStage>> offline_;
  StageCounters counters_;
};

/// `n_on_p,n_on_u,dim,eps_p_L2,eps_p_H1,eps_u_L2,eps_u_H1`.
void write_table_csv(std::ostream& os, const std::vector<TableRow>& rows);

/// Every (coarse grid, law, snapshot, enrichment) combination: table and
/// per-step error CSV files under the configured output directory.
void run_experiment(const ExperimentConfig& config, std::ostream& log);

/// Fine reference runs only: per-step states and Picard traces.
void run_fine_only(const ExperimentConfig& config, std::ostream& log);

}  // namespace poromulti
