#pragma once

#include "poromulti/fields.hpp"
#include "poromulti/gmsfem.hpp"
#include "poromulti/solver_coarse.hpp"
#include "poromulti/solver_fine.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace poromulti {

/// Flat key = value experiment description. `#` starts a comment.
struct ExperimentConfig {
  int fine_n = 60;
  std::vector<int> coarse_n = {5, 10};
  std::filesystem::path geometry;  // empty selects the shipped layout
  std::vector<PermeabilityLaw> laws = {PermeabilityLaw::Linear, PermeabilityLaw::ExpPressure};
  std::vector<SnapshotKind> snapshots = {SnapshotKind::Harmonic, SnapshotKind::Spectral};
  int param_n = 20;
  int spectral_l = 16;
  int n_off = 0;  // 0: largest N_on plus 4
  std::vector<int> n_on_p = {2, 4, 8, 12};
  std::vector<int> n_on_u = {4, 8, 12};
  double t_max = 0.055;
  int steps = 10;
  double delta = 1e-5;
  int max_picard = 50;
  double p_top = 1.0;
  double p_bottom = 0.0;
  double p_init = 0.0;
  CoefficientModel model;
  RefreshPolicy refresh = RefreshPolicy::PerIteration;
  std::filesystem::path output = "out";
  bool vtk = false;
  bool cache = true;
  unsigned seed = 0;

  /// Throws ConfigError on inconsistent values.
  void validate() const;

  SolverConfig solver() const;
  OfflineOptions offline(SnapshotKind kind) const;
  /// Enrichment combinations (N_on^p, N_on^u) with N_on^p <= N_on^u, ordered by N_on^u then N_on^p.
  std::vector<std::pair<int, int>> enrichment_pairs() const;
};

/// Relative paths in the file resolve against `base_dir`.
ExperimentConfig parse_config(std::istream& is, const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);

/// Applies a single `key = value` setting; throws ConfigError on unknown keys.
void apply_setting(ExperimentConfig& config, const std::string& key, const std::string& value,
                   const std::filesystem::path& base_dir = {});

std::string to_string(PermeabilityLaw law);
std::string to_string(SnapshotKind kind);
PermeabilityLaw parse_law(const std::string& s);
SnapshotKind parse_snapshot(const std::string& s);

}  // namespace poromulti
