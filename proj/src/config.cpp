#include "poromulti/config.hpp"

#include "poromulti/error.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <sstream>

namespace poromulti {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(value);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

int to_int(const std::string& key, const std::string& v) {
  int out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) throw ConfigError(key + ": expected an integer, got '" + v + "'");
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used == v.size()) return d;
  } catch (const std::exception&) {
  }
  throw ConfigError(key + ": expected a number, got '" + v + "'");
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError(key + ": expected a boolean, got '" + v + "'");
}

std::vector<int> to_ints(const std::string& key, const std::string& v) {
  std::vector<int> out;
  for (const std::string& s : split_list(v)) out.push_back(to_int(key, s));
  if (out.empty()) throw ConfigError(key + ": empty list");
  return out;
}

std::array<double, 2> to_pair(const std::string& key, const std::string& v) {
  const std::vector<std::string> items = split_list(v);
  if (items.size() != 2) throw ConfigError(key + ": expected two values (region 1, region 2)");
  return {to_double(key, items[0]), to_double(key, items[1])};
}

template <typename T, typename F>
std::vector<T> to_enum_list(const std::string& key, const std::string& v, F parse) {
  std::vector<T> out;
  for (const std::string& s : split_list(v)) out.push_back(parse(s));
  if (out.empty()) throw ConfigError(key + ": empty list");
  return out;
}

}  // namespace

std::string to_string(PermeabilityLaw law) { return law == PermeabilityLaw::Linear ? "linear" : "nonlinear"; }
std::string to_string(SnapshotKind kind) { return kind == SnapshotKind::Harmonic ? "harmonic" : "spectral"; }

PermeabilityLaw parse_law(const std::string& s) {
  if (s == "linear") return PermeabilityLaw::Linear;
  if (s == "nonlinear" || s == "exp_pressure") return PermeabilityLaw::ExpPressure;
  throw ConfigError("unknown law '" + s + "' (expected linear or nonlinear)");
}

SnapshotKind parse_snapshot(const std::string& s) {
  if (s == "harmonic" || s == "1") return SnapshotKind::Harmonic;
  if (s == "spectral" || s == "2") return SnapshotKind::Spectral;
  throw ConfigError("unknown snapshot space '" + s + "' (expected harmonic or spectral)");
}

void apply_setting(ExperimentConfig& c, const std::string& key, const std::string& value,
                   const std::filesystem::path& base_dir) {
  auto path = [&](const std::string& v) {
    std::filesystem::path p(v);
    return p.is_relative() && !base_dir.empty() ? base_dir / p : p;
  };
  static const std::map<std::string, std::function<void(ExperimentConfig&, const std::string&,
                                                          const std::function<std::filesystem::path(const std::string&)>&)>>
      setters = {
          {"fine_n", [](auto& c, auto& v, auto&) { c.fine_n = to_int("fine_n", v); }},
          {"coarse_n", [](auto& c, auto& v, auto&) { c.coarse_n = to_ints("coarse_n", v); }},
          {"geometry", [](auto& c, auto& v, auto& p) { c.geometry = v.empty() ? std::filesystem::path{} : p(v); }},
          {"law", [](auto& c, auto& v, auto&) { c.laws = to_enum_list<PermeabilityLaw>("law", v, parse_law); }},
          {"snapshot", [](auto& c, auto& v, auto&) { c.snapshots = to_enum_list<SnapshotKind>("snapshot", v, parse_snapshot); }},
          {"param_n", [](auto& c, auto& v, auto&) { c.param_n = to_int("param_n", v); }},
          {"spectral_l", [](auto& c, auto& v, auto&) { c.spectral_l = to_int("spectral_l", v); }},
          {"n_off", [](auto& c, auto& v, auto&) { c.n_off = to_int("n_off", v); }},
          {"n_on_p", [](auto& c, auto& v, auto&) { c.n_on_p = to_ints("n_on_p", v); }},
          {"n_on_u", [](auto& c, auto& v, auto&) { c.n_on_u = to_ints("n_on_u", v); }},
          {"t_max", [](auto& c, auto& v, auto&) { c.t_max = to_double("t_max", v); }},
          {"steps", [](auto& c, auto& v, auto&) { c.steps = to_int("steps", v); }},
          {"delta", [](auto& c, auto& v, auto&) { c.delta = to_double("delta", v); }},
          {"max_picard", [](auto& c, auto& v, auto&) { c.max_picard = to_int("max_picard", v); }},
          {"p_top", [](auto& c, auto& v, auto&) { c.p_top = to_double("p_top", v); }},
          {"p_bottom", [](auto& c, auto& v, auto&) { c.p_bottom = to_double("p_bottom", v); }},
          {"p_init", [](auto& c, auto& v, auto&) { c.p_init = to_double("p_init", v); }},
          {"biot_modulus", [](auto& c, auto& v, auto&) { c.model.biot_modulus = to_pair("biot_modulus", v); }},
          {"log_permeability", [](auto& c, auto& v, auto&) { c.model.linear_log_permeability = to_pair("log_permeability", v); }},
          {"pressure_rate", [](auto& c, auto& v, auto&) { c.model.pressure_rate = to_pair("pressure_rate", v); }},
          {"youngs_modulus", [](auto& c, auto& v, auto&) { c.model.youngs_modulus = to_pair("youngs_modulus", v); }},
          {"poisson_ratio", [](auto& c, auto& v, auto&) { c.model.poisson_ratio = to_double("poisson_ratio", v); }},
          {"alpha", [](auto& c, auto& v, auto&) { c.model.alpha = to_double("alpha", v); }},
          {"refresh",
           [](auto& c, auto& v, auto&) {
             if (v == "iteration")
               c.refresh = RefreshPolicy::PerIteration;
             else if (v == "step")
               c.refresh = RefreshPolicy::PerStep;
             else
               throw ConfigError("refresh: expected iteration or step");
           }},
          {"output", [](auto& c, auto& v, auto& p) { c.output = p(v); }},
          {"vtk", [](auto& c, auto& v, auto&) { c.vtk = to_bool("vtk", v); }},
          {"cache", [](auto& c, auto& v, auto&) { c.cache = to_bool("cache", v); }},
          {"seed", [](auto& c, auto& v, auto&) { c.seed = static_cast<unsigned>(to_int("seed", v)); }},
      };
  const auto it = setters.find(key);
  if (it == setters.end()) throw ConfigError("unknown configuration key '" + key + "'");
  it->second(c, value, path);
}

ExperimentConfig parse_config(std::istream& is, const std::filesystem::path& base_dir) {
  ExperimentConfig c;
  std::string line;
  int number = 0;
  while (std::getline(is, line)) {
    ++number;
    line = trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(number) + ": expected key = value");
    apply_setting(c, trim(line.substr(0, eq)), trim(line.substr(eq + 1)), base_dir);
  }
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open configuration " + path.string());
  return parse_config(in, path.parent_path());
}

void ExperimentConfig::validate() const {
  if (fine_n < 1) throw ConfigError("fine_n must be positive");
  for (int n : coarse_n)
    if (n < 1 || fine_n % n != 0) throw ConfigError("every coarse_n must divide fine_n");
  if (param_n < 1) throw ConfigError("param_n must be positive");
  if (spectral_l < 1) throw ConfigError("spectral_l must be positive");
  if (n_off < 0) throw ConfigError("n_off must be non-negative");
  for (int n : n_on_p)
    if (n < 1) throw ConfigError("n_on_p entries must be positive");
  for (int n : n_on_u)
    if (n < 1) throw ConfigError("n_on_u entries must be positive");
  if (n_off > 0 && (*std::max_element(n_on_p.begin(), n_on_p.end()) > n_off ||
                    *std::max_element(n_on_u.begin(), n_on_u.end()) > n_off))
    throw ConfigError("n_off must not be smaller than any requested N_on");
  if (enrichment_pairs().empty()) throw ConfigError("no enrichment pair satisfies n_on_p <= n_on_u");
  if (!(t_max > 0.0)) throw ConfigError("t_max must be positive");
  if (laws.empty() || snapshots.empty()) throw ConfigError("law and snapshot lists must not be empty");
  solver().validate();
  try {
    model.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

SolverConfig ExperimentConfig::solver() const {
  SolverConfig s = SolverConfig::from_final_time(t_max, std::max(steps, 1));
  s.steps = steps;
  s.picard_tol = delta;
  s.max_picard = max_picard;
  s.p_init = p_init;
  return s;
}

OfflineOptions ExperimentConfig::offline(SnapshotKind kind) const {
  OfflineOptions o;
  o.snapshot = kind;
  o.box.n_p = param_n;
  o.spectral_l = spectral_l;
  const int n_p = n_off > 0 ? n_off : default_offline_size(n_on_p);
  const int n_u = n_off > 0 ? n_off : default_offline_size(n_on_u);
  o.n_off_p = o.n_off_u = std::max(n_p, n_u);
  return o;
}

std::vector<std::pair<int, int>> ExperimentConfig::enrichment_pairs() const {
  std::vector<int> ps = n_on_p, us = n_on_u;
  std::sort(ps.begin(), ps.end());
  ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
  std::sort(us.begin(), us.end());
  us.erase(std::unique(us.begin(), us.end()), us.end());
  std::vector<std::pair<int, int>> out;
  for (int u : us)
    for (int p : ps)
      if (p <= u) out.emplace_back(p, u);
  return out;
}

}  // namespace poromulti
