#include "gmsfem_fixture.hpp"

#include "poromulti/config.hpp"
#include "poromulti/error.hpp"
#include "poromulti/experiment.hpp"
#include "poromulti/io.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

using namespace poromulti;
namespace fs = std::filesystem;

namespace {

// Minimal reader for the legacy VTK subset written by the library.
struct VtkFile {
  std::vector<Eigen::Vector3d> points;
  std::vector<std::vector<int>> cells;
  std::vector<int> types;
  std::map<std::string, std::vector<double>> arrays;
};

VtkFile parse_vtk(const std::string& text) {
  std::istringstream is(text);
  std::string line, word;
  VtkFile f;
  std::getline(is, line);
  EXPECT_EQ(line.rfind("# vtk DataFile", 0), 0u);
  std::getline(is, line);
  is >> word;
  EXPECT_EQ(word, "ASCII");
  while (is >> word) {
    if (word == "POINTS") {
      int n;
      is >> n >> word;
      f.points.resize(n);
      for (auto& p : f.points) is >> p.x() >> p.y() >> p.z();
    } else if (word == "CELLS") {
      int n, total;
      is >> n >> total;
      f.cells.resize(n);
      for (auto& c : f.cells) {
        int k;
        is >> k;
        c.resize(k);
        for (int& v : c) is >> v;
      }
    } else if (word == "CELL_TYPES") {
      int n;
      is >> n;
      f.types.resize(n);
      for (int& t : f.types) is >> t;
    } else if (word == "SCALARS") {
      std::string name, type;
      is >> name >> type;
      std::getline(is, line);
      is >> word >> word;  // LOOKUP_TABLE default
      auto& a = f.arrays[name];
      a.resize(f.points.size());
      for (double& v : a) is >> v;
    } else if (word == "VECTORS") {
      std::string name, type;
      is >> name >> type;
      auto& a = f.arrays[name];
      a.resize(3 * f.points.size());
      for (double& v : a) is >> v;
    }
  }
  return f;
}

TriMesh two_cells() { return build_structured_mesh(1); }

PoroState some_state(const TriMesh& m) {
  PoroState s;
  s.t = 0.0125;
  s.p.resize(m.num_nodes());
  s.u.resize(2 * m.num_nodes());
  for (int v = 0; v < m.num_nodes(); ++v) {
    s.p[v] = 0.1 * v + 1.0 / 3.0;
    s.u[2 * v] = -0.5 * v;
    s.u[2 * v + 1] = 1e-7 * (v + 1);
  }
  return s;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("poromulti_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(POROMULTI_CLI) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

const char* kTinyConfig =
    "fine_n = 12\n"
    "coarse_n = 3\n"
    "law = nonlinear\n"
    "snapshot = spectral\n"
    "param_n = 2\n"
    "spectral_l = 6\n"
    "n_on_p = 2\n"
    "n_on_u = 2\n"
    "t_max = 0.0055\n"
    "steps = 1\n";

}  // namespace

TEST(Vtk, TwoCellMesh) {
  const TriMesh m = two_cells();
  const PoroState s = some_state(m);
  std::ostringstream os;
  write_vtk(os, m, s);
  const VtkFile f = parse_vtk(os.str());
  ASSERT_EQ(f.points.size(), 4u);
  ASSERT_EQ(f.cells.size(), 2u);
  EXPECT_EQ(f.types, (std::vector<int>{5, 5}));
  for (int v = 0; v < 4; ++v) {
    EXPECT_DOUBLE_EQ(f.points[v].x(), m.nodes[v].x());
    EXPECT_DOUBLE_EQ(f.points[v].y(), m.nodes[v].y());
    EXPECT_EQ(f.points[v].z(), 0.0);
    EXPECT_NEAR(f.arrays.at("pressure")[v], s.p[v], 1e-12);
    EXPECT_NEAR(f.arrays.at("displacement")[3 * v], s.u[2 * v], 1e-12);
    EXPECT_NEAR(f.arrays.at("displacement")[3 * v + 1], s.u[2 * v + 1], 1e-18);
    EXPECT_EQ(f.arrays.at("displacement")[3 * v + 2], 0.0);
  }
  for (int c = 0; c < 2; ++c)
    for (int k = 0; k < 3; ++k) EXPECT_EQ(f.cells[c][k], m.cells[c][k]);
}

TEST(StateFile, RoundTripIsExact) {
  const TriMesh m = build_structured_mesh(3);
  const PoroState s = some_state(m);
  std::stringstream ss;
  write_state(ss, m, s);
  EXPECT_EQ(ss.str().rfind("poro_state v1\n", 0), 0u);
  TriMesh m2;
  PoroState s2;
  read_state(ss, m2, s2);
  EXPECT_EQ(m2.num_nodes(), m.num_nodes());
  EXPECT_EQ(m2.num_cells(), m.num_cells());
  EXPECT_EQ(s2.t, s.t);
  EXPECT_EQ(s2.p, s.p);
  EXPECT_EQ(s2.u, s.u);

  std::istringstream bad("poro_state v2\n");
  EXPECT_ANY_THROW(read_state(bad, m2, s2));
  std::string text = ss.str();
  text.resize(text.size() / 2);
  std::istringstream truncated(text);
  EXPECT_ANY_THROW(read_state(truncated, m2, s2));
}

TEST(OfflineCache, RoundTripAndKeyMismatch) {
  const FineProblem fine = fixture::fine_problem(12, PermeabilityLaw::ExpPressure);
  const CoarseGrid grid = build_coarse_grid(build_structured_mesh(3), fine);
  OfflineOptions opt;
  opt.snapshot = SnapshotKind::Spectral;
  opt.box.n_p = 2;
  opt.spectral_l = 5;
  opt.n_off_p = opt.n_off_u = 4;
  const OfflineStage stage = build_offline_stage(grid, fine.model(), opt);

  std::stringstream ss(std::ios::in | std::ios::out | std::ios::binary);
  write_offline_stage(ss, "key-a", stage);
  const std::string bytes = ss.str();
  OfflineStage back;
  ASSERT_TRUE(read_offline_stage(ss, "key-a", back));
  ASSERT_EQ(back.pressure.size(), stage.pressure.size());
  for (std::size_t i = 0; i < stage.pressure.size(); ++i) {
    EXPECT_EQ(back.pressure[i].basis, stage.pressure[i].basis);
    EXPECT_EQ(back.pressure[i].eigenvalues, stage.pressure[i].eigenvalues);
    EXPECT_EQ(back.displacement[i].basis, stage.displacement[i].basis);
    EXPECT_EQ(back.displacement[i].snapshot_rank, stage.displacement[i].snapshot_rank);
  }
  EXPECT_EQ(back.p_samples, stage.p_samples);
  EXPECT_EQ(back.weights, stage.weights);

  std::istringstream other(bytes, std::ios::binary);
  OfflineStage ignored;
  EXPECT_FALSE(read_offline_stage(other, "key-b", ignored));
}

TEST(Config, ParsesKeysAndRejectsBadInput) {
  std::istringstream is(std::string(kTinyConfig) + "refresh = step\nbiot_modulus = 2, 20\n# comment\n\n");
  const ExperimentConfig c = parse_config(is);
  EXPECT_EQ(c.fine_n, 12);
  EXPECT_EQ(c.coarse_n, std::vector<int>{3});
  EXPECT_EQ(c.laws, std::vector<PermeabilityLaw>{PermeabilityLaw::ExpPressure});
  EXPECT_EQ(c.refresh, RefreshPolicy::PerStep);
  EXPECT_EQ(c.model.biot_modulus[1], 20.0);
  EXPECT_EQ(c.enrichment_pairs().size(), 1u);

  const ExperimentConfig d;
  EXPECT_NO_THROW(d.validate());
  EXPECT_EQ(d.param_n, 20);
  EXPECT_EQ(d.enrichment_pairs().size(), 9u);

  for (const char* bad : {"fine_n = ten\n", "colour = red\n", "coarse_n = 7\n", "law = quadratic\n",
                          "param_n = 0\n", "n_on_p = 0\n", "just words\n", "snapshot = 3\n"}) {
    std::istringstream b(bad);
    EXPECT_THROW(parse_config(b), ConfigError) << bad;
  }
}

TEST(Cli, ExitCodesAndOutputs) {
  const fs::path dir = scratch("cli");
  {
    std::ofstream(dir / "tiny.cfg") << kTinyConfig;
    std::ofstream(dir / "bad.cfg") << "fine_n = 12\ncoarse_n = 5\n";
    std::ofstream(dir / "stiff.cfg") << kTinyConfig << "max_picard = 1\n";
  }
  EXPECT_EQ(run_cli(""), 1);
  EXPECT_EQ(run_cli("run"), 1);
  EXPECT_EQ(run_cli("run --config " + (dir / "missing.cfg").string()), 1);
  EXPECT_EQ(run_cli("run --config " + (dir / "bad.cfg").string()), 1);
  EXPECT_EQ(run_cli("fine --config " + (dir / "stiff.cfg").string() + " --out " + (dir / "stiff").string()), 2);

  const fs::path out = dir / "out";
  ASSERT_EQ(run_cli("run --config " + (dir / "tiny.cfg").string() + " --out " + out.string()), 0);
  const fs::path table = out / "table_c3_nonlinear_spectral.csv";
  ASSERT_TRUE(fs::exists(table));
  const std::string first = read_file(table);
  std::istringstream rows(first);
  std::string line;
  std::getline(rows, line);
  EXPECT_EQ(line, "n_on_p,n_on_u,dim,eps_p_L2,eps_p_H1,eps_u_L2,eps_u_H1");
  int count = 0;
  while (std::getline(rows, line)) ++count;
  EXPECT_EQ(count, 1);
  EXPECT_TRUE(fs::exists(out / "stages.csv"));

  // Second run reads the offline cache and reproduces the table byte for byte.
  ASSERT_EQ(run_cli("run --config " + (dir / "tiny.cfg").string() + " --out " + out.string()), 0);
  EXPECT_EQ(read_file(table), first);
  fs::remove_all(out / "cache");
  ASSERT_EQ(run_cli("run --config " + (dir / "tiny.cfg").string() + " --out " + out.string()), 0);
  EXPECT_EQ(read_file(table), first);

  const fs::path fine_out = dir / "fine";
  ASSERT_EQ(run_cli("fine --config " + (dir / "tiny.cfg").string() + " --out " + fine_out.string()), 0);
  const fs::path state = fine_out / "fine_nonlinear" / "state_001.txt";
  ASSERT_TRUE(fs::exists(state));
  EXPECT_TRUE(fs::exists(fine_out / "fine_nonlinear" / "picard.csv"));
  const fs::path vtk = dir / "final.vtk";
  ASSERT_EQ(run_cli("export --state " + state.string() + " --vtk " + vtk.string()), 0);
  const VtkFile f = parse_vtk(read_file(vtk));
  EXPECT_EQ(f.points.size(), 169u);
  EXPECT_EQ(f.cells.size(), 288u);
  EXPECT_EQ(run_cli("export --state " + (dir / "missing.txt").string() + " --vtk " + vtk.string()), 1);
}
