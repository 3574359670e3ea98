#include "poromulti/io.hpp"

#include "poromulti/error.hpp"

#include <cstdint>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <string>

namespace poromulti {
namespace {

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  return in;
}

void expect(std::istream& is, const std::string& word, const char* what) {
  std::string got;
  if (!(is >> got) || got != word) throw ConfigError(std::string(what) + ": expected '" + word + "'");
}

// Offline cache payloads are raw host-order doubles.
template <typename T>
void put(std::ostream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <typename T>
T get(std::istream& is) {
  T v{};
  if (!is.read(reinterpret_cast<char*>(&v), sizeof v)) throw ConfigError("offline cache: truncated");
  return v;
}

void write_matrix(std::ostream& os, const Eigen::MatrixXd& m) {
  put<std::int64_t>(os, m.rows());
  put<std::int64_t>(os, m.cols());
  os.write(reinterpret_cast<const char*>(m.data()), static_cast<std::streamsize>(sizeof(double) * m.size()));
}

Eigen::MatrixXd read_matrix(std::istream& is) {
  const auto r = get<std::int64_t>(is), c = get<std::int64_t>(is);
  if (r < 0 || c < 0 || r > (1 << 24) || c > (1 << 24)) throw ConfigError("offline cache: malformed matrix header");
  Eigen::MatrixXd m(r, c);
  if (!is.read(reinterpret_cast<char*>(m.data()), static_cast<std::streamsize>(sizeof(double) * m.size())))
    throw ConfigError("offline cache: truncated matrix");
  return m;
}

void write_space(std::ostream& os, const OfflineSpace& s) {
  put<std::int32_t>(os, s.hood);
  put<std::int32_t>(os, s.snapshot_rank);
  write_matrix(os, s.eigenvalues);
  write_matrix(os, s.basis);
}

OfflineSpace read_space(std::istream& is) {
  OfflineSpace s;
  s.hood = get<std::int32_t>(is);
  s.snapshot_rank = get<std::int32_t>(is);
  s.eigenvalues = read_matrix(is);
  s.basis = read_matrix(is);
  return s;
}

}  // namespace

std::ofstream open_output(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

void write_vtk(std::ostream& os, const TriMesh& mesh, const PoroState& state) {
  const int n = mesh.num_nodes();
  if (state.p.size() != n || state.u.size() != 2 * n) throw std::invalid_argument("write_vtk: state does not match mesh");
  os.precision(std::numeric_limits<double>::max_digits10);
  os << "# vtk DataFile Version 3.0\nporomulti t=" << state.t << "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  os << "POINTS " << n << " double\n";
  for (const Point& p : mesh.nodes) os << p.x() << ' ' << p.y() << " 0\n";
  os << "CELLS " << mesh.num_cells() << ' ' << 4 * mesh.num_cells() << '\n';
  for (const Cell& c : mesh.cells) os << "3 " << c[0] << ' ' << c[1] << ' ' << c[2] << '\n';
  os << "CELL_TYPES " << mesh.num_cells() << '\n';
  for (int c = 0; c < mesh.num_cells(); ++c) os << "5\n";
  os << "POINT_DATA " << n << "\nSCALARS pressure double 1\nLOOKUP_TABLE default\n";
  for (int v = 0; v < n; ++v) os << state.p[v] << '\n';
  os << "VECTORS displacement double\n";
  for (int v = 0; v < n; ++v) os << state.u[2 * v] << ' ' << state.u[2 * v + 1] << " 0\n";
}

void export_vtk(const std::filesystem::path& path, const TriMesh& mesh, const PoroState& state) {
  std::ofstream out = open_output(path);
  write_vtk(out, mesh, state);
  if (!out) throw Error("failed writing " + path.string());
}

void write_state(std::ostream& os, const TriMesh& mesh, const PoroState& state) {
  const int n = mesh.num_nodes();
  if (state.p.size() != n || state.u.size() != 2 * n) throw std::invalid_argument("write_state: state does not match mesh");
  os.precision(std::numeric_limits<double>::max_digits10);
  os << "poro_state v1\nt " << state.t << '\n';
  write_mesh(os, mesh);
  os.precision(std::numeric_limits<double>::max_digits10);
  os << "fields " << n << '\n';
  for (int v = 0; v < n; ++v) os << state.p[v] << ' ' << state.u[2 * v] << ' ' << state.u[2 * v + 1] << '\n';
}

void read_state(std::istream& is, TriMesh& mesh, PoroState& state) {
  expect(is, "poro_state", "state");
  expect(is, "v1", "state");
  expect(is, "t", "state");
  if (!(is >> state.t)) throw ConfigError("state: malformed time");
  mesh = read_mesh(is);
  expect(is, "fields", "state");
  int n = -1;
  if (!(is >> n) || n != mesh.num_nodes()) throw ConfigError("state: field count does not match mesh");
  state.p.resize(n);
  state.u.resize(2 * n);
  for (int v = 0; v < n; ++v)
    if (!(is >> state.p[v] >> state.u[2 * v] >> state.u[2 * v + 1])) throw ConfigError("state: truncated fields");
}

void save_state(const std::filesystem::path& path, const TriMesh& mesh, const PoroState& state) {
  std::ofstream out = open_output(path);
  write_state(out, mesh, state);
  if (!out) throw Error("failed writing " + path.string());
}

void load_state(const std::filesystem::path& path, TriMesh& mesh, PoroState& state) {
  std::ifstream in = open_input(path);
  read_state(in, mesh, state);
}

void write_matrix_csv(std::ostream& os, const Eigen::MatrixXd& m) {
  os.precision(std::numeric_limits<double>::max_digits10);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) os << (j ? "," : "") << m(i, j);
    os << '\n';
  }
}

void write_offline_stage(std::ostream& os, const std::string& key, const OfflineStage& stage) {
  os << "offline_stage v2\n" << key << '\n';
  write_matrix(os, Eigen::Map<const Eigen::VectorXd>(stage.p_samples.data(), std::ssize(stage.p_samples)));
  write_matrix(os, Eigen::Map<const Eigen::VectorXd>(stage.weights.data(), std::ssize(stage.weights)));
  put<std::uint64_t>(os, stage.pressure.size());
  for (const OfflineSpace& s : stage.pressure) write_space(os, s);
  for (const OfflineSpace& s : stage.displacement) write_space(os, s);
}

bool read_offline_stage(std::istream& is, const std::string& key, OfflineStage& stage) {
  std::string line;
  if (!std::getline(is, line) || line != "offline_stage v2") return false;
  if (!std::getline(is, line) || line != key) return false;
  const Eigen::MatrixXd samples = read_matrix(is), weights = read_matrix(is);
  stage.p_samples.assign(samples.data(), samples.data() + samples.size());
  stage.weights.assign(weights.data(), weights.data() + weights.size());
  const auto count = get<std::uint64_t>(is);
  stage.pressure.clear();
  stage.displacement.clear();
  for (std::uint64_t i = 0; i < count; ++i) stage.pressure.push_back(read_space(is));
  for (std::uint64_t i = 0; i < count; ++i) stage.displacement.push_back(read_space(is));
  return true;
}

}  // namespace poromulti
