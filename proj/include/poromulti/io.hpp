#pragma once

#include "poromulti/mesh.hpp"
#include "poromulti/solver_coarse.hpp"
#include "poromulti/solver_fine.hpp"

#include <Eigen/Core>

#include <filesystem>
#include <iosfwd>

namespace poromulti {

/// Legacy ASCII unstructured grid with point arrays `pressure` and `displacement`.
void write_vtk(std::ostream& os, const TriMesh& mesh, const PoroState& state);
void export_vtk(const std::filesystem::path& path, const TriMesh& mesh, const PoroState& state);

/// Solution state together with its mesh:
///   poro_state v1
///   t <time>
///   <mesh block>
///   fields <N>
///   <p ux uy>   (N lines)
void write_state(std::ostream& os, const TriMesh& mesh, const PoroState& state);
void read_state(std::istream& is, TriMesh& mesh, PoroState& state);
void save_state(const std::filesystem::path& path, const TriMesh& mesh, const PoroState& state);
void load_state(const std::filesystem::path& path, TriMesh& mesh, PoroState& state);

/// Dense matrix as comma-separated rows.
void write_matrix_csv(std::ostream& os, const Eigen::MatrixXd& m);

/// Binary cache of offline spaces and parameter samples behind a text key line. Open streams in binary mode.
void write_offline_stage(std::ostream& os, const std::string& key, const OfflineStage& stage);
/// Returns false when the stored key differs from `key`.
bool read_offline_stage(std::istream& is, const std::string& key, OfflineStage& stage);

std::ofstream open_output(const std::filesystem::path& path);

}  // namespace poromulti
