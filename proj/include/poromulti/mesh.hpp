#pragma once

#include <Eigen/Core>

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

namespace poromulti {

using Point = Eigen::Vector2d;
using Cell = std::array<int, 3>;

enum class BoundaryTag : std::uint8_t { Left, Right, Top, Bottom };

inline constexpr std::array<BoundaryTag, 4> kAllBoundaryTags = {
    BoundaryTag::Left, BoundaryTag::Right, BoundaryTag::Top, BoundaryTag::Bottom};

std::string_view to_string(BoundaryTag tag);
BoundaryTag parse_boundary_tag(std::string_view text);

struct BoundaryEdge {
  int a = 0;
  int b = 0;
  BoundaryTag tag = BoundaryTag::Bottom;
};

/// Conforming triangulation with counterclockwise cells and tagged boundary edges.
struct TriMesh {
  std::vector<Point> nodes;
  std::vector<Cell> cells;
  std::vector<BoundaryEdge> boundary_edges;

  int num_nodes() const { return static_cast<int>(nodes.size()); }
  int num_cells() const { return static_cast<int>(cells.size()); }

  double signed_area(int cell) const;
  Point centroid(int cell) const;
  double total_area() const;

  /// 1 for nodes touched by an edge carrying `tag`, else 0.
  std::vector<char> boundary_node_mask(BoundaryTag tag) const;
  std::vector<int> boundary_nodes(BoundaryTag tag) const;
};

/// Uniform n x n grid on the unit square, each square split along its (0,0)-(1,1) diagonal.
TriMesh build_structured_mesh(int n);

/// Throws ConfigError on out-of-range indices or non-positive cell areas.
void validate_mesh(const TriMesh& mesh);

/// Barycentric coordinates of `x` with respect to `cell`.
Eigen::Vector3d barycentric(const TriMesh& mesh, int cell, const Point& x);

/// Restriction of `mesh` to a subset of cells with compact node numbering.
/// Boundary edges are not carried over.
TriMesh submesh(const TriMesh& mesh, std::span<const int> cells,
                std::vector<int>& local_to_global);

// Plain-text format: "nodes N cells M bedges K", then N "x y", M "i j k", K "i j TAG".
void write_mesh(std::ostream& os, const TriMesh& mesh);
TriMesh read_mesh(std::istream& is);

}  // namespace poromulti
