#include "poromulti/error.hpp"
#include "poromulti/mesh.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <sstream>

using namespace poromulti;

TEST(Mesh, StructuredCounts) {
  const TriMesh m = build_structured_mesh(60);
  EXPECT_EQ(m.num_nodes(), 3721);
  EXPECT_EQ(m.num_cells(), 7200);
  EXPECT_EQ(build_structured_mesh(5).num_nodes(), 36);
  EXPECT_EQ(build_structured_mesh(10).num_cells(), 200);
  EXPECT_THROW(build_structured_mesh(0), std::invalid_argument);
}

TEST(Mesh, AreasArePositiveAndSumToOne) {
  const TriMesh m = build_structured_mesh(7);
  for (int c = 0; c < m.num_cells(); ++c) EXPECT_NEAR(m.signed_area(c), 0.5 / 49.0, 1e-15);
  EXPECT_NEAR(m.total_area(), 1.0, 1e-13);
}

TEST(Mesh, DiagonalSplit) {
  const TriMesh m = build_structured_mesh(1);
  ASSERT_EQ(m.num_cells(), 2);
  // Both cells share the (0,0)-(1,1) diagonal.
  for (const Cell& c : m.cells) {
    int on_diagonal = 0;
    for (int v : c) on_diagonal += std::abs(m.nodes[v].x() - m.nodes[v].y()) < 1e-15;
    EXPECT_EQ(on_diagonal, 2);
  }
}

TEST(Mesh, BoundaryTags) {
  const int n = 6;
  const TriMesh m = build_structured_mesh(n);
  EXPECT_EQ(static_cast<int>(m.boundary_edges.size()), 4 * n);
  for (BoundaryTag tag : kAllBoundaryTags) {
    const std::vector<int> nodes = m.boundary_nodes(tag);
    EXPECT_EQ(static_cast<int>(nodes.size()), n + 1) << to_string(tag);
    for (int v : nodes) {
      const Point& x = m.nodes[v];
      switch (tag) {
        case BoundaryTag::Left: EXPECT_EQ(x.x(), 0.0); break;
        case BoundaryTag::Right: EXPECT_EQ(x.x(), 1.0); break;
        case BoundaryTag::Top: EXPECT_EQ(x.y(), 1.0); break;
        case BoundaryTag::Bottom: EXPECT_EQ(x.y(), 0.0); break;
      }
    }
  }
  EXPECT_EQ(parse_boundary_tag("TOP"), BoundaryTag::Top);
  EXPECT_THROW(parse_boundary_tag("NORTH"), ConfigError);
}

TEST(Mesh, RoundTrip) {
  const TriMesh m = build_structured_mesh(3);
  std::stringstream s;
  write_mesh(s, m);
  const TriMesh r = read_mesh(s);
  ASSERT_EQ(r.num_nodes(), m.num_nodes());
  ASSERT_EQ(r.num_cells(), m.num_cells());
  for (int i = 0; i < m.num_nodes(); ++i) EXPECT_EQ(r.nodes[i], m.nodes[i]);
  for (int c = 0; c < m.num_cells(); ++c) EXPECT_EQ(r.cells[c], m.cells[c]);
  ASSERT_EQ(r.boundary_edges.size(), m.boundary_edges.size());
  for (std::size_t e = 0; e < m.boundary_edges.size(); ++e) EXPECT_EQ(r.boundary_edges[e].tag, m.boundary_edges[e].tag);
}

TEST(Mesh, RejectsMalformedInput) {
  std::istringstream bad_header("vertices 3 cells 1 bedges 0\n");
  EXPECT_THROW(read_mesh(bad_header), ConfigError);
  std::istringstream clockwise("nodes 3 cells 1 bedges 0\n0 0\n1 0\n0 1\n0 2 1\n");
  EXPECT_THROW(read_mesh(clockwise), ConfigError);
  std::istringstream out_of_range("nodes 3 cells 1 bedges 0\n0 0\n1 0\n0 1\n0 1 7\n");
  EXPECT_THROW(read_mesh(out_of_range), ConfigError);
}

TEST(Mesh, Barycentric) {
  const TriMesh m = build_structured_mesh(2);
  for (int c = 0; c < m.num_cells(); ++c) {
    const Eigen::Vector3d l = barycentric(m, c, m.centroid(c));
    EXPECT_NEAR(l.sum(), 1.0, 1e-14);
    for (int k = 0; k < 3; ++k) EXPECT_NEAR(l[k], 1.0 / 3.0, 1e-14);
    const Eigen::Vector3d v = barycentric(m, c, m.nodes[m.cells[c][1]]);
    EXPECT_NEAR(v[1], 1.0, 1e-14);
  }
}

TEST(Mesh, Submesh) {
  const TriMesh m = build_structured_mesh(4);
  const std::vector<int> cells = {5, 0, 9};
  std::vector<int> l2g;
  const TriMesh s = submesh(m, cells, l2g);
  EXPECT_EQ(s.num_cells(), 3);
  EXPECT_TRUE(std::is_sorted(l2g.begin(), l2g.end()));
  for (int c = 0; c < s.num_cells(); ++c)
    for (int k = 0; k < 3; ++k) EXPECT_EQ(l2g[s.cells[c][k]], m.cells[cells[c]][k]);
}
