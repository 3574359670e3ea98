#include "oracles.hpp"

#include "poromulti/metrics.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace poromulti;

namespace {

struct MetricsSetup {
  TriMesh mesh = build_structured_mesh(40);
  std::vector<int> homogeneous = std::vector<int>(mesh.num_cells(), kBackground);
  std::vector<int> layout = cell_regions(mesh, GeometrySpec::default_layout());
  CoefficientModel model;
};

}  // namespace

TEST(Metrics, IdenticalAndZeroFields) {
  const MetricsSetup s;
  const Vector p = oracle::nodal(s.mesh, [](const Point& x) { return 1.0 + x.x() * x.y(); });
  const Vector u = oracle::nodal2(s.mesh, [](const Point& x) { return Eigen::Vector2d(x.y(), x.x() * x.x()); });
  const ErrorPair ep = error_pressure(p, p, s.mesh, s.layout, s.model);
  EXPECT_EQ(ep.l2, 0.0);
  EXPECT_EQ(ep.h1, 0.0);
  const ErrorPair eu = error_displacement(u, u, s.mesh, s.layout, s.model);
  EXPECT_EQ(eu.l2, 0.0);
  EXPECT_EQ(eu.h1, 0.0);

  const ErrorPair zp = error_pressure(p, Vector::Zero(p.size()), s.mesh, s.layout, s.model);
  EXPECT_NEAR(zp.l2, 1.0, 1e-14);
  EXPECT_NEAR(zp.h1, 1.0, 1e-14);
  const ErrorPair zu = error_displacement(u, Vector::Zero(u.size()), s.mesh, s.layout, s.model);
  EXPECT_NEAR(zu.l2, 1.0, 1e-14);
  EXPECT_NEAR(zu.h1, 1.0, 1e-14);
  EXPECT_THROW(error_pressure(Vector::Zero(p.size()), p, s.mesh, s.layout, s.model), std::invalid_argument);
}

TEST(Metrics, ClosedFormPressureErrors) {
  const MetricsSetup s;
  const Vector pf = oracle::nodal(s.mesh, [](const Point& x) { return x.y(); });
  const Vector pm = oracle::nodal(s.mesh, [](const Point& x) { return x.y() + 0.1 * x.y() * (1.0 - x.y()); });
  const ErrorPair e = error_pressure(pf, pm, s.mesh, s.homogeneous, s.model);
  EXPECT_NEAR(e.l2, 0.1 * std::sqrt(0.1), 0.02 * 0.1 * std::sqrt(0.1));
  EXPECT_NEAR(e.h1, 0.1 / std::sqrt(3.0), 0.02 * 0.1 / std::sqrt(3.0));
}

TEST(Metrics, TranslationHasNoEnergy) {
  const MetricsSetup s;
  const Vector uf = oracle::nodal2(s.mesh, [](const Point& x) { return Eigen::Vector2d(x.x() * x.y(), x.y()); });
  const Vector shift = oracle::nodal2(s.mesh, [](const Point&) { return Eigen::Vector2d(0.3, -0.2); });
  const ErrorPair e = error_displacement(uf, uf + shift, s.mesh, s.layout, s.model);
  EXPECT_GT(e.l2, 0.0);
  EXPECT_LT(e.h1, 1e-6);  // square root of round-off
}

TEST(Metrics, HomogeneityShiftInvarianceAndTriangleInequality) {
  const MetricsSetup s;
  const Vector pf = oracle::nodal(s.mesh, [](const Point& x) { return x.y() + 0.2 * x.x(); });
  const Vector pm = oracle::nodal(s.mesh, [](const Point& x) { return x.y() * x.y(); });
  const Vector pq = oracle::nodal(s.mesh, [](const Point& x) { return std::sin(x.x() + x.y()); });
  const ErrorPair e = error_pressure(pf, pm, s.mesh, s.layout, s.model);
  const ErrorPair scaled = error_pressure(3.0 * pf, 3.0 * pm, s.mesh, s.layout, s.model);
  EXPECT_NEAR(scaled.l2, e.l2, 1e-12);
  EXPECT_NEAR(scaled.h1, e.h1, 1e-12);

  const Vector one = Vector::Ones(pf.size());
  const ErrorPair shifted = error_pressure(pf + one, pm + one, s.mesh, s.layout, s.model);
  EXPECT_NEAR(shifted.h1, e.h1, 1e-12);

  // Common denominators turn relative errors into absolute ones.
  const ErrorPair a = error_pressure(pf, pm, s.mesh, s.layout, s.model);
  const ErrorPair b = error_pressure(pf, pq, s.mesh, s.layout, s.model);
  const Vector mid = pf + (pm - pq);  // |pm - pq| measured from pf
  const ErrorPair c = error_pressure(pf, mid, s.mesh, s.layout, s.model);
  EXPECT_LE(a.l2, b.l2 + c.l2 + 1e-14);
  EXPECT_LE(a.h1, b.h1 + c.h1 + 1e-14);
}

TEST(Metrics, HistoriesAndCsv) {
  const MetricsSetup s;
  SolutionHistory f, m;
  for (int n = 0; n <= 2; ++n) {
    PoroState st;
    st.t = 0.1 * n;
    st.p = oracle::nodal(s.mesh, [n](const Point& x) { return 1.0 + n * x.y(); });
    st.u = oracle::nodal2(s.mesh, [n](const Point& x) { return Eigen::Vector2d((1.0 + n) * x.x(), x.y()); });
    f.states.push_back(st);
    st.p *= 1.01;
    m.states.push_back(st);
  }
  const ErrorReport r = compare_histories(f, m, s.mesh, s.layout, s.model);
  ASSERT_EQ(r.steps.size(), 2u);
  EXPECT_NEAR(r.final().t, 0.2, 1e-15);
  EXPECT_NEAR(r.final().p.l2, 0.01, 1e-12);
  EXPECT_EQ(r.final().u.l2, 0.0);

  std::ostringstream os;
  write_error_csv(os, r);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "t,eps_p_L2,eps_p_H1,eps_u_L2,eps_u_H1");
  int rows = 0;
  while (std::getline(is, line)) ++rows;
  EXPECT_EQ(rows, 2);
}
