#pragma once

#include <Eigen/Core>

#include <stdexcept>

namespace poromulti {

/// Gradients of the three P1 barycentric basis functions (columns) and the area.
template <typename Scalar>
struct P1Triangle {
  Eigen::Matrix<Scalar, 2, 3> grads;
  Scalar area;
};

template <typename Scalar>
P1Triangle<Scalar> p1_triangle(const Eigen::Matrix<Scalar, 2, 1>& a, const Eigen::Matrix<Scalar, 2, 1>& b,
                               const Eigen::Matrix<Scalar, 2, 1>& c) {
  const Eigen::Matrix<Scalar, 2, 1> e1 = b - a, e2 = c - a;
  const Scalar det = e1.x() * e2.y() - e1.y() * e2.x();
  if (!(det > Scalar(0))) throw std::invalid_argument("degenerate or clockwise triangle");
  P1Triangle<Scalar> t;
  t.area = det / Scalar(2);
  // grad(lambda_i) = rot90(opposite edge) / (2 area)
  t.grads.col(0) << b.y() - c.y(), c.x() - b.x();
  t.grads.col(1) << c.y() - a.y(), a.x() - c.x();
  t.grads.col(2) << a.y() - b.y(), b.x() - a.x();
  t.grads /= det;
  return t;
}

/// k * integral of grad(phi_i) . grad(phi_j).
template <typename Scalar>
Eigen::Matrix<Scalar, 3, 3> p1_stiffness(const P1Triangle<Scalar>& t, Scalar k) {
  return (k * t.area) * (t.grads.transpose() * t.grads);
}

/// w * integral of phi_i phi_j.
template <typename Scalar>
Eigen::Matrix<Scalar, 3, 3> p1_mass(const P1Triangle<Scalar>& t, Scalar w) {
  return (w * t.area / Scalar(12)) * (Eigen::Matrix<Scalar, 3, 3>::Ones() + Eigen::Matrix<Scalar, 3, 3>::Identity());
}

/// Strain-displacement matrix in Voigt form (exx, eyy, 2exy); dof order x0 y0 x1 y1 x2 y2.
template <typename Scalar>
Eigen::Matrix<Scalar, 3, 6> p1_strain(const P1Triangle<Scalar>& t) {
  Eigen::Matrix<Scalar, 3, 6> B = Eigen::Matrix<Scalar, 3, 6>::Zero();
  for (int i = 0; i < 3; ++i) {
    B(0, 2 * i) = t.grads(0, i);
    B(1, 2 * i + 1) = t.grads(1, i);
    B(2, 2 * i) = t.grads(1, i);
    B(2, 2 * i + 1) = t.grads(0, i);
  }
  return B;
}

/// Isotropic plane-strain stress-strain matrix for 2 mu eps + lambda div(u) I.
template <typename Scalar>
Eigen::Matrix<Scalar, 3, 3> isotropic_elasticity(Scalar lambda, Scalar mu) {
  Eigen::Matrix<Scalar, 3, 3> C;
  C << lambda + 2 * mu, lambda, 0, lambda, lambda + 2 * mu, 0, 0, 0, mu;
  return C;
}

/// integral of 2 mu eps(phi_a):eps(phi_b) + lambda div(phi_a) div(phi_b).
template <typename Scalar>
Eigen::Matrix<Scalar, 6, 6> p1_elasticity(const P1Triangle<Scalar>& t, Scalar lambda, Scalar mu) {
  const Eigen::Matrix<Scalar, 3, 6> B = p1_strain(t);
  return t.area * (B.transpose() * isotropic_elasticity(lambda, mu) * B);
}

/// G(a, b) = alpha * integral of grad(phi_b) . psi_a with psi_a the vector basis (row 2i+c).
template <typename Scalar>
Eigen::Matrix<Scalar, 6, 3> p1_gradient_coupling(const P1Triangle<Scalar>& t, Scalar alpha) {
  Eigen::Matrix<Scalar, 6, 3> G;
  for (int i = 0; i < 3; ++i)
    for (int comp = 0; comp < 2; ++comp)
      for (int j = 0; j < 3; ++j) G(2 * i + comp, j) = alpha * t.grads(comp, j) * t.area / Scalar(3);
  return G;
}

/// D(b, a) = alpha * integral of div(psi_a) phi_b.
template <typename Scalar>
Eigen::Matrix<Scalar, 3, 6> p1_divergence_coupling(const P1Triangle<Scalar>& t, Scalar alpha) {
  Eigen::Matrix<Scalar, 3, 6> D;
  for (int j = 0; j < 3; ++j)
    for (int i = 0; i < 3; ++i)
      for (int comp = 0; comp < 2; ++comp) D(j, 2 * i + comp) = alpha * t.grads(comp, i) * t.area / Scalar(3);
  return D;
}

}  // namespace poromulti
