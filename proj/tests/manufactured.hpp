#pragma once

#include <memory>

#include "jdisc/cauchy.hpp"
#include "jdisc/operator.hpp"

namespace jdisc::testing {

/// Linearization V -> V + T(B2 conj V) on C^2 (a_f = B1 = 0) built around
/// V0 = (1, 1 + a conj(zeta)), together with V0.
struct Manufactured {
  std::shared_ptr<const Linearization> lin;
  DiscMap v0;
};

inline DiscMap manufactured_v0(const DiscGrid& grid, double a) {
  DiscMap v0(grid, 2);
  for (int p = 0; p < grid.size(); ++p) {
    v0(p, 0) = 1.0;
    v0(p, 1) = 1.0 + a * std::conj(grid.point(p));
  }
  return v0;
}

/// B2 per node from y with B2^T conj(y) = -v0 or B2^T y = v0.
inline Manufactured manufactured_from(const DiscGrid& grid, DiscMap v0, const DiscMap& y,
                                      bool conjugate) {
  const int m = grid.size();
  LinearizationCoefficients coeffs;
  coeffs.a_f.assign(m, CMatrix::Zero(2, 2));
  coeffs.b1.assign(m, CMatrix::Zero(2, 2));
  coeffs.b2.resize(m);
  for (int p = 0; p < m; ++p) {
    const CVector yp = y.at(p), vp = v0.at(p);
    coeffs.b2[p] = conjugate ? CMatrix(-yp * vp.transpose() / yp.squaredNorm())
                             : CMatrix(yp.conjugate() * vp.transpose() / yp.squaredNorm());
  }
  return {std::make_shared<Linearization>(grid, 2, std::move(coeffs), false), std::move(v0)};
}

/// v0 spans the left null space of the assembled matrix in the weighted
/// inner product: with y = G^{-1} C^H G v0 (C the discrete transform),
/// B2 = -y v0^T / |y|^2.
inline Manufactured manufactured_discrete_kernel(const DiscGrid& grid, double a = 0.5) {
  const int m = grid.size();
  const CMatrix t = cauchy_green_matrix(grid);
  DiscMap v0 = manufactured_v0(grid, a);
  DiscMap y(grid, 2);
  for (int k = 0; k < 2; ++k) {
    Eigen::VectorXcd c(m);
    for (int p = 0; p < m; ++p) c(p) = grid.weights()[p] * v0(p, k);
    const Eigen::VectorXcd adj = t.adjoint() * c;
    for (int p = 0; p < m; ++p) y(p, k) = adj(p) / grid.weights()[p];
  }
  return manufactured_from(grid, std::move(v0), y, true);
}

/// v0 is annihilated by the closed-form adjoint V - B2^T T(conj V):
/// with W0 = T(conj v0), B2 = conj(W0) v0^T / |W0|^2.
inline Manufactured manufactured_adjoint_kernel(const DiscGrid& grid, double a = 0.5) {
  DiscMap v0 = manufactured_v0(grid, a);
  const DiscMap w0 = cauchy_green(v0.conj());
  return manufactured_from(grid, std::move(v0), w0, false);
}

}  // namespace jdisc::testing
