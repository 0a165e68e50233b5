#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "jdisc/grid.hpp"

namespace jdisc {

using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

/// Thrown when a structure cannot be evaluated at a point (singular
/// J + J_st, non-invertible Jacobian, |A| >= 1, point outside the box).
class StructureError : public Error {
 public:
  StructureError(const std::string& what, CVector point)
      : Error(what), point_(std::move(point)) {}
  const CVector& point() const { return point_; }

 private:
  CVector point_;
};

/// Interleaved real coordinates (Re z1, Im z1, Re z2, ...).
RVector to_real(const CVector& z);
CVector to_complex(const RVector& x);

/// Multiplication by i on R^{2n}.
RMatrix standard_structure(int dim);

/// Real 2n x 2n matrix of the real-linear map v -> P v + R conj(v).
RMatrix real_matrix(const CMatrix& linear, const CMatrix& antilinear);

/// An almost complex structure J on R^{2n}.
class StructureField {
 public:
  using Eval = std::function<RMatrix(const CVector&)>;
  using Derivative = std::function<RMatrix(const CVector&, const CVector&)>;

  StructureField(int dim, Eval eval, Derivative derivative = {}, bool standard = false);

  int dim() const { return dim_; }
  bool is_standard() const { return standard_; }
  bool has_analytic_derivative() const { return static_cast<bool>(derivative_); }

  RMatrix operator()(const CVector& z) const { return eval_(z); }

  /// d_z J (direction). Analytic when available, otherwise central
  /// differences with one Richardson step.
  RMatrix derivative(const CVector& z, const CVector& direction) const;

  /// Richardson-extrapolated central difference, regardless of whether an
  /// analytic derivative exists.
  RMatrix numeric_derivative(const CVector& z, const CVector& direction) const;

 private:
  int dim_;
  Eval eval_;
  Derivative derivative_;
  bool standard_;
};

/// The complex matrix field A of f_zetabar + A(f) conj(f_zeta) = 0.
class BeltramiField {
 public:
  using Eval = std::function<CMatrix(const CVector&)>;
  /// Returns (dA/dz_j, dA/dzbar_j).
  using Partials = std::function<std::pair<CMatrix, CMatrix>(const CVector&, int)>;

  BeltramiField(int dim, Eval eval, Partials partials = {}, bool zero = false);

  static BeltramiField zero(int dim);

  int dim() const { return dim_; }
  bool is_zero() const { return zero_; }

  CMatrix operator()(const CVector& z) const;
  std::pair<CMatrix, CMatrix> partials(const CVector& z, int j) const;

  /// d_z A (v) = sum_j dA/dz_j v_j + dA/dzbar_j conj(v_j).
  CMatrix directional(const CVector& z, const CVector& v) const;

 private:
  int dim_;
  Eval eval_;
  Partials partials_;
  bool zero_;
};

/// A(z)(v) = (J(z) + J_st)^{-1} (J(z) - J_st)(conj v). Partials by central
/// differences with step 1e-5 * max(1, |z|). Throws StructureError where
/// J + J_st is singular.
BeltramiField to_beltrami(const StructureField& J);

/// Inverse of to_beltrami at one point: J = J_st (I + Q)(I - Q)^{-1} with
/// Q(v) = A conj(v). Requires |A| < 1.
RMatrix structure_from_beltrami(const CMatrix& a);

/// Nodewise coefficients of the linearized equation along f:
/// B1 V + B2 conj(V) = (sum_j dA/dz_j(f) V_j + dA/dzbar_j(f) conj V_j) conj(f_zeta).
struct LinearizationCoefficients {
  std::vector<CMatrix> a_f;  // A(f) per node
  std::vector<CMatrix> b1;
  std::vector<CMatrix> b2;
};

LinearizationCoefficients linearization_coefficients(const BeltramiField& A, const DiscMap& f);

/// Polynomial diffeomorphism used by the pullback family:
///   Phi_1(z) = z_1 + eps conj(z_1)^2,
///   Phi_k(z) = z_k + eps conj(z_1) conj(z_k)  (k >= 2).
/// Its Jacobian is v -> v + R(z) conj(v) with R conjugate-linear in z.
class PolynomialDiffeo {
 public:
  PolynomialDiffeo(double eps, int dim) : eps_(eps), dim_(dim) {}

  double eps() const { return eps_; }
  int dim() const { return dim_; }

  CVector operator()(const CVector& z) const;
  /// Antilinear part R(z) of the Jacobian (the linear part is the identity).
  CMatrix antilinear_part(const CVector& z) const;
  RMatrix jacobian(const CVector& z) const;
  /// Newton inversion of Phi; throws StructureError if it does not converge.
  CVector inverse(const CVector& w) const;

 private:
  double eps_;
  int dim_;
};

/// Test families of almost complex structures.
///   standard          params [n = 1]
///   pullback_poly     params [eps, n = 1, box = 2]: J = dPhi^{-1} J_st dPhi
///   beltrami_direct   params [n, a0re, a0im, (bre, bim, cre, cim) x n, box = 1.5]:
///                     A(z) = (a0 + sum_k b_k z_k + c_k conj z_k) I_n
/// Validation samples 100 deterministic points in the ball of radius box.
StructureField structure_zoo(const std::string& name, const std::vector<double>& params);

/// Analytic Beltrami field for a zoo structure (A = R for the pullback family,
/// the affine field for beltrami_direct, 0 for standard).
BeltramiField beltrami_zoo(const std::string& name, const std::vector<double>& params);

}  // namespace jdisc
