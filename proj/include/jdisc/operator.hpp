#pragma once

#include <memory>
#include <string>
#include <vector>

#include "jdisc/grid.hpp"
#include "jdisc/structure.hpp"

namespace jdisc {

/// Failures of the linear and nonlinear solvers. Every instance carries the
/// last residual seen before giving up.
class SolverError : public Error {
 public:
  enum class Kind { MaxIterations, TrustBallExit, LinearSolve, Stagnation, DictionaryExhausted };

  SolverError(Kind kind, const std::string& what, double last_residual)
      : Error(what), kind_(kind), last_residual_(last_residual) {}

  Kind kind() const { return kind_; }
  double last_residual() const { return last_residual_; }

 private:
  Kind kind_;
  double last_residual_;
};

const char* to_string(SolverError::Kind kind);

/// Real coordinates of a map: index 2 * (node * dim + k) + {0: re, 1: im}.
Eigen::VectorXd to_vector(const DiscMap& f);
DiscMap from_vector(const DiscGrid& grid, int dim, const Eigen::VectorXd& x);

/// F(f) = f + T(A(f) conj(f_zeta)), with T0 in place of T when normalized.
DiscMap apply_F(const BeltramiField& A, const DiscMap& f, bool normalized = false);

/// sup |f_zetabar + A(f) conj(f_zeta)| over the nodes.
double residual(const BeltramiField& A, const DiscMap& f);

/// The real-linear map
///   V -> V + T(A(f) conj(V_zeta) + B1 V + B2 conj(V))
/// frozen at a disc f (T0 when normalized).
class Linearization {
 public:
  Linearization(const BeltramiField& A, const DiscMap& f, bool normalized);
  /// Explicit coefficient fields, e.g. manufactured ones in tests.
  Linearization(DiscGrid grid, int dim, LinearizationCoefficients coeffs, bool normalized);

  const DiscGrid& grid() const { return grid_; }
  int dim() const { return dim_; }
  bool normalized() const { return normalized_; }
  const LinearizationCoefficients& coefficients() const { return coeffs_; }

  /// All coefficient fields vanish: the map is the identity.
  bool is_identity() const { return identity_; }
  /// A(f) vanishes along f, the regime of the closed-form adjoint.
  bool beltrami_vanishes() const { return a_vanishes_; }

  DiscMap apply(const DiscMap& V) const;

  /// V - conj(B1^T T(conj V)) - B2^T T(conj V). Valid for the unnormalized
  /// map when A(f) vanishes along f.
  DiscMap adjoint_formula(const DiscMap& V) const;

  /// Dense real matrix in to_vector coordinates, one column per unknown.
  Eigen::MatrixXd assemble() const;

 private:
  DiscMap forcing(const DiscMap& V) const;

  DiscGrid grid_;
  int dim_;
  LinearizationCoefficients coeffs_;
  bool normalized_;
  bool identity_;
  bool a_vanishes_;
};

namespace reference {
/// Serial column-by-column assembly.
Eigen::MatrixXd assemble_serial(const Linearization& lin);
}  // namespace reference

struct CorrectionOptions {
  /// Singular values below kernel_threshold * sigma_max count as kernel.
  double kernel_threshold = 1e-8;
  /// Inverse iteration estimates sigma_min first; the full SVD is only
  /// computed when the estimate falls below screen_threshold * sigma_max.
  double screen_threshold = 1e-5;
  /// Highest monomial degree in the complement dictionary (0: n_angular / 2).
  int max_degree = 0;
  /// Always run the full SVD.
  bool force_svd = false;
};

/// The finite-rank correction F~(f) = F(f) + sum_j Re<f, V_j> h_j of the
/// nonlinear operator around a base disc, together with the factorized
/// corrected linearization. Immutable once built.
class CorrectedOperator {
 public:
  const BeltramiField& beltrami() const { return A_; }
  const DiscMap& base_disc() const { return base_; }
  const std::vector<DiscMap>& kernel_basis() const { return kernel_; }
  const std::vector<DiscMap>& complement_basis() const { return complement_; }
  int kernel_dim() const { return static_cast<int>(kernel_.size()); }
  bool normalized() const { return lin_->normalized(); }
  const Linearization& linearization() const { return *lin_; }

  /// 1 / sigma_min of the corrected map in the discrete L2 norm.
  double inv_norm_estimate() const { return inv_norm_; }
  double sigma_min_uncorrected() const { return sigma_min_raw_; }
  double sigma_max() const { return sigma_max_; }
  bool used_full_svd() const { return used_svd_; }
  bool is_identity() const { return lin_->is_identity() && kernel_.empty(); }

  /// Sum_j Re<V, V_j> h_j.
  DiscMap correction(const DiscMap& V) const;

  /// Same correction, linearization refrozen at another disc. No kernel
  /// search is performed; inv_norm_estimate is inherited.
  CorrectedOperator relinearized(const DiscMap& g) const;

  const Eigen::MatrixXd& matrix() const { return *matrix_; }

 private:
  friend CorrectedOperator build_corrected(const BeltramiField&, const DiscMap&,
                                           std::shared_ptr<const Linearization>,
                                           const CorrectionOptions&);
  friend DiscMap solve_dF(const CorrectedOperator&, const DiscMap&);

  CorrectedOperator(BeltramiField A, DiscMap base) : A_(std::move(A)), base_(std::move(base)) {}

  BeltramiField A_;
  DiscMap base_;
  std::shared_ptr<const Linearization> lin_;
  std::vector<DiscMap> kernel_;
  std::vector<DiscMap> complement_;
  double inv_norm_ = 1.0;
  double sigma_min_raw_ = 1.0;
  double sigma_max_ = 1.0;
  bool used_svd_ = false;
  std::shared_ptr<const Eigen::MatrixXd> matrix_;
  std::shared_ptr<const Eigen::PartialPivLU<Eigen::MatrixXd>> lu_;
};

CorrectedOperator build_corrected(const BeltramiField& A, const DiscMap& f, bool normalized,
                                  const CorrectionOptions& opts = {});

/// Build around an explicit linearization (used for manufactured kernels).
CorrectedOperator build_corrected(const BeltramiField& A, const DiscMap& f,
                                  std::shared_ptr<const Linearization> lin,
                                  const CorrectionOptions& opts = {});

/// F~(g) for the operator's correction.
DiscMap apply_F_corrected(const CorrectedOperator& op, const DiscMap& g);

/// d_f F~(V) = linearization(V) + correction(V).
DiscMap apply_dF(const CorrectedOperator& op, const DiscMap& V);

/// Adjoint with respect to Re <., .>. Closed form when A(f) vanishes along
/// f and T is unnormalized; otherwise the weighted transpose of the
/// assembled matrix.
DiscMap apply_adjoint_dF(const CorrectedOperator& op, const DiscMap& V);

/// Solve d_f F~(V) = W. Throws SolverError(LinearSolve) when the
/// factorization is numerically singular.
DiscMap solve_dF(const CorrectedOperator& op, const DiscMap& W);

struct SolveReport {
  DiscMap solution;
  double residual;  // sup |d_f F~(V) - W|
  double slack;     // holder(V) / (C holder(W)) - 1
};

SolveReport solve_dF_report(const CorrectedOperator& op, const DiscMap& W,
                            const HolderConfig& holder = {});

/// The generalized-analytic defect of a cokernel vector V (unnormalized,
/// closed-form regime): with W = T(conj V),
///   sup | W_zetabar - B1^T W - conj(B2^T) conj(W) |.
double generalized_analytic_residual(const Linearization& lin, const DiscMap& V);

/// Cokernel of the uncorrected linearization from a full SVD: the kernel of
/// the assembled closed-form adjoint in its regime, otherwise the weighted
/// left singular vectors below the threshold.
std::vector<DiscMap> discrete_cokernel(const Linearization& lin, double threshold = 1e-8);

}  // namespace jdisc
