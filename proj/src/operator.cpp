#include "jdisc/operator.hpp"

#include <cmath>
#include <random>

#include "jdisc/cauchy.hpp"

namespace jdisc {

const char* to_string(SolverError::Kind kind) {
  switch (kind) {
    case SolverError::Kind::MaxIterations: return "max_iterations";
    case SolverError::Kind::TrustBallExit: return "trust_ball_exit";
    case SolverError::Kind::LinearSolve: return "linear_solve";
    case SolverError::Kind::Stagnation: return "stagnation";
    case SolverError::Kind::DictionaryExhausted: return "dictionary_exhausted";
  }
  return "unknown";
}

Eigen::VectorXd to_vector(const DiscMap& f) {
  const auto vals = f.values();
  Eigen::VectorXd x(2 * vals.size());
  for (std::size_t i = 0; i < vals.size(); ++i) {
    x(2 * i) = vals[i].real();
    x(2 * i + 1) = vals[i].imag();
  }
  return x;
}

DiscMap from_vector(const DiscGrid& grid, int dim, const Eigen::VectorXd& x) {
  DiscMap f(grid, dim);
  auto vals = f.values();
  if (x.size() != static_cast<Eigen::Index>(2 * vals.size()))
    throw PreconditionError("from_vector: size mismatch");
  for (std::size_t i = 0; i < vals.size(); ++i) vals[i] = cplx(x(2 * i), x(2 * i + 1));
  return f;
}

namespace {

DiscMap transform(const DiscMap& u, bool normalized) {
  return normalized ? cauchy_green_normalized(u) : cauchy_green(u);
}

// sqrt of the area weight for every real unknown.
Eigen::VectorXd sqrt_weights(const DiscGrid& grid, int dim) {
  const auto w = grid.weights();
  Eigen::VectorXd s(2 * grid.size() * dim);
  for (int p = 0; p < grid.size(); ++p)
    for (int k = 0; k < 2 * dim; ++k) s(2 * dim * p + k) = std::sqrt(w[p]);
  return s;
}

}  // namespace

DiscMap apply_F(const BeltramiField& A, const DiscMap& f, bool normalized) {
  if (A.dim() != f.dim()) throw PreconditionError("apply_F: dimension mismatch");
  if (A.is_zero()) return f;
  const DiscMap fz = differentiate(f).first;
  DiscMap u(f.grid(), f.dim());
  for (int p = 0; p < f.nodes(); ++p) u.set(p, A(f.at(p)) * fz.at(p).conjugate());
  return f + transform(u, normalized);
}

double residual(const BeltramiField& A, const DiscMap& f) {
  const auto [fz, fzb] = differentiate(f);
  if (A.is_zero()) return fzb.sup_norm();
  double worst = 0.0;
  for (int p = 0; p < f.nodes(); ++p) {
    const CVector r = fzb.at(p) + A(f.at(p)) * fz.at(p).conjugate();
    worst = std::max(worst, r.norm());
  }
  return worst;
}

// ----------------------------------------------------------- Linearization

Linearization::Linearization(const BeltramiField& A, const DiscMap& f, bool normalized)
    : Linearization(f.grid(), f.dim(), linearization_coefficients(A, f), normalized) {}

Linearization::Linearization(DiscGrid grid, int dim, LinearizationCoefficients coeffs,
                             bool normalized)
    : grid_(std::move(grid)), dim_(dim), coeffs_(std::move(coeffs)), normalized_(normalized) {
  const std::size_t m = grid_.size();
  if (coeffs_.a_f.size() != m || coeffs_.b1.size() != m || coeffs_.b2.size() != m)
    throw PreconditionError("Linearization: coefficient fields do not match the grid");
  double a = 0.0, b = 0.0;
  for (std::size_t p = 0; p < m; ++p) {
    a = std::max(a, coeffs_.a_f[p].cwiseAbs().maxCoeff());
    b = std::max(b, std::max(coeffs_.b1[p].cwiseAbs().maxCoeff(),
                             coeffs_.b2[p].cwiseAbs().maxCoeff()));
  }
  a_vanishes_ = a <= 1e-14;
  identity_ = a == 0.0 && b == 0.0;
}

DiscMap Linearization::forcing(const DiscMap& V) const {
  DiscMap u(grid_, dim_);
  const bool need_derivative = !a_vanishes_;
  DiscMap vz = need_derivative ? differentiate(V).first : DiscMap(grid_, dim_);
  for (int p = 0; p < grid_.size(); ++p) {
    const CVector v = V.at(p);
    CVector acc = coeffs_.b1[p] * v + coeffs_.b2[p] * v.conjugate();
    if (need_derivative) acc += coeffs_.a_f[p] * vz.at(p).conjugate();
    u.set(p, acc);
  }
  return u;
}

DiscMap Linearization::apply(const DiscMap& V) const {
  if (identity_) return V;
  return V + transform(forcing(V), normalized_);
}

DiscMap Linearization::adjoint_formula(const DiscMap& V) const {
  if (identity_) return V;
  const DiscMap w = cauchy_green(V.conj());
  DiscMap out = V;
  for (int p = 0; p < grid_.size(); ++p) {
    const CVector wp = w.at(p);
    const CVector term =
        (coeffs_.b1[p].transpose() * wp).conjugate() + coeffs_.b2[p].transpose() * wp;
    out.set(p, out.at(p) - term);
  }
  return out;
}

namespace {

Eigen::MatrixXd assemble_impl(const Linearization& lin, bool threaded) {
  const int n = 2 * lin.grid().size() * lin.dim();
  Eigen::MatrixXd mat(n, n);
#pragma omp parallel for schedule(dynamic, 8) if (threaded)
  for (int c = 0; c < n; ++c) {
    DiscMap e(lin.grid(), lin.dim());
    e.values()[c / 2] = (c % 2 == 0) ? cplx(1.0, 0.0) : cplx(0.0, 1.0);
    mat.col(c) = to_vector(lin.apply(e));
  }
  return mat;
}

}  // namespace

Eigen::MatrixXd Linearization::assemble() const { return assemble_impl(*this, true); }

namespace reference {
Eigen::MatrixXd assemble_serial(const Linearization& lin) { return assemble_impl(lin, false); }
}  // namespace reference

double generalized_analytic_residual(const Linearization& lin, const DiscMap& V) {
  const DiscMap w = cauchy_green(V.conj());
  const DiscMap wzb = differentiate(w).second;
  const auto& c = lin.coefficients();
  double worst = 0.0;
  for (int p = 0; p < w.nodes(); ++p) {
    const CVector wp = w.at(p);
    const CVector d =
        wzb.at(p) - c.b1[p].transpose() * wp - c.b2[p].adjoint() * wp.conjugate();
    worst = std::max(worst, d.norm());
  }
  return worst;
}

std::vector<DiscMap> discrete_cokernel(const Linearization& lin, double threshold) {
  const Eigen::VectorXd s = sqrt_weights(lin.grid(), lin.dim());
  const int n = static_cast<int>(s.size());
  std::vector<DiscMap> out;
  if (!lin.normalized() && lin.beltrami_vanishes()) {
    // kernel of the closed-form adjoint
    Eigen::MatrixXd adj(n, n);
#pragma omp parallel for schedule(dynamic, 8)
    for (int c = 0; c < n; ++c) {
      DiscMap e(lin.grid(), lin.dim());
      e.values()[c / 2] = (c % 2 == 0) ? cplx(1.0, 0.0) : cplx(0.0, 1.0);
      adj.col(c) = to_vector(lin.adjoint_formula(e));
    }
    const Eigen::MatrixXd aw = s.asDiagonal() * adj * s.cwiseInverse().asDiagonal();
    Eigen::BDCSVD<Eigen::MatrixXd> svd(aw, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    for (Eigen::Index i = 0; i < sv.size(); ++i)
      if (sv(i) < threshold * sv(0))
        out.push_back(from_vector(lin.grid(), lin.dim(), svd.matrixV().col(i).cwiseQuotient(s)));
    return out;
  }
  const Eigen::MatrixXd lw = s.asDiagonal() * lin.assemble() * s.cwiseInverse().asDiagonal();
  Eigen::BDCSVD<Eigen::MatrixXd> svd(lw, Eigen::ComputeFullU);
  const auto& sv = svd.singularValues();
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) < threshold * sv(0))
      out.push_back(from_vector(lin.grid(), lin.dim(), svd.matrixU().col(i).cwiseQuotient(s)));
  return out;
}

// -------------------------------------------------------- CorrectedOperator

namespace {

using LU = Eigen::PartialPivLU<Eigen::MatrixXd>;

double estimate_sigma_max(const Eigen::MatrixXd& m) {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> normal;
  Eigen::VectorXd x = Eigen::VectorXd::NullaryExpr(m.cols(), [&] { return normal(rng); });
  x.normalize();
  double est = 0.0;
  for (int it = 0; it < 60; ++it) {
    Eigen::VectorXd y = m.transpose() * (m * x);
    const double norm = y.norm();
    if (norm == 0.0) return 0.0;
    const double next = std::sqrt(norm);
    x = y / norm;
    if (it > 5 && std::abs(next - est) <= 1e-6 * next) return next;
    est = next;
  }
  return est;
}

// Inverse iteration on (M^T M)^{-1}; returns +inf-safe estimate of sigma_min,
// or 0 when the factorization produced non-finite values.
double estimate_sigma_min(const LU& lu, Eigen::Index n) {
  std::mt19937_64 rng(29);
  std::normal_distribution<double> normal;
  Eigen::VectorXd x = Eigen::VectorXd::NullaryExpr(n, [&] { return normal(rng); });
  x.normalize();
  double est = 0.0;
  for (int it = 0; it < 60; ++it) {
    const Eigen::VectorXd y = lu.solve(x);
    const Eigen::VectorXd z = lu.transpose().solve(y);
    const double norm = z.norm();
    if (!std::isfinite(norm) || norm == 0.0) return 0.0;
    const double next = 1.0 / std::sqrt(norm);
    x = z / norm;
    if (it > 5 && std::abs(next - est) <= 1e-6 * next) return next;
    est = next;
  }
  return est;
}

// Rank-N update sum_j h_j (G V_j)^T in weighted coordinates: (S h_j)(S V_j)^T.
void add_correction(Eigen::MatrixXd& lw, const Eigen::VectorXd& s,
                    const std::vector<DiscMap>& kernel, const std::vector<DiscMap>& complement) {
  for (std::size_t j = 0; j < kernel.size(); ++j) {
    const Eigen::VectorXd sh = s.cwiseProduct(to_vector(complement[j]));
    const Eigen::VectorXd sv = s.cwiseProduct(to_vector(kernel[j]));
    lw.noalias() += sh * sv.transpose();
  }
}

}  // namespace

DiscMap CorrectedOperator::correction(const DiscMap& V) const {
  DiscMap out(V.grid(), V.dim());
  for (std::size_t j = 0; j < kernel_.size(); ++j)
    out += complement_[j] * cplx(real_inner(V, kernel_[j]));
  return out;
}

CorrectedOperator build_corrected(const BeltramiField& A, const DiscMap& f, bool normalized,
                                  const CorrectionOptions& opts) {
  return build_corrected(A, f, std::make_shared<Linearization>(A, f, normalized), opts);
}

CorrectedOperator build_corrected(const BeltramiField& A, const DiscMap& f,
                                  std::shared_ptr<const Linearization> lin,
                                  const CorrectionOptions& opts) {
  if (!lin || !(lin->grid() == f.grid()) || lin->dim() != f.dim())
    throw PreconditionError("build_corrected: linearization does not match the disc");
  CorrectedOperator op(A, f);
  op.lin_ = std::move(lin);
  if (op.lin_->is_identity()) return op;

  const DiscGrid& grid = f.grid();
  const int dim = f.dim();
  const Eigen::VectorXd s = sqrt_weights(grid, dim);
  const Eigen::VectorXd s_inv = s.cwiseInverse();
  const Eigen::MatrixXd mat = op.lin_->assemble();
  Eigen::MatrixXd lw = s.asDiagonal() * mat * s_inv.asDiagonal();

  op.sigma_max_ = estimate_sigma_max(lw);
  auto lu = std::make_shared<LU>(lw);
  double sigma_min = estimate_sigma_min(*lu, lw.rows());

  if (opts.force_svd || sigma_min < opts.screen_threshold * op.sigma_max_) {
    op.used_svd_ = true;
    Eigen::BDCSVD<Eigen::MatrixXd> svd(lw, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    op.sigma_max_ = sv(0);
    sigma_min = sv(sv.size() - 1);
    std::vector<Eigen::Index> small;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
      if (sv(i) < opts.kernel_threshold * sv(0)) small.push_back(i);

    if (!small.empty()) {
      // Cokernel coordinates of candidate complements ζ^k e_c and i ζ^k e_c.
      const int n_kernel = static_cast<int>(small.size());
      std::vector<Eigen::VectorXd> cokernel;
      for (auto i : small) {
        op.kernel_.push_back(from_vector(grid, dim, svd.matrixV().col(i).cwiseProduct(s_inv)));
        cokernel.push_back(svd.matrixU().col(i).cwiseProduct(s_inv));
      }
      const Eigen::VectorXd gw = s.cwiseProduct(s);
      const int k0 = op.lin_->normalized() ? 2 : 0;
      const int k1 = opts.max_degree > 0 ? opts.max_degree : grid.n_angular() / 2 - 1;
      std::vector<Eigen::VectorXd> accepted;
      for (int k = k0; k <= k1 && static_cast<int>(accepted.size()) < n_kernel; ++k) {
        for (int c = 0; c < dim && static_cast<int>(accepted.size()) < n_kernel; ++c) {
          for (cplx unit : {cplx(1.0, 0.0), cplx(0.0, 1.0)}) {
            if (static_cast<int>(accepted.size()) == n_kernel) break;
            std::vector<std::vector<cplx>> coeffs(dim);
            coeffs[c].assign(k + 1, 0.0);
            coeffs[c][k] = unit;
            const DiscMap h = holomorphic_polynomial(grid, coeffs);
            const Eigen::VectorXd hv = to_vector(h).cwiseProduct(gw);
            Eigen::VectorXd coord(n_kernel);
            for (int l = 0; l < n_kernel; ++l) coord(l) = hv.dot(cokernel[l]);
            const double size = coord.norm();
            Eigen::VectorXd rest = coord;
            for (const auto& q : accepted) rest -= q.dot(rest) * q;
            if (size < 1e-10 || rest.norm() < 1e-3 * size) continue;
            accepted.push_back(rest / rest.norm());
            op.complement_.push_back(h);
          }
        }
      }
      if (static_cast<int>(accepted.size()) < n_kernel)
        throw SolverError(SolverError::Kind::DictionaryExhausted,
                          "build_corrected: monomial dictionary does not complement the range",
                          sv(sv.size() - 1));
    }
    op.sigma_min_raw_ = sigma_min;
    if (!op.kernel_.empty()) {
      add_correction(lw, s, op.kernel_, op.complement_);
      lu = std::make_shared<LU>(lw);
      sigma_min = estimate_sigma_min(*lu, lw.rows());
    }
  } else {
    op.sigma_min_raw_ = sigma_min;
  }

  if (!(sigma_min > opts.kernel_threshold * op.sigma_max_))
    throw SolverError(SolverError::Kind::LinearSolve,
                      "build_corrected: corrected linearization is not invertible", sigma_min);
  op.inv_norm_ = 1.0 / sigma_min;
  Eigen::MatrixXd corrected = mat;
  for (std::size_t j = 0; j < op.kernel_.size(); ++j)
    corrected.noalias() +=
        to_vector(op.complement_[j]) * to_vector(op.kernel_[j]).cwiseProduct(s).cwiseProduct(s).transpose();
  op.matrix_ = std::make_shared<const Eigen::MatrixXd>(std::move(corrected));
  op.lu_ = std::move(lu);
  return op;
}

CorrectedOperator CorrectedOperator::relinearized(const DiscMap& g) const {
  if (!(g.grid() == base_.grid()) || g.dim() != base_.dim())
    throw PreconditionError("relinearized: disc does not match the operator");
  CorrectedOperator op = *this;
  op.base_ = g;
  op.lin_ = std::make_shared<Linearization>(A_, g, normalized());
  if (op.is_identity()) {
    op.matrix_.reset();
    op.lu_.reset();
    return op;
  }
  const Eigen::VectorXd s = sqrt_weights(g.grid(), g.dim());
  Eigen::MatrixXd mat = op.lin_->assemble();
  for (std::size_t j = 0; j < kernel_.size(); ++j)
    mat.noalias() +=
        to_vector(complement_[j]) * to_vector(kernel_[j]).cwiseProduct(s).cwiseProduct(s).transpose();
  op.lu_ = std::make_shared<const LU>(s.asDiagonal() * mat * s.cwiseInverse().asDiagonal());
  op.matrix_ = std::make_shared<const Eigen::MatrixXd>(std::move(mat));
  return op;
}

DiscMap apply_F_corrected(const CorrectedOperator& op, const DiscMap& g) {
  return apply_F(op.beltrami(), g, op.normalized()) + op.correction(g);
}

DiscMap apply_dF(const CorrectedOperator& op, const DiscMap& V) {
  return op.linearization().apply(V) + op.correction(V);
}

DiscMap apply_adjoint_dF(const CorrectedOperator& op, const DiscMap& V) {
  if (op.is_identity()) return V;
  const Linearization& lin = op.linearization();
  if (!lin.normalized() && lin.beltrami_vanishes()) {
    DiscMap out = lin.adjoint_formula(V);
    for (std::size_t j = 0; j < op.kernel_basis().size(); ++j)
      out += op.kernel_basis()[j] * cplx(real_inner(op.complement_basis()[j], V));
    return out;
  }
  const Eigen::VectorXd s = sqrt_weights(V.grid(), V.dim());
  const Eigen::VectorXd g = s.cwiseProduct(s);
  const Eigen::VectorXd y = op.matrix().transpose() * g.cwiseProduct(to_vector(V));
  return from_vector(V.grid(), V.dim(), y.cwiseQuotient(g));
}

DiscMap solve_dF(const CorrectedOperator& op, const DiscMap& W) {
  if (!(W.grid() == op.base_disc().grid()) || W.dim() != op.base_disc().dim())
    throw PreconditionError("solve_dF: right-hand side does not match the operator");
  if (op.is_identity()) return W;
  const Eigen::VectorXd s = sqrt_weights(W.grid(), W.dim());
  const Eigen::VectorXd b = to_vector(W);
  const Eigen::VectorXd x = op.lu_->solve(s.cwiseProduct(b)).cwiseQuotient(s);
  const double scale = std::max(b.cwiseAbs().maxCoeff(), 1e-300);
  const double res = (op.matrix() * x - b).cwiseAbs().maxCoeff();
  if (!x.allFinite() || !(res <= 1e-6 * scale))
    throw SolverError(SolverError::Kind::LinearSolve, "solve_dF: factorization is singular", res);
  return from_vector(W.grid(), W.dim(), x);
}

SolveReport solve_dF_report(const CorrectedOperator& op, const DiscMap& W,
                            const HolderConfig& holder) {
  SolveReport rep{solve_dF(op, W), 0.0, 0.0};
  rep.residual = (apply_dF(op, rep.solution) - W).sup_norm();
  const double hw = holder_norm(W, holder);
  rep.slack = hw > 0.0 ? holder_norm(rep.solution, holder) / (op.inv_norm_estimate() * hw) - 1.0
                       : 0.0;
  return rep;
}

}  // namespace jdisc
