#include "jdisc/structure.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace jdisc {

RVector to_real(const CVector& z) {
  RVector x(2 * z.size());
  for (Eigen::Index k = 0; k < z.size(); ++k) {
    x(2 * k) = z(k).real();
    x(2 * k + 1) = z(k).imag();
  }
  return x;
}

CVector to_complex(const RVector& x) {
  CVector z(x.size() / 2);
  for (Eigen::Index k = 0; k < z.size(); ++k) z(k) = cplx(x(2 * k), x(2 * k + 1));
  return z;
}

RMatrix standard_structure(int dim) {
  RMatrix j = RMatrix::Zero(2 * dim, 2 * dim);
  for (int k = 0; k < dim; ++k) {
    j(2 * k, 2 * k + 1) = -1.0;
    j(2 * k + 1, 2 * k) = 1.0;
  }
  return j;
}

RMatrix real_matrix(const CMatrix& linear, const CMatrix& antilinear) {
  const Eigen::Index n = linear.rows();
  RMatrix m(2 * n, 2 * n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const CVector re = linear.col(k) + antilinear.col(k);
    const CVector im = cplx(0.0, 1.0) * (linear.col(k) - antilinear.col(k));
    m.col(2 * k) = to_real(re);
    m.col(2 * k + 1) = to_real(im);
  }
  return m;
}

// ---------------------------------------------------------- StructureField

StructureField::StructureField(int dim, Eval eval, Derivative derivative, bool standard)
    : dim_(dim), eval_(std::move(eval)), derivative_(std::move(derivative)), standard_(standard) {}

RMatrix StructureField::derivative(const CVector& z, const CVector& direction) const {
  if (standard_) return RMatrix::Zero(2 * dim_, 2 * dim_);
  if (derivative_) return derivative_(z, direction);
  return numeric_derivative(z, direction);
}

RMatrix StructureField::numeric_derivative(const CVector& z, const CVector& direction) const {
  const double len = direction.norm();
  if (len == 0.0) return RMatrix::Zero(2 * dim_, 2 * dim_);
  const CVector u = direction / len;
  const double h = 1e-3 * std::max(1.0, z.norm());
  auto central = [&](double step) {
    return RMatrix((eval_(z + step * u) - eval_(z - step * u)) / (2.0 * step));
  };
  return len * (4.0 * central(0.5 * h) - central(h)) / 3.0;
}

// ----------------------------------------------------------- BeltramiField

namespace {

std::pair<CMatrix, CMatrix> fd_partials(const BeltramiField::Eval& eval, const CVector& z, int j) {
  const double h = 1e-5 * std::max(1.0, z.norm());
  CVector e = CVector::Zero(z.size());
  e(j) = h;
  const CMatrix ax = (eval(z + e) - eval(z - e)) / (2.0 * h);
  e(j) = cplx(0.0, h);
  const CMatrix ay = (eval(z + e) - eval(z - e)) / (2.0 * h);
  const cplx i(0.0, 1.0);
  return {0.5 * (ax - i * ay), 0.5 * (ax + i * ay)};
}

}  // namespace

BeltramiField::BeltramiField(int dim, Eval eval, Partials partials, bool zero)
    : dim_(dim), eval_(std::move(eval)), partials_(std::move(partials)), zero_(zero) {}

BeltramiField BeltramiField::zero(int dim) {
  return BeltramiField(
      dim, [dim](const CVector&) { return CMatrix(CMatrix::Zero(dim, dim)); },
      [dim](const CVector&, int) {
        return std::pair<CMatrix, CMatrix>(CMatrix::Zero(dim, dim), CMatrix::Zero(dim, dim));
      },
      true);
}

CMatrix BeltramiField::operator()(const CVector& z) const {
  if (zero_) return CMatrix::Zero(dim_, dim_);
  return eval_(z);
}

std::pair<CMatrix, CMatrix> BeltramiField::partials(const CVector& z, int j) const {
  if (zero_) return {CMatrix::Zero(dim_, dim_), CMatrix::Zero(dim_, dim_)};
  if (partials_) return partials_(z, j);
  return fd_partials(eval_, z, j);
}

CMatrix BeltramiField::directional(const CVector& z, const CVector& v) const {
  CMatrix out = CMatrix::Zero(dim_, dim_);
  if (zero_) return out;
  for (int j = 0; j < dim_; ++j) {
    const auto [dz, dzb] = partials(z, j);
    out += dz * v(j) + dzb * std::conj(v(j));
  }
  return out;
}

BeltramiField to_beltrami(const StructureField& J) {
  const int n = J.dim();
  if (J.is_standard()) return BeltramiField::zero(n);
  auto eval = [J, n](const CVector& z) -> CMatrix {
    const RMatrix jz = J(z);
    const RMatrix jst = standard_structure(n);
    Eigen::FullPivLU<RMatrix> lu(jz + jst);
    const double scale = std::max(1.0, (jz + jst).cwiseAbs().maxCoeff());
    if (lu.rank() < 2 * n || std::abs(lu.determinant()) < 1e-12 * std::pow(scale, 2 * n)) {
      std::ostringstream msg;
      msg << "to_beltrami: J + J_st is singular at z = " << z.transpose();
      throw StructureError(msg.str(), z);
    }
    const RMatrix q = lu.solve(jz - jst);
    CMatrix a(n, n);
    for (int k = 0; k < n; ++k) a.col(k) = to_complex(q.col(2 * k));
    return a;
  };
  return BeltramiField(n, eval);
}

RMatrix structure_from_beltrami(const CMatrix& a) {
  const Eigen::Index n = a.rows();
  const RMatrix q = real_matrix(CMatrix::Zero(n, n), a);
  const RMatrix id = RMatrix::Identity(2 * n, 2 * n);
  return standard_structure(static_cast<int>(n)) * (id + q) * (id - q).inverse();
}

LinearizationCoefficients linearization_coefficients(const BeltramiField& A, const DiscMap& f) {
  const int n = f.dim();
  if (A.dim() != n) throw PreconditionError("linearization_coefficients: dimension mismatch");
  LinearizationCoefficients out;
  const int m = f.nodes();
  out.a_f.assign(m, CMatrix::Zero(n, n));
  out.b1.assign(m, CMatrix::Zero(n, n));
  out.b2.assign(m, CMatrix::Zero(n, n));
  if (A.is_zero()) return out;
  const DiscMap fz = differentiate(f).first;
  for (int p = 0; p < m; ++p) {
    const CVector z = f.at(p);
    const CVector cfz = fz.at(p).conjugate();
    out.a_f[p] = A(z);
    for (int j = 0; j < n; ++j) {
      const auto [dz, dzb] = A.partials(z, j);
      out.b1[p].col(j) = dz * cfz;
      out.b2[p].col(j) = dzb * cfz;
    }
  }
  return out;
}

// -------------------------------------------------------- PolynomialDiffeo

CVector PolynomialDiffeo::operator()(const CVector& z) const {
  CVector w = z;
  w(0) += eps_ * std::conj(z(0)) * std::conj(z(0));
  for (int k = 1; k < dim_; ++k) w(k) += eps_ * std::conj(z(0)) * std::conj(z(k));
  return w;
}

CMatrix PolynomialDiffeo::antilinear_part(const CVector& z) const {
  CMatrix r = CMatrix::Zero(dim_, dim_);
  r(0, 0) = 2.0 * eps_ * std::conj(z(0));
  for (int k = 1; k < dim_; ++k) {
    r(k, 0) = eps_ * std::conj(z(k));
    r(k, k) = eps_ * std::conj(z(0));
  }
  return r;
}

RMatrix PolynomialDiffeo::jacobian(const CVector& z) const {
  return real_matrix(CMatrix::Identity(dim_, dim_), antilinear_part(z));
}

CVector PolynomialDiffeo::inverse(const CVector& w) const {
  RVector x = to_real(w);
  const RVector target = to_real(w);
  for (int it = 0; it < 60; ++it) {
    const CVector z = to_complex(x);
    const RVector res = to_real((*this)(z)) - target;
    if (res.norm() <= 1e-15 * (1.0 + target.norm())) return z;
    x -= jacobian(z).partialPivLu().solve(res);
  }
  const CVector z = to_complex(x);
  if ((to_real((*this)(z)) - target).norm() <= 1e-13 * (1.0 + target.norm())) return z;
  throw StructureError("PolynomialDiffeo::inverse: Newton did not converge", w);
}

// ------------------------------------------------------------------- zoo

namespace {

std::vector<CVector> sample_ball(int dim, double radius, int count) {
  std::mt19937_64 rng(0x5eed);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<CVector> out;
  for (int s = 0; s < count; ++s) {
    CVector z(dim);
    for (int k = 0; k < dim; ++k) z(k) = cplx(gauss(rng), gauss(rng));
    // a quarter of the samples sit on the sphere itself
    const double rr = (s % 4 == 0) ? radius : radius * std::pow(unit(rng), 1.0 / (2.0 * dim));
    out.push_back(z * (rr / z.norm()));
  }
  return out;
}

double param(const std::vector<double>& p, std::size_t i, double fallback) {
  return i < p.size() ? p[i] : fallback;
}

int dim_param(double v, const std::string& who) {
  const int n = static_cast<int>(std::lround(v));
  if (n < 1 || std::abs(v - n) > 1e-12) throw PreconditionError(who + ": dimension must be a positive integer");
  return n;
}

void check_box(const CVector& z, double box, const char* who) {
  if (z.norm() > box * (1.0 + 1e-6)) {
    std::ostringstream msg;
    msg << who << ": evaluation at |z| = " << z.norm() << " leaves the configured box of radius "
        << box;
    throw StructureError(msg.str(), z);
  }
}

struct AffineBeltrami {
  int dim;
  cplx a0;
  std::vector<cplx> b, c;
  double box;

  cplx scalar(const CVector& z) const {
    cplx a = a0;
    for (int k = 0; k < dim; ++k) a += b[k] * z(k) + c[k] * std::conj(z(k));
    return a;
  }
};

AffineBeltrami parse_affine(const std::vector<double>& params) {
  if (params.empty()) throw PreconditionError("beltrami_direct: missing dimension parameter");
  AffineBeltrami out;
  out.dim = dim_param(params[0], "beltrami_direct");
  const std::size_t need = 3 + 4 * static_cast<std::size_t>(out.dim);
  if (params.size() != need && params.size() != need + 1)
    throw PreconditionError("beltrami_direct: expected " + std::to_string(need) +
                            " parameters (optionally one more for the box radius)");
  out.a0 = cplx(params[1], params[2]);
  for (int k = 0; k < out.dim; ++k) {
    out.b.emplace_back(params[3 + 4 * k], params[4 + 4 * k]);
    out.c.emplace_back(params[5 + 4 * k], params[6 + 4 * k]);
  }
  out.box = param(params, need, 1.5);
  return out;
}

}  // namespace

StructureField structure_zoo(const std::string& name, const std::vector<double>& params) {
  if (name == "standard") {
    const int n = dim_param(param(params, 0, 1.0), "standard");
    const RMatrix jst = standard_structure(n);
    return StructureField(
        n, [jst](const CVector&) { return jst; },
        [n](const CVector&, const CVector&) { return RMatrix(RMatrix::Zero(2 * n, 2 * n)); }, true);
  }

  if (name == "pullback_poly") {
    if (params.empty()) throw PreconditionError("pullback_poly: missing eps parameter");
    const PolynomialDiffeo phi(params[0], dim_param(param(params, 1, 1.0), "pullback_poly"));
    const double box = param(params, 2, 2.0);
    const int n = phi.dim();
    for (const CVector& z : sample_ball(n, box, 100)) {
      if (phi.jacobian(z).determinant() <= 0.0) {
        std::ostringstream msg;
        msg << "pullback_poly: Jacobian of Phi changes sign on the sample box (eps = " << phi.eps()
            << ", box = " << box << ")";
        throw StructureError(msg.str(), z);
      }
    }
    const RMatrix jst = standard_structure(n);
    auto eval = [phi, jst, box](const CVector& z) -> RMatrix {
      check_box(z, box, "pullback_poly");
      const RMatrix m = phi.jacobian(z);
      return m.partialPivLu().solve(jst * m);
    };
    auto deriv = [phi, jst, box, n](const CVector& z, const CVector& u) -> RMatrix {
      check_box(z, box, "pullback_poly");
      const RMatrix m = phi.jacobian(z);
      // Phi is quadratic, so the Jacobian is affine in z and its
      // derivative is the antilinear part evaluated at the direction.
      const RMatrix dm = real_matrix(CMatrix::Zero(n, n), phi.antilinear_part(u));
      const auto lu = m.partialPivLu();
      const RMatrix j = lu.solve(jst * m);
      return lu.solve(jst * dm - dm * j);
    };
    return StructureField(n, eval, deriv);
  }

  if (name == "beltrami_direct") {
    const AffineBeltrami aff = parse_affine(params);
    for (const CVector& z : sample_ball(aff.dim, aff.box, 100)) {
      if (std::abs(aff.scalar(z)) >= 1.0) {
        std::ostringstream msg;
        msg << "beltrami_direct: |A| = " << std::abs(aff.scalar(z)) << " >= 1 on the sample box";
        throw StructureError(msg.str(), z);
      }
    }
    const int n = aff.dim;
    auto eval = [aff, n](const CVector& z) -> RMatrix {
      check_box(z, aff.box, "beltrami_direct");
      const cplx a = aff.scalar(z);
      if (std::abs(a) >= 1.0) throw StructureError("beltrami_direct: |A| >= 1 at evaluation point", z);
      return structure_from_beltrami(a * CMatrix::Identity(n, n));
    };
    return StructureField(n, eval);
  }

  throw PreconditionError("structure_zoo: unknown structure '" + name + "'");
}

BeltramiField beltrami_zoo(const std::string& name, const std::vector<double>& params) {
  if (name == "standard") return BeltramiField::zero(dim_param(param(params, 0, 1.0), "standard"));

  if (name == "pullback_poly") {
    (void)structure_zoo(name, params);  // same validation
    const PolynomialDiffeo phi(params[0], dim_param(param(params, 1, 1.0), "pullback_poly"));
    const double box = param(params, 2, 2.0);
    const int n = phi.dim();
    auto eval = [phi, box](const CVector& z) -> CMatrix {
      check_box(z, box, "pullback_poly");
      return phi.antilinear_part(z);
    };
    auto partials = [phi, n](const CVector&, int j) {
      CVector e = CVector::Zero(n);
      e(j) = 1.0;
      // R(z) = sum_j conj(z_j) R(e_j)
      return std::pair<CMatrix, CMatrix>(CMatrix::Zero(n, n), phi.antilinear_part(e));
    };
    return BeltramiField(n, eval, partials);
  }

  if (name == "beltrami_direct") {
    (void)structure_zoo(name, params);
    const AffineBeltrami aff = parse_affine(params);
    const int n = aff.dim;
    auto eval = [aff, n](const CVector& z) -> CMatrix {
      check_box(z, aff.box, "beltrami_direct");
      return aff.scalar(z) * CMatrix::Identity(n, n);
    };
    auto partials = [aff, n](const CVector&, int j) {
      return std::pair<CMatrix, CMatrix>(aff.b[j] * CMatrix::Identity(n, n),
                                         aff.c[j] * CMatrix::Identity(n, n));
    };
    return BeltramiField(n, eval, partials);
  }

  throw PreconditionError("beltrami_zoo: unknown structure '" + name + "'");
}

}  // namespace jdisc
