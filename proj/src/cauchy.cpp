#include "jdisc/cauchy.hpp"

#include <cmath>
#include <numbers>

#include "grid_plan.hpp"
#include "quadrature.hpp"

namespace jdisc {

namespace detail {

// For mode m the transform's radial profile is
//   m >= 1:  T_m(r) = -2 \int_r^1 c_m(rho) (r/rho)^{m-1} d rho
//   m <= 0:  T_m(r) =  2 \int_0^r c_m(rho) (rho/r)^{1-m} d rho
// and it multiplies e^{i (m-1) theta}.
void build_cauchy_kernels(GridPlan& plan) {
  const int nr = plan.n_radial;
  const int nt = plan.n_angular;
  const int q = 2 * nr + nt / 2 + 8;
  const GaussRule rule = gauss_legendre(q);

  plan.cauchy_kernel.assign(nt, Eigen::MatrixXd::Zero(nr, nr));
  for (int s = 0; s < nt; ++s) {
    const int m = plan.mode_of_slot(s);
    const double share = (2 * s == nt) ? 0.5 : 1.0;
    const int parity = (m % 2 == 0) ? 1 : -1;
    Eigen::MatrixXd& kernel = plan.cauchy_kernel[s];
    for (int i = 0; i < nr; ++i) {
      const double r = plan.radii[i];
      Eigen::VectorXd row = Eigen::VectorXd::Zero(nr);
      if (m >= 1) {
        if (i == nr - 1) continue;
        const double half = 0.5 * (1.0 - r);
        for (int g = 0; g < q; ++g) {
          const double rho = r + half * (rule.nodes[g] + 1.0);
          const double w = -2.0 * half * rule.weights[g] * std::pow(r / rho, m - 1);
          row += w * plan.radial_weights(rho, parity);
        }
      } else {
        const double half = 0.5 * r;
        for (int g = 0; g < q; ++g) {
          const double rho = half * (rule.nodes[g] + 1.0);
          const double w = 2.0 * half * rule.weights[g] * std::pow(rho / r, 1 - m);
          row += w * plan.radial_weights(rho, parity);
        }
      }
      kernel.row(i) = share * row.transpose();
    }
  }
}

}  // namespace detail

namespace {

DiscMap transform(const DiscMap& u, bool threaded) {
  const auto& plan = u.grid().plan();
  const int nr = plan.n_radial, nt = plan.n_angular, dim = u.dim();
  const std::size_t block = static_cast<std::size_t>(nr) * nt;

  std::vector<cplx> spec(static_cast<std::size_t>(dim) * block);
  std::vector<cplx> out_spec(spec.size(), cplx(0.0));

#pragma omp parallel for collapse(2) schedule(static) if (threaded)
  for (int k = 0; k < dim; ++k) {
    for (int i = 0; i < nr; ++i) {
      static thread_local Eigen::FFT<double> fft;
      detail::Spectrum ring(nt), coeffs(nt);
      for (int j = 0; j < nt; ++j) ring[j] = u(i * nt + j, k);
      detail::ring_forward(fft, ring, coeffs);
      std::copy(coeffs.begin(), coeffs.end(), spec.begin() + k * block + i * nt);
    }
  }

  // Input slot s (mode m) writes output slot of mode m - 1; the map is
  // injective, so modes can be processed independently.
#pragma omp parallel for collapse(2) schedule(static) if (threaded)
  for (int k = 0; k < dim; ++k) {
    for (int s = 0; s < nt; ++s) {
      const int m = plan.mode_of_slot(s);
      const int target = plan.slot_of_mode(m - 1);
      const Eigen::MatrixXd& kernel = plan.cauchy_kernel[s];
      for (int i = 0; i < nr; ++i) {
        cplx acc = 0.0;
        for (int l = 0; l < nr; ++l) acc += kernel(i, l) * spec[k * block + l * nt + s];
        out_spec[k * block + i * nt + target] = acc;
      }
    }
  }

  DiscMap out(u.grid(), dim);
#pragma omp parallel for collapse(2) schedule(static) if (threaded)
  for (int k = 0; k < dim; ++k) {
    for (int i = 0; i < nr; ++i) {
      static thread_local Eigen::FFT<double> fft;
      detail::Spectrum coeffs(out_spec.begin() + k * block + i * nt,
                              out_spec.begin() + k * block + (i + 1) * nt);
      detail::Spectrum ring(nt);
      detail::ring_inverse(fft, coeffs, ring);
      for (int j = 0; j < nt; ++j) out(i * nt + j, k) = ring[j];
    }
  }
  return out;
}

}  // namespace

DiscMap cauchy_green(const DiscMap& u) { return transform(u, true); }

DiscMap cauchy_green_normalized(const DiscMap& u) {
  DiscMap t = cauchy_green(u);
  const CVector value0 = interpolate(t, cplx(0.0));
  const CVector slope0 = interpolate(differentiate(t).first, cplx(0.0));
  for (int p = 0; p < t.nodes(); ++p) {
    const cplx z = t.grid().point(p);
    for (int k = 0; k < t.dim(); ++k) t(p, k) -= value0(k) + z * slope0(k);
  }
  return t;
}

CMatrix cauchy_green_matrix(const DiscGrid& grid) {
  const int m = grid.size();
  CMatrix mat(m, m);
#pragma omp parallel for schedule(static)
  for (int c = 0; c < m; ++c) {
    DiscMap e(grid, 1);
    e(c, 0) = 1.0;
    const DiscMap col = transform(e, false);
    for (int r = 0; r < m; ++r) mat(r, c) = col(r, 0);
  }
  return mat;
}

std::vector<cplx> schwarz_coefficients(std::span<const double> chi, int max_degree) {
  const int samples = static_cast<int>(chi.size());
  if (samples == 0 || samples % 2 != 0)
    throw PreconditionError("schwarz_extend: need an even sample count");
  const int top = std::min(samples / 2, max_degree);
  Eigen::FFT<double> fft;
  detail::Spectrum ring(chi.begin(), chi.end()), spec(samples);
  detail::ring_forward(fft, ring, spec);
  std::vector<cplx> coeffs(top + 1);
  coeffs[0] = spec[0].real();
  for (int m = 1; m <= top; ++m) coeffs[m] = (2 * m == samples ? 1.0 : 2.0) * spec[m];
  return coeffs;
}

DiscMap schwarz_extend(const DiscGrid& grid, std::span<const double> chi, int dim) {
  if (dim < 1 || chi.empty() || chi.size() % dim != 0)
    throw PreconditionError("schwarz_extend: boundary data does not split into components");
  const std::size_t samples = chi.size() / dim;
  std::vector<std::vector<cplx>> coeffs(dim);
  for (int k = 0; k < dim; ++k)
    coeffs[k] = schwarz_coefficients(chi.subspan(k * samples, samples), grid.n_angular() / 2 - 1);
  return holomorphic_polynomial(grid, coeffs);
}

DiscMap holomorphic_polynomial(const DiscGrid& grid, const std::vector<std::vector<cplx>>& coeffs) {
  const int dim = static_cast<int>(coeffs.size());
  DiscMap out(grid, dim);
  for (int p = 0; p < grid.size(); ++p) {
    const cplx z = grid.point(p);
    for (int k = 0; k < dim; ++k) {
      cplx acc = 0.0;
      for (auto it = coeffs[k].rbegin(); it != coeffs[k].rend(); ++it) acc = acc * z + *it;
      out(p, k) = acc;
    }
  }
  return out;
}

namespace reference {

DiscMap cauchy_green_serial(const DiscMap& u) { return transform(u, false); }

cplx cauchy_green_direct(const std::function<cplx(cplx)>& u, cplx z, int n_psi, int n_s) {
  const auto rule = detail::gauss_legendre(n_s);
  const double rz2 = std::norm(z);
  cplx acc = 0.0;
  for (int a = 0; a < n_psi; ++a) {
    const double psi = 2.0 * std::numbers::pi * a / n_psi;
    const cplx dir = std::polar(1.0, psi);
    const double b = (std::conj(z) * dir).real();
    const double reach = -b + std::sqrt(std::max(0.0, b * b + 1.0 - rz2));
    if (reach <= 0.0) continue;
    cplx ray = 0.0;
    for (int g = 0; g < n_s; ++g) {
      const double s = 0.5 * reach * (rule.nodes[g] + 1.0);
      ray += rule.weights[g] * u(z + s * dir);
    }
    acc += std::conj(dir) * 0.5 * reach * ray;
  }
  // \iint u/(xi - z) dA = \int e^{-i psi} \int_0^S u ds d psi
  return -acc * (2.0 * std::numbers::pi / n_psi) / std::numbers::pi;
}

DiscMap cauchy_green_direct(const DiscMap& u, int n_psi, int n_s) {
  const auto rule = detail::gauss_legendre(n_s);
  const DiscGrid& grid = u.grid();
  DiscMap out(grid, u.dim());
  std::vector<cplx> pts;
  std::vector<cplx> factors;
  for (int p = 0; p < grid.size(); ++p) {
    const cplx z = grid.point(p);
    const double rz2 = std::norm(z);
    pts.clear();
    factors.clear();
    for (int a = 0; a < n_psi; ++a) {
      const cplx dir = std::polar(1.0, 2.0 * std::numbers::pi * a / n_psi);
      const double b = (std::conj(z) * dir).real();
      const double reach = -b + std::sqrt(std::max(0.0, b * b + 1.0 - rz2));
      if (reach <= 0.0) continue;
      for (int g = 0; g < n_s; ++g) {
        cplx xi = z + 0.5 * reach * (rule.nodes[g] + 1.0) * dir;
        if (std::abs(xi) > 1.0) xi /= std::abs(xi);
        pts.push_back(xi);
        factors.push_back(std::conj(dir) * 0.5 * reach * rule.weights[g]);
      }
    }
    const auto vals = interpolate(u, pts);
    for (int k = 0; k < u.dim(); ++k) {
      cplx acc = 0.0;
      for (std::size_t q = 0; q < pts.size(); ++q) acc += factors[q] * vals[q](k);
      out(p, k) = -acc * (2.0 / n_psi);
    }
  }
  return out;
}

}  // namespace reference

}  // namespace jdisc
