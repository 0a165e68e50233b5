#include "jdisc/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "grid_plan.hpp"

namespace jdisc {

namespace detail {

void build_cauchy_kernels(GridPlan& plan);  // cauchy.cpp

GridPlan::GridPlan(int nr, int nt) : n_radial(nr), n_angular(nt) {
  const int full = 2 * nr;
  cheb.resize(full);
  bary.resize(full);
  for (int k = 0; k < full; ++k) {
    cheb[k] = std::cos(std::numbers::pi * k / (full - 1));
    bary[k] = (k % 2 == 0 ? 1.0 : -1.0) * ((k == 0 || k == full - 1) ? 0.5 : 1.0);
  }

  radii.resize(nr);
  pos_index.resize(nr);
  neg_index.resize(nr);
  for (int i = 0; i < nr; ++i) {
    const int k = nr - 1 - i;  // cheb is decreasing
    radii[i] = cheb[k];
    pos_index[i] = k;
    neg_index[i] = full - 1 - k;
  }
  radii.back() = 1.0;

  angles.resize(nt);
  for (int j = 0; j < nt; ++j) angles[j] = 2.0 * std::numbers::pi * j / nt;

  // Chebyshev differentiation matrix on the full diameter.
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(full, full);
  for (int a = 0; a < full; ++a) {
    double diag = 0.0;
    for (int b = 0; b < full; ++b) {
      if (a == b) continue;
      d(a, b) = (bary[b] / bary[a]) / (cheb[a] - cheb[b]);
      diag -= d(a, b);
    }
    d(a, a) = diag;
  }
  d_pos.resize(nr, nr);
  d_neg.resize(nr, nr);
  for (int i = 0; i < nr; ++i)
    for (int l = 0; l < nr; ++l) {
      d_pos(i, l) = d(pos_index[i], pos_index[l]);
      d_neg(i, l) = d(pos_index[i], neg_index[l]);
    }

  // Area weights: after angular averaging only the even radial profile
  // c0(r) survives, and \int_0^1 c0(r) r dr = (1/2) \int_0^1 c0(sqrt s) ds
  // with c0(sqrt s) a polynomial of degree nr - 1 in s. Interpolatory
  // weights in s are therefore exact for every grid function.
  Eigen::MatrixXd leg(nr, nr);
  for (int p = 0; p < nr; ++p)
    for (int i = 0; i < nr; ++i) {
      const double s = radii[i] * radii[i];
      leg(p, i) = std::legendre(static_cast<unsigned>(p), 2.0 * s - 1.0);
    }
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nr);
  rhs(0) = 1.0;
  const Eigen::VectorXd ws = leg.colPivHouseholderQr().solve(rhs);
  weights.resize(static_cast<std::size_t>(nr) * nt);
  for (int i = 0; i < nr; ++i)
    for (int j = 0; j < nt; ++j)
      weights[i * nt + j] = (2.0 * std::numbers::pi / nt) * 0.5 * ws(i);

  build_cauchy_kernels(*this);
}

std::vector<double> GridPlan::lagrange(double x) const {
  const int full = static_cast<int>(cheb.size());
  std::vector<double> out(full, 0.0);
  for (int k = 0; k < full; ++k) {
    if (x == cheb[k]) {
      out[k] = 1.0;
      return out;
    }
  }
  double denom = 0.0;
  for (int k = 0; k < full; ++k) {
    out[k] = bary[k] / (x - cheb[k]);
    denom += out[k];
  }
  for (double& v : out) v /= denom;
  return out;
}

Eigen::VectorXd GridPlan::radial_weights(double rho, int parity) const {
  const auto l = lagrange(rho);
  Eigen::VectorXd w(n_radial);
  for (int i = 0; i < n_radial; ++i) w(i) = l[pos_index[i]] + parity * l[neg_index[i]];
  return w;
}

void ring_forward(Eigen::FFT<double>& fft, const Spectrum& values, Spectrum& coeffs) {
  fft.fwd(coeffs, values);
  const double scale = 1.0 / static_cast<double>(values.size());
  for (auto& c : coeffs) c *= scale;
}

void ring_inverse(Eigen::FFT<double>& fft, const Spectrum& coeffs, Spectrum& values) {
  fft.inv(values, coeffs);
  const double scale = static_cast<double>(coeffs.size());
  for (auto& v : values) v *= scale;
}

}  // namespace detail

// ---------------------------------------------------------------- DiscGrid

DiscGrid::DiscGrid(int n_radial, int n_angular)
    : plan_(std::make_shared<const detail::GridPlan>(n_radial, n_angular)) {}

int DiscGrid::n_radial() const { return plan_->n_radial; }
int DiscGrid::n_angular() const { return plan_->n_angular; }
std::span<const double> DiscGrid::radii() const { return plan_->radii; }
std::span<const double> DiscGrid::angles() const { return plan_->angles; }
std::span<const double> DiscGrid::weights() const { return plan_->weights; }

cplx DiscGrid::point(int node) const {
  return std::polar(plan_->radii[ring_of(node)], plan_->angles[angle_of(node)]);
}

std::vector<int> DiscGrid::boundary_nodes() const {
  std::vector<int> out(n_angular());
  for (int j = 0; j < n_angular(); ++j) out[j] = node(n_radial() - 1, j);
  return out;
}

DiscGrid make_grid(int n_radial, int n_angular) {
  if (n_radial < 4)
    throw GridError("make_grid: n_radial must be at least 4, got " + std::to_string(n_radial));
  if (n_angular < 8)
    throw GridError("make_grid: n_angular must be at least 8, got " + std::to_string(n_angular));
  if (n_angular % 2 != 0)
    throw GridError("make_grid: n_angular must be even, got " + std::to_string(n_angular));
  return DiscGrid(n_radial, n_angular);
}

// ----------------------------------------------------------------- DiscMap

DiscMap::DiscMap(DiscGrid grid, int dim)
    : grid_(std::move(grid)), dim_(dim), values_(static_cast<std::size_t>(grid_.size()) * dim) {
  if (dim < 1) throw GridError("DiscMap: dimension must be positive");
}

DiscMap DiscMap::constant(const DiscGrid& grid, const CVector& value) {
  DiscMap out(grid, static_cast<int>(value.size()));
  for (int p = 0; p < grid.size(); ++p) out.set(p, value);
  return out;
}

CVector DiscMap::at(int node) const {
  CVector v(dim_);
  for (int k = 0; k < dim_; ++k) v(k) = (*this)(node, k);
  return v;
}

void DiscMap::set(int node, const CVector& v) {
  for (int k = 0; k < dim_; ++k) (*this)(node, k) = v(k);
}

DiscMap DiscMap::component(int k) const {
  DiscMap out(grid_, 1);
  for (int p = 0; p < nodes(); ++p) out(p, 0) = (*this)(p, k);
  return out;
}

void DiscMap::set_component(int k, const DiscMap& scalar) {
  for (int p = 0; p < nodes(); ++p) (*this)(p, k) = scalar(p, 0);
}

double DiscMap::sup_norm() const {
  double best = 0.0;
  for (int p = 0; p < nodes(); ++p) {
    double s = 0.0;
    for (int k = 0; k < dim_; ++k) s += std::norm((*this)(p, k));
    best = std::max(best, std::sqrt(s));
  }
  return best;
}

bool DiscMap::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](cplx v) {
    return std::isfinite(v.real()) && std::isfinite(v.imag());
  });
}

DiscMap DiscMap::conj() const {
  DiscMap out = *this;
  for (auto& v : out.values_) v = std::conj(v);
  return out;
}

void DiscMap::check_compatible(const DiscMap& o) const {
  if (!(grid_ == o.grid_) || dim_ != o.dim_)
    throw GridError("DiscMap: incompatible grids or dimensions");
}

DiscMap& DiscMap::operator+=(const DiscMap& o) {
  check_compatible(o);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
  return *this;
}

DiscMap& DiscMap::operator-=(const DiscMap& o) {
  check_compatible(o);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
  return *this;
}

DiscMap& DiscMap::operator*=(cplx s) {
  for (auto& v : values_) v *= s;
  return *this;
}

DiscMap multiply(const DiscMap& scalar, const DiscMap& f) {
  if (scalar.dim() != 1 || !(scalar.grid() == f.grid()))
    throw GridError("multiply: expected a scalar map on the same grid");
  DiscMap out = f;
  for (int p = 0; p < f.nodes(); ++p)
    for (int k = 0; k < f.dim(); ++k) out(p, k) *= scalar(p, 0);
  return out;
}

// ---------------------------------------------------------- differentiate

std::pair<DiscMap, DiscMap> differentiate(const DiscMap& f) {
  const auto& plan = f.grid().plan();
  const int nr = plan.n_radial;
  const int nt = plan.n_angular;
  const int dim = f.dim();
  DiscMap dr(f.grid(), dim);
  DiscMap dtheta(f.grid(), dim);

#pragma omp parallel for collapse(2) schedule(static)
  for (int k = 0; k < dim; ++k) {
    for (int j = 0; j < nt; ++j) {
      const int opposite = (j + nt / 2) % nt;
      for (int i = 0; i < nr; ++i) {
        cplx acc = 0.0;
        for (int l = 0; l < nr; ++l)
          acc += plan.d_pos(i, l) * f(l * nt + j, k) + plan.d_neg(i, l) * f(l * nt + opposite, k);
        dr(i * nt + j, k) = acc;
      }
    }
  }

#pragma omp parallel for collapse(2) schedule(static)
  for (int k = 0; k < dim; ++k) {
    for (int i = 0; i < nr; ++i) {
      static thread_local Eigen::FFT<double> fft;
      detail::Spectrum ring(nt), coeffs(nt);
      for (int j = 0; j < nt; ++j) ring[j] = f(i * nt + j, k);
      detail::ring_forward(fft, ring, coeffs);
      for (int s = 0; s < nt; ++s) {
        const int m = plan.mode_of_slot(s);
        coeffs[s] *= (2 * s == nt) ? cplx(0.0) : cplx(0.0, m);
      }
      detail::ring_inverse(fft, coeffs, ring);
      for (int j = 0; j < nt; ++j) dtheta(i * nt + j, k) = ring[j];
    }
  }

  DiscMap fz(f.grid(), dim);
  DiscMap fzb(f.grid(), dim);
  for (int p = 0; p < f.nodes(); ++p) {
    const double r = plan.radii[f.grid().ring_of(p)];
    const cplx e = std::polar(1.0, plan.angles[f.grid().angle_of(p)]);
    for (int k = 0; k < dim; ++k) {
      const cplx a = dr(p, k);
      const cplx b = cplx(0.0, 1.0 / r) * dtheta(p, k);
      fz(p, k) = 0.5 * std::conj(e) * (a - b);
      fzb(p, k) = 0.5 * e * (a + b);
    }
  }
  return {std::move(fz), std::move(fzb)};
}

std::pair<DiscMap, DiscMap> real_partials(const DiscMap& f) {
  auto [fz, fzb] = differentiate(f);
  DiscMap fx = fz + fzb;
  DiscMap fy = cplx(0.0, 1.0) * (fz - fzb);
  return {std::move(fx), std::move(fy)};
}

DiscMap laplacian(const DiscMap& f) {
  const auto fzb = differentiate(f).second;
  return 4.0 * differentiate(fzb).first;
}

// ------------------------------------------------------------- interpolate

namespace {

struct RingSpectra {
  // coeffs[(k * nr + i) * nt + s]
  std::vector<cplx> coeffs;
};

RingSpectra ring_spectra(const DiscMap& f) {
  const auto& plan = f.grid().plan();
  const int nr = plan.n_radial, nt = plan.n_angular;
  RingSpectra out;
  out.coeffs.resize(static_cast<std::size_t>(f.dim()) * nr * nt);
  Eigen::FFT<double> fft;
  detail::Spectrum ring(nt), coeffs(nt);
  for (int k = 0; k < f.dim(); ++k)
    for (int i = 0; i < nr; ++i) {
      for (int j = 0; j < nt; ++j) ring[j] = f(i * nt + j, k);
      detail::ring_forward(fft, ring, coeffs);
      std::copy(coeffs.begin(), coeffs.end(), out.coeffs.begin() + (k * nr + i) * nt);
    }
  return out;
}

}  // namespace

std::vector<CVector> interpolate(const DiscMap& f, std::span<const cplx> points) {
  const auto& plan = f.grid().plan();
  const int nr = plan.n_radial, nt = plan.n_angular, dim = f.dim();
  const auto spectra = ring_spectra(f);
  std::vector<CVector> out(points.size(), CVector::Zero(dim));

  for (std::size_t q = 0; q < points.size(); ++q) {
    const double rho = std::abs(points[q]);
    if (rho > 1.0 + 1e-14)
      throw GridError("interpolate: point outside the closed unit disc");
    const auto lag = plan.lagrange(std::min(rho, 1.0));
    if (rho == 0.0) {
      for (int k = 0; k < dim; ++k) {
        cplx acc = 0.0;
        for (int i = 0; i < nr; ++i)
          acc += (lag[plan.pos_index[i]] + lag[plan.neg_index[i]]) *
                 spectra.coeffs[(k * nr + i) * nt];
        out[q](k) = acc;
      }
      continue;
    }
    const double phi = std::arg(points[q]);
    std::vector<cplx> basis(nt), basis_opp(nt);
    for (int s = 0; s < nt; ++s) {
      const int m = plan.mode_of_slot(s);
      const double sign = (m % 2 == 0) ? 1.0 : -1.0;
      basis[s] = (2 * s == nt) ? cplx(std::cos(m * phi)) : std::polar(1.0, m * phi);
      basis_opp[s] = sign * basis[s];
    }
    for (int k = 0; k < dim; ++k) {
      cplx acc = 0.0;
      for (int i = 0; i < nr; ++i) {
        const cplx* c = &spectra.coeffs[(k * nr + i) * nt];
        cplx here = 0.0, there = 0.0;
        for (int s = 0; s < nt; ++s) {
          here += c[s] * basis[s];
          there += c[s] * basis_opp[s];
        }
        acc += lag[plan.pos_index[i]] * here + lag[plan.neg_index[i]] * there;
      }
      out[q](k) = acc;
    }
  }
  return out;
}

CVector interpolate(const DiscMap& f, cplx point) {
  const cplx pts[1] = {point};
  return interpolate(f, std::span<const cplx>(pts, 1)).front();
}

// --------------------------------------------------------------- integrals

CVector integrate(const DiscMap& f) {
  const auto w = f.grid().weights();
  CVector out = CVector::Zero(f.dim());
  for (int p = 0; p < f.nodes(); ++p)
    for (int k = 0; k < f.dim(); ++k) out(k) += w[p] * f(p, k);
  return out;
}

cplx inner(const DiscMap& f, const DiscMap& g) {
  if (!(f.grid() == g.grid()) || f.dim() != g.dim())
    throw GridError("inner: incompatible maps");
  const auto w = f.grid().weights();
  cplx acc = 0.0;
  for (int p = 0; p < f.nodes(); ++p)
    for (int k = 0; k < f.dim(); ++k) acc += w[p] * f(p, k) * std::conj(g(p, k));
  return acc;
}

double l2_norm(const DiscMap& f) { return std::sqrt(std::max(0.0, real_inner(f, f))); }

double nyquist_fraction(const DiscMap& f) {
  const auto spectra = ring_spectra(f);
  const int nt = f.grid().n_angular();
  double nyq = 0.0, top = 0.0;
  for (std::size_t idx = 0; idx < spectra.coeffs.size(); ++idx) {
    const double a = std::abs(spectra.coeffs[idx]);
    top = std::max(top, a);
    if (static_cast<int>(idx % nt) == nt / 2) nyq = std::max(nyq, a);
  }
  return top > 0.0 ? nyq / top : 0.0;
}

// ------------------------------------------------------------ Hoelder norm

void validate(const HolderConfig& cfg) {
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0))
    throw PreconditionError("HolderConfig: alpha must lie in (0, 1)");
  if (cfg.pair_budget < 0) throw PreconditionError("HolderConfig: negative pair budget");
}

double holder_norm(const DiscMap& f, const HolderConfig& cfg) {
  validate(cfg);
  const auto [fz, fzb] = differentiate(f);
  const DiscGrid& grid = f.grid();
  const int m = grid.size();

  auto vec_dist = [&](const DiscMap& g, int p, int q) {
    double s = 0.0;
    for (int k = 0; k < g.dim(); ++k) s += std::norm(g(p, k) - g(q, k));
    return std::sqrt(s);
  };
  auto vec_norm = [&](const DiscMap& g, int p) {
    double s = 0.0;
    for (int k = 0; k < g.dim(); ++k) s += std::norm(g(p, k));
    return std::sqrt(s);
  };

  double sup_f = 0.0, sup_df = 0.0;
  for (int p = 0; p < m; ++p) {
    sup_f = std::max(sup_f, vec_norm(f, p));
    sup_df = std::max(sup_df, vec_norm(fz, p) + vec_norm(fzb, p));
  }

  constexpr int kLevels = 6;
  std::mt19937_64 rng(cfg.seed);
  std::uniform_int_distribution<int> pick(0, m - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double quotient = 0.0;
  for (int s = 0; s < cfg.pair_budget; ++s) {
    const int level = s % kLevels;
    const int p = pick(rng);
    const double d = std::ldexp(1.0 + unit(rng), -level);
    const cplx target = grid.point(p) + std::polar(d, 2.0 * std::numbers::pi * unit(rng));
    int q = -1;
    double best = std::numeric_limits<double>::infinity();
    for (int c = 0; c < m; ++c) {
      if (c == p) continue;
      const double e = std::abs(grid.point(c) - target);
      if (e < best) {
        best = e;
        q = c;
      }
    }
    const double dist = std::abs(grid.point(p) - grid.point(q));
    if (dist <= 0.0) continue;
    const double num = vec_dist(fz, p, q) + vec_dist(fzb, p, q);
    quotient = std::max(quotient, num / std::pow(dist, cfg.alpha));
  }
  return sup_f + sup_df + quotient;
}

}  // namespace jdisc
