#include "jdisc/extremal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "jdisc/cauchy.hpp"
#include "jdisc/variation.hpp"

namespace jdisc {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;
constexpr double inf = std::numeric_limits<double>::infinity();

double param(const std::vector<double>& p, std::size_t i, double fallback) {
  return i < p.size() ? p[i] : fallback;
}

int dim_param(const std::vector<double>& p) {
  const double n = param(p, 0, 1.0);
  if (n < 1.0 || n != std::floor(n)) throw PreconditionError("domain_zoo: n must be a positive integer");
  return static_cast<int>(n);
}

CVector random_unit(std::mt19937_64& rng, int dim) {
  std::normal_distribution<double> normal;
  CVector v(dim);
  for (int k = 0; k < dim; ++k) v(k) = cplx(normal(rng), normal(rng));
  return v / v.norm();
}

// C^infinity step: 0 for x <= 0, 1 for x >= 1.
double smooth_step(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / x), b = std::exp(-1.0 / (1.0 - x));
  return a / (a + b);
}

}  // namespace

DomainSpec domain_zoo(const std::string& name, const std::vector<double>& params) {
  DomainSpec dom;
  dom.name = name;
  dom.dim = dim_param(params);
  if (name == "ball") {
    const double radius = param(params, 1, 1.0);
    if (!(radius > 0.0)) throw PreconditionError("domain_zoo: ball radius must be positive");
    dom.rho = [radius](const CVector& z) { return z.squaredNorm() - radius * radius; };
    dom.gradient = [](const CVector& z) { return z; };
    dom.box = 1.5 * radius;
  } else if (name == "ellipsoid") {
    if (params.size() != static_cast<std::size_t>(dom.dim) + 1)
      throw PreconditionError("domain_zoo: ellipsoid needs one semi-axis per dimension");
    std::vector<double> axes(params.begin() + 1, params.end());
    for (double a : axes)
      if (!(a > 0.0)) throw PreconditionError("domain_zoo: semi-axes must be positive");
    dom.rho = [axes](const CVector& z) {
      double s = -1.0;
      for (std::size_t k = 0; k < axes.size(); ++k) s += std::norm(z(k)) / (axes[k] * axes[k]);
      return s;
    };
    dom.gradient = [axes](const CVector& z) {
      CVector g(z.size());
      for (std::size_t k = 0; k < axes.size(); ++k) g(k) = z(k) / (axes[k] * axes[k]);
      return g;
    };
    dom.box = 1.5 * *std::max_element(axes.begin(), axes.end());
  } else if (name == "saddle") {
    const double c = param(params, 1, 3.0);
    dom.rho = [c](const CVector& z) {
      const double s = z.squaredNorm(), x = z(0).real();
      return s + s * s - 1.0 - c * x * x;
    };
    dom.box = 1.0 + std::sqrt(std::max(c, 0.0));
  } else {
    throw PreconditionError("domain_zoo: unknown domain '" + name + "'");
  }
  return dom;
}

DomainCheck check_domain(const DomainSpec& dom, std::uint64_t seed, double tol) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  DomainCheck out{true, inf, true};
  const int budget = std::max(dom.psh_check_budget, 1);
  for (int s = 0; s < budget; ++s)
    if (!(dom.rho(dom.box * random_unit(rng, dom.dim)) > 0.0)) out.bounded = false;

  // 4 d^2/dzeta dzetabar of rho(z0 + zeta v) at zeta = 0, five-point stencil.
  const double h = 1e-3 * dom.box;
  int found = 0;
  for (int attempt = 0; attempt < 100 * budget && found < budget; ++attempt) {
    const CVector z0 = dom.box * std::pow(unit(rng), 1.0 / (2 * dom.dim)) * random_unit(rng, dom.dim);
    const double center = dom.rho(z0);
    if (!(center < 0.0)) continue;
    ++found;
    const CVector v = random_unit(rng, dom.dim);
    double acc = -4.0 * center;
    for (cplx dir : {cplx(1, 0), cplx(-1, 0), cplx(0, 1), cplx(0, -1)})
      acc += dom.rho(z0 + (h * dir) * v);
    out.min_laplacian = std::min(out.min_laplacian, acc / (h * h));
  }
  out.psh_consistent = out.min_laplacian >= -tol;
  return out;
}

bool Arc::contains(double theta) const {
  const double x = std::fmod(std::fmod(theta - start, two_pi) + two_pi, two_pi);
  return x <= length();
}

void validate(const ProbeConfig& cfg) {
  const Arc& P = cfg.arc_P;
  const Arc& P1 = cfg.arc_P1;
  if (!(P.length() > 0.0 && P.length() < two_pi) || !(P1.length() > 0.0))
    throw PreconditionError("ProbeConfig: degenerate arc");
  if (!(P1.start > P.start && P1.end < P.end))
    throw PreconditionError("ProbeConfig: P1 must lie strictly inside P");
  if (!(cfg.plateau_R >= 0.0)) throw PreconditionError("ProbeConfig: plateau_R must be >= 0");
  for (double r : cfg.r_values)
    if (!(r >= 0.5 && r <= 1.0)) throw PreconditionError("ProbeConfig: r values must lie in [1/2, 1]");
  for (double t : cfg.t_grid)
    if (!std::isfinite(t)) throw PreconditionError("ProbeConfig: non-finite t");
  if (!(cfg.compact_margin > 0.0)) throw PreconditionError("ProbeConfig: compact_margin must be positive");
  if (cfg.oversample < 1) throw PreconditionError("ProbeConfig: oversample must be positive");
}

Bump build_bump(const ProbeConfig& cfg, const DiscGrid& grid) {
  validate(cfg);
  const int samples = cfg.oversample * grid.n_angular();
  const double len = cfg.arc_P.length();
  const double a = cfg.arc_P1.start - cfg.arc_P.start;
  const double b = cfg.arc_P1.end - cfg.arc_P.start;
  const double R = cfg.plateau_R;

  std::vector<double> chi(samples);
  double sum = 0.0;
  for (int j = 0; j < samples; ++j) {
    const double theta = two_pi * j / samples;
    const double x = std::fmod(std::fmod(theta - cfg.arc_P.start, two_pi) + two_pi, two_pi);
    double v = 0.0;
    if (x < a) v = R * smooth_step(x / a);
    else if (x <= b) v = R;
    else if (x < len) v = R * smooth_step((len - x) / (len - b));
    chi[j] = v;
    sum += v;
  }
  DiscMap phi = schwarz_extend(grid, chi);
  return {std::move(chi), std::move(phi), sum / samples, cfg.arc_P1.length() * R / two_pi};
}

std::vector<cplx> zeta_exp_coefficients(const std::vector<cplx>& phi, int degree) {
  if (phi.empty() || degree < 1) throw PreconditionError("zeta_exp_coefficients: empty input");
  // E = exp(phi): n E_n = sum_{k=1}^{n} k phi_k E_{n-k}.
  std::vector<cplx> e(degree);
  e[0] = std::exp(phi[0]);
  for (int n = 1; n < degree; ++n) {
    cplx acc = 0.0;
    for (int k = 1; k <= n && k < static_cast<int>(phi.size()); ++k)
      acc += static_cast<double>(k) * phi[k] * e[n - k];
    e[n] = acc / static_cast<double>(n);
  }
  std::vector<cplx> out(degree + 1, cplx(0.0));
  std::copy(e.begin(), e.end(), out.begin() + 1);
  return out;
}

DiscMap rescale_disc(const DiscMap& f, double r) {
  if (!(r > 0.0 && r <= 1.0)) throw PreconditionError("rescale_disc: r must lie in (0, 1]");
  if (r == 1.0) return f;
  const DiscGrid& grid = f.grid();
  std::vector<cplx> pts(grid.size());
  for (int p = 0; p < grid.size(); ++p) pts[p] = r * grid.point(p);
  const auto vals = interpolate(f, pts);
  DiscMap out(grid, f.dim());
  for (int p = 0; p < grid.size(); ++p) out.set(p, vals[p]);
  return out;
}

SubharmonicityReport subharmonicity_certificate(const DomainSpec& dom, const DiscMap& f,
                                                double tol) {
  if (dom.dim != f.dim()) throw PreconditionError("subharmonicity_certificate: dimension mismatch");
  const DiscGrid& grid = f.grid();
  DiscMap u(grid, 1);
  for (int p = 0; p < grid.size(); ++p) u(p, 0) = dom.rho(f.at(p));
  const DiscMap lap = laplacian(u);
  SubharmonicityReport rep{inf, true, inf};
  const int last = grid.n_radial() - 1;
  for (int p = 0; p < grid.size(); ++p) {
    if (grid.ring_of(p) == last) continue;
    rep.min_laplacian = std::min(rep.min_laplacian, lap(p, 0).real());
    rep.C2 = std::min(rep.C2, -u(p, 0).real() / (1.0 - std::abs(grid.point(p))));
  }
  rep.subharmonic = rep.min_laplacian >= -tol;
  return rep;
}

namespace {

CVector derivative_at_center(const DiscMap& f) {
  const auto [fz, fzb] = differentiate(f);
  return interpolate(fz + fzb, cplx(0.0));
}

}  // namespace

ProbeDiagnostics run_probe(const BeltramiField& A, const StructureField& J,
                           const DomainSpec& dom, const DiscMap& f, const ProbeConfig& cfg,
                           const NewtonConfig& newton, const CorrectionOptions& correction) {
  validate(cfg);
  validate(newton);
  if (A.dim() != f.dim() || J.dim() != f.dim() || dom.dim != f.dim())
    throw PreconditionError("run_probe: dimension mismatch");
  const DiscGrid& grid = f.grid();
  const std::vector<int> boundary = grid.boundary_nodes();
  std::vector<bool> on_arc(boundary.size());
  double sup_arc = -inf;
  for (std::size_t i = 0; i < boundary.size(); ++i) {
    on_arc[i] = cfg.arc_P.contains(std::arg(grid.point(boundary[i])));
    if (on_arc[i]) sup_arc = std::max(sup_arc, dom.rho(f.at(boundary[i])));
  }
  if (!(sup_arc < 0.0)) {
    std::ostringstream msg;
    msg << "run_probe: the disc reaches the boundary of the domain on P (sup rho o f = "
        << sup_arc << ")";
    throw PreconditionError(msg.str());
  }

  const Bump bump = build_bump(cfg, grid);
  const std::vector<cplx> phi_coeffs = schwarz_coefficients(bump.chi, grid.n_angular() / 2);
  const DiscMap field_phi =
      holomorphic_polynomial(grid, {zeta_exp_coefficients(phi_coeffs, grid.n_angular() / 2 - 1)});
  const CVector fprime = derivative_at_center(f);
  const double fprime2 = fprime.squaredNorm();
  if (!(fprime2 > 0.0)) throw PreconditionError("run_probe: f'(0) vanishes");

  ProbeDiagnostics out{};
  out.l = cfg.arc_P1.length();
  out.exp_phi0 = std::exp(phi_coeffs[0].real());
  out.bump_mean = bump.mean;
  out.d_K_rho = inf;
  out.C1_R = 0.0;
  out.C2 = inf;
  out.C3 = 0.0;
  out.t0_R = inf;
  const double decay = std::exp(-out.l * cfg.plateau_R / two_pi);

  // One sweep slot per r; slots are independent and joined below.
  struct Slot {
    double d = inf, C2 = inf, t_max = 0.0;
    std::vector<ProbeCell> cells;
  };
  const int n_r = static_cast<int>(cfg.r_values.size());
  std::vector<Slot> slots(n_r);

#pragma omp parallel for schedule(dynamic)
  for (int ir = 0; ir < n_r; ++ir) {
    const double r = cfg.r_values[ir];
    Slot& slot = slots[ir];
    std::optional<DiscMap> fr;
    std::vector<double> rho_fr(boundary.size());
    std::optional<DiscFamily> fam;
    std::string failure;
    try {
      fr = rescale_disc(f, r);
      for (std::size_t i = 0; i < boundary.size(); ++i) {
        rho_fr[i] = dom.rho(fr->at(boundary[i]));
        if (on_arc[i]) slot.d = std::min(slot.d, -rho_fr[i]);
      }
      slot.C2 = subharmonicity_certificate(dom, *fr).C2;
      const DiscMap V = phi_times_fprime(J, *fr, field_phi);
      const CorrectedOperator op = build_corrected(A, *fr, true, correction);
      fam = make_family_normalized(op, V, cfg.t_grid, newton);
      slot.t_max = fam->t_max;
    } catch (const std::exception& e) {
      failure = e.what();
    }

    for (double t : cfg.t_grid) {
      ProbeCell cell{r, t, false, 0.0, 0.0, 0.0, false, 0.0, 0.0, 0.0, failure};
      const FamilySample* s = fam ? fam->find(t) : nullptr;
      if (s == nullptr) {
        if (fam) {
          cell.message = "no sample";
          std::ostringstream key;
          key << "t = " << t << " ";
          for (const auto& n : fam->notices)
            if (n.rfind(key.str(), 0) == 0) cell.message = n;
        }
        slot.cells.push_back(cell);
        continue;
      }
      cell.solved = true;
      const CVector hp = derivative_at_center(s->disc);
      cell.lambda = hp.dot(fprime).real() / fprime2;
      cell.relation_error = (hp - r * (1.0 + t * out.exp_phi0) * fprime).norm();
      cell.max_rho = -inf;
      for (int p = 0; p < grid.size(); ++p)
        cell.max_rho = std::max(cell.max_rho, dom.rho(s->disc.at(p)));
      cell.contained = cell.max_rho < 0.0;
      cell.family_residual = s->residual;
      for (std::size_t i = 0; i < boundary.size(); ++i) {
        const double change = std::abs(dom.rho(s->disc.at(boundary[i])) - rho_fr[i]);
        double& worst = on_arc[i] ? cell.arc_change : cell.gap_change;
        worst = std::max(worst, change);
      }
      slot.cells.push_back(cell);
    }
  }

  for (int ir = 0; ir < n_r; ++ir) {
    const double r = cfg.r_values[ir];
    const Slot& slot = slots[ir];
    out.d_K_rho = std::min(out.d_K_rho, slot.d);
    out.C2 = std::min(out.C2, slot.C2);
    out.t1_rR.push_back((1.0 - r) / r * decay);
    out.t_max.push_back(slot.t_max);
    out.t0_R = std::min(out.t0_R, slot.t_max);
    for (const auto& cell : slot.cells) {
      if (cell.solved && cell.t != 0.0) {
        out.C1_R = std::max(out.C1_R, cell.arc_change / std::abs(cell.t));
        out.C3 = std::max(out.C3, cell.gap_change / std::abs(cell.t));
      }
      out.verdict = out.verdict || (cell.solved && cell.lambda > 1.0 && cell.contained);
      out.cells.push_back(cell);
    }
  }

  out.K_contains_arc = out.d_K_rho >= cfg.compact_margin;
  out.t1_R = out.t1_rR.empty() ? 0.0 : *std::max_element(out.t1_rR.begin(), out.t1_rR.end());
  out.t2_R = out.C1_R > 0.0 ? out.d_K_rho / (2.0 * out.C1_R) : inf;
  for (double r : cfg.r_values) out.t3_r.push_back(out.C3 > 0.0 ? out.C2 * (1.0 - r) / out.C3 : inf);
  out.recipe_satisfied = out.C3 > 0.0 ? decay < out.C2 / (2.0 * out.C3) : true;
  return out;
}

}  // namespace jdisc
