#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "jdisc/solver.hpp"
#include "jdisc/structure.hpp"

namespace jdisc {

/// A domain {rho < 0} in C^n.
struct DomainSpec {
  std::string name;
  int dim = 1;
  std::function<double(const CVector&)> rho;
  /// Optional d rho / d conj(z), so that d rho (v) = 2 Re <v, grad>.
  std::function<CVector(const CVector&)> gradient;
  int psh_check_budget = 64;
  /// Radius of a ball containing the domain.
  double box = 2.0;
};

/// Domain families.
///   ball       params [n, radius = 1]      rho = |z|^2 - radius^2
///   ellipsoid  params [n, a_1, ..., a_n]   rho = sum |z_k|^2 / a_k^2 - 1
///   saddle     params [n, c = 3]           rho = |z|^2 + |z|^4 - 1 - c (Re z_1)^2
/// The saddle is bounded but not plurisubharmonic for c > 2.
DomainSpec domain_zoo(const std::string& name, const std::vector<double>& params);

struct DomainCheck {
  bool bounded;           // rho > 0 on every sample of the box sphere
  double min_laplacian;   // over sampled standard linear discs
  bool psh_consistent;    // min_laplacian >= -tol
};

/// Sampling checks of a domain: boundedness on the box sphere, and the
/// Laplacian of rho along discs z0 + zeta v with z0 in the domain.
DomainCheck check_domain(const DomainSpec& dom, std::uint64_t seed = 0, double tol = 1e-8);

struct Arc {
  double start;  // radians
  double end;    // start < end < start + 2 pi
  double length() const { return end - start; }
  bool contains(double theta) const;
};

struct ProbeConfig {
  Arc arc_P{0.0, 0.0};
  Arc arc_P1{0.0, 0.0};
  double plateau_R = 0.0;
  std::vector<double> r_values;
  std::vector<double> t_grid;
  double compact_margin = 0.05;
  /// Boundary samples of chi per angular grid node.
  int oversample = 64;
};

void validate(const ProbeConfig& cfg);

struct Bump {
  std::vector<double> chi;  // uniform boundary samples
  DiscMap phi;              // holomorphic, Re phi = chi on the circle (Fourier truncated)
  double mean;              // average of chi = Re phi(0)
  double lower_bound;       // l R / (2 pi)
};

/// chi = R on P1, 0 off P, joined by C^infinity smooth-step ramps.
Bump build_bump(const ProbeConfig& cfg, const DiscGrid& grid);

/// Taylor coefficients of zeta * exp(phi) through degree `degree`, from
/// the coefficients of the polynomial phi.
std::vector<cplx> zeta_exp_coefficients(const std::vector<cplx>& phi, int degree);

/// f_r(zeta) = f(r zeta) by interpolation; r in (0, 1].
DiscMap rescale_disc(const DiscMap& f, double r);

struct SubharmonicityReport {
  double min_laplacian;  // over interior nodes
  bool subharmonic;      // min_laplacian >= -tol
  double C2;             // largest C with rho o f <= -C (1 - |zeta|) on interior nodes
};

SubharmonicityReport subharmonicity_certificate(const DomainSpec& dom, const DiscMap& f,
                                                double tol = 1e-8);

struct ProbeCell {
  double r;
  double t;
  bool solved;
  double lambda;
  double relation_error;  // |h'(0) - r (1 + t e^{phi(0)}) f'(0)|
  double max_rho;
  bool contained;
  double family_residual;
  double gap_change;      // max over the circle minus P of |rho o h - rho o f_r|
  double arc_change;      // same over P
  std::string message;
};

struct ProbeDiagnostics {
  double l;
  double exp_phi0;         // exp(phi_R(0))
  double bump_mean;
  double d_K_rho;
  bool K_contains_arc;     // d_K_rho >= compact_margin
  double C1_R;
  double C2;
  double C3;
  double t0_R;             // smallest adaptive t_max over r
  std::vector<double> t1_rR;  // per r_values
  double t1_R;
  double t2_R;             // d / (2 C1)
  std::vector<double> t3_r;   // C2 (1 - r) / C3
  std::vector<double> t_max;  // per r_values
  bool recipe_satisfied;   // exp(-lR/2pi) < C2 / (2 C3)
  std::vector<ProbeCell> cells;
  bool verdict;            // some cell with lambda > 1 and contained
};

/// The boundary-bump probe around a J-holomorphic disc f that stays inside
/// the domain on P. Throws PreconditionError when sup_P rho o f >= 0.
ProbeDiagnostics run_probe(const BeltramiField& A, const StructureField& J,
                           const DomainSpec& dom, const DiscMap& f, const ProbeConfig& cfg,
                           const NewtonConfig& newton, const CorrectionOptions& correction = {});

}  // namespace jdisc
