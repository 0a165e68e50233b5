#pragma once

#include <vector>

#include "jdisc/solver.hpp"
#include "jdisc/structure.hpp"

namespace jdisc {

/// sup | V_x + J(f) V_y + d_f J(V) f_y | in real coordinates.
double variational_residual_real(const StructureField& J, const DiscMap& f, const DiscMap& V);

/// sup | V_zetabar + A(f) conj(V_zeta) + d_f A(V) conj(f_zeta) |.
double variational_residual_complex(const BeltramiField& A, const DiscMap& f, const DiscMap& V);

/// V = a f' + b J(f) f' with phi = a + i b and f' = f_x. phi must be
/// holomorphic: sup |phi_zetabar| <= phi_tol * max(1, sup |phi|), else
/// PreconditionError.
DiscMap phi_times_fprime(const StructureField& J, const DiscMap& f, const DiscMap& phi,
                         double phi_tol = 1e-8);

struct DerivativeRow {
  double t;
  double defect;  // sup |(f_t - f_{-t}) / 2t - V|
};

struct DerivativeReport {
  std::vector<DerivativeRow> rows;  // decreasing t
  std::vector<double> ratios;       // defect[k+1] / defect[k]
  std::vector<double> orders;       // log(ratio) / log(t[k+1] / t[k])
  bool exact = false;               // every defect at rounding level
  bool converging = false;
};

/// Central-difference derivative of a family at t = 0 against its field.
/// Needs at least two t > 0 with their negatives sampled.
DerivativeReport check_derivative_realization(const DiscFamily& family);

}  // namespace jdisc
