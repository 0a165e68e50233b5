#include "jdisc/variation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace jdisc {

double variational_residual_real(const StructureField& J, const DiscMap& f, const DiscMap& V) {
  if (J.dim() != f.dim() || f.dim() != V.dim())
    throw PreconditionError("variational_residual_real: dimension mismatch");
  const auto [vx, vy] = real_partials(V);
  const DiscMap fy = real_partials(f).second;
  double worst = 0.0;
#pragma omp parallel for reduction(max : worst) schedule(static)
  for (int p = 0; p < f.nodes(); ++p) {
    const CVector z = f.at(p);
    RVector r = to_real(vx.at(p)) + J(z) * to_real(vy.at(p));
    if (!J.is_standard()) r += J.derivative(z, V.at(p)) * to_real(fy.at(p));
    worst = std::max(worst, r.norm());
  }
  return worst;
}

double variational_residual_complex(const BeltramiField& A, const DiscMap& f, const DiscMap& V) {
  if (A.dim() != f.dim() || f.dim() != V.dim())
    throw PreconditionError("variational_residual_complex: dimension mismatch");
  const auto [vz, vzb] = differentiate(V);
  if (A.is_zero()) return vzb.sup_norm();
  const DiscMap fz = differentiate(f).first;
  double worst = 0.0;
#pragma omp parallel for reduction(max : worst) schedule(static)
  for (int p = 0; p < f.nodes(); ++p) {
    const CVector z = f.at(p);
    const CVector r = vzb.at(p) + A(z) * vz.at(p).conjugate() +
                      A.directional(z, V.at(p)) * fz.at(p).conjugate();
    worst = std::max(worst, r.norm());
  }
  return worst;
}

DiscMap phi_times_fprime(const StructureField& J, const DiscMap& f, const DiscMap& phi,
                         double phi_tol) {
  if (phi.dim() != 1 || !(phi.grid() == f.grid()))
    throw PreconditionError("phi_times_fprime: phi must be a scalar map on the disc's grid");
  if (J.dim() != f.dim()) throw PreconditionError("phi_times_fprime: dimension mismatch");
  const double defect = differentiate(phi).second.sup_norm();
  if (defect > phi_tol * std::max(1.0, phi.sup_norm())) {
    std::ostringstream msg;
    msg << "phi_times_fprime: phi is not holomorphic (sup |phi_zetabar| = " << defect << ")";
    throw PreconditionError(msg.str());
  }
  const DiscMap fx = real_partials(f).first;
  DiscMap out(f.grid(), f.dim());
  for (int p = 0; p < f.nodes(); ++p) {
    const RVector d = to_real(fx.at(p));
    const cplx w = phi(p, 0);
    const RVector v = w.real() * d + w.imag() * (J(f.at(p)) * d);
    out.set(p, to_complex(v));
  }
  return out;
}

DerivativeReport check_derivative_realization(const DiscFamily& family) {
  DerivativeReport rep;
  for (const auto& s : family.samples) {
    if (s.t <= 0.0) continue;
    const FamilySample* minus = family.find(-s.t);
    if (minus == nullptr) continue;
    const DiscMap quotient = (s.disc - minus->disc) * cplx(0.5 / s.t);
    rep.rows.push_back({s.t, (quotient - family.field).sup_norm()});
  }
  if (rep.rows.size() < 2)
    throw PreconditionError(
        "check_derivative_realization: need samples at +-t for at least two t > 0");
  std::sort(rep.rows.begin(), rep.rows.end(),
            [](const DerivativeRow& a, const DerivativeRow& b) { return a.t > b.t; });

  const double scale = std::max(1.0, family.field.sup_norm());
  rep.exact = std::all_of(rep.rows.begin(), rep.rows.end(),
                          [&](const DerivativeRow& r) { return r.defect <= 1e-12 * scale; });
  bool decreasing = true;
  for (std::size_t k = 0; k + 1 < rep.rows.size(); ++k) {
    const double ratio = rep.rows[k + 1].defect / rep.rows[k].defect;
    rep.ratios.push_back(ratio);
    rep.orders.push_back(std::log(ratio) / std::log(rep.rows[k + 1].t / rep.rows[k].t));
    if (!(ratio <= 0.75)) decreasing = false;
  }
  rep.converging = rep.exact || decreasing;
  return rep;
}

}  // namespace jdisc
