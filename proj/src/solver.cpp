#include "jdisc/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace jdisc {

void validate(const NewtonConfig& cfg) {
  if (cfg.max_iter < 1) throw PreconditionError("NewtonConfig: max_iter must be positive");
  if (!(cfg.tol > 0.0)) throw PreconditionError("NewtonConfig: tol must be positive");
  if (!(cfg.damping > 0.0 && cfg.damping <= 1.0))
    throw PreconditionError("NewtonConfig: damping must lie in (0, 1]");
  if (!(cfg.epsilon_ball > 0.0)) throw PreconditionError("NewtonConfig: epsilon_ball must be positive");
  validate(cfg.holder);
}

namespace {

bool same_values(const DiscMap& a, const DiscMap& b) {
  const auto x = a.values(), y = b.values();
  return a.grid() == b.grid() && a.dim() == b.dim() && std::equal(x.begin(), x.end(), y.begin());
}

}  // namespace

NewtonResult invert_F(const CorrectedOperator& op, const DiscMap& target, const DiscMap& start,
                      const NewtonConfig& cfg) {
  validate(cfg);
  if (op.is_identity()) return {target, 1, 0.0, {(start - target).sup_norm(), 0.0}};

  NewtonResult out{start, 0, 0.0, {}};
  DiscMap& g = out.disc;
  double res = (apply_F_corrected(op, g) - target).sup_norm();
  out.trace.push_back(res);
  constexpr double min_step = 1.0 / (1 << 20);

  while (!(res <= cfg.tol)) {
    if (out.iterations == cfg.max_iter) {
      std::ostringstream msg;
      msg << "invert_F: no convergence after " << cfg.max_iter << " iterations (residual " << res
          << ")";
      throw SolverError(SolverError::Kind::MaxIterations, msg.str(), res);
    }
    ++out.iterations;
    const DiscMap r = apply_F_corrected(op, g) - target;
    DiscMap delta(g.grid(), g.dim());
    try {
      delta = same_values(g, op.base_disc()) ? solve_dF(op, r) : solve_dF(op.relinearized(g), r);
    } catch (const SolverError& e) {
      throw SolverError(e.kind(), e.what(), res);
    }

    double step = cfg.damping;
    DiscMap cand = g;
    double cand_res = std::numeric_limits<double>::infinity();
    for (;;) {
      cand = g - delta * cplx(step);
      cand_res = (apply_F_corrected(op, cand) - target).sup_norm();
      if (std::isfinite(cand_res) && cand_res < res) break;
      step *= 0.5;
      if (step < min_step) {
        std::ostringstream msg;
        msg << "invert_F: line search stagnated at residual " << res;
        throw SolverError(SolverError::Kind::Stagnation, msg.str(), res);
      }
    }
    const double dist = holder_norm(cand - start, cfg.holder);
    if (dist > cfg.epsilon_ball) {
      std::ostringstream msg;
      msg << "invert_F: iterate left the trust ball (distance " << dist << " > "
          << cfg.epsilon_ball << ")";
      throw SolverError(SolverError::Kind::TrustBallExit, msg.str(), cand_res);
    }
    g = std::move(cand);
    res = cand_res;
    out.trace.push_back(res);
  }
  out.residual = res;
  return out;
}

DiscSolution solve_disc(const BeltramiField& A, const DiscMap& h, const DiscMap& start,
                        const NewtonConfig& cfg, bool normalized,
                        const CorrectionOptions& correction) {
  if (A.dim() != h.dim() || !(h.grid() == start.grid()) || h.dim() != start.dim())
    throw PreconditionError("solve_disc: inputs do not match");
  CorrectedOperator op = build_corrected(A, start, normalized, correction);
  NewtonResult newton = invert_F(op, h, start, cfg);
  const double res = residual(A, newton.disc);
  DiscMap disc = newton.disc;
  return {std::move(disc), std::move(newton), res, std::move(op)};
}

const FamilySample* DiscFamily::find(double t) const {
  for (const auto& s : samples)
    if (s.t == t) return &s;
  return nullptr;
}

namespace {

struct PinData {
  CVector value;
  CVector slope;
};

PinData pin_data(const DiscMap& f) {
  const auto [fz, fzb] = differentiate(f);
  return {interpolate(f, cplx(0.0)), interpolate(fz + fzb, cplx(0.0))};
}

DiscFamily family_impl(const CorrectedOperator& op, const DiscMap& V,
                       std::span<const double> t_values, const NewtonConfig& cfg) {
  validate(cfg);
  const DiscMap& f = op.base_disc();
  if (!(V.grid() == f.grid()) || V.dim() != f.dim())
    throw PreconditionError("make_family: field does not match the base disc");
  const BeltramiField& A = op.beltrami();

  DiscFamily fam{f, V, op.normalized(), 0.0, {}, {}};
  const DiscMap base_image = apply_F_corrected(op, f);
  const DiscMap direction = apply_dF(op, V);
  const double dir_norm = holder_norm(direction, cfg.holder);
  fam.t_max = dir_norm > 0.0 ? cfg.epsilon_ball / (2.0 * op.inv_norm_estimate() * dir_norm)
                             : std::numeric_limits<double>::infinity();

  PinData pin_f, pin_v;
  if (fam.normalized) {
    pin_f = pin_data(f);
    pin_v = pin_data(V);
  }
  auto record = [&](double t, DiscMap disc, int iterations) {
    FamilySample s{t, std::move(disc), 0.0, iterations};
    s.residual = residual(A, s.disc);
    if (fam.normalized) {
      const PinData p = pin_data(s.disc);
      s.pin_value_error = (p.value - pin_f.value).norm();
      s.pin_slope_error = (p.slope - pin_f.slope - t * pin_v.slope).norm();
    }
    fam.samples.push_back(std::move(s));
  };

  std::vector<double> pos, neg;
  bool want_zero = false;
  for (double t : t_values) {
    if (!std::isfinite(t)) throw PreconditionError("make_family: non-finite t");
    if (t > 0.0) pos.push_back(t);
    else if (t < 0.0) neg.push_back(t);
    else want_zero = true;
  }
  std::sort(pos.begin(), pos.end());
  pos.erase(std::unique(pos.begin(), pos.end()), pos.end());
  std::sort(neg.begin(), neg.end(), std::greater<>());
  neg.erase(std::unique(neg.begin(), neg.end()), neg.end());

  if (want_zero) record(0.0, f, 0);
  for (const auto* branch : {&pos, &neg}) {
    DiscMap warm = f;
    for (double t : *branch) {
      if (std::abs(t) > fam.t_max) {
        std::ostringstream msg;
        msg << "t = " << t << " skipped: beyond t_max = " << fam.t_max;
        fam.notices.push_back(msg.str());
        continue;
      }
      const DiscMap target = base_image + direction * cplx(t);
      try {
        NewtonResult nr = invert_F(op, target, warm, cfg);
        warm = nr.disc;
        record(t, std::move(nr.disc), nr.iterations);
      } catch (const SolverError& e) {
        fam.t_max = 0.5 * std::abs(t);
        std::ostringstream msg;
        msg << "t = " << t << " failed (" << to_string(e.kind()) << ", residual "
            << e.last_residual() << "); t_max reduced to " << fam.t_max;
        fam.notices.push_back(msg.str());
      }
    }
  }
  std::sort(fam.samples.begin(), fam.samples.end(),
            [](const FamilySample& a, const FamilySample& b) { return a.t < b.t; });
  return fam;
}

}  // namespace

DiscFamily make_family(const CorrectedOperator& op, const DiscMap& V,
                       std::span<const double> t_values, const NewtonConfig& cfg) {
  return family_impl(op, V, t_values, cfg);
}

DiscFamily make_family_normalized(const CorrectedOperator& op, const DiscMap& V,
                                  std::span<const double> t_values, const NewtonConfig& cfg) {
  if (!op.normalized())
    throw PreconditionError("make_family_normalized: operator was not built normalized");
  const double v0 = interpolate(V, cplx(0.0)).norm();
  if (v0 > 1e-9 * std::max(1.0, V.sup_norm())) {
    std::ostringstream msg;
    msg << "make_family_normalized: field does not vanish at the center (|V(0)| = " << v0 << ")";
    throw PreconditionError(msg.str());
  }
  return family_impl(op, V, t_values, cfg);
}

}  // namespace jdisc
