#include <doctest.h>

#include "jdisc/cauchy.hpp"
#include "jdisc/solver.hpp"
#include "oracle.hpp"

using namespace jdisc;

namespace {

DiscMap pullback_truth(const DiscGrid& g, double eps) {
  return DiscMap::from_scalar(g, [&](cplx z) { return oracle::pullback_inverse(eps, {0.5 * z})[0]; });
}

DiscMap half_zeta(const DiscGrid& g) {
  return DiscMap::from_scalar(g, [](cplx z) { return 0.5 * z; });
}

}  // namespace

TEST_CASE("Newton configuration is validated") {
  NewtonConfig cfg;
  CHECK_NOTHROW(validate(cfg));
  cfg.max_iter = 0;
  CHECK_THROWS_AS(validate(cfg), PreconditionError);
  cfg = {};
  cfg.tol = 0.0;
  CHECK_THROWS_AS(validate(cfg), PreconditionError);
  cfg = {};
  cfg.damping = 1.5;
  CHECK_THROWS_AS(validate(cfg), PreconditionError);
  cfg = {};
  cfg.epsilon_ball = -1.0;
  CHECK_THROWS_AS(validate(cfg), PreconditionError);
}

TEST_CASE("standard structure returns the prescribed disc") {
  const DiscGrid g = make_grid(16, 32);
  const DiscMap h = holomorphic_polynomial(g, {{0.1, 0.5, cplx(0, 0.2)}, {0.0, 0.0, 0.3}});
  const DiscSolution sol = solve_disc(BeltramiField::zero(2), h, h, {});
  CHECK((sol.disc - h).sup_norm() == 0.0);
  CHECK(sol.residual < 1e-10);
  CHECK(sol.newton.iterations <= 1);
}

TEST_CASE("pullback structure: recovers the preimage disc") {
  const double eps = 0.05;
  const BeltramiField A = beltrami_zoo("pullback_poly", {eps, 1});
  const DiscGrid g = make_grid(12, 24);
  const DiscMap truth = pullback_truth(g, eps);
  const DiscMap h = apply_F(A, truth);
  const DiscSolution sol = solve_disc(A, h, half_zeta(g), {});
  CHECK((sol.disc - truth).sup_norm() < 1e-8);
  CHECK(sol.residual < 1e-7);
  CHECK(sol.newton.residual <= 1e-12);
  CHECK(sol.newton.iterations >= 1);
  // Newton converges quadratically: the trace shrinks fast
  const auto& tr = sol.newton.trace;
  REQUIRE(tr.size() >= 2);
  CHECK(tr[1] < 0.1 * tr[0]);
}

TEST_CASE("Newton failures are structured") {
  const double eps = 0.05;
  const BeltramiField A = beltrami_zoo("pullback_poly", {eps, 1});
  const DiscGrid g = make_grid(8, 16);
  const DiscMap start = half_zeta(g);
  const DiscMap h = apply_F(A, pullback_truth(g, eps)) + DiscMap::constant(g, CVector::Constant(1, 0.3));
  const CorrectedOperator op = build_corrected(A, start, false);

  NewtonConfig tight;
  tight.epsilon_ball = 1e-3;
  try {
    invert_F(op, h, start, tight);
    FAIL("expected a trust-ball exit");
  } catch (const SolverError& e) {
    CHECK(e.kind() == SolverError::Kind::TrustBallExit);
    CHECK(std::isfinite(e.last_residual()));
  }

  NewtonConfig short_run;
  short_run.max_iter = 1;
  short_run.tol = 1e-15;
  try {
    invert_F(op, h, start, short_run);
    FAIL("expected max iterations");
  } catch (const SolverError& e) {
    CHECK(e.kind() == SolverError::Kind::MaxIterations);
    CHECK(e.last_residual() > 0.0);
  }
  CHECK(std::string(to_string(SolverError::Kind::Stagnation)) == "stagnation");
  CHECK_THROWS_AS(solve_disc(A, DiscMap(g, 2), start, {}), PreconditionError);
}

TEST_CASE("identity family is the straight line") {
  const DiscGrid g = make_grid(16, 32);
  const DiscMap f = half_zeta(g);
  const DiscMap V = DiscMap::from_scalar(g, [](cplx z) { return z * z - 0.1; });
  const CorrectedOperator op = build_corrected(BeltramiField::zero(1), f, false);
  const std::vector<double> ts{0.0, 0.1, -0.1, 0.3};
  NewtonConfig cfg;
  cfg.epsilon_ball = 100.0;
  const DiscFamily fam = make_family(op, V, ts, cfg);
  REQUIRE(fam.samples.size() == 4);
  for (const auto& s : fam.samples) CHECK((s.disc - (f + s.t * V)).sup_norm() <= 1e-12);
  CHECK(fam.samples.front().t == -0.1);
  CHECK(fam.find(0.3) != nullptr);
  CHECK(fam.find(0.2) == nullptr);
}

TEST_CASE("zoo family: samples solve the equation, t_max is respected") {
  const double eps = 0.05;
  const BeltramiField A = beltrami_zoo("pullback_poly", {eps, 1});
  const DiscGrid g = make_grid(12, 24);
  const DiscMap f = pullback_truth(g, eps);
  const CorrectedOperator op = build_corrected(A, f, false);
  const DiscMap V = real_partials(f).first;
  NewtonConfig cfg;
  cfg.epsilon_ball = 5.0;
  const std::vector<double> ts{0.0, 0.01, -0.01, 0.02, 1e3};
  const DiscFamily fam = make_family(op, V, ts, cfg);
  CHECK(fam.t_max > 0.02);
  CHECK(fam.t_max < 1e3);
  CHECK(fam.find(1e3) == nullptr);
  REQUIRE(fam.notices.size() == 1);
  CHECK(fam.notices[0].find("skipped") != std::string::npos);
  for (const auto& s : fam.samples) CHECK(s.residual < 1e-7);
  CHECK((fam.find(0.0)->disc - f).sup_norm() == 0.0);
  // f_t - f is close to t V
  const auto* s = fam.find(0.01);
  REQUIRE(s != nullptr);
  CHECK((s->disc - f - 0.01 * V).sup_norm() < 1e-3 * 0.01 * V.sup_norm() + 1e-4);

  // deterministic
  const DiscFamily again = make_family(op, V, ts, cfg);
  REQUIRE(again.samples.size() == fam.samples.size());
  for (std::size_t i = 0; i < fam.samples.size(); ++i)
    CHECK((again.samples[i].disc - fam.samples[i].disc).sup_norm() == 0.0);
}

TEST_CASE("normalized family pins value and slope") {
  const BeltramiField A = beltrami_zoo("beltrami_direct", {1, 0.05, 0, 0.1, 0, 0, 0.1});
  const DiscGrid g = make_grid(12, 24);
  const DiscMap h = half_zeta(g);
  NewtonConfig cfg;
  cfg.epsilon_ball = 50.0;
  const DiscSolution base = solve_disc(A, h, h, cfg, true);
  CHECK(base.residual < 1e-8);
  const CorrectedOperator op = build_corrected(A, base.disc, true);
  const DiscMap zeta = DiscMap::from_scalar(g, [](cplx z) { return z; });
  const std::vector<double> ts{0.0, 0.05, -0.05, 0.1, -0.1};
  const DiscFamily fam = make_family_normalized(op, zeta, ts, cfg);
  CHECK(fam.samples.size() == 5);
  for (const auto& s : fam.samples) {
    CHECK(s.pin_value_error <= 1e-9);
    CHECK(s.pin_slope_error <= 1e-8);
  }
  const DiscMap one = DiscMap::constant(g, CVector::Ones(1));
  CHECK_THROWS_AS(make_family_normalized(op, one, ts, cfg), PreconditionError);
  const CorrectedOperator plain = build_corrected(A, base.disc, false);
  CHECK_THROWS_AS(make_family_normalized(plain, zeta, ts, cfg), PreconditionError);
  const std::vector<double> bad{std::nan("")};
  CHECK_THROWS_AS(make_family(op, zeta, bad, cfg), PreconditionError);
}
