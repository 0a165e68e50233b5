#include <doctest.h>

#include "jdisc/cauchy.hpp"
#include "jdisc/variation.hpp"
#include "oracle.hpp"

using namespace jdisc;

namespace {

constexpr double kEps = 0.05;

DiscMap pullback_truth(const DiscGrid& g) {
  return DiscMap::from_function(g, 2, [](cplx z) {
    const auto v = oracle::pullback_inverse(kEps, {0.5 * z, 0.2 + 0.3 * z * z});
    CVector out(2);
    out << v[0], v[1];
    return out;
  });
}

}  // namespace

TEST_CASE("f_x and f_y are variational fields of a J-holomorphic disc") {
  const StructureField J = structure_zoo("pullback_poly", {kEps, 2});
  const BeltramiField A = beltrami_zoo("pullback_poly", {kEps, 2});
  const DiscGrid g = make_grid(16, 32);
  const DiscMap f = pullback_truth(g);
  const auto [fx, fy] = real_partials(f);
  CHECK(variational_residual_real(J, f, fx) < 1e-7);
  CHECK(variational_residual_complex(A, f, fx) < 1e-7);
  CHECK(variational_residual_complex(A, f, fy) < 1e-7);
  // a constant field is not (the structure varies)
  const DiscMap c = DiscMap::constant(g, CVector::Ones(2));
  CHECK(variational_residual_complex(A, f, c) > 1e-3);
  CHECK(variational_residual_real(J, f, c) > 1e-3);
  CHECK_THROWS_AS(variational_residual_complex(A, f, DiscMap(g, 1)), PreconditionError);
}

TEST_CASE("phi times f' for constant phi") {
  const StructureField J = structure_zoo("pullback_poly", {kEps, 2});
  const DiscGrid g = make_grid(16, 32);
  const DiscMap f = pullback_truth(g);
  const auto [fx, fy] = real_partials(f);
  const DiscMap one = DiscMap::constant(g, CVector::Ones(1));
  CHECK((phi_times_fprime(J, f, one) - fx).sup_norm() < 1e-14);
  // J(f) f_x = f_y on a J-holomorphic disc
  const DiscMap i = DiscMap::constant(g, CVector::Constant(1, cplx(0, 1)));
  CHECK((phi_times_fprime(J, f, i) - fy).sup_norm() < 1e-7);
}

TEST_CASE("phi times f' solves the variational equation") {
  const StructureField J = structure_zoo("pullback_poly", {kEps, 2});
  const BeltramiField A = beltrami_zoo("pullback_poly", {kEps, 2});
  const DiscGrid g = make_grid(16, 32);
  const DiscMap f = pullback_truth(g);
  const double disc_res = residual(A, f);
  for (auto coeffs : std::vector<std::vector<cplx>>{{0.0, 1.0}, {cplx(0.2, 0.1), 0.0, 0.5}, {0, 0, 0, 0.3}}) {
    const DiscMap phi = holomorphic_polynomial(g, {coeffs});
    const DiscMap V = phi_times_fprime(J, f, phi);
    CHECK(variational_residual_complex(A, f, V) < 1e-6);
    CHECK(variational_residual_real(J, f, V) < 1e-6);
    CHECK(disc_res < 1e-7);
  }
}

TEST_CASE("phi must be holomorphic") {
  const StructureField J = structure_zoo("pullback_poly", {kEps, 2});
  const DiscGrid g = make_grid(8, 16);
  const DiscMap f = pullback_truth(g);
  const DiscMap phi = DiscMap::from_scalar(g, [](cplx z) { return std::conj(z); });
  CHECK_THROWS_AS(phi_times_fprime(J, f, phi), PreconditionError);
  CHECK_THROWS_AS(phi_times_fprime(J, f, f), PreconditionError);
}

TEST_CASE("derivative realization") {
  const DiscGrid g = make_grid(12, 24);
  const std::vector<double> ts{0.0, 0.04, -0.04, 0.02, -0.02, 0.01, -0.01, 0.005, -0.005};
  NewtonConfig cfg;
  cfg.epsilon_ball = 50.0;
  cfg.tol = 1e-13;

  SUBCASE("identity regime is exact") {
    const DiscMap f = DiscMap::from_scalar(g, [](cplx z) { return 0.5 * z; });
    const DiscMap V = DiscMap::from_scalar(g, [](cplx z) { return z * z; });
    const CorrectedOperator op = build_corrected(BeltramiField::zero(1), f, false);
    const DerivativeReport rep = check_derivative_realization(make_family(op, V, ts, cfg));
    CHECK(rep.exact);
    CHECK(rep.converging);
    CHECK(rep.rows.size() == 4);
  }

  SUBCASE("zoo family converges at second order; a wrong field does not") {
    const BeltramiField A = beltrami_zoo("pullback_poly", {kEps, 1});
    const DiscMap f = DiscMap::from_scalar(
        g, [](cplx z) { return oracle::pullback_inverse(kEps, {0.5 * z})[0]; });
    const CorrectedOperator op = build_corrected(A, f, false);
    const DiscMap V = real_partials(f).first;
    const DiscFamily fam = make_family(op, V, ts, cfg);
    const DerivativeReport rep = check_derivative_realization(fam);
    REQUIRE(rep.rows.size() == 4);
    CHECK(rep.rows.front().t > rep.rows.back().t);
    CHECK_FALSE(rep.exact);
    CHECK(rep.converging);
    for (double r : rep.ratios) CHECK(r == doctest::Approx(0.25).epsilon(0.1));
    for (double o : rep.orders) CHECK(o == doctest::Approx(2.0).epsilon(0.1));

    DiscFamily corrupted = fam;
    corrupted.field = 1.01 * fam.field;
    const DerivativeReport bad = check_derivative_realization(corrupted);
    CHECK_FALSE(bad.converging);
    CHECK_FALSE(bad.exact);
  }

  SUBCASE("needs symmetric pairs") {
    const DiscMap f = DiscMap::from_scalar(g, [](cplx z) { return 0.5 * z; });
    const CorrectedOperator op = build_corrected(BeltramiField::zero(1), f, false);
    const std::vector<double> few{0.0, 0.1, -0.1, 0.2};
    CHECK_THROWS_AS(check_derivative_realization(make_family(op, f, few, cfg)), PreconditionError);
  }
}
