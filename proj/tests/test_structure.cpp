#include <doctest.h>

#include <random>

#include "jdisc/cauchy.hpp"
#include "jdisc/structure.hpp"
#include "oracle.hpp"

using namespace jdisc;

namespace {

std::vector<CVector> sample_points(int dim, double radius, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<CVector> out;
  for (int i = 0; i < count; ++i) {
    CVector z(dim);
    for (int k = 0; k < dim; ++k) z(k) = {n(rng), n(rng)};
    z *= radius * std::pow(u(rng), 1.0 / (2 * dim)) / z.norm();
    out.push_back(z);
  }
  return out;
}

}  // namespace

TEST_CASE("real and complex coordinates") {
  CVector z(2);
  z << cplx(1, 2), cplx(3, -4);
  const RVector x = to_real(z);
  CHECK(x(1) == 2.0);
  CHECK(x(3) == -4.0);
  CHECK((to_complex(x) - z).norm() == 0.0);
  const RMatrix j = standard_structure(2);
  CHECK((j * j + RMatrix::Identity(4, 4)).norm() == 0.0);
  CHECK((to_complex(j * x) - cplx(0, 1) * z).norm() < 1e-15);
  CMatrix p = CMatrix::Random(2, 2), r = CMatrix::Random(2, 2);
  CHECK((to_complex(real_matrix(p, r) * x) - (p * z + r * z.conjugate())).norm() < 1e-14);
}

TEST_CASE("zoo structures square to -1") {
  for (auto [name, params] : std::vector<std::pair<std::string, std::vector<double>>>{
           {"standard", {2}},
           {"pullback_poly", {0.05, 2}},
           {"pullback_poly", {0.1, 1}},
           {"beltrami_direct", {1, 0.05, 0, 0.1, 0, 0, 0.1}}}) {
    CAPTURE(name);
    const StructureField J = structure_zoo(name, params);
    for (const CVector& z : sample_points(J.dim(), 1.0, 50, 5)) {
      const RMatrix m = J(z);
      CHECK((m * m + RMatrix::Identity(m.rows(), m.cols())).norm() < 1e-12);
    }
  }
}

TEST_CASE("zoo validation") {
  CHECK_THROWS_AS(structure_zoo("nope", {}), PreconditionError);
  CHECK_THROWS_AS(beltrami_zoo("nope", {}), PreconditionError);
  CHECK_THROWS_AS(structure_zoo("beltrami_direct", {1, 0.0}), PreconditionError);
  CHECK_THROWS_AS(structure_zoo("pullback_poly", {}), PreconditionError);
  // |A| reaches 1 inside the validation box
  CHECK_THROWS_AS(structure_zoo("beltrami_direct", {1, 0.5, 0, 1.0, 0, 0, 0}), StructureError);
}

TEST_CASE("pullback Beltrami field matches the Jacobian's antilinear part") {
  const double eps = 0.05;
  const BeltramiField numeric = to_beltrami(structure_zoo("pullback_poly", {eps, 1}));
  const BeltramiField analytic = beltrami_zoo("pullback_poly", {eps, 1});
  for (const CVector& z : sample_points(1, 1.5, 40, 7)) {
    const cplx expect = oracle::pullback_beltrami_1d(eps, z(0));
    CHECK(std::abs(numeric(z)(0, 0) - expect) < 1e-12);
    CHECK(std::abs(analytic(z)(0, 0) - expect) < 1e-15);
    const auto [dz, dzb] = numeric.partials(z, 0);
    CHECK(std::abs(dz(0, 0)) < 1e-8);
    CHECK(std::abs(dzb(0, 0) - 2.0 * eps) < 1e-8);
  }
}

TEST_CASE("structure_from_beltrami inverts to_beltrami") {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> n;
  for (int trial = 0; trial < 10; ++trial) {
    CMatrix a(2, 2);
    for (int i = 0; i < 4; ++i) a(i / 2, i % 2) = {0.2 * n(rng), 0.2 * n(rng)};
    const RMatrix jm = structure_from_beltrami(a);
    CHECK((jm * jm + RMatrix::Identity(4, 4)).norm() < 1e-12);
    const StructureField J(2, [jm](const CVector&) { return jm; });
    CHECK((to_beltrami(J)(CVector::Zero(2)) - a).norm() < 1e-12);
  }
}

TEST_CASE("analytic structure derivative agrees with finite differences") {
  const StructureField J = structure_zoo("pullback_poly", {0.08, 2});
  REQUIRE(J.has_analytic_derivative());
  for (const CVector& z : sample_points(2, 1.0, 10, 13)) {
    CVector dir(2);
    dir << cplx(0.3, -0.1), cplx(-0.7, 0.4);
    CHECK((J.derivative(z, dir) - J.numeric_derivative(z, dir)).norm() < 1e-8);
  }
}

TEST_CASE("polynomial diffeomorphism") {
  const PolynomialDiffeo phi(0.05, 2);
  for (const CVector& w : sample_points(2, 1.2, 20, 17)) {
    const CVector z = phi.inverse(w);
    const auto ref = oracle::pullback_inverse(0.05, {w(0), w(1)});
    CHECK(std::abs(z(0) - ref[0]) < 1e-13);
    CHECK(std::abs(z(1) - ref[1]) < 1e-13);
    CHECK((phi(z) - w).norm() < 1e-13);
  }
}

TEST_CASE("linearization coefficients for A = eps conj(z)") {
  const double eps = 0.1;
  const BeltramiField A = beltrami_zoo("beltrami_direct", {1, 0, 0, 0, 0, eps, 0});
  const DiscGrid g = make_grid(8, 16);
  const DiscMap f = DiscMap::from_scalar(g, [](cplx z) { return z; });
  const LinearizationCoefficients c = linearization_coefficients(A, f);
  for (int p = 0; p < g.size(); ++p) {
    CHECK(std::abs(c.a_f[p](0, 0) - eps * std::conj(g.point(p))) < 1e-14);
    CHECK(std::abs(c.b1[p](0, 0)) < 1e-12);
    CHECK(std::abs(c.b2[p](0, 0) - eps) < 1e-12);
  }
}

TEST_CASE("real and complex holomorphicity agree on a pullback disc") {
  const double eps = 0.05;
  const StructureField J = structure_zoo("pullback_poly", {eps, 2});
  const BeltramiField A = beltrami_zoo("pullback_poly", {eps, 2});
  const DiscGrid g = make_grid(16, 32);
  const DiscMap f = DiscMap::from_function(g, 2, [&](cplx z) {
    const auto v = oracle::pullback_inverse(eps, {0.5 * z, 0.2 + 0.3 * z * z});
    CVector out(2);
    out << v[0], v[1];
    return out;
  });
  const auto [fz, fzb] = differentiate(f);
  const auto [fx, fy] = real_partials(f);
  double real_res = 0.0, cplx_res = 0.0;
  for (int p = 0; p < g.size(); ++p) {
    const CVector z = f.at(p);
    real_res = std::max(real_res, (to_real(fx.at(p)) + J(z) * to_real(fy.at(p))).norm());
    cplx_res = std::max(cplx_res, (fzb.at(p) + A(z) * fz.at(p).conjugate()).norm());
  }
  CHECK(real_res < 1e-8);
  CHECK(cplx_res < 1e-8);
  // a non-holomorphic disc fails both
  const DiscMap bad = DiscMap::from_function(g, 2, [](cplx z) {
    CVector out(2);
    out << 0.5 * std::conj(z), 0.0;
    return out;
  });
  const auto [bx, by] = real_partials(bad);
  CHECK((to_real(bx.at(5)) + J(bad.at(5)) * to_real(by.at(5))).norm() > 0.1);
}
