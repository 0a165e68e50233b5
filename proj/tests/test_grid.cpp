#include <doctest.h>

#include <random>

#include "jdisc/grid.hpp"
#include "oracle.hpp"

using namespace jdisc;

namespace {

double sup_diff(const DiscMap& a, const DiscMap& b) { return (a - b).sup_norm(); }

}  // namespace

TEST_CASE("make_grid validates its sizes") {
  CHECK_THROWS_AS(make_grid(3, 16), GridError);
  CHECK_THROWS_AS(make_grid(8, 6), GridError);
  CHECK_THROWS_AS(make_grid(8, 15), GridError);
  CHECK_NOTHROW(make_grid(4, 8));
}

TEST_CASE("radii avoid the center and end on the circle") {
  const DiscGrid g = make_grid(12, 24);
  const auto r = g.radii();
  REQUIRE(r.size() == 12);
  CHECK(r.front() > 0.0);
  CHECK(r.back() == 1.0);
  for (std::size_t i = 1; i < r.size(); ++i) CHECK(r[i] > r[i - 1]);
  CHECK(g.boundary_nodes().size() == 24);
  for (int p : g.boundary_nodes()) CHECK(std::abs(g.point(p)) == doctest::Approx(1.0));
}

TEST_CASE("area weights integrate radial moments") {
  const DiscGrid g = make_grid(16, 32);
  for (int k = 0; k <= 8; ++k) {
    const DiscMap u = DiscMap::from_scalar(g, [k](cplx z) { return std::pow(std::norm(z), k); });
    CHECK(std::abs(integrate(u)(0) - oracle::radial_moment(k)) < 1e-13);
  }
  // angular modes integrate to zero
  const DiscMap v = DiscMap::from_scalar(g, [](cplx z) { return z * z * std::conj(z); });
  CHECK(std::abs(integrate(v)(0)) < 1e-14);
}

TEST_CASE("inner product and norm") {
  const DiscGrid g = make_grid(10, 20);
  const DiscMap z = DiscMap::from_scalar(g, [](cplx w) { return w; });
  CHECK(std::abs(inner(z, z) - cplx(oracle::pi / 2)) < 1e-13);
  CHECK(std::abs(inner(z, cplx(0, 1) * z) - cplx(0, -oracle::pi / 2)) < 1e-13);
  CHECK(real_inner(z, cplx(0, 1) * z) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(l2_norm(z) == doctest::Approx(std::sqrt(oracle::pi / 2)).epsilon(1e-13));
}

TEST_CASE("Wirtinger derivatives of polynomials") {
  const DiscGrid g = make_grid(16, 32);
  const DiscMap f = DiscMap::from_scalar(g, [](cplx z) { return z * z * std::conj(z) + 3.0 * std::conj(z); });
  const auto [fz, fzb] = differentiate(f);
  CHECK(sup_diff(fz, DiscMap::from_scalar(g, [](cplx z) { return 2.0 * z * std::conj(z); })) < 1e-11);
  CHECK(sup_diff(fzb, DiscMap::from_scalar(g, [](cplx z) { return z * z + 3.0; })) < 1e-11);

  const DiscMap q = DiscMap::from_scalar(g, [](cplx z) { return std::norm(z); });
  const auto [fx, fy] = real_partials(q);
  CHECK(sup_diff(fx, DiscMap::from_scalar(g, [](cplx z) { return cplx(2 * z.real()); })) < 1e-11);
  CHECK(sup_diff(fy, DiscMap::from_scalar(g, [](cplx z) { return cplx(2 * z.imag()); })) < 1e-11);

  const DiscMap q2 = DiscMap::from_scalar(g, [](cplx z) { return std::norm(z) * std::norm(z); });
  CHECK(sup_diff(laplacian(q2), DiscMap::from_scalar(g, [](cplx z) { return 16.0 * std::norm(z); })) <
        1e-9);
}

TEST_CASE("differentiation of a smooth non-polynomial map converges") {
  double prev_z = 1.0, prev_zb = 1.0;
  for (int n : {8, 12, 16}) {
    const DiscGrid g = make_grid(n, 2 * n);
    const DiscMap f = DiscMap::from_scalar(g, [](cplx z) { return std::exp(z) * std::conj(z); });
    const auto [fz, fzb] = differentiate(f);
    const double ez =
        sup_diff(fz, DiscMap::from_scalar(g, [](cplx z) { return std::exp(z) * std::conj(z); }));
    const double ezb = sup_diff(fzb, DiscMap::from_scalar(g, [](cplx z) { return std::exp(z); }));
    CHECK(ez < prev_z);
    CHECK(ezb < prev_zb);
    prev_z = ez;
    prev_zb = ezb;
  }
  CHECK(prev_z < 1e-9);
  CHECK(prev_zb < 1e-9);
}

TEST_CASE("interpolation reproduces resolved data") {
  const DiscGrid g = make_grid(12, 24);
  auto fn = [](cplx z) { return z * z * z - 2.0 * std::conj(z) * z + cplx(0.5, 1); };
  const DiscMap f = DiscMap::from_scalar(g, fn);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    const cplx z = std::polar(std::sqrt(u(rng)), 2 * oracle::pi * u(rng));
    CHECK(std::abs(interpolate(f, z)(0) - fn(z)) < 1e-12);
  }
  CHECK(std::abs(interpolate(f, cplx(0.0))(0) - fn(0.0)) < 1e-12);
  CHECK_THROWS_AS(interpolate(f, cplx(1.01, 0.0)), GridError);
}

TEST_CASE("DiscMap arithmetic and compatibility") {
  const DiscGrid g = make_grid(6, 12);
  DiscMap a = DiscMap::constant(g, CVector::Constant(2, cplx(1, 2)));
  DiscMap b = 2.0 * a;
  CHECK(sup_diff(b - a, a) == 0.0);
  CHECK(a.conj()(3, 1) == cplx(1, -2));
  CHECK(a.sup_norm() == doctest::Approx(std::sqrt(10.0)));
  CHECK_THROWS_AS(a += DiscMap(g, 1), GridError);
  CHECK_THROWS_AS(a += DiscMap(make_grid(6, 14), 2), GridError);
  CHECK_THROWS_AS(DiscMap(g, 0), GridError);
  const DiscMap s = DiscMap::from_scalar(g, [](cplx z) { return z; });
  const DiscMap m = multiply(s, a);
  CHECK(m(5, 0) == g.point(5) * cplx(1, 2));
}

TEST_CASE("Nyquist diagnostic") {
  const DiscGrid g = make_grid(8, 16);
  const DiscMap smooth = DiscMap::from_scalar(g, [](cplx z) { return z * z; });
  CHECK(nyquist_fraction(smooth) < 1e-14);
  DiscMap rough(g, 1);
  for (int p = 0; p < g.size(); ++p) rough(p, 0) = (g.angle_of(p) % 2 == 0) ? 1.0 : -1.0;
  CHECK(nyquist_fraction(rough) > 0.5);
}

TEST_CASE("Hoelder estimate: homogeneity, constants, lower bound, determinism") {
  const DiscGrid g = make_grid(12, 24);
  const DiscMap f = DiscMap::from_scalar(g, [](cplx z) { return z * z + 0.3 * std::conj(z); });
  const double h = holder_norm(f);
  CHECK(holder_norm(cplx(-2.5, 1.0) * f) == doctest::Approx(std::abs(cplx(-2.5, 1.0)) * h).epsilon(1e-12));
  CHECK(holder_norm(f) == h);
  const DiscMap c = DiscMap::constant(g, CVector::Constant(1, cplx(3, 4)));
  CHECK(holder_norm(c) == doctest::Approx(5.0).epsilon(1e-12));
  const auto [fz, fzb] = differentiate(f);
  double sup_df = 0.0;
  for (int p = 0; p < g.size(); ++p) sup_df = std::max(sup_df, std::abs(fz(p, 0)) + std::abs(fzb(p, 0)));
  CHECK(h >= f.sup_norm() + sup_df - 1e-12);
  // alpha-dependence: the quotient term is nonnegative
  HolderConfig other;
  other.alpha = 0.9;
  CHECK(holder_norm(f, other) >= f.sup_norm() + sup_df - 1e-12);
  HolderConfig bad;
  bad.alpha = 1.0;
  CHECK_THROWS_AS(validate(bad), PreconditionError);
  bad.alpha = 0.5;
  bad.pair_budget = -1;
  CHECK_THROWS_AS(validate(bad), PreconditionError);
}
