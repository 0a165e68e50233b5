#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace jdisc {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

/// Base class of every error the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class GridError : public Error {
 public:
  using Error::Error;
};

/// Raised when an operation's documented precondition does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

namespace detail {
struct GridPlan;
}

/// Tensor polar discretization of the closed unit disc.
///
/// Radii are the positive half of a Chebyshev–Lobatto grid on [-1, 1] with
/// 2*n_radial points, so the center is never a node and radius 1 always is.
/// A function on the disc is represented along every diameter through the
/// parity relation u(-r, theta) = u(r, theta + pi), which is why n_angular
/// must be even. Angular nodes are uniform.
///
/// DiscGrid is a cheap handle; copies share the precomputed spectral data.
class DiscGrid {
 public:
  DiscGrid(int n_radial, int n_angular);

  int n_radial() const;
  int n_angular() const;
  int size() const { return n_radial() * n_angular(); }

  /// Radii in strictly increasing order; the last one is 1.
  std::span<const double> radii() const;
  std::span<const double> angles() const;
  /// Area quadrature weight per node; they sum to pi.
  std::span<const double> weights() const;

  int node(int ring, int angle) const { return ring * n_angular() + angle; }
  int ring_of(int node) const { return node / n_angular(); }
  int angle_of(int node) const { return node % n_angular(); }
  cplx point(int node) const;

  std::vector<int> boundary_nodes() const;

  const detail::GridPlan& plan() const { return *plan_; }

  friend bool operator==(const DiscGrid& a, const DiscGrid& b) {
    return a.plan_ == b.plan_ ||
           (a.n_radial() == b.n_radial() && a.n_angular() == b.n_angular());
  }

 private:
  std::shared_ptr<const detail::GridPlan> plan_;
};

/// Validating factory: n_radial >= 4, n_angular >= 8 and even.
DiscGrid make_grid(int n_radial, int n_angular);

/// A map from the sampled closed disc into C^dim, stored node-major.
class DiscMap {
 public:
  DiscMap(DiscGrid grid, int dim);

  template <class Fn>
  static DiscMap from_function(const DiscGrid& grid, int dim, Fn&& fn) {
    DiscMap out(grid, dim);
    for (int p = 0; p < grid.size(); ++p) {
      const CVector v = fn(grid.point(p));
      for (int k = 0; k < dim; ++k) out(p, k) = v(k);
    }
    return out;
  }

  /// Scalar convenience: fn returns one complex number per point.
  template <class Fn>
  static DiscMap from_scalar(const DiscGrid& grid, Fn&& fn) {
    DiscMap out(grid, 1);
    for (int p = 0; p < grid.size(); ++p) out(p, 0) = fn(grid.point(p));
    return out;
  }

  static DiscMap constant(const DiscGrid& grid, const CVector& value);

  const DiscGrid& grid() const { return grid_; }
  int dim() const { return dim_; }
  int nodes() const { return grid_.size(); }

  cplx& operator()(int node, int comp) { return values_[node * dim_ + comp]; }
  cplx operator()(int node, int comp) const { return values_[node * dim_ + comp]; }
  CVector at(int node) const;
  void set(int node, const CVector& v);

  std::span<cplx> values() { return values_; }
  std::span<const cplx> values() const { return values_; }

  DiscMap component(int k) const;
  void set_component(int k, const DiscMap& scalar);

  /// Max over nodes of the Euclidean norm of the value vector.
  double sup_norm() const;
  bool all_finite() const;
  DiscMap conj() const;

  DiscMap& operator+=(const DiscMap& o);
  DiscMap& operator-=(const DiscMap& o);
  DiscMap& operator*=(cplx s);

  friend DiscMap operator+(DiscMap a, const DiscMap& b) { return a += b; }
  friend DiscMap operator-(DiscMap a, const DiscMap& b) { return a -= b; }
  friend DiscMap operator*(cplx s, DiscMap a) { return a *= s; }
  friend DiscMap operator*(DiscMap a, cplx s) { return a *= s; }

 private:
  void check_compatible(const DiscMap& o) const;

  DiscGrid grid_;
  int dim_;
  std::vector<cplx> values_;
};

/// Nodewise product of a scalar map with a vector map.
DiscMap multiply(const DiscMap& scalar, const DiscMap& f);

/// Wirtinger derivatives (f_zeta, f_zetabar): Fourier differentiation in angle,
/// Chebyshev differentiation along diameters in radius.
std::pair<DiscMap, DiscMap> differentiate(const DiscMap& f);

/// Real partials (f_x, f_y) derived from the Wirtinger pair.
std::pair<DiscMap, DiscMap> real_partials(const DiscMap& f);

/// Laplacian of a map, 4 * d_zeta d_zetabar.
DiscMap laplacian(const DiscMap& f);

/// Evaluate the grid interpolant at arbitrary points of the closed disc.
/// At the exact center only the angular mean contributes.
std::vector<CVector> interpolate(const DiscMap& f, std::span<const cplx> points);
CVector interpolate(const DiscMap& f, cplx point);

/// Area integral of each component.
CVector integrate(const DiscMap& f);

/// Complex inner product sum_j \iint f_j conj(g_j) dx dy.
cplx inner(const DiscMap& f, const DiscMap& g);

/// Real inner product Re <f, g>.
inline double real_inner(const DiscMap& f, const DiscMap& g) { return inner(f, g).real(); }

/// Discrete L2 norm induced by the real inner product.
double l2_norm(const DiscMap& f);

/// Largest angular Fourier coefficient magnitude in the Nyquist slot,
/// relative to the largest coefficient overall (truncation diagnostic).
double nyquist_fraction(const DiscMap& f);

struct HolderConfig {
  double alpha = 0.5;
  int pair_budget = 256;
  std::uint64_t seed = 0;
};

void validate(const HolderConfig& cfg);

/// Discrete C^{1,alpha} estimate: sup|f| + sup|df| + sampled Hoelder
/// quotient of df. |df| is |f_zeta| + |f_zetabar| (componentwise
/// Euclidean). Pairs are drawn at stratified dyadic distances with a
/// deterministic generator, so the estimate is a lower bound of the true
/// norm and is exactly homogeneous in f.
double holder_norm(const DiscMap& f, const HolderConfig& cfg = {});

}  // namespace jdisc
