#pragma once

// Precomputed spectral data shared by every map on a grid.

#include <complex>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/FFT>

namespace jdisc::detail {

struct GridPlan {
  int n_radial = 0;
  int n_angular = 0;

  std::vector<double> radii;    // increasing, radii.back() == 1
  std::vector<double> angles;   // 2 pi j / n_angular
  std::vector<double> weights;  // per node, ring-major

  // Chebyshev–Lobatto grid on [-1, 1] with 2 * n_radial points.
  std::vector<double> cheb;
  std::vector<double> bary;
  std::vector<int> pos_index;  // cheb index of +radii[i]
  std::vector<int> neg_index;  // cheb index of -radii[i]

  // Radial derivative along a diameter split by the half it reads from.
  Eigen::MatrixXd d_pos;
  Eigen::MatrixXd d_neg;

  // Cauchy–Green radial kernels, one per angular DFT slot.
  std::vector<Eigen::MatrixXd> cauchy_kernel;

  GridPlan(int n_radial, int n_angular);

  int mode_of_slot(int k) const { return k <= n_angular / 2 ? k : k - n_angular; }
  int slot_of_mode(int m) const { return ((m % n_angular) + n_angular) % n_angular; }

  /// Lagrange basis on the full Chebyshev grid evaluated at x.
  std::vector<double> lagrange(double x) const;

  /// Radial interpolation weights for a mode with the given parity sign,
  /// mapping ring values to the value at radius rho.
  Eigen::VectorXd radial_weights(double rho, int parity) const;
};

using Spectrum = std::vector<std::complex<double>>;

/// Forward angular transform of one ring: c_k = (1/N) sum_j u_j e^{-i k theta_j}.
void ring_forward(Eigen::FFT<double>& fft, const Spectrum& values, Spectrum& coeffs);
/// Inverse of ring_forward.
void ring_inverse(Eigen::FFT<double>& fft, const Spectrum& coeffs, Spectrum& values);

}  // namespace jdisc::detail
