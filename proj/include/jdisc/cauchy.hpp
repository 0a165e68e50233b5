#pragma once

#include <functional>
#include <span>
#include <vector>

#include "jdisc/grid.hpp"

namespace jdisc {

/// Cauchy–Green transform T(u)(z) = -(1/pi) \iint_D u(xi) / (xi - z) dA(xi),
/// applied componentwise. d_zetabar T(u) = u.
///
/// Evaluated mode by mode: angular mode m of u feeds mode m - 1 of T(u)
/// through a radial Volterra integral (inner part for m <= 0, outer part for
/// m >= 1). The radial integrals are done with Gauss–Legendre rules on the
/// grid's polynomial interpolant, so the transform is exact for resolved data.
/// The negative half of the Nyquist slot would land on mode -n_angular/2 - 1,
/// which the grid cannot hold; it is dropped (see nyquist_fraction).
DiscMap cauchy_green(const DiscMap& u);

/// T0(u) = T(u) - T(u)(0) - zeta * [T(u)]_zeta(0). Both subtracted values
/// are read off the grid representation, so T0(u)(0) and its zeta-derivative
/// at 0 vanish to rounding.
DiscMap cauchy_green_normalized(const DiscMap& u);

/// Complex M x M matrix of the discrete transform on scalar maps.
CMatrix cauchy_green_matrix(const DiscGrid& grid);

/// Holomorphic phi with Re phi = chi on the boundary circle and Im phi(0) = 0.
///
/// chi holds dim blocks of K uniform boundary samples (component-major,
/// K even). phi keeps the degrees below the grid's Nyquist mode, so it is
/// holomorphic on the grid; the boundary nodes are reproduced exactly when
/// chi has no content at or above that mode.
DiscMap schwarz_extend(const DiscGrid& grid, std::span<const double> chi, int dim = 1);

/// Taylor coefficients (degree <= max_degree) of the holomorphic phi with
/// Re phi = chi on the circle and Im phi(0) = 0, from K uniform samples.
std::vector<cplx> schwarz_coefficients(std::span<const double> chi, int max_degree);

/// sum_k coeffs[c][k] zeta^k per component c.
DiscMap holomorphic_polynomial(const DiscGrid& grid, const std::vector<std::vector<cplx>>& coeffs);

namespace reference {

/// Same modal algorithm as cauchy_green, single-threaded.
DiscMap cauchy_green_serial(const DiscMap& u);

/// Direct area quadrature in polar coordinates centred at z. The 1/s kernel
/// cancels the area element, leaving a smooth integrand on rays
/// xi = z + s e^{i psi}, s in [0, S(psi)]. Independent of the modal path.
cplx cauchy_green_direct(const std::function<cplx(cplx)>& u, cplx z, int n_psi = 256,
                         int n_s = 48);

/// Direct quadrature on grid data (interpolated), evaluated at every node.
/// O(M * n_psi * n_s); meant for small grids.
DiscMap cauchy_green_direct(const DiscMap& u, int n_psi = 64, int n_s = 24);

}  // namespace reference

}  // namespace jdisc
