// SPDX-License-Identifier: Apache-2.0
//
// Special functions used by the link analysis and the PHY error models.

#pragma once

namespace rrsel::special {

/// Exponentially scaled modified Bessel function e^{-x} I0(x), x >= 0.
/// Power series below the switchover, Hankel asymptotic expansion above it.
double bessel_i0e(double x);

/// Exponentially scaled e^{-x} I_k(x) for integer order k >= 0.
double bessel_ie(int k, double x);

/// Bessel function of the first kind, order zero.
double bessel_j0(double x);

/// First-order Marcum Q function Q1(a, b), a, b >= 0.
double marcum_q1(double a, double b);

/// Gaussian tail probability Q(x) = P[N(0,1) > x].
double gaussian_q(double x);

} // namespace rrsel::special
