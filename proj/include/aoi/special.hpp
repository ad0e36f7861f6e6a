// SPDX-License-Identifier: Apache-2.0
//
// Incomplete gamma and beta functions.

#ifndef AOI_SPECIAL_HPP
#define AOI_SPECIAL_HPP

namespace aoi {

// Regularized lower incomplete gamma P(a, x), a > 0, x >= 0.
double gamma_p(double a, double x);

// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x).
double gamma_q(double a, double x);

// Unregularized lower incomplete gamma: int_0^x t^{a-1} e^{-t} dt.
double lower_incomplete_gamma(double a, double x);

// Regularized incomplete beta I_x(a, b), a, b > 0, x in [0, 1].
double beta_inc(double a, double b, double x);

} // namespace aoi

#endif
