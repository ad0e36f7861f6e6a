// SPDX-License-Identifier: Apache-2.0
//
// Globally adaptive 15-point Gauss-Kronrod quadrature on finite intervals.

#ifndef AOI_QUADRATURE_HPP
#define AOI_QUADRATURE_HPP

#include <functional>
#include <stdexcept>
#include <vector>

namespace aoi {

struct QuadResult {
    double value = 0.0;
    double abs_error = 0.0;
    bool converged = false;
    int evaluations = 0;
};

struct QuadOptions {
    double rel_tol = 1e-10;
    double abs_tol = 0.0;
    int max_subintervals = 4000;
};

class QuadratureFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Integrates f over [a, b]. The interval is first split at every breakpoint
// strictly inside (a, b); then the subinterval with the largest error
// estimate is bisected until the total error meets the tolerance.
QuadResult integrate(const std::function<double(double)>& f, double a, double b, const QuadOptions& opt = {},
                     const std::vector<double>& breakpoints = {});

} // namespace aoi

#endif
