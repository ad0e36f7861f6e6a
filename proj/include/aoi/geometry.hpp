// SPDX-License-Identifier: Apache-2.0
//
// Stochastic-geometry kernels: serving distance law, interferer power law,
// the mapped interferer intensity, and the moments of the conditional
// transmission success probability for TT and ET traffic.

#ifndef AOI_GEOMETRY_HPP
#define AOI_GEOMETRY_HPP

#include <limits>
#include <stdexcept>

#include "aoi/config.hpp"
#include "aoi/quadrature.hpp"

namespace aoi {

struct MomentPair {
    double m1 = 1.0;
    double m2 = 1.0;
};

// Raised when an epsilon < 1 formula is asked to evaluate at epsilon = 1.
class EpsilonOne : public std::domain_error {
public:
    EpsilonOne() : std::domain_error("formula is singular at epsilon = 1; use the limiting branch") {}
};

// f(r) = 2 pi lambda r exp(-pi lambda r^2).
double serving_distance_pdf(double r, double lambda);

// P{P_i <= p} for an interferer whose transmit power is rho r_i^{eta eps}.
// With a finite victim distance x the link distance is conditioned on
// r_i <= x (the interferer is closer to its own BS than to the victim BS),
// which is the displacement model behind mapped_intensity_tt.
double interferer_power_cdf(double p, const NetworkParams& net,
                            double victim_distance = std::numeric_limits<double>::infinity());

// Intensity of the 1-D mapped process omega = x^eta / P_i of TT interferers.
// Requires epsilon < 1.
double mapped_intensity_tt(double omega, double theta_t, const NetworkParams& net, int duty_cycle);

// b-th moment of the conditional success probability under TT traffic.
double moment_tt(double b, double theta, double theta_t, const NetworkParams& net, int duty_cycle,
                 double rel_tol = 1e-8);

// b-th moment under ET traffic with spatially averaged idle probability theta_e.
double moment_et(double b, double theta, double theta_e, const NetworkParams& net, double rel_tol = 1e-8);

MomentPair moments_tt(double theta, double theta_t, const NetworkParams& net, int duty_cycle, double rel_tol = 1e-8);
MomentPair moments_et(double theta, double theta_e, const NetworkParams& net, double rel_tol = 1e-8);

} // namespace aoi

#endif
