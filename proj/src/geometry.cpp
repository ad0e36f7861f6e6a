// SPDX-License-Identifier: Apache-2.0

#include "aoi/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "aoi/special.hpp"

namespace aoi {

namespace {

constexpr double kPi = std::numbers::pi;

// Both traffic types share one kernel: 1 - ((y + theta*idle)/(y + theta))^b.
// TT is the idle = 0 case.
struct Kernel {
    double b;
    double theta;
    double idle;

    double operator()(double y) const {
        double l = std::log1p(theta / y);
        if (idle > 0.0) l -= std::log1p(theta * idle / y);
        return -std::expm1(-b * l);
    }
    // Leading 1/y coefficient for y >> theta.
    double tail_coeff() const { return b * theta * (1.0 - idle); }
};

// int_Y^inf y^{2/eta - 1} kernel(y) dy with the kernel replaced by its
// leading term; relative error O(theta / Y).
double tail_integral(const Kernel& k, double eta, double Y) {
    const double s = 2.0 / eta;
    return k.tail_coeff() * std::pow(Y, s - 1.0) / (1.0 - s);
}

constexpr double kTailSpan = 27.6; // ln(1e12): Y = theta * 1e12

// eps = 1: I = int_1^inf y^{2/eta-1} kernel(y) dy, integrated in t = ln y.
double closed_branch_integral(const Kernel& k, double eta, double rel_tol) {
    const double s = 2.0 / eta;
    const double t_theta = std::log(k.theta);
    const double t_max = std::max(0.0, t_theta) + kTailSpan;
    auto f = [&](double t) {
        const double y = std::exp(t);
        return std::pow(y, s) * k(y);
    };
    QuadOptions opt{rel_tol * 0.1, 0.0, 4000};
    auto r = integrate(f, 0.0, t_max, opt, {t_theta});
    if (!r.converged) throw QuadratureFailure("closed-branch inner integral did not converge");
    return r.value + tail_integral(k, eta, std::exp(t_max));
}

// J(z) = int_0^inf y^{2/eta-1} kernel(y) gamma(1+eps, z y^p) dy, p = 2/(eta(1-eps)).
double inner_integral(const Kernel& k, double eta, double eps, double z, double rel_tol) {
    const double s = 2.0 / eta;
    const double p = 2.0 / (eta * (1.0 - eps));
    const double a = 1.0 + eps;
    const double gamma_full = std::tgamma(a);
    const double t_theta = std::log(k.theta);
    const double t_step = -std::log(z) / p; // z y^p = 1
    const double t_min = std::min(t_step, t_theta) - 46.0 / (s + p * a);
    const double t_max = std::max(t_theta + kTailSpan, t_step + std::log(60.0) / p);

    auto f = [&](double t) {
        const double y = std::exp(t);
        const double x = z * std::exp(p * t);
        return std::pow(y, s) * k(y) * gamma_full * gamma_p(a, x);
    };
    std::vector<double> bps{t_theta};
    for (double xs : {1e-4, 1e-2, 0.1, 1.0, 3.0, 10.0, 30.0}) bps.push_back(t_step + std::log(xs) / p);
    QuadOptions opt{rel_tol, 0.0, 4000};
    auto r = integrate(f, t_min, t_max, opt, bps);
    if (!r.converged) throw QuadratureFailure("inner moment integral did not converge");
    // Past t_max the gamma factor has saturated at Gamma(1+eps).
    return r.value + gamma_full * tail_integral(k, eta, std::exp(t_max));
}

double generic_moment(const Kernel& k, double prefactor, const NetworkParams& net, double rel_tol) {
    const double eta = net.pathloss_exponent;
    const double eps = net.power_control_epsilon;
    const double z_max = std::max(40.0, -std::log(rel_tol) + 10.0);
    auto g = [&](double z) {
        const double j = inner_integral(k, eta, eps, z, rel_tol * 0.1);
        return std::exp(-z - prefactor * std::pow(z, 1.0 - eps) * j);
    };
    QuadOptions opt{rel_tol, 0.0, 2000};
    auto r = integrate(g, 0.0, z_max, opt, {1e-6, 1e-3, 0.1, 1.0, 5.0, 15.0});
    if (!r.converged) throw QuadratureFailure("outer moment integral did not converge");
    return std::clamp(r.value, 0.0, 1.0);
}

double moment(double b, double theta, double idle, double prefactor, const NetworkParams& net, double rel_tol) {
    if (b < 0.0) throw std::domain_error("moment order must be nonnegative");
    if (!(theta > 0.0)) throw std::domain_error("theta must be positive");
    if (b == 0.0 || idle >= 1.0 || prefactor == 0.0) return 1.0;
    Kernel k{b, theta, idle};
    if (net.power_control_epsilon >= 1.0) {
        const double I = closed_branch_integral(k, net.pathloss_exponent, rel_tol);
        return std::exp(-prefactor * I);
    }
    return generic_moment(k, prefactor, net, rel_tol);
}

} // namespace

double serving_distance_pdf(double r, double lambda) {
    if (r < 0.0) return 0.0;
    return 2.0 * kPi * lambda * r * std::exp(-kPi * lambda * r * r);
}

double interferer_power_cdf(double p, const NetworkParams& net, double victim_distance) {
    if (p <= 0.0) return 0.0;
    const double rho = net.power_control_rho;
    const double lam = net.bs_intensity;
    const double eta = net.pathloss_exponent;
    const double eps = net.power_control_epsilon;
    if (eps == 0.0) return p >= rho ? 1.0 : 0.0;
    const double r2 = std::pow(p / rho, 2.0 / (eta * eps)); // link distance squared at power p
    const double uncond = -std::expm1(-kPi * lam * r2);
    if (!std::isfinite(victim_distance)) return uncond;
    const double cap = -std::expm1(-kPi * lam * victim_distance * victim_distance);
    return std::min(1.0, uncond / cap);
}

double mapped_intensity_tt(double omega, double theta_t, const NetworkParams& net, int duty_cycle) {
    const double eps = net.power_control_epsilon;
    if (eps >= 1.0) throw EpsilonOne();
    if (omega <= 0.0) return 0.0;
    const double lam = net.bs_intensity;
    const double eta = net.pathloss_exponent;
    const double rho = net.power_control_rho;
    const double x = kPi * lam * std::pow(omega * rho, 2.0 / (eta * (1.0 - eps)));
    const double pre = 2.0 * (1.0 + theta_t) * std::pow(kPi * lam, 1.0 - eps) * std::pow(rho, 2.0 / eta) /
                       (duty_cycle * eta * std::pow(omega, 1.0 - 2.0 / eta));
    return pre * lower_incomplete_gamma(1.0 + eps, x);
}

double moment_tt(double b, double theta, double theta_t, const NetworkParams& net, int duty_cycle, double rel_tol) {
    if (duty_cycle < 1) throw std::domain_error("duty cycle must be positive");
    const double prefactor = 2.0 * (1.0 + theta_t) / (duty_cycle * net.pathloss_exponent);
    return moment(b, theta, 0.0, prefactor, net, rel_tol);
}

double moment_et(double b, double theta, double theta_e, const NetworkParams& net, double rel_tol) {
    const double prefactor = 2.0 / net.pathloss_exponent;
    return moment(b, theta, std::clamp(theta_e, 0.0, 1.0), prefactor, net, rel_tol);
}

MomentPair moments_tt(double theta, double theta_t, const NetworkParams& net, int duty_cycle, double rel_tol) {
    return {moment_tt(1.0, theta, theta_t, net, duty_cycle, rel_tol),
            moment_tt(2.0, theta, theta_t, net, duty_cycle, rel_tol)};
}

MomentPair moments_et(double theta, double theta_e, const NetworkParams& net, double rel_tol) {
    return {moment_et(1.0, theta, theta_e, net, rel_tol), moment_et(2.0, theta, theta_e, net, rel_tol)};
}

} // namespace aoi
