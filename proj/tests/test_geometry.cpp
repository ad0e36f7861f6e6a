// SPDX-License-Identifier: Apache-2.0

#include "doctest.h"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>

#include "aoi/geometry.hpp"

using namespace aoi;
using boost::math::quadrature::gauss_kronrod;

namespace {

constexpr double kPi = std::numbers::pi;

NetworkParams net_with(double eps, double eta = 4.0, double lambda = 1.0) {
    NetworkParams n;
    n.power_control_epsilon = eps;
    n.pathloss_exponent = eta;
    n.bs_intensity = lambda;
    return n;
}

double gk(const std::function<double(double)>& f, double a, double b, double tol = 1e-12) {
    return gauss_kronrod<double, 31>::integrate(f, a, b, 15, tol);
}

// Intensity measure of the mapped process on [0, W]: interferers at distance
// x from the victim BS whose own link distance is at most x, mapped to
// omega = x^eta / P_i.
double mapped_measure(double W, double theta_t, const NetworkParams& n, int T) {
    const double eta = n.pathloss_exponent;
    auto integrand = [&](double u) { // u = ln x
        const double x = std::exp(u);
        const double tail = 1.0 - interferer_power_cdf(std::pow(x, eta) / W, n, x);
        return x * x * tail;
    };
    return 2.0 * kPi * n.bs_intensity * (1.0 + theta_t) / T * gk(integrand, -25.0, 6.0);
}

// Moments through the probability generating functional in (r, omega)
// coordinates: the serving distance is drawn from its pdf and the
// interference is a Poisson process on the omega axis.
double moment_by_pgfl(double b, double theta, double theta_t, const NetworkParams& n, int T) {
    const double eta = n.pathloss_exponent;
    const double eps = n.power_control_epsilon;
    const double rho = n.power_control_rho;
    auto outer = [&](double r) {
        const double scale = std::pow(r, eta * (1.0 - eps)) / rho;
        const double t0 = std::log(theta * scale);
        auto inner = [&](double t) {
            const double w = std::exp(t);
            const double one_minus_f = -std::expm1(-b * std::log1p(theta * scale / w));
            return w * mapped_intensity_tt(w, theta_t, n, T) * one_minus_f;
        };
        double I = 0.0;
        const double cut[] = {t0 - 60.0, t0 - 20.0, t0 - 5.0, t0, t0 + 5.0, t0 + 20.0, t0 + 80.0};
        for (int i = 0; i + 1 < 7; ++i) I += gk(inner, cut[i], cut[i + 1], 1e-10);
        return serving_distance_pdf(r, n.bs_intensity) * std::exp(-I);
    };
    return gk(outer, 0.0, 1.0, 1e-9) + gk(outer, 1.0, 4.0, 1e-9);
}

} // namespace

TEST_CASE("serving distance pdf") {
    CHECK(serving_distance_pdf(0.0, 1.0) == 0.0);
    CHECK(serving_distance_pdf(0.5, 1.0) == doctest::Approx(1.4327).epsilon(5e-4));
    CHECK(serving_distance_pdf(0.5, 1.0) == doctest::Approx(kPi * std::exp(-kPi / 4)).epsilon(1e-14));
    for (double lam : {0.3, 1.0, 5.0}) {
        const double mass = gk([&](double r) { return serving_distance_pdf(r, lam); }, 0.0, 10.0 / std::sqrt(lam));
        CHECK(mass == doctest::Approx(1.0).epsilon(1e-10));
    }
    // Derivative of the CDF 1 - exp(-pi lambda r^2).
    const double h = 1e-6, r = 0.7;
    const double cdf_deriv = (std::exp(-kPi * (r - h) * (r - h)) - std::exp(-kPi * (r + h) * (r + h))) / (2 * h);
    CHECK(serving_distance_pdf(r, 1.0) == doctest::Approx(cdf_deriv).epsilon(1e-8));
}

TEST_CASE("interferer power distribution") {
    const NetworkParams n = net_with(0.5);
    CHECK(interferer_power_cdf(0.0, n) == 0.0);
    // P_i = rho r^{eta eps}: P{P_i <= p} = P{r <= (p/rho)^{1/(eta eps)}}.
    const double p = n.power_control_rho * std::pow(0.8, 4.0 * 0.5);
    CHECK(interferer_power_cdf(p, n) == doctest::Approx(1.0 - std::exp(-kPi * 0.64)).epsilon(1e-12));
    // Conditioning on r_i <= x: the law is capped at the power of a link of length x.
    CHECK(interferer_power_cdf(p, n, 0.8) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(interferer_power_cdf(p, n, 2.0) ==
          doctest::Approx((1.0 - std::exp(-kPi * 0.64)) / (1.0 - std::exp(-4.0 * kPi))).epsilon(1e-12));
    const NetworkParams fixed = net_with(0.0);
    CHECK(interferer_power_cdf(fixed.power_control_rho * 0.999, fixed) == 0.0);
    CHECK(interferer_power_cdf(fixed.power_control_rho, fixed) == 1.0);
}

TEST_CASE("mapped intensity: linear load prefactor, small-omega limit, eps = 0 identity") {
    const NetworkParams n = net_with(0.5);
    for (double w : {1e10, 1e12, 3e13}) {
        CHECK(mapped_intensity_tt(w, 1.0, n, 8) == doctest::Approx(2.0 * mapped_intensity_tt(w, 0.0, n, 8)).epsilon(1e-14));
        CHECK(mapped_intensity_tt(w, 0.0, n, 4) == doctest::Approx(2.0 * mapped_intensity_tt(w, 0.0, n, 8)).epsilon(1e-14));
    }
    CHECK(mapped_intensity_tt(1e-12, 0.0, n, 8) < 1e-20);
    CHECK(mapped_intensity_tt(1e-12, 0.0, n, 8) < mapped_intensity_tt(1e-6, 0.0, n, 8));

    // eps = 0: gamma(1, x) = 1 - exp(-x) with x = pi lambda (omega rho)^{2/eta}.
    const NetworkParams z = net_with(0.0);
    for (double w : {1e9, 1e12, 1e14}) {
        const double x = kPi * std::pow(w * z.power_control_rho, 0.5);
        const double expected = 2.0 * kPi * std::pow(z.power_control_rho, 0.5) / (8 * 4.0 * std::pow(w, 0.5)) * -std::expm1(-x);
        CHECK(mapped_intensity_tt(w, 0.0, z, 8) == doctest::Approx(expected).epsilon(1e-12));
    }
    CHECK_THROWS_AS(mapped_intensity_tt(1e12, 0.0, net_with(1.0), 8), EpsilonOne);
}

TEST_CASE("mapped intensity is the derivative of the displaced interferer measure") {
    for (double eps : {0.0, 0.3, 0.7}) {
        const NetworkParams n = net_with(eps);
        for (double w : {3e11, 1e12, 1e13}) {
            const double h = 1e-4 * w;
            const double deriv = (mapped_measure(w + h, 0.4, n, 6) - mapped_measure(w - h, 0.4, n, 6)) / (2 * h);
            CHECK(mapped_intensity_tt(w, 0.4, n, 6) == doctest::Approx(deriv).epsilon(1e-5));
        }
    }
}

TEST_CASE("trivial moment values") {
    const NetworkParams n = net_with(0.5);
    CHECK(moment_tt(0.0, 1.0, 0.3, n, 8) == 1.0);
    CHECK(moment_et(0.0, 1.0, 0.3, n) == 1.0);
    CHECK(moment_et(1.0, 1.0, 1.0, n) == 1.0);
    CHECK(moment_et(2.0, 1.0, 1.0, net_with(1.0)) == 1.0);
    CHECK(moment_tt(1.0, 1e-12, 0.0, n, 8) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(moment_tt(1.0, 1e-12, 0.0, net_with(1.0), 8) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("eps = 1 closed branch") {
    // int_1^inf y^{-1/2}/(y+1) dy = pi/2; prefactor 2/(T eta) = 1/16.
    const double expected = std::exp(-kPi / 32.0);
    const NetworkParams one = net_with(1.0);
    CHECK(moment_tt(1.0, 1.0, 0.0, one, 8) == doctest::Approx(expected).epsilon(1e-9));
    // Generic quadrature just below eps = 1.
    const double near = moment_tt(1.0, 1.0, 0.0, net_with(1.0 - 1e-6), 8);
    CHECK(near == doctest::Approx(expected).epsilon(1e-4));
    for (double theta : {0.1, 3.0}) {
        const double a = moment_tt(2.0, theta, 0.5, one, 5);
        const double b = moment_tt(2.0, theta, 0.5, net_with(1.0 - 1e-6), 5);
        CHECK(b == doctest::Approx(a).epsilon(1e-4));
    }
}

TEST_CASE("generic quadrature agrees with the PGFL in (r, omega)") {
    for (double eps : {0.0, 0.5, 0.8}) {
        const NetworkParams n = net_with(eps);
        for (double b : {1.0, 2.0}) {
            const double direct = moment_tt(b, 1.0, 0.3, n, 8, 1e-9);
            const double pgfl = moment_by_pgfl(b, 1.0, 0.3, n, 8);
            CHECK(direct == doctest::Approx(pgfl).epsilon(1e-6));
        }
    }
}

TEST_CASE("ET with no idle devices matches TT with T = 1 and no backlog") {
    for (double eps : {1.0, 0.5}) {
        const NetworkParams n = net_with(eps);
        for (double theta : {0.3, 1.0, 4.0})
            CHECK(moment_et(1.0, theta, 0.0, n, 1e-10) ==
                  doctest::Approx(moment_tt(1.0, theta, 0.0, n, 1, 1e-10)).epsilon(1e-9));
    }
}

TEST_CASE("monotonicity and Jensen ordering") {
    for (double eps : {1.0, 0.5}) {
        const NetworkParams n = net_with(eps);
        double prev = 1.0;
        for (double theta_t : {0.0, 0.5, 1.0, 3.0}) {
            const double m = moment_tt(1.0, 1.0, theta_t, n, 6);
            CHECK(m < prev);
            prev = m;
        }
        prev = 1.0;
        for (double theta : {0.01, 0.3, 1.0, 10.0}) {
            const double m = moment_tt(1.0, theta, 0.2, n, 6);
            CHECK(m < prev);
            prev = m;
        }
        prev = 0.0;
        for (double idle : {0.0, 0.3, 0.7, 0.99}) {
            const double m = moment_et(1.0, 1.0, idle, n);
            CHECK(m > prev);
            prev = m;
        }
        for (double theta : {0.1, 1.0, 10.0}) {
            const MomentPair tt = moments_tt(theta, 0.4, n, 4);
            const MomentPair et = moments_et(theta, 0.4, n);
            CHECK(tt.m2 <= tt.m1);
            CHECK(tt.m1 * tt.m1 <= tt.m2);
            CHECK(et.m2 <= et.m1);
            CHECK(et.m1 * et.m1 <= et.m2);
            CHECK(moment_tt(0.5, theta, 0.4, n, 4) >= tt.m1);
        }
    }
}

TEST_CASE("long duty cycle drives success to one") {
    const NetworkParams n = net_with(1.0);
    CHECK(moment_tt(1.0, 1.0, 0.0, n, 1000000) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(moment_tt(1.0, 1.0, 0.0, net_with(0.5), 1000000) == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("moments do not depend on the BS intensity") {
    for (double eps : {1.0, 0.5}) {
        const double a = moment_tt(1.0, 2.0, 0.3, net_with(eps, 4.0, 1.0), 5);
        const double b = moment_tt(1.0, 2.0, 0.3, net_with(eps, 4.0, 7.0), 5);
        CHECK(a == doctest::Approx(b).epsilon(1e-7));
    }
}

TEST_CASE("invalid moment arguments") {
    const NetworkParams n = net_with(1.0);
    CHECK_THROWS(moment_tt(-1.0, 1.0, 0.0, n, 8));
    CHECK_THROWS(moment_tt(1.0, 0.0, 0.0, n, 8));
    CHECK_THROWS(moment_tt(1.0, 1.0, 0.0, n, 0));
}
