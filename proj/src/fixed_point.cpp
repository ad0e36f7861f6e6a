// SPDX-License-Identifier: Apache-2.0

#include "aoi/fixed_point.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "aoi/queueing.hpp"

namespace aoi {

namespace {

struct Step {
    double theta_new;
    MomentPair moments;
    MetaFit fit;
    QosClasses classes;
    std::vector<double> per_class;
    int n_unstable;
};

CoupledSolution iterate(double theta0, double lo, double hi, const AnalysisParams& an,
                        const std::function<Step(double)>& step) {
    constexpr double kMaxRelax = 50.0;
    CoupledSolution sol;
    double theta = std::clamp(theta0, lo, hi);
    double beta = 0.5;
    double prev_inc = 0.0;
    double prev_theta = 0.0, prev_image = 0.0;
    bool have_prev = false;
    int flips = 0;
    // Residual target is a tenth of phi.
    const double stop = 0.1 * an.fixed_point_tol;
    for (int k = 1; k <= an.max_iters; ++k) {
        Step s = step(theta);
        sol.trace.push_back({k, theta, s.moments.m1, s.moments.m2, s.n_unstable});
        sol.iterations = k;
        sol.theta = theta;
        sol.moments = s.moments;
        sol.fit = s.fit;
        sol.classes = std::move(s.classes);
        sol.per_class_idle = std::move(s.per_class);

        const double inc = s.theta_new - theta;
        if (std::fabs(inc) < stop) {
            sol.converged = true;
            return sol;
        }
        const bool flipped = prev_inc != 0.0 && inc * prev_inc < 0.0;
        if (flipped) {
            if (++flips >= 2) {
                beta *= 0.5;
                flips = 0;
            }
        } else {
            flips = 0;
        }

        // Secant relaxation 1/(1 - L) from the slope L of the map between the
        // last two iterates; plain damping while increments oscillate.
        double relax = beta;
        if (have_prev && !flipped && theta != prev_theta) {
            const double slope = (s.theta_new - prev_image) / (theta - prev_theta);
            if (std::isfinite(slope) && slope < 1.0) relax = std::min(1.0 / (1.0 - slope), kMaxRelax);
        }
        prev_theta = theta;
        prev_image = s.theta_new;
        have_prev = true;
        prev_inc = inc;
        theta = std::clamp(theta + relax * inc, lo, hi);
    }
    return sol;
}

} // namespace

double theta_tt(const QosClasses& classes, int T) {
    const int n = classes.size();
    if (n == 0) return 0.0;
    double total = 0.0;
    int unstable = 0;
    for (double d : classes.departure_probs)
        if (!is_stable_tt(d, T)) ++unstable;
    for (int tau = 1; tau <= T - 1; ++tau) {
        double active = unstable;
        for (double d : classes.departure_probs)
            if (is_stable_tt(d, T)) active += std::pow(1.0 - d, tau);
        total += active;
    }
    return total / n;
}

double theta_et(const std::vector<double>& idle) {
    if (idle.empty()) return 1.0;
    return std::accumulate(idle.begin(), idle.end(), 0.0) / static_cast<double>(idle.size());
}

CoupledSolution solve_coupled_tt(const NetworkParams& net, int T, const AnalysisParams& an,
                                 std::optional<double> theta_init) {
    const double theta_sir = net.sir_threshold;
    auto step = [&](double theta) {
        Step s;
        s.moments = moments_tt(theta_sir, theta, net, T, an.quad_rel_tol);
        s.fit = fit_meta(s.moments);
        s.classes = quantize(s.fit, an.n_classes);
        s.n_unstable = 0;
        for (int n = 0; n < s.classes.size(); ++n) {
            const double d = s.classes.departure_probs[n];
            const bool ok = is_stable_tt(d, T);
            s.classes.stable_mask[n] = ok;
            if (!ok) ++s.n_unstable;
            double act = 0.0;
            for (int tau = 1; tau <= T - 1; ++tau) act += ok ? std::pow(1.0 - d, tau) : 1.0;
            s.per_class.push_back(act);
        }
        s.theta_new = theta_tt(s.classes, T);
        return s;
    };
    return iterate(theta_init.value_or(0.0), 0.0, T - 1.0, an, step);
}

CoupledSolution solve_coupled_et(const NetworkParams& net, double alpha, const AnalysisParams& an,
                                 std::optional<double> theta_init) {
    const double theta_sir = net.sir_threshold;
    auto step = [&](double theta) {
        Step s;
        s.moments = moments_et(theta_sir, theta, net, an.quad_rel_tol);
        s.fit = fit_meta(s.moments);
        s.classes = quantize(s.fit, an.n_classes);
        s.n_unstable = 0;
        for (int n = 0; n < s.classes.size(); ++n) {
            const double d = s.classes.departure_probs[n];
            const bool ok = alpha < d;
            s.classes.stable_mask[n] = ok;
            if (!ok) ++s.n_unstable;
            s.per_class.push_back(ok ? steady_state_et(alpha, d).x0 : 0.0);
        }
        s.theta_new = theta_et(s.per_class);
        return s;
    };
    return iterate(theta_init.value_or(1.0), 0.0, 1.0, an, step);
}

const CoupledSolution& require_converged(const CoupledSolution& s) {
    if (!s.converged)
        throw NonConvergence("load-factor iteration did not converge in " + std::to_string(s.iterations) + " iterations");
    return s;
}

} // namespace aoi
