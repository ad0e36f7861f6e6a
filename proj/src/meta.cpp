// SPDX-License-Identifier: Apache-2.0

#include "aoi/meta.hpp"

#include <algorithm>
#include <cmath>

#include "aoi/special.hpp"

namespace aoi {

namespace {

constexpr int kBisectionIters = 200;
constexpr double kBisectionTol = 1e-10;

double beta_cdf(const BetaFit& f, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    return beta_inc(f.shape_a, f.shape_b, x);
}

// Root of F(x) = target on [0, 1] by bisection on the CDF value. Stops on
// the CDF tolerance or when the bracket reaches machine resolution.
double bisect(const BetaFit& f, double target) {
    double lo = 0.0, hi = 1.0;
    if (!(beta_cdf(f, hi) >= target) || !(target >= 0.0))
        throw BisectionFailure("quantile search not bracketed");
    for (int i = 0; i < kBisectionIters; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (!(mid > lo && mid < hi)) break;
        const double fm = beta_cdf(f, mid);
        if (std::isnan(fm)) throw BisectionFailure("beta CDF returned NaN");
        if (std::fabs(fm - target) < kBisectionTol * 1e-3) return mid;
        if (fm < target)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

// Quantile of the fitted law. Mass piled up near one is searched through
// the mirrored law Beta(b, a) in 1 - x, where doubles are dense.
double quantile(const BetaFit& f, double p) {
    if (f.shape_a > f.shape_b) return 1.0 - bisect(BetaFit{f.shape_b, f.shape_a}, 1.0 - p);
    return bisect(f, p);
}

} // namespace

BetaFit fit_beta(const MomentPair& m) {
    const double var = m.m2 - m.m1 * m.m1;
    if (!(var > kDegenerateVarianceTol)) throw DegenerateVariance(m.m1);
    const double mhat = m.m1 - m.m2;
    BetaFit f{m.m1 * mhat / var, (1.0 - m.m1) * mhat / var};
    if (!(f.shape_a >= kMinBetaShape) || !(f.shape_b >= kMinBetaShape)) throw DegenerateVariance(m.m1);
    return f;
}

MetaFit fit_meta(const MomentPair& m) {
    try {
        return {false, 0.0, fit_beta(m)};
    } catch (const DegenerateVariance& e) {
        return {true, e.point, {}};
    }
}

double meta_ccdf(const BetaFit& fit, double xi) { return 1.0 - beta_cdf(fit, xi); }

double meta_cdf(const MetaFit& fit, double xi) {
    if (fit.point_mass) return xi >= fit.point ? 1.0 : 0.0;
    return beta_cdf(fit.beta, xi);
}

double meta_ccdf(const MetaFit& fit, double xi) {
    if (fit.point_mass) return xi < fit.point ? 1.0 : 0.0;
    return meta_ccdf(fit.beta, xi);
}

QosClasses quantize(const BetaFit& fit, int n) {
    if (n < 1) throw std::domain_error("need at least one class");
    QosClasses q;
    q.edges.assign(n + 1, 0.0);
    q.edges[n] = 1.0;
    q.departure_probs.resize(n);
    double prev = 0.0;
    for (int k = 1; k <= n; ++k) {
        prev = q.departure_probs[k - 1] = std::max(prev, quantile(fit, (k - 0.5) / n));
        if (k < n) prev = q.edges[k] = std::max(prev, quantile(fit, double(k) / n));
    }
    q.stable_mask.assign(n, true);
    return q;
}

QosClasses quantize(const MetaFit& fit, int n) {
    if (!fit.point_mass) return quantize(fit.beta, n);
    if (n < 1) throw std::domain_error("need at least one class");
    QosClasses q;
    q.departure_probs.assign(n, fit.point);
    q.edges.assign(n + 1, fit.point);
    q.edges[0] = 0.0;
    q.edges[n] = 1.0;
    q.stable_mask.assign(n, true);
    return q;
}

} // namespace aoi
