// SPDX-License-Identifier: Apache-2.0
//
// Beta approximation of the meta distribution and its quantization into
// equiprobable QoS classes.

#ifndef AOI_META_HPP
#define AOI_META_HPP

#include <stdexcept>
#include <vector>

#include "aoi/geometry.hpp"

namespace aoi {

inline constexpr double kDegenerateVarianceTol = 1e-12;
inline constexpr double kMinBetaShape = 1e-8;

struct BetaFit {
    double shape_a = 1.0;
    double shape_b = 1.0;
};

class DegenerateVariance : public std::runtime_error {
public:
    explicit DegenerateVariance(double m1)
        : std::runtime_error("moment pair has (near) zero variance; use a point mass"), point(m1) {}
    double point;
};

class BisectionFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Either a beta law or a point mass at `point`.
struct MetaFit {
    bool point_mass = false;
    double point = 0.0;
    BetaFit beta;
};

struct QosClasses {
    std::vector<double> departure_probs; // nondecreasing, one per class
    std::vector<double> edges;           // N+1 cell edges, edges[0]=0, edges[N]=1
    std::vector<bool> stable_mask;       // filled by the fixed-point / queueing layers

    int size() const { return static_cast<int>(departure_probs.size()); }
};

// Two-moment match: a = M1 (M1-M2)/(M2-M1^2), b = (1-M1)(M1-M2)/(M2-M1^2).
BetaFit fit_beta(const MomentPair& m);

// fit_beta, with DegenerateVariance folded into a point mass at M1.
MetaFit fit_meta(const MomentPair& m);

// Fraction of links whose success probability exceeds xi.
double meta_ccdf(const BetaFit& fit, double xi);
double meta_ccdf(const MetaFit& fit, double xi);
double meta_cdf(const MetaFit& fit, double xi);

QosClasses quantize(const MetaFit& fit, int n_classes);
QosClasses quantize(const BetaFit& fit, int n_classes);

} // namespace aoi

#endif
