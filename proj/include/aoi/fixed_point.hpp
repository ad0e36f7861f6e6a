// SPDX-License-Identifier: Apache-2.0
//
// Self-consistent load factors: the moments depend on how many devices are
// active, and activity depends on the per-class departure probabilities.

#ifndef AOI_FIXED_POINT_HPP
#define AOI_FIXED_POINT_HPP

#include <optional>
#include <stdexcept>
#include <vector>

#include "aoi/config.hpp"
#include "aoi/geometry.hpp"
#include "aoi/meta.hpp"

namespace aoi {

class NonConvergence : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct IterRecord {
    int iter = 0;
    double theta = 0.0; // load factor the moments were evaluated at
    double m1 = 0.0;
    double m2 = 0.0;
    int n_unstable = 0;
};

struct CoupledSolution {
    double theta = 0.0;
    MomentPair moments;
    MetaFit fit;
    QosClasses classes;
    // ET: idle probability x0 per class. TT: expected number of extra
    // active slots per cycle, T-1 for unstable classes.
    std::vector<double> per_class_idle;
    int iterations = 0;
    bool converged = false;
    std::vector<IterRecord> trace;
};

// Theta_T = (1/N) sum_{tau=1}^{T-1} (|U| + sum_{j in S} (1-d_j)^tau).
double theta_tt(const QosClasses& classes, int duty_cycle);

// Theta_E = mean of the per-class idle probabilities.
double theta_et(const std::vector<double>& per_class_idle);

// Iterates moments -> beta fit -> classes -> load factor until the load
// factor moves by less than the fixed-point tolerance. Starts from
// Theta_T = 0 unless theta_init is given.
CoupledSolution solve_coupled_tt(const NetworkParams& net, int duty_cycle, const AnalysisParams& analysis,
                                 std::optional<double> theta_init = std::nullopt);

// Same loop for ET traffic. Starts from Theta_E = 1 unless theta_init is given.
CoupledSolution solve_coupled_et(const NetworkParams& net, double alpha, const AnalysisParams& analysis,
                                 std::optional<double> theta_init = std::nullopt);

// Throws NonConvergence when the solution did not meet the tolerance.
const CoupledSolution& require_converged(const CoupledSolution& s);

} // namespace aoi

#endif
