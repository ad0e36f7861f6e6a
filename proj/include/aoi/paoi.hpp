// SPDX-License-Identifier: Apache-2.0
//
// Peak AoI assembly from inter-arrival means and per-class waiting laws,
// end-to-end analysis drivers, and stability frontiers.

#ifndef AOI_PAOI_HPP
#define AOI_PAOI_HPP

#include <limits>
#include <vector>

#include "aoi/config.hpp"
#include "aoi/fixed_point.hpp"
#include "aoi/queueing.hpp"

namespace aoi {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class TrafficKind { TT, ET };

struct PaoiReport {
    double overall = kInf;
    std::vector<double> per_class;
    std::vector<double> mean_wait_per_class;
    double inter_arrival_mean = 0.0;
};

// Unstable classes (mask false) get infinite wait and PAoI; their entries in
// `waits` are ignored. The overall value averages all classes, so one
// unstable class makes it infinite.
PaoiReport paoi_tt(int duty_cycle, const std::vector<WaitingDist>& waits, const std::vector<bool>& stable);
PaoiReport paoi_et(double alpha, const std::vector<WaitingDist>& waits, const std::vector<bool>& stable);

struct TrafficAnalysis {
    CoupledSolution solution;
    std::vector<WaitingDist> waits;
    PaoiReport report;
};

TrafficAnalysis analyze_tt(const NetworkParams& net, int duty_cycle, const AnalysisParams& analysis);
TrafficAnalysis analyze_et(const NetworkParams& net, double alpha, const AnalysisParams& analysis);

struct FrontierPoint {
    double theta_db = 0.0;
    double load = 0.0;
    int class_index = 0; // 1-based
    bool stable = false;
    bool failed = false; // coupled solve did not converge
};

struct ParetoFrontier {
    TrafficKind kind = TrafficKind::TT;
    std::vector<double> theta_db;
    std::vector<FrontierPoint> grid;
    // load_star[n][k]: TT minimal stable duty cycle, ET maximal stable
    // arrival probability, for class n+1 at theta_db[k]; NaN when no grid
    // load is stable.
    std::vector<std::vector<double>> load_star;
};

ParetoFrontier stability_frontier(const NetworkParams& net, TrafficKind kind, const std::vector<double>& theta_db,
                                  const std::vector<double>& loads, const AnalysisParams& analysis);

} // namespace aoi

#endif
