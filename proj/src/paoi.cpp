// SPDX-License-Identifier: Apache-2.0

#include "aoi/paoi.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace aoi {

namespace {

PaoiReport assemble(double inter_arrival, const std::vector<WaitingDist>& waits, const std::vector<bool>& stable) {
    PaoiReport r;
    r.inter_arrival_mean = inter_arrival;
    const size_t n = stable.size();
    double sum = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const double w = (stable[i] && i < waits.size()) ? waits[i].mean : kInf;
        r.mean_wait_per_class.push_back(w);
        r.per_class.push_back(inter_arrival + w);
        sum += w;
    }
    r.overall = n == 0 ? kInf : inter_arrival + sum / static_cast<double>(n);
    return r;
}

void fill_waits(TrafficAnalysis& a, const std::function<WaitingDist(double)>& wait_of) {
    auto& cls = a.solution.classes;
    a.waits.assign(cls.size(), WaitingDist{});
    for (int n = 0; n < cls.size(); ++n) {
        if (!cls.stable_mask[n]) continue;
        try {
            a.waits[n] = wait_of(cls.departure_probs[n]);
        } catch (const NoConvergence&) {
            cls.stable_mask[n] = false; // numerically on the stability boundary
        } catch (const TruncationFailure&) {
            cls.stable_mask[n] = false;
        }
    }
}

} // namespace

PaoiReport paoi_tt(int T, const std::vector<WaitingDist>& waits, const std::vector<bool>& stable) {
    return assemble(static_cast<double>(T), waits, stable);
}

PaoiReport paoi_et(double alpha, const std::vector<WaitingDist>& waits, const std::vector<bool>& stable) {
    return assemble(1.0 / alpha, waits, stable);
}

TrafficAnalysis analyze_tt(const NetworkParams& net, int T, const AnalysisParams& an) {
    TrafficAnalysis a;
    a.solution = solve_coupled_tt(net, T, an);
    fill_waits(a, [&](double d) { return waiting_dist_tt(T, d, an.wait_pmf_tail_mass); });
    a.report = paoi_tt(T, a.waits, a.solution.classes.stable_mask);
    return a;
}

TrafficAnalysis analyze_et(const NetworkParams& net, double alpha, const AnalysisParams& an) {
    TrafficAnalysis a;
    a.solution = solve_coupled_et(net, alpha, an);
    fill_waits(a, [&](double d) { return waiting_dist_et(alpha, d, an.wait_pmf_tail_mass); });
    a.report = paoi_et(alpha, a.waits, a.solution.classes.stable_mask);
    return a;
}

ParetoFrontier stability_frontier(const NetworkParams& net, TrafficKind kind, const std::vector<double>& theta_db,
                                  const std::vector<double>& loads, const AnalysisParams& an) {
    ParetoFrontier f;
    f.kind = kind;
    f.theta_db = theta_db;
    const int N = an.n_classes;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    f.load_star.assign(N, std::vector<double>(theta_db.size(), nan));

    for (size_t k = 0; k < theta_db.size(); ++k) {
        NetworkParams p = net;
        p.sir_threshold = db_to_linear(theta_db[k]);
        for (double load : loads) {
            CoupledSolution s;
            try {
                s = kind == TrafficKind::TT ? solve_coupled_tt(p, static_cast<int>(load), an)
                                            : solve_coupled_et(p, load, an);
            } catch (const std::runtime_error&) {
                s.converged = false; // quadrature or quantile failure at this grid point
            }
            for (int n = 0; n < N; ++n) {
                const bool ok = s.converged && s.classes.stable_mask[n];
                FrontierPoint pt{theta_db[k], load, n + 1, ok, !s.converged};
                f.grid.push_back(pt);
                if (!pt.stable) continue;
                double& star = f.load_star[n][k];
                if (kind == TrafficKind::TT)
                    star = std::isnan(star) ? load : std::min(star, load);
                else
                    star = std::isnan(star) ? load : std::max(star, load);
            }
        }
    }
    return f;
}

} // namespace aoi
