// SPDX-License-Identifier: Apache-2.0
//
// Per-class queue analysis. TT devices are PH/Geo/1 queues whose PH arrival
// process is a deterministic T-slot counter, solved as a QBD with matrix
// analytic methods. ET devices are Geo/Geo/1 queues with closed forms.
//
// Waiting time W is the sojourn in slots, counting the slot of the
// successful transmission: a packet served on its first attempt has W = 1.

#ifndef AOI_QUEUEING_HPP
#define AOI_QUEUEING_HPP

#include <Eigen/Dense>
#include <stdexcept>
#include <vector>

namespace aoi {

class NoConvergence : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};
class Unstable : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};
class SingularBoundary : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};
class TruncationFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct PhCounter {
    Eigen::RowVectorXd init; // zeta = e_1
    Eigen::MatrixXd S;       // superdiagonal shift
    Eigen::VectorXd s;       // absorption vector, 1 - S 1
};

// Level-independent QBD blocks. Level 0 uses B (stay) and C (up); level 1
// goes down through E; levels >= 1 use A0 (up), A1 (local), A2 (down).
struct QbdModel {
    int duty_cycle = 0;
    double d = 0.0;
    Eigen::MatrixXd B, C, E, A0, A1, A2;
};

struct SteadyState {
    Eigen::MatrixXd R;
    Eigen::RowVectorXd x0;
    Eigen::RowVectorXd x1;

    // Phase vector of level i (x_i = x_1 R^{i-1} for i >= 1).
    Eigen::RowVectorXd level(int i) const;
};

struct WaitingDist {
    std::vector<double> pmf; // pmf[m] = P{W = m}; pmf[0] = 0 by convention
    double tail_mass = 0.0;  // probability beyond the truncation point
    double mean = 0.0;       // includes the exact conditional mean of the tail
};

struct EtSteadyState {
    bool stable = false;
    double x0 = 0.0; // per-slot idle probability, (d - alpha)/d
    double R = 0.0;  // geometric ratio alpha(1-d)/((1-alpha)d)
    double alpha = 0.0;
    double d = 0.0;

    // Probability of i packets in the queue within a slot, after that slot's
    // arrival and before its transmission.
    double level(int i) const;
};

PhCounter build_ph_counter(int duty_cycle);
QbdModel build_qbd(int duty_cycle, double d);

// d >= 1/(T-1): the class clears each packet within a cycle on average.
bool is_stable_tt(double d, int duty_cycle);

inline constexpr int kRMaxIters = 100000;
inline constexpr double kRTol = 1e-13;

// Minimal nonnegative solution of R = A0 + R A1 + R^2 A2.
Eigen::MatrixXd solve_R(const QbdModel& model, int max_iters = kRMaxIters, double tol = kRTol);
double r_residual(const QbdModel& model, const Eigen::MatrixXd& R);

SteadyState solve_boundary(const QbdModel& model, const Eigen::MatrixXd& R);

// Law of the number of packets an arriving TT packet finds ahead of it,
// truncated once the neglected mass is below `tail`.
std::vector<double> arriving_law_tt(const SteadyState& st, const QbdModel& model, double tail);

// Sojourn law given the law of packets found ahead: W ~ NegBin(l + 1, d).
WaitingDist sojourn_from_found(const std::vector<double>& found, double d, double tail);

WaitingDist waiting_dist_tt(const SteadyState& st, const QbdModel& model, double tail);
WaitingDist waiting_dist_tt(int duty_cycle, double d, double tail);

EtSteadyState steady_state_et(double alpha, double d);
WaitingDist waiting_dist_et(double alpha, double d, double tail);

} // namespace aoi

#endif
