// SPDX-License-Identifier: Apache-2.0

#include "aoi/queueing.hpp"

#include <cmath>
#include <numeric>

namespace aoi {

using Eigen::MatrixXd;
using Eigen::RowVectorXd;
using Eigen::VectorXd;

namespace {
constexpr int kMaxTerms = 1000000;
}

RowVectorXd SteadyState::level(int i) const {
    if (i == 0) return x0;
    RowVectorXd x = x1;
    for (int k = 1; k < i; ++k) x = x * R;
    return x;
}

double EtSteadyState::level(int i) const {
    if (!stable) return 0.0;
    if (i == 0) return x0;
    // x_i = x0 R^i / (1-d), written without the 1-d division.
    return x0 * alpha / ((1.0 - alpha) * d) * std::pow(R, i - 1);
}

PhCounter build_ph_counter(int T) {
    if (T < 2) throw std::domain_error("duty cycle must be at least 2");
    PhCounter ph;
    ph.init = RowVectorXd::Zero(T);
    ph.init(0) = 1.0;
    ph.S = MatrixXd::Zero(T, T);
    for (int i = 0; i + 1 < T; ++i) ph.S(i, i + 1) = 1.0;
    ph.s = VectorXd::Ones(T) - ph.S * VectorXd::Ones(T);
    return ph;
}

QbdModel build_qbd(int T, double d) {
    if (!(d >= 0.0 && d <= 1.0)) throw std::domain_error("departure probability outside [0, 1]");
    const PhCounter ph = build_ph_counter(T);
    const MatrixXd s_zeta = ph.s * ph.init;
    QbdModel m;
    m.duty_cycle = T;
    m.d = d;
    m.B = ph.S;
    m.C = s_zeta;
    m.E = d * ph.S;
    m.A0 = (1.0 - d) * s_zeta;
    m.A1 = d * s_zeta + (1.0 - d) * ph.S;
    m.A2 = d * ph.S;
    return m;
}

bool is_stable_tt(double d, int T) {
    if (T < 2) throw std::domain_error("duty cycle must be at least 2");
    return d >= 1.0 / (T - 1);
}

double r_residual(const QbdModel& m, const MatrixXd& R) {
    return (R - (m.A0 + R * m.A1 + R * R * m.A2)).cwiseAbs().rowwise().sum().maxCoeff();
}

MatrixXd solve_R(const QbdModel& m, int max_iters, double tol) {
    if (!is_stable_tt(m.d, m.duty_cycle)) throw Unstable("solve_R called on an unstable class");
    const int T = m.duty_cycle;
    const MatrixXd I = MatrixXd::Identity(T, T);
    MatrixXd R = MatrixXd::Zero(T, T);
    if (m.A0.isZero(0.0)) return R;
    for (int it = 0; it < max_iters; ++it) {
        MatrixXd next = (I - m.A1 - R * m.A2).transpose().partialPivLu().solve(m.A0.transpose()).transpose();
        const double delta = (next - R).cwiseAbs().rowwise().sum().maxCoeff();
        R = std::move(next);
        if (delta < tol) {
            // A couple of plain quadratic sweeps polish the residual.
            for (int k = 0; k < 2; ++k) R = m.A0 + R * m.A1 + R * R * m.A2;
            return R;
        }
    }
    throw NoConvergence("R iteration hit the iteration cap");
}

SteadyState solve_boundary(const QbdModel& m, const MatrixXd& R) {
    const int T = m.duty_cycle;
    const MatrixXd I = MatrixXd::Identity(T, T);
    // Unknown row vector [x0 x1] satisfies [x0 x1] (M - I) = 0 plus normalization.
    MatrixXd M(2 * T, 2 * T);
    M << m.B, m.C, m.E, m.A1 + R * m.A2;
    const VectorXd levels_tail = (I - R).partialPivLu().solve(VectorXd::Ones(T));

    MatrixXd A(2 * T + 1, 2 * T);
    A.topRows(2 * T) = (M - MatrixXd::Identity(2 * T, 2 * T)).transpose();
    A.bottomRows(1) << RowVectorXd::Ones(T), levels_tail.transpose();
    VectorXd rhs = VectorXd::Zero(2 * T + 1);
    rhs(2 * T) = 1.0;

    Eigen::ColPivHouseholderQR<MatrixXd> qr(A);
    if (qr.rank() < 2 * T) throw SingularBoundary("boundary system is rank deficient");
    const VectorXd x = qr.solve(rhs);
    if ((A * x - rhs).cwiseAbs().maxCoeff() > 1e-10) throw SingularBoundary("boundary residual above 1e-10");

    SteadyState st;
    st.R = R;
    st.x0 = x.head(T).transpose();
    st.x1 = x.tail(T).transpose();
    return st;
}

std::vector<double> arriving_law_tt(const SteadyState& st, const QbdModel& m, double tail) {
    const int T = m.duty_cycle;
    const double d = m.d;
    const MatrixXd I = MatrixXd::Identity(T, T);
    // Arrivals happen at the end of a step in phase T; departures earlier in
    // the same step, so the packet finds the post-departure level.
    std::vector<double> phase_t{st.x0(T - 1)};
    RowVectorXd x = st.x1;
    const double stop = tail * 1e-3;
    const VectorXd to_infinity = (I - st.R).partialPivLu().solve(VectorXd::Ones(T));
    for (int i = 1; i < kMaxTerms; ++i) {
        phase_t.push_back(x(T - 1));
        const RowVectorXd next = x * st.R;
        const double beyond = (next * to_infinity).value();
        x = next;
        if (beyond < stop) {
            phase_t.push_back(x(T - 1));
            break;
        }
        if (i + 1 == kMaxTerms) throw TruncationFailure("level law did not reach the tail target");
    }
    const size_t L = phase_t.size() - 1;
    std::vector<double> q(L);
    q[0] = phase_t[0] + d * phase_t[1];
    for (size_t l = 1; l < L; ++l) q[l] = (1.0 - d) * phase_t[l] + d * phase_t[l + 1];
    const double sum = std::accumulate(q.begin(), q.end(), 0.0);
    for (auto& v : q) v /= sum;
    return q;
}

WaitingDist sojourn_from_found(const std::vector<double>& found, double d, double tail) {
    if (!(d > 0.0)) throw Unstable("departure probability is zero");
    // remaining[j] = P{j packets, the tagged one included, still to be served}.
    std::vector<double> remaining(found.size() + 2, 0.0);
    for (size_t l = 0; l < found.size(); ++l) remaining[l + 1] = std::max(0.0, found[l]);
    const double found_mass = std::accumulate(found.begin(), found.end(), 0.0);

    WaitingDist w;
    w.pmf.push_back(0.0);
    double cum = 0.0;
    double mean = 0.0;
    size_t top = found.size(); // highest index that can be nonzero
    for (int m = 1; m < kMaxTerms; ++m) {
        const double done = d * remaining[1];
        w.pmf.push_back(done);
        cum += done;
        mean += m * done;
        for (size_t j = 1; j <= top; ++j) remaining[j] = (1.0 - d) * remaining[j] + d * remaining[j + 1];
        while (top > 1 && remaining[top] == 0.0) --top;
        if (cum >= found_mass - tail) {
            // Packets still queued need j/d more slots on average.
            double left = 0.0;
            for (size_t j = 1; j <= top; ++j) {
                left += remaining[j];
                mean += remaining[j] * (m + j / d);
            }
            w.tail_mass = left + (1.0 - found_mass);
            w.mean = mean / found_mass;
            return w;
        }
    }
    throw TruncationFailure("waiting pmf did not reach the tail target within 1e6 terms");
}

WaitingDist waiting_dist_tt(const SteadyState& st, const QbdModel& m, double tail) {
    if (!is_stable_tt(m.d, m.duty_cycle)) throw Unstable("waiting_dist_tt called on an unstable class");
    return sojourn_from_found(arriving_law_tt(st, m, tail), m.d, tail);
}

WaitingDist waiting_dist_tt(int T, double d, double tail) {
    const QbdModel m = build_qbd(T, d);
    return waiting_dist_tt(solve_boundary(m, solve_R(m)), m, tail);
}

EtSteadyState steady_state_et(double alpha, double d) {
    if (!(alpha > 0.0 && alpha <= 1.0) || !(d > 0.0 && d <= 1.0)) throw std::domain_error("alpha and d must lie in (0, 1]");
    EtSteadyState s;
    s.alpha = alpha;
    s.d = d;
    if (!(alpha < d)) return s;
    s.stable = true;
    s.x0 = (d - alpha) / d;
    s.R = alpha * (1.0 - d) / ((1.0 - alpha) * d);
    return s;
}

WaitingDist waiting_dist_et(double alpha, double d, double tail) {
    const EtSteadyState s = steady_state_et(alpha, d);
    if (!s.stable) throw Unstable("waiting_dist_et requires alpha < d");
    // An arrival sees the busy-conditional level law shifted by itself:
    // P{l found} = x_{l+1} / (1 - x0).
    const double busy = 1.0 - s.x0;
    std::vector<double> found;
    double acc = 0.0;
    for (int l = 0; l < kMaxTerms; ++l) {
        const double p = s.level(l + 1) / busy;
        found.push_back(p);
        acc += p;
        if (1.0 - acc < tail * 1e-3 || p == 0.0) break;
    }
    return sojourn_from_found(found, d, tail);
}

} // namespace aoi
