// SPDX-License-Identifier: Apache-2.0

#include "aoi/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <random>

namespace aoi {

namespace {

std::mt19937_64 make_engine(std::uint64_t seed, std::uint32_t salt) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), salt};
    return std::mt19937_64(seq);
}

double wrap_delta(double d, double side) {
    d = std::fabs(d);
    return std::min(d, side - d);
}

int nearest_bs(const std::vector<Point>& bs, const Point& p, double side) {
    int best = 0;
    double best_d2 = std::numeric_limits<double>::infinity();
    for (int k = 0; k < static_cast<int>(bs.size()); ++k) {
        const double dx = wrap_delta(bs[k].x - p.x, side);
        const double dy = wrap_delta(bs[k].y - p.y, side);
        const double d2 = dx * dx + dy * dy;
        if (d2 < best_d2) {
            best_d2 = d2;
            best = k;
        }
    }
    return best;
}

struct Packet {
    long long generated;
};

} // namespace

double torus_distance(const Point& a, const Point& b, double side) {
    const double dx = wrap_delta(a.x - b.x, side);
    const double dy = wrap_delta(a.y - b.y, side);
    return std::hypot(dx, dy);
}

Realization make_realization(std::vector<Point> bs, std::vector<Point> devices, double side, const NetworkParams& net,
                             const TrafficModel& traffic, std::uint64_t seed) {
    if (bs.size() != devices.size()) throw std::invalid_argument("need exactly one device per BS");
    Realization r;
    r.side = side;
    r.bs = std::move(bs);
    r.devices = std::move(devices);
    const int n = r.size();
    const double eta = net.pathloss_exponent;
    const double eps = net.power_control_epsilon;
    r.serving_distance.resize(n);
    r.tx_power.resize(n);
    for (int i = 0; i < n; ++i) {
        r.serving_distance[i] = torus_distance(r.devices[i], r.bs[i], side);
        r.tx_power[i] = net.power_control_rho * std::pow(r.serving_distance[i], eta * eps);
    }
    r.gain.resize(static_cast<size_t>(n) * n);
    for (int o = 0; o < n; ++o)
        for (int i = 0; i < n; ++i)
            r.gain[static_cast<size_t>(o) * n + i] = r.tx_power[i] * std::pow(torus_distance(r.devices[i], r.bs[o], side), -eta);
    if (const auto* tt = std::get_if<TtTraffic>(&traffic)) {
        auto eng = make_engine(seed, 0x0ff5e7u);
        std::uniform_int_distribution<int> off(0, tt->duty_cycle - 1);
        r.offset.resize(n);
        for (auto& b : r.offset) b = off(eng);
    }
    return r;
}

Realization sample_realization(const NetworkParams& net, const TrafficModel& traffic, const SimParams& sim,
                               std::uint64_t seed) {
    const double side = sim.area_side;
    std::vector<std::string> log;
    for (int attempt = 0; attempt < 1000; ++attempt, ++seed) {
        auto eng = make_engine(seed, 0xb5u);
        std::poisson_distribution<long long> count(net.bs_intensity * side * side);
        const long long n = count(eng);
        if (n < 2) {
            log.push_back("realization with " + std::to_string(n) + " BSs redrawn with seed " + std::to_string(seed + 1));
            continue;
        }
        std::uniform_real_distribution<double> u(0.0, side);
        std::vector<Point> bs(n);
        for (auto& p : bs) p = {u(eng), u(eng)};

        // A single stream of uniform points; each cell keeps the first point
        // that lands in it, which is uniform within that cell.
        std::vector<Point> dev(n);
        std::vector<bool> placed(n, false);
        long long remaining = n;
        while (remaining > 0) {
            const Point p{u(eng), u(eng)};
            const int k = nearest_bs(bs, p, side);
            if (!placed[k]) {
                placed[k] = true;
                dev[k] = p;
                --remaining;
            }
        }
        Realization r = make_realization(std::move(bs), std::move(dev), side, net, traffic, seed);
        r.log = std::move(log);
        return r;
    }
    throw DegenerateRealization("could not draw a realization with at least 2 BSs");
}

double link_sir(const Realization& real, int o, const std::vector<int>& active, const std::vector<double>& fading) {
    const int n = real.size();
    const double* row = real.gain.data() + static_cast<size_t>(o) * n;
    double interference = 0.0;
    for (int i : active)
        if (i != o) interference += row[i] * fading[i];
    const double signal = row[o] * fading[o];
    return interference > 0.0 ? signal / interference : std::numeric_limits<double>::infinity();
}

SlotMetrics run(const Realization& real, const TrafficModel& traffic, const NetworkParams& net, const SimParams& sim,
                std::uint64_t seed, const SlotObserver& observer) {
    const int n = real.size();
    const double theta = net.sir_threshold;
    auto eng = make_engine(seed, 0x51u);
    std::exponential_distribution<double> fade(1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    const auto* tt = std::get_if<TtTraffic>(&traffic);
    const double alpha = tt ? 0.0 : std::get<EtTraffic>(traffic).arrival_prob;
    int window = sim.warmup_window;
    if (tt) window = ((window + tt->duty_cycle - 1) / tt->duty_cycle) * tt->duty_cycle;

    std::vector<std::deque<Packet>> queue(n);
    std::vector<long long> last_generated(n, -1);
    std::vector<int> active;
    std::vector<int> winners;
    active.reserve(n);

    SlotMetrics m;
    m.devices.assign(n, {});

    bool measuring = false;
    long long measure_start = 0;
    double window_sum = 0.0;
    int window_fill = 0;
    bool have_prev = false;
    double prev_mean = 0.0;

    for (long long t = 0;; ++t) {
        if (!measuring && t >= sim.max_slots) throw WarmupTimeout("idle-fraction criterion not met within max_slots");
        if (measuring && t - measure_start >= sim.slots_after_warmup) break;

        for (int i = 0; i < n; ++i) {
            const bool arrival = tt ? ((t - real.offset[i]) % tt->duty_cycle == 0) : (unif(eng) < alpha);
            if (arrival) queue[i].push_back({t});
        }
        active.clear();
        for (int i = 0; i < n; ++i)
            if (!queue[i].empty()) active.push_back(i);
        if (observer) observer(t, active);
        const double idle = 1.0 - static_cast<double>(active.size()) / n;

        winners.clear();
        for (int o : active) {
            const double* row = real.gain.data() + static_cast<size_t>(o) * n;
            const double signal = row[o] * fade(eng);
            double interference = 0.0;
            for (int i : active)
                if (i != o) interference += row[i] * fade(eng);
            const bool ok = signal > theta * interference;
            if (measuring) {
                ++m.devices[o].attempts;
                if (ok) ++m.devices[o].successes;
            }
            if (ok) winners.push_back(o);
        }
        for (int o : winners) {
            const long long g = queue[o].front().generated;
            queue[o].pop_front();
            if (measuring) {
                const long long wait = t - g + 1;
                auto& dm = m.devices[o];
                ++dm.delivered;
                dm.wait_sum += static_cast<double>(wait);
                if (static_cast<long long>(m.wait_histogram.size()) <= wait) m.wait_histogram.resize(wait + 1, 0);
                ++m.wait_histogram[wait];
                if (last_generated[o] >= 0) {
                    ++dm.peak_samples;
                    dm.peak_sum += static_cast<double>(g - last_generated[o] + wait);
                    dm.inter_arrival_sum += static_cast<double>(g - last_generated[o]);
                }
            }
            last_generated[o] = g;
        }

        if (measuring) {
            m.idle_fraction.push_back(idle);
            continue;
        }
        window_sum += idle;
        if (++window_fill == window) {
            const double mean = window_sum / window;
            const bool settled = have_prev && std::fabs(mean - prev_mean) < sim.warmup_tol;
            have_prev = true;
            prev_mean = mean;
            window_sum = 0.0;
            window_fill = 0;
            if (settled && t + 1 >= sim.warmup_slots) {
                measuring = true;
                measure_start = t + 1;
                m.warmup_slots = t + 1;
            }
        }
    }
    m.measured_slots = sim.slots_after_warmup;
    return m;
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(master), static_cast<std::uint32_t>(master >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    std::uint32_t out[2];
    seq.generate(out, out + 2);
    return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

std::vector<RealizationRun> run_realizations(const ValidatedConfig& cfg) {
    std::vector<RealizationRun> runs;
    runs.reserve(cfg.sim.n_realizations);
    for (int k = 0; k < cfg.sim.n_realizations; ++k) {
        const std::uint64_t s = derive_seed(cfg.sim.seed, static_cast<std::uint64_t>(k));
        RealizationRun r;
        r.realization = sample_realization(cfg.network, cfg.traffic, cfg.sim, s);
        r.metrics = run(r.realization, cfg.traffic, cfg.network, cfg.sim, s);
        runs.push_back(std::move(r));
    }
    return runs;
}

std::vector<double> success_ratios(const std::vector<RealizationRun>& runs, long long min_attempts) {
    std::vector<double> out;
    for (const auto& r : runs)
        for (const auto& d : r.metrics.devices) {
            if (d.attempts < min_attempts)
                throw InsufficientSamples("device with " + std::to_string(d.attempts) + " attempts, need " +
                                          std::to_string(min_attempts));
            out.push_back(static_cast<double>(d.successes) / static_cast<double>(d.attempts));
        }
    return out;
}

double empirical_ccdf(const std::vector<double>& ratios, double xi) {
    if (ratios.empty()) return 0.0;
    const auto above = std::count_if(ratios.begin(), ratios.end(), [&](double r) { return r > xi; });
    return static_cast<double>(above) / static_cast<double>(ratios.size());
}

std::vector<double> measure_meta(const std::vector<RealizationRun>& runs, const std::vector<double>& xi,
                                 long long min_attempts) {
    const auto ratios = success_ratios(runs, min_attempts);
    std::vector<double> out;
    out.reserve(xi.size());
    for (double x : xi) out.push_back(empirical_ccdf(ratios, x));
    return out;
}

EmpiricalPaoi measure_paoi(const std::vector<RealizationRun>& runs, int n_classes, long long min_samples) {
    struct Dev {
        double ratio, peak, wait;
        long long samples;
    };
    std::vector<Dev> devs;
    double inter_sum = 0.0;
    long long inter_n = 0;
    double idle_sum = 0.0;
    long long idle_n = 0;
    for (const auto& r : runs) {
        for (const auto& d : r.metrics.devices) {
            if (d.peak_samples == 0 || d.attempts == 0) continue;
            devs.push_back({static_cast<double>(d.successes) / static_cast<double>(d.attempts),
                            d.peak_sum / static_cast<double>(d.peak_samples),
                            d.wait_sum / static_cast<double>(d.delivered), d.peak_samples});
            inter_sum += d.inter_arrival_sum;
            inter_n += d.peak_samples;
        }
        for (double f : r.metrics.idle_fraction) idle_sum += f;
        idle_n += static_cast<long long>(r.metrics.idle_fraction.size());
    }
    if (devs.empty()) throw InsufficientSamples("no device delivered two packets after warm-up");

    EmpiricalPaoi out;
    for (const auto& d : devs) {
        out.mean_peak_age += d.peak;
        out.mean_wait += d.wait;
    }
    out.mean_peak_age /= static_cast<double>(devs.size());
    out.mean_wait /= static_cast<double>(devs.size());
    out.mean_inter_arrival = inter_sum / static_cast<double>(inter_n);
    out.idle_fraction = idle_n ? idle_sum / static_cast<double>(idle_n) : 0.0;

    std::stable_sort(devs.begin(), devs.end(), [](const Dev& a, const Dev& b) { return a.ratio < b.ratio; });
    const size_t total = devs.size();
    for (int c = 0; c < n_classes; ++c) {
        const size_t lo = total * c / n_classes;
        const size_t hi = total * (c + 1) / n_classes;
        double peak = 0.0, wait = 0.0;
        long long samples = 0;
        for (size_t i = lo; i < hi; ++i) {
            peak += devs[i].peak;
            wait += devs[i].wait;
            samples += devs[i].samples;
        }
        if (hi == lo || samples < min_samples)
            throw InsufficientSamples("class " + std::to_string(c + 1) + " has too few peak-age samples");
        out.class_peak_age.push_back(peak / static_cast<double>(hi - lo));
        out.class_wait.push_back(wait / static_cast<double>(hi - lo));
    }
    return out;
}

} // namespace aoi
