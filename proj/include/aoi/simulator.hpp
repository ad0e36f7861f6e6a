// SPDX-License-Identifier: Apache-2.0
//
// Slot-level Monte Carlo of the uplink network on a torus: PPP base
// stations, one device per Voronoi cell, fractional power control,
// Rayleigh fading redrawn every slot, FCFS queues with persistent
// retransmission, and queue-coupled interference.

#ifndef AOI_SIMULATOR_HPP
#define AOI_SIMULATOR_HPP

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "aoi/config.hpp"

namespace aoi {

class DegenerateRealization : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};
class WarmupTimeout : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};
class InsufficientSamples : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Point {
    double x = 0.0;
    double y = 0.0;
};

double torus_distance(const Point& a, const Point& b, double side);

struct Realization {
    double side = 0.0;
    std::vector<Point> bs;
    std::vector<Point> devices; // devices[i] is served by bs[i]
    std::vector<double> serving_distance;
    std::vector<double> tx_power;
    std::vector<int> offset; // TT generation offset in [0, T); empty for ET
    // gain[o * n + i] = P_i * dist(device_i, bs_o)^{-eta}; the diagonal is the
    // intended link.
    std::vector<double> gain;
    std::vector<std::string> log;

    int size() const { return static_cast<int>(bs.size()); }
};

// Builds a realization from explicit positions (device i served by BS i).
Realization make_realization(std::vector<Point> bs, std::vector<Point> devices, double side, const NetworkParams& net,
                             const TrafficModel& traffic, std::uint64_t seed);

// PPP base stations on the torus [0, side)^2 and one device per cell placed
// by rejection sampling. Redraws with seed+1 when fewer than 2 BSs appear.
Realization sample_realization(const NetworkParams& net, const TrafficModel& traffic, const SimParams& sim,
                               std::uint64_t seed);

// SIR of device o's link given the active set and this slot's fading draws
// (fading[i] multiplies gain[o*n+i]; fading[o] is the intended link's).
double link_sir(const Realization& real, int o, const std::vector<int>& active, const std::vector<double>& fading);

struct DeviceMetrics {
    long long attempts = 0;
    long long successes = 0;
    long long delivered = 0;
    double wait_sum = 0.0;
    long long peak_samples = 0;
    double peak_sum = 0.0;
    double inter_arrival_sum = 0.0;
};

struct SlotMetrics {
    std::vector<DeviceMetrics> devices;
    std::vector<double> idle_fraction; // one entry per measured slot
    std::vector<long long> wait_histogram;
    long long warmup_slots = 0;
    long long measured_slots = 0;
};

// Called each slot with the slot index and the devices holding packets.
using SlotObserver = std::function<void(long long slot, const std::vector<int>& active)>;

SlotMetrics run(const Realization& real, const TrafficModel& traffic, const NetworkParams& net, const SimParams& sim,
                std::uint64_t seed, const SlotObserver& observer = {});

struct RealizationRun {
    Realization realization;
    SlotMetrics metrics;
};

// Independent realizations, each seeded from (master seed, index).
std::vector<RealizationRun> run_realizations(const ValidatedConfig& cfg);
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

inline constexpr long long kMinAttempts = 200;
inline constexpr long long kMinPeakSamples = 100;

// Per-device success ratios pooled over runs; devices below the attempt
// floor raise InsufficientSamples.
std::vector<double> success_ratios(const std::vector<RealizationRun>& runs, long long min_attempts = kMinAttempts);

double empirical_ccdf(const std::vector<double>& ratios, double xi);
std::vector<double> measure_meta(const std::vector<RealizationRun>& runs, const std::vector<double>& xi,
                                 long long min_attempts = kMinAttempts);

struct EmpiricalPaoi {
    double mean_peak_age = 0.0;   // average over devices of per-device means
    double mean_wait = 0.0;       // average over devices of per-device means
    double mean_inter_arrival = 0.0;
    double idle_fraction = 0.0;   // time-average share of devices with empty queues
    std::vector<double> class_peak_age; // devices binned by success ratio, low to high
    std::vector<double> class_wait;
};

EmpiricalPaoi measure_paoi(const std::vector<RealizationRun>& runs, int n_classes,
                           long long min_samples = kMinPeakSamples);

} // namespace aoi

#endif
