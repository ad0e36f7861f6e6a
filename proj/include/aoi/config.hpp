// SPDX-License-Identifier: Apache-2.0
//
// Configuration types shared by every module, the flat INI-style loader, and
// validation. Internal units: km, linear SIR, watts.

#ifndef AOI_CONFIG_HPP
#define AOI_CONFIG_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace aoi {

struct NetworkParams {
    double bs_intensity = 1.0;          // BS per km^2
    double pathloss_exponent = 4.0;     // eta
    double power_control_epsilon = 1.0; // epsilon
    double power_control_rho = 1e-12;   // watts
    double sir_threshold = 1.0;         // linear

    bool operator==(const NetworkParams&) const = default;
};

struct TtTraffic {
    int duty_cycle = 8;
    bool operator==(const TtTraffic&) const = default;
};

struct EtTraffic {
    double arrival_prob = 0.125;
    bool operator==(const EtTraffic&) const = default;
};

using TrafficModel = std::variant<TtTraffic, EtTraffic>;

struct AnalysisParams {
    int n_classes = 10;
    double fixed_point_tol = 1e-4;
    int max_iters = 200;
    double quad_rel_tol = 1e-8;
    double wait_pmf_tail_mass = 1e-8;

    bool operator==(const AnalysisParams&) const = default;
};

struct SimParams {
    double area_side = 10.0; // km
    std::uint64_t seed = 1;
    int n_realizations = 20;
    int warmup_slots = 200;   // minimum warm-up before the idle criterion is checked
    int max_slots = 200000;   // warm-up budget
    int slots_after_warmup = 20000;
    int warmup_window = 50;
    double warmup_tol = 0.02;

    bool operator==(const SimParams&) const = default;
};

// Parsed but unvalidated parameters. dB/dBm values stay in their file units
// until validate() converts them.
struct RawConfig {
    double bs_intensity = 1.0;
    double pathloss_exponent = 4.0;
    double power_control_epsilon = 1.0;
    std::optional<double> rho_dbm;
    std::optional<double> power_control_rho;
    std::optional<double> theta_db;
    std::optional<double> sir_threshold;

    std::string traffic_type; // "tt" or "et"
    std::optional<double> duty_cycle;
    std::optional<double> arrival_prob;

    AnalysisParams analysis;
    SimParams sim;
};

struct ValidatedConfig {
    NetworkParams network;
    TrafficModel traffic;
    AnalysisParams analysis;
    SimParams sim;
    std::vector<std::string> warnings;

    bool operator==(const ValidatedConfig& o) const {
        return network == o.network && traffic == o.traffic && analysis == o.analysis && sim == o.sim;
    }
};

struct InvalidParam {
    std::string name;
    double value;
    std::string constraint;
};

class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(std::vector<InvalidParam> v);
    const std::vector<InvalidParam>& violations() const { return violations_; }

private:
    std::vector<InvalidParam> violations_;
};

class ParseError : public std::runtime_error {
public:
    ParseError(int line, std::string field, const std::string& what);
    int line() const { return line_; }
    const std::string& field() const { return field_; }

private:
    int line_;
    std::string field_;
};

double db_to_linear(double db);
double dbm_to_watts(double dbm);
double linear_to_db(double lin);

RawConfig parse_config(const std::string& text);
RawConfig load_config(const std::string& path);
ValidatedConfig validate(const RawConfig& raw);

// Writes linear units, so parse_config(serialize(c)) validates back to c.
std::string serialize(const ValidatedConfig& cfg);

// Environment variable consulted by the CLI when --config is absent.
inline constexpr const char* kConfigEnvVar = "AOI_CONFIG";

} // namespace aoi

#endif
