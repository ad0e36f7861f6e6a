// SPDX-License-Identifier: Apache-2.0
//
// Experiment drivers behind the command-line tool. Every driver returns the
// full set of output files in memory so nothing is written when a run fails.

#ifndef AOI_REPORT_HPP
#define AOI_REPORT_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "aoi/config.hpp"
#include "aoi/meta.hpp"
#include "aoi/paoi.hpp"

namespace aoi {

struct OutputFile {
    std::string name;
    std::string content;
};

struct ExperimentSpec {
    std::string mode; // analyze-tt, analyze-et, simulate, compare, frontier
    ValidatedConfig cfg;
    std::vector<double> theta_db;  // nonempty, sorted
    std::vector<int> duty_cycles;  // TT loads, sorted
    std::vector<double> alphas;    // ET loads, sorted
};

struct Tolerances {
    double ks = 0.08;
    double paoi_rel = 0.10;
};

struct RunResult {
    std::vector<OutputFile> files;
    bool tolerance_failure = false;
    std::string summary;
};

// "inf"/"nan" for non-finite values, otherwise %.10g.
std::string format_number(double x);

std::uint64_t fnv1a64(const std::string& data);

// "# config_hash=<hex> seed=<n> version=<v>"
std::string provenance_line(const ValidatedConfig& cfg);

// sup_x |F_model(x) - F_empirical(x)| over the sample points and a fine grid.
double kolmogorov_distance(const MetaFit& model, std::vector<double> samples);

std::vector<double> xi_grid(int points = 101);

RunResult cmd_analyze(const ExperimentSpec& spec, TrafficKind kind);
RunResult cmd_simulate(const ExperimentSpec& spec);
RunResult cmd_compare(const ExperimentSpec& spec, const Tolerances& tol = {});
RunResult cmd_frontier(const ExperimentSpec& spec, TrafficKind kind);

void write_outputs(const std::string& dir, const std::vector<OutputFile>& files);

} // namespace aoi

#endif
