// SPDX-License-Identifier: Apache-2.0
//
// aoi: analytical solves, simulations, cross-validation and stability
// frontiers for uplink IoT networks with TT or ET traffic.
//
// Exit codes: 0 success, 1 error, 2 validation tolerance exceeded.

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "aoi/config.hpp"
#include "aoi/report.hpp"

namespace {

template <typename T>
void require_sorted(const std::vector<T>& v, const char* flag) {
    for (size_t i = 1; i < v.size(); ++i)
        if (!(v[i - 1] < v[i])) throw std::invalid_argument(std::string(flag) + " must be strictly increasing");
}

struct Options {
    std::string config;
    std::string out = ".";
    std::vector<double> theta_db;
    std::vector<int> duty_cycles;
    std::vector<double> alphas;
    long long seed = -1;
    int realizations = -1;
    int classes = -1;
};

void add_common(CLI::App* sub, Options& o) {
    sub->add_option("--config", o.config, "configuration file (falls back to $AOI_CONFIG)");
    sub->add_option("--out", o.out, "output directory")->capture_default_str();
    sub->add_option("--seed", o.seed, "master seed for simulations");
    sub->add_option("--theta-db", o.theta_db, "SIR thresholds in dB, comma separated")->delimiter(',');
    sub->add_option("--duty-cycle", o.duty_cycles, "TT duty cycles, comma separated")->delimiter(',');
    sub->add_option("--alpha", o.alphas, "ET arrival probabilities, comma separated")->delimiter(',');
    sub->add_option("--realizations", o.realizations, "number of spatial realizations");
    sub->add_option("--classes", o.classes, "number of QoS classes");
}

aoi::ExperimentSpec make_spec(const std::string& mode, const Options& o) {
    std::string path = o.config;
    if (path.empty())
        if (const char* env = std::getenv(aoi::kConfigEnvVar)) path = env;
    if (path.empty()) throw std::invalid_argument(std::string("no config: pass --config or set ") + aoi::kConfigEnvVar);

    aoi::RawConfig raw = aoi::load_config(path);
    if (o.seed >= 0) raw.sim.seed = static_cast<std::uint64_t>(o.seed);
    if (o.realizations >= 0) raw.sim.n_realizations = o.realizations;
    if (o.classes >= 0) raw.analysis.n_classes = o.classes;

    aoi::ExperimentSpec spec;
    spec.mode = mode;
    spec.cfg = aoi::validate(raw);
    for (const auto& w : spec.cfg.warnings) std::cerr << "warning: " << w << "\n";

    spec.theta_db = o.theta_db;
    if (spec.theta_db.empty()) spec.theta_db.push_back(aoi::linear_to_db(spec.cfg.network.sir_threshold));
    spec.duty_cycles = o.duty_cycles;
    spec.alphas = o.alphas;
    require_sorted(spec.theta_db, "--theta-db");
    require_sorted(spec.duty_cycles, "--duty-cycle");
    require_sorted(spec.alphas, "--alpha");
    for (int t : spec.duty_cycles)
        if (t < 2) throw std::invalid_argument("--duty-cycle entries must be >= 2");
    for (double a : spec.alphas)
        if (!(a > 0.0 && a <= 1.0)) throw std::invalid_argument("--alpha entries must lie in (0, 1]");
    return spec;
}

aoi::TrafficKind frontier_kind(const aoi::ExperimentSpec& spec) {
    if (!spec.duty_cycles.empty() && !spec.alphas.empty())
        throw std::invalid_argument("give either --duty-cycle or --alpha, not both");
    if (!spec.duty_cycles.empty()) return aoi::TrafficKind::TT;
    if (!spec.alphas.empty()) return aoi::TrafficKind::ET;
    return std::holds_alternative<aoi::TtTraffic>(spec.cfg.traffic) ? aoi::TrafficKind::TT : aoi::TrafficKind::ET;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Peak AoI, meta distributions and stability frontiers for uplink IoT networks"};
    app.require_subcommand(1);
    Options o;
    const std::vector<std::string> modes{"analyze-tt", "analyze-et", "simulate", "compare", "frontier"};
    for (const auto& m : modes) add_common(app.add_subcommand(m, "run " + m), o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        const std::string mode = app.get_subcommands().front()->get_name();
        const aoi::ExperimentSpec spec = make_spec(mode, o);
        aoi::RunResult res;
        if (mode == "analyze-tt")
            res = aoi::cmd_analyze(spec, aoi::TrafficKind::TT);
        else if (mode == "analyze-et")
            res = aoi::cmd_analyze(spec, aoi::TrafficKind::ET);
        else if (mode == "simulate")
            res = aoi::cmd_simulate(spec);
        else if (mode == "compare")
            res = aoi::cmd_compare(spec);
        else
            res = aoi::cmd_frontier(spec, frontier_kind(spec));
        aoi::write_outputs(o.out, res.files);
        if (!res.summary.empty()) std::cout << res.summary;
        return res.tolerance_failure ? 2 : 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
