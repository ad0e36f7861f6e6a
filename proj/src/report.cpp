// SPDX-License-Identifier: Apache-2.0

#include "aoi/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "aoi/simulator.hpp"

namespace aoi {

namespace {

const char* traffic_name(TrafficKind k) { return k == TrafficKind::TT ? "tt" : "et"; }

class Csv {
public:
    Csv(const ValidatedConfig& cfg, const std::string& header) { os_ << provenance_line(cfg) << "\n" << header << "\n"; }

    template <typename... Ts>
    void row(const Ts&... cells) {
        bool first = true;
        ((os_ << (first ? "" : ",") << cell(cells), first = false), ...);
        os_ << "\n";
    }

    OutputFile file(std::string name) const { return {std::move(name), os_.str()}; }

private:
    static std::string cell(double x) { return format_number(x); }
    static std::string cell(int x) { return std::to_string(x); }
    static std::string cell(long long x) { return std::to_string(x); }
    static std::string cell(bool x) { return x ? "1" : "0"; }
    static std::string cell(const std::string& s) { return s; }
    static std::string cell(const char* s) { return s; }

    std::ostringstream os_;
};

struct LoadPoint {
    double load;
    TrafficModel traffic;
};

std::vector<LoadPoint> loads_for(const ExperimentSpec& spec, TrafficKind kind) {
    std::vector<LoadPoint> out;
    if (kind == TrafficKind::TT) {
        for (int t : spec.duty_cycles) out.push_back({double(t), TtTraffic{t}});
        if (out.empty())
            if (const auto* tt = std::get_if<TtTraffic>(&spec.cfg.traffic))
                out.push_back({double(tt->duty_cycle), *tt});
        if (out.empty()) throw std::invalid_argument("TT run needs --duty-cycle or a TT config");
    } else {
        for (double a : spec.alphas) out.push_back({a, EtTraffic{a}});
        if (out.empty())
            if (const auto* et = std::get_if<EtTraffic>(&spec.cfg.traffic)) out.push_back({et->arrival_prob, *et});
        if (out.empty()) throw std::invalid_argument("ET run needs --alpha or an ET config");
    }
    return out;
}

TrafficKind kind_of(const TrafficModel& t) { return std::holds_alternative<TtTraffic>(t) ? TrafficKind::TT : TrafficKind::ET; }

TrafficKind sim_kind(const ExperimentSpec& spec) {
    if (!spec.duty_cycles.empty() && !spec.alphas.empty())
        throw std::invalid_argument("give either --duty-cycle or --alpha, not both");
    if (!spec.duty_cycles.empty()) return TrafficKind::TT;
    if (!spec.alphas.empty()) return TrafficKind::ET;
    return kind_of(spec.cfg.traffic);
}

TrafficAnalysis analyze(const NetworkParams& net, const LoadPoint& lp, const AnalysisParams& an) {
    if (const auto* tt = std::get_if<TtTraffic>(&lp.traffic)) return analyze_tt(net, tt->duty_cycle, an);
    return analyze_et(net, std::get<EtTraffic>(lp.traffic).arrival_prob, an);
}

NetworkParams with_theta(const NetworkParams& net, double theta_db) {
    NetworkParams p = net;
    p.sir_threshold = db_to_linear(theta_db);
    return p;
}

} // namespace

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}

std::uint64_t fnv1a64(const std::string& data) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string provenance_line(const ValidatedConfig& cfg) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "# config_hash=%016llx seed=%llu version=%s",
                  static_cast<unsigned long long>(fnv1a64(serialize(cfg))), static_cast<unsigned long long>(cfg.sim.seed),
                  AOI_VERSION);
    return buf;
}

std::vector<double> xi_grid(int points) {
    std::vector<double> g(points);
    for (int i = 0; i < points; ++i) g[i] = points == 1 ? 0.0 : double(i) / (points - 1);
    return g;
}

double kolmogorov_distance(const MetaFit& model, std::vector<double> samples) {
    if (samples.empty()) return 1.0;
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double ks = 0.0;
    for (size_t i = 0; i < samples.size(); ++i) {
        const double f = meta_cdf(model, samples[i]);
        ks = std::max({ks, std::fabs(f - (i + 1) / n), std::fabs(f - i / n)});
    }
    for (double x : xi_grid(1001)) {
        const double emp = static_cast<double>(std::upper_bound(samples.begin(), samples.end(), x) - samples.begin()) / n;
        ks = std::max(ks, std::fabs(meta_cdf(model, x) - emp));
    }
    return ks;
}

RunResult cmd_analyze(const ExperimentSpec& spec, TrafficKind kind) {
    const auto& cfg = spec.cfg;
    const char* tname = traffic_name(kind);
    Csv moments(cfg, "traffic,theta_db,load,load_factor,m1,m2,beta_a,beta_b,iterations,converged");
    Csv ccdf(cfg, "traffic,theta_db,load,xi,ccdf");
    Csv classes(cfg, "traffic,theta_db,load,class,d,stable,mean_wait,paoi");
    Csv paoi(cfg, "traffic,theta_db,load,class,stable,mean_wait,paoi");
    Csv trace(cfg, "traffic,theta_db,load,iter,load_factor,m1,m2,n_unstable");

    RunResult res;
    for (double tdb : spec.theta_db) {
        const NetworkParams net = with_theta(cfg.network, tdb);
        for (const auto& lp : loads_for(spec, kind)) {
            TrafficAnalysis a = analyze(net, lp, cfg.analysis);
            require_converged(a.solution);
            const auto& s = a.solution;
            const double ba = s.fit.point_mass ? std::numeric_limits<double>::quiet_NaN() : s.fit.beta.shape_a;
            const double bb = s.fit.point_mass ? std::numeric_limits<double>::quiet_NaN() : s.fit.beta.shape_b;
            moments.row(tname, tdb, lp.load, s.theta, s.moments.m1, s.moments.m2, ba, bb, s.iterations, s.converged);
            for (double xi : xi_grid()) ccdf.row(tname, tdb, lp.load, xi, meta_ccdf(s.fit, xi));
            bool all_stable = true;
            for (int n = 0; n < s.classes.size(); ++n) {
                const bool st = s.classes.stable_mask[n];
                all_stable = all_stable && st;
                classes.row(tname, tdb, lp.load, n + 1, s.classes.departure_probs[n], st,
                            a.report.mean_wait_per_class[n], a.report.per_class[n]);
                paoi.row(tname, tdb, lp.load, std::to_string(n + 1), st, a.report.mean_wait_per_class[n],
                         a.report.per_class[n]);
            }
            const double overall_wait = a.report.overall - a.report.inter_arrival_mean;
            paoi.row(tname, tdb, lp.load, "all", all_stable, overall_wait, a.report.overall);
            for (const auto& r : s.trace) trace.row(tname, tdb, lp.load, r.iter, r.theta, r.m1, r.m2, r.n_unstable);
        }
    }
    res.files = {moments.file("moments.csv"), ccdf.file("meta_ccdf.csv"), classes.file("classes.csv"),
                 paoi.file("paoi.csv"), trace.file("trace.csv")};
    return res;
}

RunResult cmd_simulate(const ExperimentSpec& spec) {
    const auto& cfg = spec.cfg;
    if (cfg.sim.n_realizations < 1) throw std::invalid_argument("simulation needs at least one realization");
    const TrafficKind kind = sim_kind(spec);
    const char* tname = traffic_name(kind);
    Csv devices(cfg, "traffic,theta_db,load,realization,device_id,r_o,success_ratio,mean_wait,mean_peak_age,n_samples");
    Csv summary(cfg, "traffic,theta_db,load,n_devices,mean_peak_age,mean_wait,mean_inter_arrival,idle_fraction");
    Csv ccdf(cfg, "traffic,theta_db,load,xi,ccdf");

    for (double tdb : spec.theta_db) {
        for (const auto& lp : loads_for(spec, kind)) {
            ValidatedConfig c = cfg;
            c.network = with_theta(cfg.network, tdb);
            c.traffic = lp.traffic;
            const auto runs = run_realizations(c);
            long long n_dev = 0;
            std::vector<double> ratios;
            for (size_t k = 0; k < runs.size(); ++k) {
                const auto& r = runs[k];
                for (int i = 0; i < r.realization.size(); ++i) {
                    const auto& d = r.metrics.devices[i];
                    const double ratio = d.attempts ? double(d.successes) / double(d.attempts) : std::nan("");
                    const double w = d.delivered ? d.wait_sum / double(d.delivered) : std::nan("");
                    const double pk = d.peak_samples ? d.peak_sum / double(d.peak_samples) : std::nan("");
                    devices.row(tname, tdb, lp.load, int(k), i, r.realization.serving_distance[i], ratio, w, pk,
                                d.peak_samples);
                    if (d.attempts) ratios.push_back(ratio);
                    ++n_dev;
                }
            }
            EmpiricalPaoi e = measure_paoi(runs, 1, 0);
            summary.row(tname, tdb, lp.load, n_dev, e.mean_peak_age, e.mean_wait, e.mean_inter_arrival, e.idle_fraction);
            for (double xi : xi_grid()) ccdf.row(tname, tdb, lp.load, xi, empirical_ccdf(ratios, xi));
        }
    }
    return {{devices.file("sim_devices.csv"), summary.file("sim_summary.csv"), ccdf.file("sim_meta_ccdf.csv")}, false, ""};
}

RunResult cmd_compare(const ExperimentSpec& spec, const Tolerances& tol) {
    const auto& cfg = spec.cfg;
    if (cfg.sim.n_realizations < 1) throw std::invalid_argument("compare needs at least one simulation realization");
    const TrafficKind kind = sim_kind(spec);
    const char* tname = traffic_name(kind);
    Csv meta(cfg, "traffic,theta_db,load,xi,analytic_ccdf,empirical_ccdf");
    Csv report(cfg,
               "traffic,theta_db,load,ks_distance,ks_tol,paoi_analytic,paoi_sim,paoi_rel_err,paoi_tol,load_factor,"
               "sim_idle_fraction,pass");
    RunResult res;
    std::ostringstream summary;
    for (double tdb : spec.theta_db) {
        const NetworkParams net = with_theta(cfg.network, tdb);
        for (const auto& lp : loads_for(spec, kind)) {
            TrafficAnalysis a = analyze(net, lp, cfg.analysis);
            require_converged(a.solution);
            ValidatedConfig c = cfg;
            c.network = net;
            c.traffic = lp.traffic;
            const auto runs = run_realizations(c);
            const auto ratios = success_ratios(runs);
            const double ks = kolmogorov_distance(a.solution.fit, ratios);
            for (double xi : xi_grid()) meta.row(tname, tdb, lp.load, xi, meta_ccdf(a.solution.fit, xi), empirical_ccdf(ratios, xi));
            const EmpiricalPaoi e = measure_paoi(runs, 1, 0);
            const double rel = std::isfinite(a.report.overall)
                                   ? std::fabs(e.mean_peak_age - a.report.overall) / a.report.overall
                                   : std::numeric_limits<double>::infinity();
            const bool pass = ks <= tol.ks && rel <= tol.paoi_rel;
            if (!pass) res.tolerance_failure = true;
            report.row(tname, tdb, lp.load, ks, tol.ks, a.report.overall, e.mean_peak_age, rel, tol.paoi_rel,
                       a.solution.theta, e.idle_fraction, pass);
            summary << tname << " theta_db=" << format_number(tdb) << " load=" << format_number(lp.load)
                    << " ks=" << format_number(ks) << " paoi_rel_err=" << format_number(rel)
                    << (pass ? " pass" : " FAIL") << "\n";
        }
    }
    res.files = {meta.file("compare_meta.csv"), report.file("compare_report.csv")};
    res.summary = summary.str();
    return res;
}

RunResult cmd_frontier(const ExperimentSpec& spec, TrafficKind kind) {
    const auto& cfg = spec.cfg;
    std::vector<double> loads;
    for (const auto& lp : loads_for(spec, kind)) loads.push_back(lp.load);
    const ParetoFrontier f = stability_frontier(cfg.network, kind, spec.theta_db, loads, cfg.analysis);
    Csv front(cfg, "class,theta_db,load_star");
    for (size_t n = 0; n < f.load_star.size(); ++n)
        for (size_t k = 0; k < f.theta_db.size(); ++k) front.row(int(n + 1), f.theta_db[k], f.load_star[n][k]);
    Csv grid(cfg, "traffic,theta_db,load,class,stable,converged");
    for (const auto& p : f.grid) grid.row(traffic_name(kind), p.theta_db, p.load, p.class_index, p.stable, !p.failed);
    return {{front.file("frontier.csv"), grid.file("frontier_grid.csv")}, false, ""};
}

void write_outputs(const std::string& dir, const std::vector<OutputFile>& files) {
    std::filesystem::create_directories(dir);
    for (const auto& f : files) {
        const auto path = std::filesystem::path(dir) / f.name;
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + path.string());
        out << f.content;
    }
}

} // namespace aoi
