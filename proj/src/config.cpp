// SPDX-License-Identifier: Apache-2.0

#include "aoi/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

namespace aoi {

namespace {

std::string describe(const std::vector<InvalidParam>& v) {
    std::ostringstream os;
    os << "invalid configuration:";
    for (const auto& p : v) os << " [" << p.name << "=" << p.value << ": " << p.constraint << "]";
    return os.str();
}

std::string trim(std::string s) {
    auto not_space = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
    return s;
}

std::string lower(std::string s) {
    for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

double to_double(const std::string& v, int line, const std::string& key) {
    double out = 0.0;
    const char* b = v.data();
    const char* e = v.data() + v.size();
    if (!v.empty() && *b == '+') ++b;
    auto [p, ec] = std::from_chars(b, e, out);
    if (ec != std::errc() || p != e) throw ParseError(line, key, "expected a number, got '" + v + "'");
    return out;
}

std::int64_t to_int(const std::string& v, int line, const std::string& key) {
    std::int64_t out = 0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size())
        throw ParseError(line, key, "expected an integer, got '" + v + "'");
    return out;
}

std::uint64_t to_uint(const std::string& v, int line, const std::string& key) {
    std::uint64_t out = 0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size())
        throw ParseError(line, key, "expected an unsigned integer, got '" + v + "'");
    return out;
}

std::string fmt17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

} // namespace

ValidationError::ValidationError(std::vector<InvalidParam> v)
    : std::runtime_error(describe(v)), violations_(std::move(v)) {}

ParseError::ParseError(int line, std::string field, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + (field.empty() ? "" : " (" + field + ")") + ": " + what),
      line_(line),
      field_(std::move(field)) {}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

RawConfig parse_config(const std::string& text) {
    RawConfig raw;
    bool saw_traffic = false;
    std::string section;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;

    using Setter = std::function<void(const std::string&, int)>;
    const std::map<std::string, std::map<std::string, Setter>> table = {
        {"network",
         {
             {"bs_intensity", [&](const std::string& v, int l) { raw.bs_intensity = to_double(v, l, "bs_intensity"); }},
             {"pathloss_exponent",
              [&](const std::string& v, int l) { raw.pathloss_exponent = to_double(v, l, "pathloss_exponent"); }},
             {"power_control_epsilon",
              [&](const std::string& v, int l) { raw.power_control_epsilon = to_double(v, l, "power_control_epsilon"); }},
             {"power_control_rho",
              [&](const std::string& v, int l) { raw.power_control_rho = to_double(v, l, "power_control_rho"); }},
             {"rho_dbm", [&](const std::string& v, int l) { raw.rho_dbm = to_double(v, l, "rho_dbm"); }},
             {"sir_threshold", [&](const std::string& v, int l) { raw.sir_threshold = to_double(v, l, "sir_threshold"); }},
             {"theta_db", [&](const std::string& v, int l) { raw.theta_db = to_double(v, l, "theta_db"); }},
         }},
        {"traffic",
         {
             {"type", [&](const std::string& v, int) { raw.traffic_type = lower(v); }},
             {"duty_cycle", [&](const std::string& v, int l) { raw.duty_cycle = to_double(v, l, "duty_cycle"); }},
             {"arrival_prob", [&](const std::string& v, int l) { raw.arrival_prob = to_double(v, l, "arrival_prob"); }},
         }},
        {"analysis",
         {
             {"n_classes",
              [&](const std::string& v, int l) { raw.analysis.n_classes = static_cast<int>(to_int(v, l, "n_classes")); }},
             {"fixed_point_tol",
              [&](const std::string& v, int l) { raw.analysis.fixed_point_tol = to_double(v, l, "fixed_point_tol"); }},
             {"max_iters",
              [&](const std::string& v, int l) { raw.analysis.max_iters = static_cast<int>(to_int(v, l, "max_iters")); }},
             {"quad_rel_tol",
              [&](const std::string& v, int l) { raw.analysis.quad_rel_tol = to_double(v, l, "quad_rel_tol"); }},
             {"wait_pmf_tail_mass",
              [&](const std::string& v, int l) { raw.analysis.wait_pmf_tail_mass = to_double(v, l, "wait_pmf_tail_mass"); }},
         }},
        {"sim",
         {
             {"area_side", [&](const std::string& v, int l) { raw.sim.area_side = to_double(v, l, "area_side"); }},
             {"seed", [&](const std::string& v, int l) { raw.sim.seed = to_uint(v, l, "seed"); }},
             {"n_realizations",
              [&](const std::string& v, int l) { raw.sim.n_realizations = static_cast<int>(to_int(v, l, "n_realizations")); }},
             {"warmup_slots",
              [&](const std::string& v, int l) { raw.sim.warmup_slots = static_cast<int>(to_int(v, l, "warmup_slots")); }},
             {"max_slots",
              [&](const std::string& v, int l) { raw.sim.max_slots = static_cast<int>(to_int(v, l, "max_slots")); }},
             {"slots_after_warmup",
              [&](const std::string& v, int l) {
                  raw.sim.slots_after_warmup = static_cast<int>(to_int(v, l, "slots_after_warmup"));
              }},
             {"warmup_window",
              [&](const std::string& v, int l) { raw.sim.warmup_window = static_cast<int>(to_int(v, l, "warmup_window")); }},
             {"warmup_tol", [&](const std::string& v, int l) { raw.sim.warmup_tol = to_double(v, l, "warmup_tol"); }},
         }},
    };

    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find_first_of("#;");
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ParseError(lineno, "", "unterminated section header");
            section = lower(trim(line.substr(1, line.size() - 2)));
            if (!table.count(section)) throw ParseError(lineno, section, "unknown section");
            if (section == "traffic") saw_traffic = true;
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError(lineno, "", "expected key = value");
        std::string key = lower(trim(line.substr(0, eq)));
        std::string val = trim(line.substr(eq + 1));
        if (section.empty()) throw ParseError(lineno, key, "key outside of any section");
        const auto& keys = table.at(section);
        auto it = keys.find(key);
        if (it == keys.end()) throw ParseError(lineno, key, "unknown key in [" + section + "]");
        if (val.empty()) throw ParseError(lineno, key, "empty value");
        it->second(val, lineno);
    }

    if (!saw_traffic || raw.traffic_type.empty()) throw ParseError(lineno, "traffic", "missing [traffic] block with a type");
    if (raw.traffic_type != "tt" && raw.traffic_type != "et")
        throw ParseError(lineno, "type", "traffic type must be 'tt' or 'et'");
    if (raw.traffic_type == "tt" && !raw.duty_cycle) throw ParseError(lineno, "duty_cycle", "TT traffic needs duty_cycle");
    if (raw.traffic_type == "et" && !raw.arrival_prob) throw ParseError(lineno, "arrival_prob", "ET traffic needs arrival_prob");
    return raw;
}

RawConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ParseError(0, "", "cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str());
}

ValidatedConfig validate(const RawConfig& raw) {
    std::vector<InvalidParam> bad;
    ValidatedConfig cfg;

    auto& n = cfg.network;
    n.bs_intensity = raw.bs_intensity;
    n.pathloss_exponent = raw.pathloss_exponent;
    n.power_control_epsilon = raw.power_control_epsilon;
    n.power_control_rho = raw.power_control_rho ? *raw.power_control_rho : dbm_to_watts(raw.rho_dbm.value_or(-90.0));
    n.sir_threshold = raw.sir_threshold ? *raw.sir_threshold : db_to_linear(raw.theta_db.value_or(0.0));

    if (raw.power_control_rho && raw.rho_dbm) bad.push_back({"rho_dbm", *raw.rho_dbm, "give either rho_dbm or power_control_rho"});
    if (raw.sir_threshold && raw.theta_db) bad.push_back({"theta_db", *raw.theta_db, "give either theta_db or sir_threshold"});

    if (!(n.bs_intensity > 0.0)) bad.push_back({"bs_intensity", n.bs_intensity, "> 0"});
    if (!(n.pathloss_exponent > 2.0)) bad.push_back({"pathloss_exponent", n.pathloss_exponent, "> 2"});
    if (!(n.power_control_epsilon >= 0.0 && n.power_control_epsilon <= 1.0))
        bad.push_back({"power_control_epsilon", n.power_control_epsilon, "in [0, 1]"});
    if (!(n.power_control_rho > 0.0) || !std::isfinite(n.power_control_rho))
        bad.push_back({"power_control_rho", n.power_control_rho, "> 0 and finite"});
    if (!(n.sir_threshold > 0.0) || !std::isfinite(n.sir_threshold))
        bad.push_back({"sir_threshold", n.sir_threshold, "> 0 and finite"});

    if (raw.traffic_type == "tt") {
        double t = raw.duty_cycle.value_or(0.0);
        if (!(t >= 2.0) || t != std::floor(t) || t > 1e6)
            bad.push_back({"duty_cycle", t, "integer >= 2"});
        else
            cfg.traffic = TtTraffic{static_cast<int>(t)};
    } else if (raw.traffic_type == "et") {
        double a = raw.arrival_prob.value_or(0.0);
        if (!(a > 0.0 && a <= 1.0))
            bad.push_back({"arrival_prob", a, "in (0, 1]"});
        else
            cfg.traffic = EtTraffic{a};
    } else {
        bad.push_back({"type", 0.0, "traffic type must be tt or et"});
    }

    const auto& a = raw.analysis;
    if (a.n_classes < 1) bad.push_back({"n_classes", double(a.n_classes), ">= 1"});
    if (!(a.fixed_point_tol > 0.0)) bad.push_back({"fixed_point_tol", a.fixed_point_tol, "> 0"});
    if (a.max_iters < 1) bad.push_back({"max_iters", double(a.max_iters), ">= 1"});
    if (!(a.quad_rel_tol > 0.0)) bad.push_back({"quad_rel_tol", a.quad_rel_tol, "> 0"});
    if (!(a.wait_pmf_tail_mass > 0.0 && a.wait_pmf_tail_mass < 1.0))
        bad.push_back({"wait_pmf_tail_mass", a.wait_pmf_tail_mass, "in (0, 1)"});
    cfg.analysis = a;

    const auto& s = raw.sim;
    if (!(s.area_side > 0.0)) bad.push_back({"area_side", s.area_side, "> 0"});
    if (s.n_realizations < 0) bad.push_back({"n_realizations", double(s.n_realizations), ">= 0"});
    if (s.warmup_slots < 0) bad.push_back({"warmup_slots", double(s.warmup_slots), ">= 0"});
    if (s.max_slots < s.warmup_slots) bad.push_back({"max_slots", double(s.max_slots), ">= warmup_slots"});
    if (s.slots_after_warmup < 1) bad.push_back({"slots_after_warmup", double(s.slots_after_warmup), ">= 1"});
    if (s.warmup_window < 1) bad.push_back({"warmup_window", double(s.warmup_window), ">= 1"});
    if (!(s.warmup_tol > 0.0)) bad.push_back({"warmup_tol", s.warmup_tol, "> 0"});
    cfg.sim = s;

    if (!bad.empty()) throw ValidationError(std::move(bad));

    double expected_bs = n.bs_intensity * s.area_side * s.area_side;
    if (expected_bs < 10.0)
        cfg.warnings.push_back("expected BS count " + fmt17(expected_bs) + " is below 10; simulation statistics will be poor");
    return cfg;
}

std::string serialize(const ValidatedConfig& cfg) {
    std::ostringstream os;
    const auto& n = cfg.network;
    os << "[network]\n"
       << "bs_intensity = " << fmt17(n.bs_intensity) << "\n"
       << "pathloss_exponent = " << fmt17(n.pathloss_exponent) << "\n"
       << "power_control_epsilon = " << fmt17(n.power_control_epsilon) << "\n"
       << "power_control_rho = " << fmt17(n.power_control_rho) << "\n"
       << "sir_threshold = " << fmt17(n.sir_threshold) << "\n\n";
    os << "[traffic]\n";
    if (const auto* tt = std::get_if<TtTraffic>(&cfg.traffic))
        os << "type = tt\nduty_cycle = " << tt->duty_cycle << "\n\n";
    else
        os << "type = et\narrival_prob = " << fmt17(std::get<EtTraffic>(cfg.traffic).arrival_prob) << "\n\n";
    const auto& a = cfg.analysis;
    os << "[analysis]\n"
       << "n_classes = " << a.n_classes << "\n"
       << "fixed_point_tol = " << fmt17(a.fixed_point_tol) << "\n"
       << "max_iters = " << a.max_iters << "\n"
       << "quad_rel_tol = " << fmt17(a.quad_rel_tol) << "\n"
       << "wait_pmf_tail_mass = " << fmt17(a.wait_pmf_tail_mass) << "\n\n";
    const auto& s = cfg.sim;
    os << "[sim]\n"
       << "area_side = " << fmt17(s.area_side) << "\n"
       << "seed = " << s.seed << "\n"
       << "n_realizations = " << s.n_realizations << "\n"
       << "warmup_slots = " << s.warmup_slots << "\n"
       << "max_slots = " << s.max_slots << "\n"
       << "slots_after_warmup = " << s.slots_after_warmup << "\n"
       << "warmup_window = " << s.warmup_window << "\n"
       << "warmup_tol = " << fmt17(s.warmup_tol) << "\n";
    return os.str();
}

} // namespace aoi
