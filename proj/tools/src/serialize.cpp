#include "zkio/serialize.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <limits>
#include <sstream>

#include "zk/error.hpp"

namespace zkio {

namespace {

// NaN and infinities are not JSON; they are written as null.
json num(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

double get_num(const json& j, const char* key) {
    const json& v = j.at(key);
    if (v.is_null()) return std::numeric_limits<double>::quiet_NaN();
    return v.get<double>();
}

json nums(const std::vector<double>& v) {
    json a = json::array();
    for (double x : v) a.push_back(num(x));
    return a;
}

std::vector<double> get_nums(const json& j, const char* key) {
    std::vector<double> out;
    for (const json& v : j.at(key))
        out.push_back(v.is_null() ? std::numeric_limits<double>::quiet_NaN() : v.get<double>());
    return out;
}

zk::RunStatus status_from_string(const std::string& s) {
    if (s == "completed") return zk::RunStatus::completed;
    if (s == "blowup") return zk::RunStatus::blowup;
    if (s == "nan") return zk::RunStatus::nan;
    throw zk::InvalidArgument("unknown run status '" + s + "'");
}

}  // namespace

const char* const kSeriesHeader = "t,l2,weighted,h1,h2_partial,bracket2,trace0,ut_l2,ut_weighted,boundary_leak";

json to_json(const zk::SmallnessReport& r) {
    return {{"constants", zk::to_string(r.constants)},
            {"L", num(r.L)},
            {"norm_u0", num(r.norm_u0)},
            {"J0", num(r.J0)},
            {"C1", num(r.C1)},
            {"K1", num(r.K1)},
            {"K2", num(r.K2)},
            {"chi", num(r.chi)},
            {"threshold_u0", num(r.threshold_u0)},
            {"threshold_J0", num(r.threshold_J0)},
            {"margins", {{"u0", num(r.margin_u0)}, {"J0", num(r.margin_J0)}}},
            {"geometric_ok", r.geometric_ok},
            {"u0_ok", r.u0_ok},
            {"J0_ok", r.J0_ok},
            {"pass", r.pass}};
}

zk::SmallnessReport smallness_from_json(const json& j) {
    zk::SmallnessReport r;
    r.constants = zk::constant_set_from_string(j.at("constants").get<std::string>());
    r.L = get_num(j, "L");
    r.norm_u0 = get_num(j, "norm_u0");
    r.J0 = get_num(j, "J0");
    r.C1 = get_num(j, "C1");
    r.K1 = get_num(j, "K1");
    r.K2 = get_num(j, "K2");
    r.chi = get_num(j, "chi");
    r.threshold_u0 = get_num(j, "threshold_u0");
    r.threshold_J0 = get_num(j, "threshold_J0");
    r.margin_u0 = get_num(j.at("margins"), "u0");
    r.margin_J0 = get_num(j.at("margins"), "J0");
    r.geometric_ok = j.at("geometric_ok").get<bool>();
    r.u0_ok = j.at("u0_ok").get<bool>();
    r.J0_ok = j.at("J0_ok").get<bool>();
    r.pass = j.at("pass").get<bool>();
    return r;
}

json to_json(const zk::DecayFit& f) {
    return {{"functional_name", f.functional_name},
            {"t_start", num(f.t_start)},
            {"t_end", num(f.t_end)},
            {"fitted_rate", num(f.fitted_rate)},
            {"r_squared", num(f.r_squared)},
            {"predicted_rate", num(f.predicted_rate)},
            {"margin", num(f.margin)},
            {"samples", f.samples}};
}

zk::DecayFit decay_fit_from_json(const json& j) {
    zk::DecayFit f;
    f.functional_name = j.at("functional_name").get<std::string>();
    f.t_start = get_num(j, "t_start");
    f.t_end = get_num(j, "t_end");
    f.fitted_rate = get_num(j, "fitted_rate");
    f.r_squared = get_num(j, "r_squared");
    f.predicted_rate = get_num(j, "predicted_rate");
    f.margin = get_num(j, "margin");
    f.samples = j.at("samples").get<int>();
    return f;
}

json to_json(const zk::ConvergenceReport& r) {
    json st = json::array();
    for (auto s : r.statuses) st.push_back(zk::to_string(s));
    return {{"parameter", r.parameter}, {"reference", num(r.reference)},
            {"values", nums(r.values)},  {"errors", nums(r.errors)},
            {"fitted_order", num(r.fitted_order)}, {"degenerate", r.degenerate},
            {"statuses", st}};
}

zk::ConvergenceReport convergence_from_json(const json& j) {
    zk::ConvergenceReport r;
    r.parameter = j.at("parameter").get<std::string>();
    r.reference = get_num(j, "reference");
    r.values = get_nums(j, "values");
    r.errors = get_nums(j, "errors");
    r.fitted_order = get_num(j, "fitted_order");
    r.degenerate = j.at("degenerate").get<bool>();
    for (const json& s : j.at("statuses")) r.statuses.push_back(status_from_string(s.get<std::string>()));
    return r;
}

json to_json(const zk::PerturbationReport& r) {
    return {{"delta", num(r.delta)},
            {"gap0", num(r.gap0)},
            {"times", nums(r.times)},
            {"gap", nums(r.gap)},
            {"integral", nums(r.integral)},
            {"envelope", nums(r.envelope)},
            {"calibrated_C", num(r.calibrated_C)},
            {"gronwall_constant", num(r.gronwall_constant)},
            {"tol", num(r.tol)},
            {"bound_satisfied", r.bound_satisfied},
            {"within_constant", r.within_constant},
            {"norm_u0_sq", num(r.norm_u0_sq)},
            {"status", zk::to_string(r.status)}};
}

zk::PerturbationReport perturbation_from_json(const json& j) {
    zk::PerturbationReport r;
    r.delta = get_num(j, "delta");
    r.gap0 = get_num(j, "gap0");
    r.times = get_nums(j, "times");
    r.gap = get_nums(j, "gap");
    r.integral = get_nums(j, "integral");
    r.envelope = get_nums(j, "envelope");
    r.calibrated_C = get_num(j, "calibrated_C");
    r.gronwall_constant = get_num(j, "gronwall_constant");
    r.tol = get_num(j, "tol");
    r.bound_satisfied = j.at("bound_satisfied").get<bool>();
    r.within_constant = j.at("within_constant").get<bool>();
    r.norm_u0_sq = get_num(j, "norm_u0_sq");
    r.status = status_from_string(j.at("status").get<std::string>());
    return r;
}

json to_json(const zk::LemmaReport& r) {
    json entries = json::array();
    for (const auto& e : r.entries)
        entries.push_back({{"lemma", e.lemma}, {"name", e.name}, {"value", num(e.value)},
                           {"bound", num(e.bound)}, {"pass", e.pass}});
    return {{"entries", entries}, {"passed", r.passed}, {"total", r.total}, {"all_pass", r.all_pass()}};
}

zk::LemmaReport lemmas_from_json(const json& j) {
    zk::LemmaReport r;
    for (const json& e : j.at("entries"))
        r.entries.push_back({e.at("lemma").get<std::string>(), e.at("name").get<std::string>(),
                             get_num(e, "value"), get_num(e, "bound"), e.at("pass").get<bool>()});
    r.passed = j.at("passed").get<int>();
    r.total = j.at("total").get<int>();
    return r;
}

json to_json(const zk::DecayReport& r) {
    json fits = json::array();
    for (const auto& f : r.fits) fits.push_back(to_json(f));
    return {{"label", r.label},
            {"degenerate", r.degenerate},
            {"status", zk::to_string(r.status)},
            {"step_count", r.step_count},
            {"dt", num(r.dt)},
            {"max_energy_residual", num(r.max_energy_residual)},
            {"energy_tol", num(r.energy_tol)},
            {"weighted_monotone", r.weighted_monotone},
            {"smallness", to_json(r.smallness)},
            {"fits", fits}};
}

std::string series_to_csv(const zk::FunctionalSeries& s) {
    std::string out = kSeriesHeader;
    out += '\n';
    char buf[32];
    for (const auto& r : s) {
        const double row[] = {r.t,        r.l2,     r.weighted, r.h1,          r.h2_partial,
                              r.bracket2, r.trace0, r.ut_l2,    r.ut_weighted, r.boundary_leak};
        for (std::size_t c = 0; c < std::size(row); ++c) {
            std::snprintf(buf, sizeof buf, "%.17g", row[c]);
            if (c) out += ',';
            out += buf;
        }
        out += '\n';
    }
    return out;
}

zk::FunctionalSeries series_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != kSeriesHeader)
        throw zk::InvalidArgument("series CSV header mismatch");
    zk::FunctionalSeries s;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> v;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) v.push_back(std::strtod(cell.c_str(), nullptr));
        if (v.size() != 10) throw zk::InvalidArgument("series CSV row has " + std::to_string(v.size()) + " columns");
        zk::FunctionalSnapshot r;
        r.t = v[0];
        r.l2 = v[1];
        r.weighted = v[2];
        r.h1 = v[3];
        r.h2_partial = v[4];
        r.bracket2 = v[5];
        r.trace0 = v[6];
        r.ut_l2 = v[7];
        r.ut_weighted = v[8];
        r.boundary_leak = v[9];
        s.push_back(r);
    }
    return s;
}

json envelope(const std::string& kind, json payload, const std::string& config_text) {
    json j = {{"schema_version", kSchemaVersion},
              {"kind", kind},
              {"generated_at", utc_timestamp()},
              {"config", config_text}};
    for (auto it = payload.begin(); it != payload.end(); ++it) j[it.key()] = it.value();
    return j;
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace zkio
