#include "zkio/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "zk/error.hpp"

namespace zkio {

namespace pt = boost::property_tree;

std::string to_string(Kind k) {
    switch (k) {
        case Kind::decay: return "decay";
        case Kind::epsilon_convergence: return "epsilon-convergence";
        case Kind::perturbation: return "perturbation";
        case Kind::lemmas: return "lemmas";
        case Kind::single_run: return "single-run";
    }
    return "decay";
}

namespace {

std::string join(const std::vector<std::string>& v) {
    std::string s;
    for (const auto& x : v) s += "\n  " + x;
    return s;
}

const std::map<std::string, std::vector<std::string>>& schema() {
    static const std::map<std::string, std::vector<std::string>> s{
        {"grid", {"L", "dim", "Nx", "Ny", "Nz", "half_width"}},
        {"profile", {"family", "amplitude", "transverse_scale", "power", "center_y", "center_z", "table"}},
        {"integrator",
         {"dt", "T", "scheme", "epsilon", "diagnostic_stride", "energy_tol", "nonlinear", "dealias",
          "startup_substeps", "startup_time"}},
        {"experiment",
         {"kind", "constants", "window_start", "window_end", "allow_outside_theorem", "epsilons",
          "reference_epsilon", "delta", "tol", "perturbation_family", "perturbation_amplitude",
          "perturbation_scale", "perturbation_power", "random_profiles", "seed", "interpolation_n"}},
        {"output", {"directory", "formats"}},
    };
    return s;
}

template <class Range>
std::string nearest(const std::string& word, const Range& candidates) {
    std::string best;
    std::size_t best_d = std::string::npos;
    for (const std::string& c : candidates) {
        const std::size_t d = edit_distance(word, c);
        if (d < best_d) {
            best_d = d;
            best = c;
        }
    }
    return best;
}

class Reader {
public:
    Reader(const pt::ptree& tree, std::vector<std::string>& errors) : tree_(tree), errors_(errors) {}

    std::optional<std::string> raw(const std::string& section, const std::string& key) const {
        const auto sec = tree_.get_child_optional(section);
        if (!sec) return std::nullopt;
        const auto v = sec->get_optional<std::string>(key);
        if (!v) return std::nullopt;
        return trim(*v);
    }

    double number(const std::string& section, const std::string& key, double def) {
        const auto v = raw(section, key);
        if (!v) return def;
        try {
            std::size_t used = 0;
            const double x = std::stod(*v, &used);
            if (used != v->size()) throw std::invalid_argument("trailing");
            return x;
        } catch (const std::exception&) {
            errors_.push_back(section + "." + key + " must be a number, got '" + *v + "'");
            return def;
        }
    }

    long integer(const std::string& section, const std::string& key, long def) {
        const auto v = raw(section, key);
        if (!v) return def;
        try {
            std::size_t used = 0;
            const long x = std::stol(*v, &used);
            if (used != v->size()) throw std::invalid_argument("trailing");
            return x;
        } catch (const std::exception&) {
            errors_.push_back(section + "." + key + " must be an integer, got '" + *v + "'");
            return def;
        }
    }

    bool boolean(const std::string& section, const std::string& key, bool def) {
        const auto v = raw(section, key);
        if (!v) return def;
        std::string s = *v;
        std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
        if (s == "true" || s == "yes" || s == "1" || s == "on") return true;
        if (s == "false" || s == "no" || s == "0" || s == "off") return false;
        errors_.push_back(section + "." + key + " must be true or false, got '" + *v + "'");
        return def;
    }

    std::string text(const std::string& section, const std::string& key, const std::string& def) {
        return raw(section, key).value_or(def);
    }

    std::vector<double> numbers(const std::string& section, const std::string& key,
                                const std::vector<double>& def) {
        const auto v = raw(section, key);
        if (!v) return def;
        std::vector<double> out;
        std::stringstream ss(*v);
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = trim(item);
            try {
                std::size_t used = 0;
                out.push_back(std::stod(item, &used));
                if (used != item.size()) throw std::invalid_argument("trailing");
            } catch (const std::exception&) {
                errors_.push_back(section + "." + key + " must be a comma-separated list of numbers");
                return def;
            }
        }
        return out;
    }

    static std::string trim(const std::string& s) {
        const auto b = s.find_first_not_of(" \t\r\"");
        if (b == std::string::npos) return "";
        const auto e = s.find_last_not_of(" \t\r\"");
        return s.substr(b, e - b + 1);
    }

private:
    const pt::ptree& tree_;
    std::vector<std::string>& errors_;
};

// Section headers are read from the raw text: property_tree drops empty sections.
void check_sections(const std::string& text, std::vector<std::string>& errors) {
    std::vector<std::string> sections;
    for (const auto& [name, keys] : schema()) sections.push_back(name);
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        const auto a = line.find_first_not_of(" \t\r");
        const auto b = line.find_last_not_of(" \t\r");
        if (a == std::string::npos || line[a] != '[' || line[b] != ']') continue;
        const std::string name = line.substr(a + 1, b - a - 1);
        if (!schema().count(name))
            errors.push_back("unknown section '[" + name + "]'; did you mean '[" + nearest(name, sections) +
                             "]'?");
    }
}

void check_unknown(const pt::ptree& tree, std::vector<std::string>& errors) {
    std::vector<std::string> qualified;
    for (const auto& [name, keys] : schema())
        for (const auto& k : keys) qualified.push_back(name + "." + k);
    for (const auto& [name, child] : tree) {
        const auto it = schema().find(name);
        if (child.empty() && !child.data().empty()) {
            errors.push_back("unknown key '" + name + "' outside any section; did you mean '" +
                             nearest(name, qualified) + "'?");
            continue;
        }
        if (it == schema().end()) continue;
        for (const auto& [key, value] : child) {
            (void)value;
            if (std::find(it->second.begin(), it->second.end(), key) == it->second.end())
                errors.push_back("unknown key '" + name + "." + key + "'; did you mean '" + name + "." +
                                 nearest(key, it->second) + "'?");
        }
    }
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> problems)
    : std::runtime_error("invalid configuration:" + join(problems)), problems_(std::move(problems)) {}

std::size_t edit_distance(const std::string& a, const std::string& b) {
    std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

RunConfig parse_config_text(const std::string& text) {
    pt::ptree tree;
    try {
        std::istringstream in(text);
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError({std::string("malformed config: ") + e.message() + " (line " +
                           std::to_string(e.line()) + ")"});
    }
    std::vector<std::string> errors;
    check_sections(text, errors);
    check_unknown(tree, errors);
    Reader r(tree, errors);
    RunConfig c;
    c.source_text = text;

    const std::string kind = r.text("experiment", "kind", "decay");
    if (kind == "decay") c.kind = Kind::decay;
    else if (kind == "epsilon-convergence") c.kind = Kind::epsilon_convergence;
    else if (kind == "perturbation") c.kind = Kind::perturbation;
    else if (kind == "lemmas") c.kind = Kind::lemmas;
    else if (kind == "single-run") c.kind = Kind::single_run;
    else
        errors.push_back("experiment.kind must be one of decay, epsilon-convergence, perturbation, "
                         "lemmas, single-run; got '" + kind + "'");

    // Profile first: its transverse scale sets the default box half-width.
    zk::ProfileSpec& p = c.scenario.profile;
    const std::string family = r.text("profile", "family", "bump");
    try {
        p.family = zk::profile_family_from_string(family);
    } catch (const zk::Error& e) {
        errors.push_back(std::string("profile.family: ") + e.what());
    }
    p.amplitude = r.number("profile", "amplitude", 1e-5);
    p.transverse_scale = r.number("profile", "transverse_scale", 1.0);
    p.power = static_cast<int>(r.integer("profile", "power", 2));
    p.center_y = r.number("profile", "center_y", 0.0);
    p.center_z = r.number("profile", "center_z", 0.0);
    p.table_path = r.text("profile", "table", "");
    if (!std::isfinite(p.amplitude)) errors.push_back("profile.amplitude must be finite");
    if (!(p.transverse_scale > 0.0)) errors.push_back("profile.transverse_scale must be positive");
    if (p.family == zk::ProfileFamily::bump && p.power < 2) errors.push_back("profile.power must be at least 2");
    if (p.family == zk::ProfileFamily::custom_table && p.table_path.empty())
        errors.push_back("profile.table is required for family custom-table");

    const double L = r.number("grid", "L", std::numbers::pi / 2.0);
    const long dim = r.integer("grid", "dim", 2);
    const long nx = r.integer("grid", "Nx", dim == 3 ? 64 : 128);
    const long ny = r.integer("grid", "Ny", dim == 3 ? 64 : 128);
    const long nz = r.integer("grid", "Nz", 64);
    const double hw = r.number("grid", "half_width", 6.0 * (p.transverse_scale > 0 ? p.transverse_scale : 1.0));
    if (!(L > 0.0)) errors.push_back("grid.L must be positive");
    if (dim != 2 && dim != 3) errors.push_back("grid.dim must be 2 or 3");
    if (nx < 8) errors.push_back("grid.Nx must be at least 8");
    auto pow2 = [](long n) { return n >= 8 && (n & (n - 1)) == 0; };
    if (!pow2(ny)) errors.push_back("grid.Ny must be a power of two >= 8");
    if (dim == 3 && !pow2(nz)) errors.push_back("grid.Nz must be a power of two >= 8");
    if (dim == 2 && r.raw("grid", "Nz")) errors.push_back("grid.Nz is only valid when grid.dim = 3");
    if (!(hw > 0.0)) errors.push_back("grid.half_width must be positive");

    zk::IntegratorConfig& ic = c.scenario.integrator;
    ic.dt = r.number("integrator", "dt", 0.0);
    ic.T = r.number("integrator", "T", 20.0);
    try {
        ic.scheme = zk::scheme_from_string(r.text("integrator", "scheme", "imex-bdf2"));
    } catch (const zk::Error& e) {
        errors.push_back(std::string("integrator.scheme: ") + e.what() +
                         " (expected imex-bdf2, imex-cn-ab2 or imex-euler)");
    }
    ic.epsilon = r.number("integrator", "epsilon", 0.0);
    const long stride = r.integer("integrator", "diagnostic_stride", 0);
    ic.energy_tol = r.number("integrator", "energy_tol", 1e-4);
    ic.nonlinear = r.boolean("integrator", "nonlinear", true);
    c.scenario.dealias = r.boolean("integrator", "dealias", false);
    ic.startup_substeps = static_cast<int>(r.integer("integrator", "startup_substeps", 16));
    ic.startup_time = r.number("integrator", "startup_time", 0.2);
    if (r.raw("integrator", "dt") && !(ic.dt > 0.0)) errors.push_back("integrator.dt must be positive");
    if (!(ic.T > 0.0)) errors.push_back("integrator.T must be positive");
    if (ic.dt > 0.0 && ic.T < ic.dt) errors.push_back("integrator.T must be at least integrator.dt");
    if (!(ic.epsilon >= 0.0)) errors.push_back("integrator.epsilon must be nonnegative");
    if (stride < 0) errors.push_back("integrator.diagnostic_stride must be positive");
    if (!(ic.energy_tol > 0.0)) errors.push_back("integrator.energy_tol must be positive");
    if (ic.startup_substeps < 1) errors.push_back("integrator.startup_substeps must be at least 1");
    if (!(ic.startup_time >= 0.0)) errors.push_back("integrator.startup_time must be nonnegative");

    try {
        c.scenario.constants = zk::constant_set_from_string(r.text("experiment", "constants", "theorem"));
    } catch (const zk::Error& e) {
        errors.push_back(std::string("experiment.constants: ") + e.what());
    }
    c.decay.window_start = r.number("experiment", "window_start", 0.2);
    c.decay.window_end = r.number("experiment", "window_end", 0.9);
    c.decay.allow_outside_theorem = r.boolean("experiment", "allow_outside_theorem", false);
    if (!(0.0 <= c.decay.window_start && c.decay.window_start < c.decay.window_end && c.decay.window_end <= 1.0))
        errors.push_back("experiment.window_start and window_end must satisfy 0 <= start < end <= 1");
    c.epsilons = r.numbers("experiment", "epsilons", c.epsilons);
    c.reference_epsilon = r.number("experiment", "reference_epsilon", 0.0);
    if (c.kind == Kind::epsilon_convergence) {
        if (c.epsilons.size() < 3) errors.push_back("experiment.epsilons needs at least 3 values");
        if (!(c.reference_epsilon >= 0.0)) errors.push_back("experiment.reference_epsilon must be nonnegative");
        for (double e : c.epsilons)
            if (!(e > c.reference_epsilon)) {
                errors.push_back("experiment.epsilons must all exceed experiment.reference_epsilon");
                break;
            }
    }
    c.perturbation.delta = r.number("experiment", "delta", 1e-3);
    c.perturbation.tol = r.number("experiment", "tol", c.kind == Kind::lemmas ? 1e-2 : 0.1);
    c.lemmas.tol = c.perturbation.tol;
    zk::ProfileSpec& q = c.perturbation.secondary;
    try {
        q.family = zk::profile_family_from_string(r.text("experiment", "perturbation_family", "separable-sine-gauss"));
    } catch (const zk::Error& e) {
        errors.push_back(std::string("experiment.perturbation_family: ") + e.what());
    }
    q.amplitude = r.number("experiment", "perturbation_amplitude", p.amplitude);
    q.transverse_scale = r.number("experiment", "perturbation_scale", p.transverse_scale);
    q.power = static_cast<int>(r.integer("experiment", "perturbation_power", 2));
    if (!(c.perturbation.delta >= 0.0)) errors.push_back("experiment.delta must be nonnegative");
    if (!(c.perturbation.tol >= 0.0)) errors.push_back("experiment.tol must be nonnegative");
    if (q.family == zk::ProfileFamily::custom_table)
        errors.push_back("experiment.perturbation_family cannot be custom-table");
    c.lemmas.random_profiles = static_cast<int>(r.integer("experiment", "random_profiles", 100));
    c.lemmas.seed = static_cast<unsigned>(r.integer("experiment", "seed", 20240611));
    c.lemmas.interpolation_n = static_cast<int>(r.integer("experiment", "interpolation_n", 32));
    if (c.lemmas.random_profiles < 0) errors.push_back("experiment.random_profiles must be nonnegative");
    if (c.lemmas.interpolation_n < 8 || (c.lemmas.interpolation_n & (c.lemmas.interpolation_n - 1)))
        errors.push_back("experiment.interpolation_n must be a power of two >= 8");

    c.output_directory = r.text("output", "directory", "out");
    const std::string formats = r.text("output", "formats", "csv,json");
    c.write_csv = c.write_json = false;
    {
        std::stringstream ss(formats);
        std::string f;
        while (std::getline(ss, f, ',')) {
            f = Reader::trim(f);
            if (f == "csv") c.write_csv = true;
            else if (f == "json") c.write_json = true;
            else errors.push_back("output.formats entries must be csv or json, got '" + f + "'");
        }
    }

    if (errors.empty()) {
        try {
            c.scenario.grid = zk::build_grid(L, static_cast<int>(dim), static_cast<int>(nx),
                                             static_cast<int>(ny), static_cast<int>(nz), hw);
        } catch (const zk::Error& e) {
            errors.push_back(e.what());
        }
    }
    if (errors.empty()) {
        const double dt = zk::effective_dt(ic, c.scenario.grid);
        ic.diagnostic_stride = stride > 0 ? static_cast<int>(stride)
                                          : std::max(1, static_cast<int>(std::lround(0.1 / dt)));
    }
    if (!errors.empty()) throw ConfigError(std::move(errors));
    return c;
}

RunConfig parse_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError({"cannot read config file '" + path + "'"});
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

}  // namespace zkio
