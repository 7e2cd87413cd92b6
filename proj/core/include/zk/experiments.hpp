#pragma once

#include <string>
#include <vector>

#include "zk/functionals.hpp"
#include "zk/grid.hpp"
#include "zk/integrator.hpp"

namespace zk {

struct DecayFit {
    std::string functional_name;
    double t_start = 0.0;
    double t_end = 0.0;
    double fitted_rate = 0.0;
    double r_squared = 0.0;
    double predicted_rate = 0.0;
    double margin = 0.0;
    int samples = 0;

    bool operator==(const DecayFit&) const = default;
};

// Values at or below this are treated as decayed to numerical zero.
inline constexpr double kFitFloor = 1e-290;

// Log-linear least squares on samples with t in [t_start, t_end]. The window is
// cut at the first sample that is not strictly above kFitFloor.
DecayFit fit_decay(const std::vector<double>& t, const std::vector<double>& values,
                   double t_start, double t_end, const std::string& name = "");
DecayFit fit_decay(const FunctionalSeries& s, const std::string& name, double t_start,
                   double t_end);

// One simulation setup.
struct Scenario {
    Grid grid;
    ProfileSpec profile;
    IntegratorConfig integrator;
    bool dealias = false;
    ConstantSet constants = ConstantSet::theorem;
};

struct DecayOptions {
    double window_start = 0.2;  // fractions of T
    double window_end = 0.9;
    bool allow_outside_theorem = false;
};

struct DecayReport {
    SmallnessReport smallness;
    std::string label;  // certified, outside-theorem, refused
    bool degenerate = false;
    RunStatus status = RunStatus::completed;
    long step_count = 0;
    double dt = 0.0;
    double max_energy_residual = 0.0;
    double energy_tol = 0.0;
    bool weighted_monotone = false;
    std::vector<DecayFit> fits;
    RunResult run;  // not serialized
};

DecayReport decay_experiment(const Scenario& sc, const DecayOptions& opt = {});

struct ConvergenceReport {
    std::string parameter = "epsilon";
    double reference = 0.0;
    std::vector<double> values;
    std::vector<double> errors;
    double fitted_order = 0.0;  // NaN when degenerate
    bool degenerate = false;
    std::vector<RunStatus> statuses;

    bool operator==(const ConvergenceReport&) const;
};

// Reference run uses `reference_eps`; all runs share the scenario otherwise.
ConvergenceReport epsilon_convergence(const Scenario& sc, const std::vector<double>& eps,
                                      double reference_eps = 0.0);

struct PerturbationOptions {
    double delta = 1e-3;
    ProfileSpec secondary;  // perturbation profile p
    double tol = 0.1;
    bool swap = false;      // run u2 as the first member
};

struct PerturbationReport {
    double delta = 0.0;
    double gap0 = 0.0;
    std::vector<double> times;
    std::vector<double> gap;
    std::vector<double> integral;  // int_0^t (||u2_x||^4 + ||u1||^4 + ||u2||^4)
    std::vector<double> envelope;
    double calibrated_C = 0.0;
    double gronwall_constant = 0.0;  // exp(C * integral(T))
    double tol = 0.0;
    bool bound_satisfied = false;
    bool within_constant = false;    // gap <= gronwall_constant * gap0 throughout
    double norm_u0_sq = 0.0;
    RunStatus status = RunStatus::completed;

    bool operator==(const PerturbationReport&) const = default;
};

PerturbationReport perturbation_experiment(const Scenario& sc, const PerturbationOptions& opt);

struct LemmaEntry {
    std::string lemma;  // steklov, interpolation, ode
    std::string name;
    double value = 0.0;
    double bound = 0.0;
    bool pass = false;

    bool operator==(const LemmaEntry&) const = default;
};

struct LemmaReport {
    std::vector<LemmaEntry> entries;
    int passed = 0;
    int total = 0;
    bool all_pass() const { return passed == total; }

    bool operator==(const LemmaReport&) const = default;
};

struct LemmaOptions {
    int random_profiles = 100;
    unsigned seed = 20240611;
    int interpolation_n = 32;
    double tol = 1e-2;
};

LemmaReport lemma_suite(const LemmaOptions& opt = {});

}  // namespace zk
