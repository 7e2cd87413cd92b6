#include "zkio/dispatch.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <ostream>

#include "zk/error.hpp"
#include "zkio/output.hpp"
#include "zkio/serialize.hpp"

namespace zkio {

namespace fs = std::filesystem;

namespace {

std::string fmt(double x, const char* spec = "%.6g") {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, x);
    return buf;
}

zk::SmallnessReport smallness_of(const zk::Scenario& sc) {
    const zk::OperatorSet ops(sc.grid, sc.dealias);
    const zk::Field u0 = zk::make_profile(sc.grid, sc.profile);
    return zk::smallness_check(sc.grid.L, std::sqrt(zk::l2_norm2(sc.grid, u0.values())),
                               zk::j0_functional(ops, u0), sc.constants);
}

void print_smallness(std::ostream& out, const zk::SmallnessReport& s) {
    out << "smallness (" << zk::to_string(s.constants) << "): " << (s.pass ? "PASS" : "FAIL")
        << "  ||u0|| = " << fmt(s.norm_u0) << "  J0 = " << fmt(s.J0)
        << "  margin_u0 = " << fmt(s.margin_u0) << "  margin_J0 = " << fmt(s.margin_J0) << "\n";
}

class Writer {
public:
    Writer(const RunConfig& cfg, fs::path dir) : cfg_(cfg), dir_(std::move(dir)) {}

    void json_file(const std::string& name, const std::string& kind, const json& payload) {
        if (cfg_.write_json) write_atomic(dir_ / name, envelope(kind, payload, cfg_.source_text).dump(2) + "\n");
    }
    void csv_file(const std::string& name, const zk::FunctionalSeries& s) {
        if (cfg_.write_csv) write_atomic(dir_ / name, series_to_csv(s));
    }
    void config_echo() { write_atomic(dir_ / "config.ini", cfg_.source_text); }

private:
    const RunConfig& cfg_;
    fs::path dir_;
};

bool ok(zk::RunStatus s) { return s == zk::RunStatus::completed; }

int run_decay(const RunConfig& cfg, Writer& w, std::ostream& out) {
    const zk::DecayReport rep = zk::decay_experiment(cfg.scenario, cfg.decay);
    w.json_file("smallness.json", "smallness", to_json(rep.smallness));
    w.json_file("report.json", "decay", to_json(rep));
    if (rep.label != "refused") w.csv_file("series.csv", rep.run.series);
    print_smallness(out, rep.smallness);
    out << "decay: " << rep.label << (rep.degenerate ? " (degenerate: zero data)" : "")
        << "  status = " << zk::to_string(rep.status) << "  steps = " << rep.step_count
        << "  dt = " << fmt(rep.dt) << "\n";
    if (rep.label == "refused") {
        out << "run refused: data outside the smallness condition (set experiment.allow_outside_theorem)\n";
        return kExitOk;
    }
    const double e0 = rep.run.series.empty() ? 0.0 : rep.run.series.front().l2;
    out << "max energy residual = " << fmt(rep.max_energy_residual)
        << (e0 > 0 ? "  (relative " + fmt(rep.max_energy_residual / e0) + ")" : "")
        << "  weighted monotone = " << (rep.weighted_monotone ? "yes" : "no") << "\n";
    for (const auto& f : rep.fits)
        out << "  " << f.functional_name << ": rate " << fmt(f.fitted_rate) << "  predicted "
            << fmt(f.predicted_rate) << "  r2 " << fmt(f.r_squared) << "  over [" << fmt(f.t_start, "%.3g")
            << ", " << fmt(f.t_end, "%.3g") << "]\n";
    return ok(rep.status) ? kExitOk : kExitSolverFailure;
}

int run_single(const RunConfig& cfg, Writer& w, std::ostream& out) {
    const zk::Scenario& sc = cfg.scenario;
    const zk::SmallnessReport sm = smallness_of(sc);
    const zk::OperatorSet ops(sc.grid, sc.dealias);
    const zk::RunResult r = zk::run(ops, zk::make_profile(sc.grid, sc.profile), sc.integrator);
    const double e0 = r.series.empty() ? 0.0 : r.series.front().l2;
    json payload = {{"status", zk::to_string(r.status)},
                    {"step_count", r.step_count},
                    {"dt", zk::effective_dt(sc.integrator, sc.grid)},
                    {"max_energy_residual", r.max_energy_residual},
                    {"energy_tol", sc.integrator.energy_tol},
                    {"energy_ok", e0 == 0.0 || r.max_energy_residual <= sc.integrator.energy_tol * e0},
                    {"smallness", to_json(sm)}};
    w.json_file("smallness.json", "smallness", to_json(sm));
    w.json_file("report.json", "single-run", payload);
    w.csv_file("series.csv", r.series);
    print_smallness(out, sm);
    out << "single-run: status = " << zk::to_string(r.status) << "  steps = " << r.step_count
        << "  max energy residual = " << fmt(r.max_energy_residual) << "\n";
    return ok(r.status) ? kExitOk : kExitSolverFailure;
}

int run_convergence(const RunConfig& cfg, Writer& w, std::ostream& out) {
    const zk::ConvergenceReport rep =
        zk::epsilon_convergence(cfg.scenario, cfg.epsilons, cfg.reference_epsilon);
    const zk::SmallnessReport sm = smallness_of(cfg.scenario);
    w.json_file("smallness.json", "smallness", to_json(sm));
    w.json_file("report.json", "epsilon-convergence", to_json(rep));
    print_smallness(out, sm);
    out << "epsilon-convergence against epsilon = " << fmt(rep.reference) << "\n";
    for (std::size_t n = 0; n < rep.values.size(); ++n)
        out << "  epsilon " << fmt(rep.values[n]) << ": error " << fmt(rep.errors[n]) << "\n";
    out << "fitted order = " << (rep.degenerate ? std::string("n/a (degenerate)") : fmt(rep.fitted_order)) << "\n";
    for (auto s : rep.statuses)
        if (!ok(s)) return kExitSolverFailure;
    return kExitOk;
}

int run_perturbation(const RunConfig& cfg, Writer& w, std::ostream& out) {
    const zk::PerturbationReport rep = zk::perturbation_experiment(cfg.scenario, cfg.perturbation);
    zk::PerturbationOptions ctl = cfg.perturbation;
    ctl.delta = 0.0;
    const zk::PerturbationReport control = zk::perturbation_experiment(cfg.scenario, ctl);
    double max_control = 0.0;
    for (double g : control.gap) max_control = std::max(max_control, g);
    const zk::SmallnessReport sm = smallness_of(cfg.scenario);
    json payload = {{"perturbation", to_json(rep)},
                    {"control", to_json(control)},
                    {"control_max_gap", max_control},
                    {"control_ok", max_control <= 1e-12 * rep.norm_u0_sq}};
    w.json_file("smallness.json", "smallness", to_json(sm));
    w.json_file("report.json", "perturbation", payload);
    print_smallness(out, sm);
    out << "perturbation: delta = " << fmt(rep.delta) << "  status = " << zk::to_string(rep.status)
        << "  calibrated C = " << fmt(rep.calibrated_C) << "  envelope " << (rep.bound_satisfied ? "holds" : "violated")
        << "  within C(L,J0) = " << (rep.within_constant ? "yes" : "no") << "\n";
    out << "control (delta = 0): max gap = " << fmt(max_control) << "\n";
    return ok(rep.status) && ok(control.status) ? kExitOk : kExitSolverFailure;
}

int run_lemmas(const RunConfig& cfg, Writer& w, std::ostream& out) {
    const zk::LemmaReport rep = zk::lemma_suite(cfg.lemmas);
    w.json_file("report.json", "lemmas", to_json(rep));
    out << "lemmas: " << rep.passed << "/" << rep.total << " checks pass\n";
    for (const auto& e : rep.entries)
        if (!e.pass) out << "  FAIL " << e.lemma << " " << e.name << ": " << fmt(e.value) << " vs " << fmt(e.bound) << "\n";
    return kExitOk;
}

}  // namespace

int dispatch(const RunConfig& cfg, const std::optional<std::string>& output_dir, std::ostream& out,
             std::ostream& err) {
    const fs::path dir = output_dir ? fs::path(*output_dir) : fs::path(cfg.output_directory);
    try {
        prepare_output_dir(dir);
        Writer w(cfg, dir);
        w.config_echo();
        switch (cfg.kind) {
            case Kind::decay: return run_decay(cfg, w, out);
            case Kind::single_run: return run_single(cfg, w, out);
            case Kind::epsilon_convergence: return run_convergence(cfg, w, out);
            case Kind::perturbation: return run_perturbation(cfg, w, out);
            case Kind::lemmas: return run_lemmas(cfg, w, out);
        }
    } catch (const OutputError& e) {
        err << "error: " << e.what() << "\n";
        return kExitOutput;
    } catch (const zk::SingularSystem& e) {
        err << "solver failure: " << e.what() << "\n";
        return kExitSolverFailure;
    } catch (const zk::Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return kExitOk;
}

}  // namespace zkio
