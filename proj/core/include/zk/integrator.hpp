#pragma once

#include <memory>
#include <string>
#include <vector>

#include "zk/functionals.hpp"
#include "zk/grid.hpp"
#include "zk/operators.hpp"

namespace zk {

enum class Scheme { imex_cn_ab2, imex_euler, imex_bdf2 };
std::string to_string(Scheme s);
Scheme scheme_from_string(const std::string& s);

struct IntegratorConfig {
    double dt = 0.0;  // 0 selects 0.25 * dx
    double T = 1.0;
    Scheme scheme = Scheme::imex_bdf2;
    double epsilon = 0.0;
    int diagnostic_stride = 1;
    double energy_tol = 1e-4;
    bool nonlinear = true;
    // Steps covering the first startup_time time units are split into
    // startup_substeps pieces, resolving the initial boundary layer. 1 disables.
    int startup_substeps = 16;
    double startup_time = 0.2;
};

double effective_dt(const IntegratorConfig& cfg, const Grid& g);
void validate(const IntegratorConfig& cfg);

enum class RunStatus { completed, blowup, nan };
std::string to_string(RunStatus s);

struct RunResult {
    Field final_state;
    FunctionalSeries series;
    std::vector<double> energy_residual;  // |B(t) - ||u0||^2| at each snapshot
    long step_count = 0;
    double max_energy_residual = 0.0;
    RunStatus status = RunStatus::completed;
};

// Time stepper holding per-mode factorizations and multistep history.
class Stepper {
public:
    Stepper(const OperatorSet& ops, const IntegratorConfig& cfg, const Field& u0);
    ~Stepper();
    Stepper(Stepper&&) noexcept;

    // One step of size dt (several internal steps during startup).
    void advance();
    double time() const;
    long steps() const;
    long internal_steps() const;
    // Trapezoid integral of trace0 + flux_right + 2 eps [u]_2 over internal steps.
    double dissipated() const;
    // Physical values of the current state.
    std::span<const double> values() const;
    std::span<const cplx> spectrum() const;
    Field state() const;
    bool finite() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

Field step(const OperatorSet& ops, const Field& u, const IntegratorConfig& cfg);
RunResult run(const OperatorSet& ops, const Field& u0, const IntegratorConfig& cfg);

}  // namespace zk
