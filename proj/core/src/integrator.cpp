#include "zk/integrator.hpp"

#include <algorithm>
#include <cmath>

#include "zk/error.hpp"
#include "zk/parallel.hpp"

namespace zk {

std::string to_string(Scheme s) {
    switch (s) {
        case Scheme::imex_cn_ab2: return "imex-cn-ab2";
        case Scheme::imex_euler: return "imex-euler";
        case Scheme::imex_bdf2: return "imex-bdf2";
    }
    return "imex-bdf2";
}

Scheme scheme_from_string(const std::string& s) {
    if (s == "imex-cn-ab2") return Scheme::imex_cn_ab2;
    if (s == "imex-euler") return Scheme::imex_euler;
    if (s == "imex-bdf2") return Scheme::imex_bdf2;
    throw InvalidArgument("unknown scheme '" + s + "'");
}

std::string to_string(RunStatus s) {
    switch (s) {
        case RunStatus::completed: return "completed";
        case RunStatus::blowup: return "blowup";
        case RunStatus::nan: return "nan";
    }
    return "completed";
}

void validate(const IntegratorConfig& cfg) {
    if (!(cfg.dt >= 0.0) || !std::isfinite(cfg.dt)) throw InvalidArgument("integrator.dt must be positive");
    if (!(cfg.T > 0.0) || !std::isfinite(cfg.T)) throw InvalidArgument("integrator.T must be positive");
    if (cfg.dt > 0.0 && cfg.T < cfg.dt) throw InvalidArgument("integrator.T must be at least dt");
    if (!(cfg.epsilon >= 0.0)) throw InvalidArgument("integrator.epsilon must be nonnegative");
    if (cfg.diagnostic_stride < 1) throw InvalidArgument("integrator.diagnostic_stride must be >= 1");
    if (!(cfg.energy_tol > 0.0)) throw InvalidArgument("integrator.energy_tol must be positive");
    if (cfg.startup_substeps < 1) throw InvalidArgument("integrator.startup_substeps must be >= 1");
    if (!(cfg.startup_time >= 0.0)) throw InvalidArgument("integrator.startup_time must be nonnegative");
}

double effective_dt(const IntegratorConfig& cfg, const Grid& g) {
    const double dt0 = cfg.dt > 0.0 ? cfg.dt : 0.25 * g.dx;
    const double n = std::max(1.0, std::ceil(cfg.T / dt0 - 1e-9));
    return cfg.T / n;
}

namespace {

double dissipation(const OperatorSet& ops, std::span<const double> u, std::span<const cplx> uh, double eps) {
    const Grid& g = ops.grid();
    double d = trace0_raw(g, u) + flux_right_raw(g, u);
    if (eps > 0.0) d += 2.0 * eps * bracket2_raw(ops, u, uh);
    return d;
}

// Fixed-step scheme with its factorizations and multistep history.
struct Core {
    const OperatorSet& ops;
    const IntegratorConfig& cfg;
    double dt = 0.0;
    long n = 0;
    int M = 0;
    int nx = 0;
    unsigned workers = 1;
    std::vector<cplx> uh, uh_prev, nh_prev, nh, next;
    std::vector<double> u, nl;
    std::vector<BandedMatrix> lin;       // L_m, needed for explicit trapezoid halves
    std::vector<BandedLU> lu_main;       // scheme's implicit operator
    std::vector<BandedLU> lu_start;      // Crank-Nicolson startup for BDF2

    Core(const OperatorSet& o, const IntegratorConfig& c, double step, std::span<const double> u0)
        : ops(o), cfg(c), dt(step), M(o.fft().modes()), nx(o.grid().nx) {
        workers = worker_count();
        u.assign(u0.begin(), u0.end());
        uh.assign(o.fft().spectral_size(), 0.0);
        o.fft().forward(u, uh);
        lin.resize(M);
        lu_main.resize(M);
        const bool need_cn = cfg.scheme != Scheme::imex_euler;
        if (need_cn) lu_start.resize(M);
        parallel_for(M, [&](std::size_t m) {
            const int mi = static_cast<int>(m);
            lin[m] = ops.linear_matrix(mi, cfg.epsilon);
            const BandedMatrix I = BandedMatrix::identity(nx, 2, 2);
            switch (cfg.scheme) {
                case Scheme::imex_cn_ab2:
                    lu_main[m] = BandedLU(I.plus(lin[m], -0.5 * dt), mi);
                    break;
                case Scheme::imex_euler:
                    lu_main[m] = BandedLU(I.plus(lin[m], -dt), mi);
                    break;
                case Scheme::imex_bdf2:
                    lu_main[m] = BandedLU(I.scaled(1.5).plus(lin[m], -dt), mi);
                    break;
            }
            if (need_cn) lu_start[m] = cfg.scheme == Scheme::imex_cn_ab2
                                           ? lu_main[m]
                                           : BandedLU(I.plus(lin[m], -0.5 * dt), mi);
        });
    }

    void advance() {
        const std::size_t S = uh.size();
        nh.resize(S);
        next.resize(S);
        if (cfg.nonlinear) {
            nl.resize(u.size());
            ops.nonlinear_raw(u, nl);
            ops.fft().forward(nl, nh);
        } else {
            std::fill(nh.begin(), nh.end(), cplx{});
        }
        const bool first = n == 0;
        if (workers > 1) {
            parallel_for(M, [&](std::size_t m) { advance_mode(static_cast<int>(m), nh, next, first); });
        } else {
            for (int m = 0; m < M; ++m) advance_mode(m, nh, next, first);
        }
        if (cfg.scheme == Scheme::imex_bdf2) {
            uh_prev.swap(uh);
            uh.swap(next);
        } else {
            uh.swap(next);
        }
        nh_prev.swap(nh);
        next.assign(uh.begin(), uh.end());
        ops.fft().inverse_destroy(next, u);
        ++n;
    }

    void advance_mode(int m, const std::vector<cplx>& nh, std::vector<cplx>& next, bool first) const {
        const std::size_t M = this->M;
        cplx* out = &next[m];
        const cplx* un = &uh[m];
        const cplx* nn = &nh[m];
        const BandedLU* solver = &lu_main[m];
        const bool cn_step = cfg.scheme == Scheme::imex_cn_ab2 || (cfg.scheme == Scheme::imex_bdf2 && first);
        if (cn_step) {
            lin[m].apply(un, out, M);
            for (int i = 0; i < nx; ++i) {
                const cplx nexp = first ? nn[i * M] : 1.5 * nn[i * M] - 0.5 * nh_prev[i * M + m];
                out[i * M] = un[i * M] + 0.5 * dt * out[i * M] - dt * nexp;
            }
            solver = &lu_start[m];
        } else if (cfg.scheme == Scheme::imex_euler) {
            for (int i = 0; i < nx; ++i) out[i * M] = un[i * M] - dt * nn[i * M];
        } else {
            const cplx* up = &uh_prev[m];
            const cplx* np = &nh_prev[m];
            for (int i = 0; i < nx; ++i)
                out[i * M] = 2.0 * un[i * M] - 0.5 * up[i * M] - dt * (2.0 * nn[i * M] - np[i * M]);
        }
        solver->solve(out, M);
    }
};

}  // namespace

struct Stepper::Impl {
    OperatorSet ops;
    IntegratorConfig cfg;
    double dt = 0.0;
    long n = 0;
    long internal = 0;
    long startup_steps = 0;
    std::unique_ptr<Core> core;
    double integral = 0.0;
    double d_prev = 0.0;

    Impl(const OperatorSet& o, const IntegratorConfig& c, const Field& u0)
        : ops(o), cfg(c), dt(effective_dt(c, o.grid())) {
        validate(cfg);
        require_same_grid(o.grid(), u0.grid());
        if (cfg.startup_substeps > 1 && cfg.startup_time > 0.0)
            startup_steps = std::min(std::lround(cfg.T / dt),
                                     static_cast<long>(std::ceil(cfg.startup_time / dt - 1e-9)));
        const double first_dt = startup_steps > 0 ? dt / cfg.startup_substeps : dt;
        core = std::make_unique<Core>(ops, cfg, first_dt, u0.values());
        d_prev = dissipation(ops, core->u, core->uh, cfg.epsilon);
    }

    void internal_step() {
        core->advance();
        ++internal;
        const double d = dissipation(ops, core->u, core->uh, cfg.epsilon);
        integral += 0.5 * core->dt * (d_prev + d);
        d_prev = d;
    }

    void advance() {
        if (n < startup_steps) {
            for (int k = 0; k < cfg.startup_substeps; ++k) internal_step();
            if (n + 1 == startup_steps) core = std::make_unique<Core>(ops, cfg, dt, core->u);
        } else {
            internal_step();
        }
        ++n;
    }
};

Stepper::Stepper(const OperatorSet& ops, const IntegratorConfig& cfg, const Field& u0)
    : impl_(std::make_unique<Impl>(ops, cfg, u0)) {}
Stepper::~Stepper() = default;
Stepper::Stepper(Stepper&&) noexcept = default;

void Stepper::advance() { impl_->advance(); }
double Stepper::time() const { return impl_->n * impl_->dt; }
long Stepper::steps() const { return impl_->n; }
long Stepper::internal_steps() const { return impl_->internal; }
double Stepper::dissipated() const { return impl_->integral; }
std::span<const double> Stepper::values() const { return impl_->core->u; }
std::span<const cplx> Stepper::spectrum() const { return impl_->core->uh; }
Field Stepper::state() const { return Field(impl_->ops.grid(), impl_->core->u); }

bool Stepper::finite() const {
    for (double v : impl_->core->u)
        if (!std::isfinite(v)) return false;
    return true;
}

Field step(const OperatorSet& ops, const Field& u, const IntegratorConfig& cfg) {
    Stepper s(ops, cfg, u);
    s.advance();
    if (!s.finite()) throw Error("non-finite values after step");
    return s.state();
}

RunResult run(const OperatorSet& ops, const Field& u0, const IntegratorConfig& cfg) {
    validate(cfg);
    const double dt = effective_dt(cfg, ops.grid());
    const long nsteps = std::lround(cfg.T / dt);
    const Grid& g = ops.grid();
    Stepper st(ops, cfg, u0);

    RunResult res;
    const double e0 = l2_norm2(g, u0.values());
    res.series.push_back(snapshot(ops, u0, cfg.epsilon, 0.0));
    res.energy_residual.push_back(0.0);
    std::vector<double> last(u0.values().begin(), u0.values().end());

    for (long s = 1; s <= nsteps; ++s) {
        st.advance();
        if (!st.finite()) {
            res.status = RunStatus::nan;
            break;
        }
        res.step_count = s;
        const double e = l2_norm2(g, st.values());
        const double r = std::abs(e + st.dissipated() - e0);
        res.max_energy_residual = std::max(res.max_energy_residual, r);
        if (e > 1e3 * e0) {
            res.status = RunStatus::blowup;
            last.assign(st.values().begin(), st.values().end());
            break;
        }
        if (s % cfg.diagnostic_stride == 0 || s == nsteps) {
            res.series.push_back(snapshot(ops, st.state(), cfg.epsilon, s * dt));
            res.energy_residual.push_back(r);
        }
        last.assign(st.values().begin(), st.values().end());
    }
    res.final_state = Field(g, std::move(last));
    return res;
}

}  // namespace zk
