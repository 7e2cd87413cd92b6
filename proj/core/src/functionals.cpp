#include "zk/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "zk/error.hpp"

namespace zk {

namespace {

double sum_lines_dx(const Grid& g) { return g.dx * g.cell_area(); }

// Sums of weighted |uhat|^2 over modes and x nodes.
struct SpectralSums {
    double grad_t = 0.0;   // ||u_y||^2 + ||u_z||^2
    double quartic = 0.0;  // ||u_yy||^2 + ||u_zz||^2
    double yz = 0.0;       // ||u_yz||^2
    double xy = 0.0;       // ||u_xy||^2 + ||u_xz||^2
};

SpectralSums spectral_sums(const OperatorSet& ops, std::span<const cplx> uh) {
    const TransverseFft& fft = ops.fft();
    const Grid& g = ops.grid();
    const int M = fft.modes();
    SpectralSums s;
    for (int i = 0; i < g.nx; ++i) {
        const cplx* line = &uh[static_cast<std::size_t>(i) * M];
        for (int m = 0; m < M; ++m) {
            const double a = fft.weight(m) * std::norm(line[m]);
            const double ky2 = fft.ky2(m), kz2 = fft.kz2(m);
            s.grad_t += (ky2 + kz2) * a;
            s.quartic += (ky2 * ky2 + kz2 * kz2) * a;
            s.yz += ky2 * kz2 * a;
        }
    }
    // Forward differences over half nodes, walls included.
    for (int i = 0; i <= g.nx; ++i) {
        for (int m = 0; m < M; ++m) {
            const cplx hi = i < g.nx ? uh[static_cast<std::size_t>(i) * M + m] : cplx{};
            const cplx lo = i > 0 ? uh[static_cast<std::size_t>(i - 1) * M + m] : cplx{};
            s.xy += fft.weight(m) * (fft.ky2(m) + fft.kz2(m)) * std::norm((hi - lo) / g.dx);
        }
    }
    const double scale = g.dx * g.transverse_measure();
    s.grad_t *= scale;
    s.quartic *= scale;
    s.yz *= scale;
    s.xy *= scale;
    return s;
}

}  // namespace

double l2_norm2(const Grid& g, std::span<const double> u) {
    double s = 0.0;
    for (double v : u) s += v * v;
    return s * sum_lines_dx(g);
}

double weighted_norm2(const Grid& g, std::span<const double> u) {
    const int ts = g.transverse_size();
    double s = 0.0;
    for (int i = 0; i < g.nx; ++i) {
        double line = 0.0;
        const double* p = &u[static_cast<std::size_t>(i) * ts];
        for (int t = 0; t < ts; ++t) line += p[t] * p[t];
        s += (1.0 + g.x(i)) * line;
    }
    return s * sum_lines_dx(g);
}

double dx_norm2(const Grid& g, std::span<const double> u) {
    const int ts = g.transverse_size();
    double s = 0.0;
    for (int i = 0; i <= g.nx; ++i) {
        for (int t = 0; t < ts; ++t) {
            const double hi = i < g.nx ? u[static_cast<std::size_t>(i) * ts + t] : 0.0;
            const double lo = i > 0 ? u[static_cast<std::size_t>(i - 1) * ts + t] : 0.0;
            const double d = (hi - lo) / g.dx;
            s += d * d;
        }
    }
    return s * sum_lines_dx(g);
}

double trace0_raw(const Grid& g, std::span<const double> u) {
    const int ts = g.transverse_size();
    const double h = g.dx;
    double s = 0.0;
    for (int t = 0; t < ts; ++t) {
        const double u0 = u[t], u1 = u[ts + t], u2 = u[2 * ts + t];
        s += (u0 / h) * (6.0 * u0 - 4.0 * u1 + u2) / h;
    }
    return s * g.cell_area();
}

double flux_right_raw(const Grid& g, std::span<const double> u) {
    const int ts = g.transverse_size();
    const double* p = &u[static_cast<std::size_t>(g.nx - 1) * ts];
    double s = 0.0;
    for (int t = 0; t < ts; ++t) s += (p[t] / g.dx) * (p[t] / g.dx);
    return s * g.cell_area();
}

double uxx_norm2(const Grid& g, std::span<const double> u) {
    const int ts = g.transverse_size();
    const int n = g.nx;
    const double h2 = g.dx * g.dx;
    auto at = [&](int i, int t) {
        return i < 0 || i >= n ? 0.0 : u[static_cast<std::size_t>(i) * ts + t];
    };
    double s = 0.0;
    for (int t = 0; t < ts; ++t) {
        for (int i = 0; i < n; ++i) {
            const double w = (at(i - 1, t) - 2.0 * at(i, t) + at(i + 1, t)) / h2;
            s += w * w;
        }
        const double wr = 2.0 * at(n - 1, t) / h2;
        s += 0.5 * wr * wr;
    }
    return s * sum_lines_dx(g);
}

double bracket2_raw(const OperatorSet& ops, std::span<const double> u, std::span<const cplx> uhat) {
    const TransverseFft& fft = ops.fft();
    const Grid& g = ops.grid();
    const int M = fft.modes();
    double q = 0.0;
    for (int i = 0; i < g.nx; ++i)
        for (int m = 0; m < M; ++m)
            q += ops.quartic_t(m) * fft.weight(m) * std::norm(uhat[static_cast<std::size_t>(i) * M + m]);
    return uxx_norm2(g, u) + q * g.dx * g.transverse_measure();
}

FunctionalSnapshot snapshot(const OperatorSet& ops, const Field& u, double eps, double t) {
    require_same_grid(ops.grid(), u.grid());
    const Grid& g = u.grid();
    const auto uv = u.values();
    std::vector<cplx> uh(ops.fft().spectral_size());
    ops.fft().forward(uv, uh);
    const SpectralSums ss = spectral_sums(ops, uh);

    FunctionalSnapshot s;
    s.t = t;
    s.l2 = l2_norm2(g, uv);
    s.weighted = weighted_norm2(g, uv);
    s.h1 = s.l2 + dx_norm2(g, uv) + ss.grad_t;
    const double uxx = uxx_norm2(g, uv);
    s.bracket2 = uxx + ss.quartic;
    s.h2_partial = s.bracket2 + 2.0 * ss.xy + 2.0 * ss.yz;
    s.trace0 = trace0_raw(g, uv);
    s.flux_right = flux_right_raw(g, uv);
    const Field ut = rhs(ops, u, eps);
    s.ut_l2 = l2_norm2(g, ut.values());
    s.ut_weighted = weighted_norm2(g, ut.values());
    const int ts = g.transverse_size();
    double leak = 0.0;
    for (int i = 0; i < g.nx; ++i)
        for (int j = 0; j < g.ny; ++j)
            for (int k = 0; k < g.nz; ++k)
                if (j == 0 || (g.dim == 3 && k == 0))
                    leak = std::max(leak, std::abs(uv[static_cast<std::size_t>(i) * ts + j * g.nz + k]));
    s.boundary_leak = leak;
    return s;
}

std::vector<double> series_times(const FunctionalSeries& s) {
    std::vector<double> t;
    t.reserve(s.size());
    for (const auto& x : s) t.push_back(x.t);
    return t;
}

std::vector<double> series_values(const FunctionalSeries& s, const std::string& name) {
    double FunctionalSnapshot::* member = nullptr;
    if (name == "t") member = &FunctionalSnapshot::t;
    else if (name == "l2") member = &FunctionalSnapshot::l2;
    else if (name == "weighted") member = &FunctionalSnapshot::weighted;
    else if (name == "h1") member = &FunctionalSnapshot::h1;
    else if (name == "h2_partial") member = &FunctionalSnapshot::h2_partial;
    else if (name == "bracket2") member = &FunctionalSnapshot::bracket2;
    else if (name == "trace0") member = &FunctionalSnapshot::trace0;
    else if (name == "ut_l2") member = &FunctionalSnapshot::ut_l2;
    else if (name == "ut_weighted") member = &FunctionalSnapshot::ut_weighted;
    else if (name == "boundary_leak") member = &FunctionalSnapshot::boundary_leak;
    std::vector<double> v;
    v.reserve(s.size());
    if (member) {
        for (const auto& x : s) v.push_back(x.*member);
    } else if (name == "h2") {
        for (const auto& x : s) v.push_back(x.h1 + x.h2_partial);
    } else if (name == "h2_ut") {
        for (const auto& x : s) v.push_back(x.h1 + x.h2_partial + x.ut_l2);
    } else {
        throw InvalidArgument("unknown functional '" + name + "'");
    }
    return v;
}

double j0_functional(const OperatorSet& ops, const Field& u0) {
    const Field r = rhs(ops, u0, 0.0);
    return weighted_norm2(u0.grid(), r.values());
}

std::string to_string(ConstantSet c) { return c == ConstantSet::theorem ? "theorem" : "estimate4"; }

ConstantSet constant_set_from_string(const std::string& s) {
    if (s == "theorem") return ConstantSet::theorem;
    if (s == "estimate4") return ConstantSet::estimate4;
    throw InvalidArgument("unknown constant set '" + s + "' (expected theorem or estimate4)");
}

SmallnessReport smallness_check(double L, double norm_u0, double J0, ConstantSet constants) {
    using std::numbers::pi;
    if (!(L > 0.0) || !std::isfinite(L)) throw InvalidArgument("L must be positive");
    if (!(norm_u0 >= 0.0) || !std::isfinite(norm_u0)) throw InvalidArgument("norm_u0 must be nonnegative");
    if (!(J0 >= 0.0) || !std::isfinite(J0)) throw InvalidArgument("J0 must be nonnegative");
    SmallnessReport r;
    r.constants = constants;
    r.L = L;
    r.norm_u0 = norm_u0;
    r.J0 = J0;
    const double n4 = norm_u0 * norm_u0 * norm_u0 * norm_u0;
    const double c = 65536.0 * 27.0;  // 2^16 3^3
    r.C1 = 2.0 + 8192.0 / 3.0 * n4;
    if (constants == ConstantSet::theorem) {
        r.K1 = c * (1.0 + L) * (8.0 / 25.0 * r.C1 + 1.0);
    } else {
        r.K1 = c * std::pow(1.0 + L, 4) * (8.0 / 25.0 * r.C1 * r.C1 + 1.0);
    }
    r.K2 = 524288.0 * 27.0 * std::pow(1.0 + L, 6);
    r.chi = pi * pi / (2.0 * L * L * (1.0 + L));
    r.threshold_u0 = pi * pi / (8.0 * r.K1 * L * L);
    r.threshold_J0 = pi * pi / (200.0 * r.K2 * L * L);
    r.margin_u0 = n4 / r.threshold_u0;
    r.margin_J0 = J0 * J0 / r.threshold_J0;
    r.geometric_ok = L <= pi / 2.0;
    r.u0_ok = n4 <= r.threshold_u0;
    r.J0_ok = J0 * J0 <= r.threshold_J0;
    r.pass = r.geometric_ok && r.u0_ok && r.J0_ok;
    return r;
}

double steklov_ratio(std::span<const double> v, double L) {
    if (v.size() < 2) throw InvalidArgument("steklov_ratio needs at least two interior nodes");
    if (!(L > 0.0)) throw InvalidArgument("L must be positive");
    const double h = L / (static_cast<double>(v.size()) + 1.0);
    double num = 0.0, den = 0.0, prev = 0.0;
    for (double x : v) {
        if (!std::isfinite(x)) throw InvalidArgument("steklov_ratio: non-finite value");
        num += (x - prev) * (x - prev);
        den += x * x;
        prev = x;
    }
    num += prev * prev;
    if (den == 0.0) throw InvalidArgument("steklov_ratio: v is identically zero");
    return num / (h * h) / den;
}

InterpolationResult interpolation_check(const OperatorSet& ops, const Field& u, double q) {
    require_same_grid(ops.grid(), u.grid());
    const Grid& g = u.grid();
    if (g.dim != 3) throw InvalidArgument("interpolation_check requires dim = 3");
    if (!(q >= 2.0 && q <= 6.0)) throw InvalidArgument("exponent q must lie in [2, 6]");
    const auto uv = u.values();
    InterpolationResult r;
    r.theta = 3.0 * (0.5 - 1.0 / q);
    double s = 0.0;
    for (double v : uv) s += std::pow(std::abs(v), q);
    r.lhs = std::pow(s * g.dx * g.cell_area(), 1.0 / q);
    std::vector<cplx> uh(ops.fft().spectral_size());
    ops.fft().forward(uv, uh);
    const double grad2 = dx_norm2(g, uv) + spectral_sums(ops, uh).grad_t;
    const double l2 = std::sqrt(l2_norm2(g, uv));
    if (l2 == 0.0) return r;
    r.rhs = std::pow(4.0, r.theta) * std::pow(std::sqrt(grad2), r.theta) * std::pow(l2, 1.0 - r.theta);
    return r;
}

OdeTrajectory integrate_comparison_ode(double alpha, double k, int n, double f0, double T, double dt) {
    if (!(alpha > 0.0)) throw InvalidArgument("alpha must be positive");
    if (!(k >= 0.0)) throw InvalidArgument("k must be nonnegative");
    if (n < 1) throw InvalidArgument("n must be a positive integer");
    if (!(f0 > 0.0)) throw InvalidArgument("f0 must be positive");
    if (!(T > 0.0) || !(dt > 0.0)) throw InvalidArgument("T and dt must be positive");
    if (!(alpha - k * std::pow(f0, n) > 0.0))
        throw PreconditionFailure("hypothesis alpha - k f0^n > 0 violated");
    auto rhs = [&](double f) { return -(alpha - k * std::pow(f, n)) * f; };
    const long steps = std::lround(std::ceil(T / dt - 1e-9));
    const double h = T / steps;
    OdeTrajectory tr;
    tr.t.reserve(steps + 1);
    tr.f.reserve(steps + 1);
    tr.t.push_back(0.0);
    tr.f.push_back(f0);
    double f = f0;
    for (long s = 1; s <= steps; ++s) {
        const double k1 = rhs(f);
        const double k2 = rhs(f + 0.5 * h * k1);
        const double k3 = rhs(f + 0.5 * h * k2);
        const double k4 = rhs(f + h * k3);
        f += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        tr.t.push_back(s * h);
        tr.f.push_back(f);
    }
    return tr;
}

bool ode_comparison_check(double alpha, double k, int n, double f0, double T) {
    const OdeTrajectory tr = integrate_comparison_ode(alpha, k, n, f0, T);
    for (std::size_t s = 1; s < tr.f.size(); ++s) {
        if (!(tr.f[s] < f0)) return false;
        if (tr.f[s] > tr.f[s - 1]) return false;
    }
    return true;
}

}  // namespace zk
