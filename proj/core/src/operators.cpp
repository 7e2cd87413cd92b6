#include "zk/operators.hpp"

#include <map>

#include "zk/error.hpp"

namespace zk {

namespace {

using Row = std::map<int, double>;

Row combine(const Row& a, double sa, const Row& b, double sb) {
    Row r;
    for (auto [j, v] : a) r[j] += sa * v;
    for (auto [j, v] : b) r[j] += sb * v;
    return r;
}

}  // namespace

XOperators build_x_operators(int nx, double h) {
    const int n = nx;
    XOperators X{BandedMatrix(n, 2, 2), BandedMatrix(n, 2, 2), BandedMatrix(n, 2, 2),
                 BandedMatrix(n, 2, 2)};
    const double h2 = h * h;
    for (int i = 0; i < n; ++i) {
        if (i > 0) X.d1.set(i, i - 1, -0.5 / h);
        if (i + 1 < n) X.d1.set(i, i + 1, 0.5 / h);
        if (i > 0) X.d2.set(i, i - 1, 1.0 / h2);
        X.d2.set(i, i, -2.0 / h2);
        if (i + 1 < n) X.d2.set(i, i + 1, 1.0 / h2);
    }

    // Second differences w_r at r = -1 .. n, as rows over u. w_{-1} extrapolates
    // linearly to x = 0; w_n uses the ghost u_{n+1} = u_{n-1} from u_x(L) = 0.
    std::vector<Row> w(n + 2);
    auto W = [&](int r) -> Row& { return w[r + 1]; };
    for (int r = 0; r < n; ++r) {
        if (r > 0) W(r)[r - 1] = 1.0 / h2;
        W(r)[r] = -2.0 / h2;
        if (r + 1 < n) W(r)[r + 1] = 1.0 / h2;
    }
    W(-1) = combine(W(0), 2.0, W(1), -1.0);
    W(n)[n - 1] = 2.0 / h2;

    for (int i = 0; i < n; ++i) {
        const Row r = combine(W(i + 1), 0.5 / h, W(i - 1), -0.5 / h);
        for (auto [j, v] : r)
            if (v != 0.0) X.d3.set(i, j, v);
    }

    // Fourth difference as S^T C S with w_{-1} = 0 (u_xx(0) = 0) and half weight
    // on the wall row at x = L.
    for (int r = 0; r <= n; ++r) {
        const double c = r == n ? 0.5 : 1.0;
        for (auto [i, a] : W(r))
            for (auto [j, b] : W(r)) X.d4.add(i, j, c * a * b);
    }
    return X;
}

OperatorSet::OperatorSet(const Grid& g, bool dealias)
    : grid_(g),
      x_(build_x_operators(g.nx, g.dx)),
      fft_(std::make_shared<TransverseFft>(g)),
      dealias_(dealias) {}

void OperatorSet::apply_x(const BandedMatrix& A, std::span<const double> u,
                          std::span<double> out) const {
    const int ts = grid_.transverse_size();
    for (int t = 0; t < ts; ++t) A.apply(u.data() + t, out.data() + t, ts);
}

void OperatorSet::nonlinear_raw(std::span<const double> u, std::span<double> out) const {
    const int ts = grid_.transverse_size();
    const int n = grid_.nx;
    const double c = 1.0 / (6.0 * grid_.dx);
    for (int i = 0; i < n; ++i) {
        const double* um = i > 0 ? &u[static_cast<std::size_t>(i - 1) * ts] : nullptr;
        const double* u0 = &u[static_cast<std::size_t>(i) * ts];
        const double* up = i + 1 < n ? &u[static_cast<std::size_t>(i + 1) * ts] : nullptr;
        double* o = &out[static_cast<std::size_t>(i) * ts];
        for (int t = 0; t < ts; ++t) {
            const double a = um ? um[t] : 0.0;
            const double b = up ? up[t] : 0.0;
            o[t] = c * ((b * b - a * a) + u0[t] * (b - a));
        }
    }
    if (dealias_) {
        std::vector<cplx> s(fft_->spectral_size());
        fft_->forward(out, s);
        const int M = fft_->modes();
        for (int i = 0; i < n; ++i)
            for (int m = 0; m < M; ++m)
                if (!fft_->resolved(m)) s[static_cast<std::size_t>(i) * M + m] = 0.0;
        fft_->inverse(s, out);
    }
}

void OperatorSet::linear_mode(int m, double eps, const cplx* in, cplx* out) const {
    const int n = grid_.nx;
    const std::size_t M = fft_->modes();
    const double a = -(1.0 + lap_t(m));
    const double q = quartic_t(m);
    std::vector<cplx> t1(n), t3(n), t4;
    x_.d1.apply(in, t1.data(), M, 1);
    x_.d3.apply(in, t3.data(), M, 1);
    if (eps > 0.0) {
        t4.resize(n);
        x_.d4.apply(in, t4.data(), M, 1);
    }
    for (int i = 0; i < n; ++i) {
        cplx v = a * t1[i] - t3[i];
        if (eps > 0.0) v -= eps * (t4[i] + q * in[i * M]);
        out[i * M] = v;
    }
}

BandedMatrix OperatorSet::linear_matrix(int m, double eps) const {
    BandedMatrix A = x_.d1.scaled(-(1.0 + lap_t(m))).plus(x_.d3, -1.0);
    if (eps > 0.0) {
        A = A.plus(x_.d4, -eps);
        A = A.plus(BandedMatrix::identity(grid_.nx, 0, 0), -eps * quartic_t(m));
    }
    return A;
}

namespace {

// Applies a transverse multiplier then returns to physical space.
std::vector<double> transverse_multiply(const OperatorSet& ops, std::span<const double> u,
                                        double (OperatorSet::*mult)(int) const) {
    const TransverseFft& fft = ops.fft();
    std::vector<cplx> s(fft.spectral_size());
    fft.forward(u, s);
    const int M = fft.modes();
    for (int i = 0; i < ops.grid().nx; ++i)
        for (int m = 0; m < M; ++m) s[static_cast<std::size_t>(i) * M + m] *= (ops.*mult)(m);
    std::vector<double> out(u.size());
    fft.inverse(s, out);
    return out;
}

}  // namespace

Field d_x(const OperatorSet& ops, const Field& u) {
    require_same_grid(ops.grid(), u.grid());
    std::vector<double> out(u.size());
    ops.apply_x(ops.x().d1, u.values(), out);
    return Field(u.grid(), std::move(out));
}

Field dispersive(const OperatorSet& ops, const Field& u) {
    require_same_grid(ops.grid(), u.grid());
    std::vector<double> out(u.size()), tmp(u.size());
    ops.apply_x(ops.x().d3, u.values(), out);
    const std::vector<double> lap = transverse_multiply(ops, u.values(), &OperatorSet::lap_t);
    ops.apply_x(ops.x().d1, lap, tmp);
    for (std::size_t n = 0; n < out.size(); ++n) out[n] += tmp[n];
    return Field(u.grid(), std::move(out));
}

Field nonlinear(const OperatorSet& ops, const Field& u) {
    require_same_grid(ops.grid(), u.grid());
    std::vector<double> out(u.size());
    ops.nonlinear_raw(u.values(), out);
    return Field(u.grid(), std::move(out));
}

Field hyperviscosity(const OperatorSet& ops, const Field& u, double eps) {
    if (eps < 0.0) throw InvalidArgument("epsilon must be nonnegative");
    require_same_grid(ops.grid(), u.grid());
    if (eps == 0.0) return Field(u.grid());
    std::vector<double> out(u.size());
    ops.apply_x(ops.x().d4, u.values(), out);
    const std::vector<double> q = transverse_multiply(ops, u.values(), &OperatorSet::quartic_t);
    for (std::size_t n = 0; n < out.size(); ++n) out[n] = eps * (out[n] + q[n]);
    return Field(u.grid(), std::move(out));
}

Field linear_rhs(const OperatorSet& ops, const Field& u, double eps) {
    const Field a = d_x(ops, u);
    const Field b = dispersive(ops, u);
    const Field c = hyperviscosity(ops, u, eps);
    std::vector<double> out(u.size());
    for (std::size_t n = 0; n < out.size(); ++n) out[n] = -a[n] - b[n] - c[n];
    return Field(u.grid(), std::move(out));
}

Field rhs(const OperatorSet& ops, const Field& u, double eps) {
    const Field lin = linear_rhs(ops, u, eps);
    const Field nl = nonlinear(ops, u);
    std::vector<double> out(u.size());
    for (std::size_t n = 0; n < out.size(); ++n) out[n] = lin[n] - nl[n];
    return Field(u.grid(), std::move(out));
}

}  // namespace zk
