#pragma once

#include <memory>
#include <span>

#include "zk/banded.hpp"
#include "zk/grid.hpp"
#include "zk/spectral.hpp"

namespace zk {

// x-difference matrices on interior nodes. Walls carry u(0)=u(L)=0; the third
// derivative closes u_x(L)=0 with a ghost node and extrapolates u_xx to x=0;
// the fourth derivative additionally uses u_xx(0)=0.
struct XOperators {
    BandedMatrix d1, d2, d3, d4;
};

XOperators build_x_operators(int nx, double dx);

class OperatorSet {
public:
    explicit OperatorSet(const Grid& g, bool dealias = false);

    const Grid& grid() const { return grid_; }
    const XOperators& x() const { return x_; }
    const TransverseFft& fft() const { return *fft_; }
    bool dealias() const { return dealias_; }

    // Multipliers of d^2/dy^2, d^2/dz^2, d^4/dy^4 + d^4/dz^4 for mode m.
    double lap_t(int m) const { return -(fft_->ky2(m) + fft_->kz2(m)); }
    double quartic_t(int m) const {
        return fft_->ky2(m) * fft_->ky2(m) + fft_->kz2(m) * fft_->kz2(m);
    }

    // Raw kernels on physical arrays of grid().size().
    void apply_x(const BandedMatrix& A, std::span<const double> u, std::span<double> out) const;
    void nonlinear_raw(std::span<const double> u, std::span<double> out) const;
    // Linear part L u = -(1 + lap_t) D1 u - D3 u - eps (D4 + quartic_t) u on one spectral x line.
    void linear_mode(int m, double eps, const cplx* in, cplx* out) const;
    BandedMatrix linear_matrix(int m, double eps) const;

private:
    Grid grid_;
    XOperators x_;
    std::shared_ptr<const TransverseFft> fft_;
    bool dealias_ = false;
};

Field d_x(const OperatorSet& ops, const Field& u);
Field dispersive(const OperatorSet& ops, const Field& u);
Field nonlinear(const OperatorSet& ops, const Field& u);
Field hyperviscosity(const OperatorSet& ops, const Field& u, double eps);
Field rhs(const OperatorSet& ops, const Field& u, double eps);
// rhs with the nonlinear term switched off.
Field linear_rhs(const OperatorSet& ops, const Field& u, double eps);

}  // namespace zk
