#include "zk/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cstdlib>
#include <numbers>

#include "zk/error.hpp"

namespace zk {

namespace {

std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

}  // namespace

TransverseFft::TransverseFft(const Grid& g) : grid_(g) {
    using std::numbers::pi;
    const int ny = g.ny;
    const int hz = g.dim == 3 ? g.nz / 2 + 1 : 1;
    const int hy = g.dim == 3 ? ny : ny / 2 + 1;
    modes_ = hy * hz;
    ky2_.resize(modes_);
    kz2_.resize(modes_);
    weight_.resize(modes_);
    keep_.resize(modes_);
    const double k0 = pi / g.half_width;
    for (int a = 0; a < hy; ++a) {
        for (int b = 0; b < hz; ++b) {
            const int m = a * hz + b;
            if (g.dim == 2) {
                ky2_[m] = (k0 * a) * (k0 * a);
                kz2_[m] = 0.0;
                weight_[m] = (a == 0 || a == ny / 2) ? 1.0 : 2.0;
                keep_[m] = 3 * a <= ny;
            } else {
                const int s = a <= ny / 2 ? a : a - ny;
                ky2_[m] = (k0 * s) * (k0 * s);
                kz2_[m] = (k0 * b) * (k0 * b);
                weight_[m] = (b == 0 || b == g.nz / 2) ? 1.0 : 2.0;
                keep_[m] = 3 * std::abs(s) <= ny && 3 * b <= g.nz;
            }
        }
    }

    const int howmany = g.nx;
    const int idist = g.transverse_size();
    const int odist = modes_;
    int dims[2] = {ny, g.nz};
    const int rank = g.dim == 3 ? 2 : 1;
    double* rbuf = fftw_alloc_real(g.size());
    fftw_complex* cbuf = fftw_alloc_complex(spectral_size());
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
        plan_fwd_ = fftw_plan_many_dft_r2c(rank, dims, howmany, rbuf, nullptr, 1, idist, cbuf,
                                           nullptr, 1, odist, flags);
        plan_inv_ = fftw_plan_many_dft_c2r(rank, dims, howmany, cbuf, nullptr, 1, odist, rbuf,
                                           nullptr, 1, idist, flags | FFTW_DESTROY_INPUT);
    }
    fftw_free(rbuf);
    fftw_free(cbuf);
    if (!plan_fwd_ || !plan_inv_) throw Error("FFTW planning failed");
}

TransverseFft::~TransverseFft() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (plan_fwd_) fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
    if (plan_inv_) fftw_destroy_plan(static_cast<fftw_plan>(plan_inv_));
}

void TransverseFft::forward(std::span<const double> phys, std::span<cplx> spec) const {
    if (phys.size() != grid_.size() || spec.size() != spectral_size())
        throw GridMismatch("transform size mismatch");
    // r2c does not modify its input.
    fftw_execute_dft_r2c(static_cast<fftw_plan>(plan_fwd_), const_cast<double*>(phys.data()),
                         reinterpret_cast<fftw_complex*>(spec.data()));
    const double scale = 1.0 / grid_.transverse_size();
    for (cplx& c : spec) c *= scale;
}

void TransverseFft::inverse(std::span<const cplx> spec, std::span<double> phys) const {
    if (phys.size() != grid_.size() || spec.size() != spectral_size())
        throw GridMismatch("transform size mismatch");
    std::vector<cplx> scratch(spec.begin(), spec.end());
    fftw_execute_dft_c2r(static_cast<fftw_plan>(plan_inv_),
                         reinterpret_cast<fftw_complex*>(scratch.data()), phys.data());
}

void TransverseFft::inverse_destroy(std::span<cplx> spec, std::span<double> phys) const {
    if (phys.size() != grid_.size() || spec.size() != spectral_size())
        throw GridMismatch("transform size mismatch");
    fftw_execute_dft_c2r(static_cast<fftw_plan>(plan_inv_), reinterpret_cast<fftw_complex*>(spec.data()),
                         phys.data());
}

double TransverseFft::parseval(std::span<const cplx> line) const {
    double s = 0.0;
    for (int m = 0; m < modes_; ++m) s += weight_[m] * std::norm(line[m]);
    return s * grid_.transverse_measure();
}

}  // namespace zk
