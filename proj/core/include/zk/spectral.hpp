#pragma once

#include <complex>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

#include "zk/grid.hpp"

namespace zk {

using cplx = std::complex<double>;

// Real-to-half-complex transforms over the transverse axes of every x line.
// Spectral layout: index = i * modes() + m. Coefficients are normalized so the
// inverse transform is a plain sum over modes.
class TransverseFft {
public:
    explicit TransverseFft(const Grid& g);
    ~TransverseFft();
    TransverseFft(const TransverseFft&) = delete;
    TransverseFft& operator=(const TransverseFft&) = delete;

    const Grid& grid() const { return grid_; }
    int modes() const { return modes_; }
    std::size_t spectral_size() const { return static_cast<std::size_t>(grid_.nx) * modes_; }

    void forward(std::span<const double> phys, std::span<cplx> spec) const;
    void inverse(std::span<const cplx> spec, std::span<double> phys) const;
    // Inverse transform that overwrites `spec`.
    void inverse_destroy(std::span<cplx> spec, std::span<double> phys) const;

    // ky^2 and kz^2 of mode m (kz2 is zero in 2D).
    double ky2(int m) const { return ky2_[m]; }
    double kz2(int m) const { return kz2_[m]; }
    // Multiplicity of a half-spectrum mode in the full spectrum (1 or 2).
    double weight(int m) const { return weight_[m]; }
    // False for modes removed by the 2/3 rule.
    bool resolved(int m) const { return keep_[m]; }

    // Sum over the transverse box of |f|^2 given the spectra of one x line.
    double parseval(std::span<const cplx> line) const;

private:
    Grid grid_;
    int modes_ = 0;
    std::vector<double> ky2_, kz2_, weight_;
    std::vector<bool> keep_;
    void* plan_fwd_ = nullptr;
    void* plan_inv_ = nullptr;
};

}  // namespace zk
