#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace zk {

// Square banded matrix with kl sub- and ku super-diagonals, row-major by diagonal.
class BandedMatrix {
public:
    BandedMatrix() = default;
    BandedMatrix(int n, int kl, int ku);

    int n() const { return n_; }
    int kl() const { return kl_; }
    int ku() const { return ku_; }
    bool in_band(int i, int j) const { return j - i >= -kl_ && j - i <= ku_; }
    double get(int i, int j) const;
    void set(int i, int j, double v);
    void add(int i, int j, double v);

    // out = A * in for vectors laid out with the given strides.
    template <class T>
    void apply(const T* in, T* out, std::size_t stride = 1) const {
        apply(in, out, stride, stride);
    }
    template <class T>
    void apply(const T* in, T* out, std::size_t istride, std::size_t ostride) const {
        for (int i = 0; i < n_; ++i) {
            T acc{};
            const int j0 = i - kl_ < 0 ? 0 : i - kl_;
            const int j1 = i + ku_ >= n_ ? n_ - 1 : i + ku_;
            const double* row = &a_[static_cast<std::size_t>(i) * width()];
            for (int j = j0; j <= j1; ++j) acc += row[j - i + kl_] * in[j * istride];
            out[i * ostride] = acc;
        }
    }

    BandedMatrix scaled(double s) const;
    // this + s * other; bands must be compatible.
    BandedMatrix plus(const BandedMatrix& other, double s) const;
    static BandedMatrix identity(int n, int kl, int ku);

private:
    int width() const { return kl_ + ku_ + 1; }
    int n_ = 0, kl_ = 0, ku_ = 0;
    std::vector<double> a_;
};

// LU factorization with partial pivoting (LAPACK dgbtrf / dgbtrs).
class BandedLU {
public:
    BandedLU() = default;
    // Throws SingularSystem carrying `tag` when a pivot vanishes.
    BandedLU(const BandedMatrix& A, int tag = -1);

    int n() const { return n_; }
    // Solves in place for nrhs column-major right-hand sides of length n.
    void solve(double* b, int nrhs) const;
    // Solves in place for one complex right-hand side with the given stride.
    void solve(std::complex<double>* b, std::size_t stride = 1) const;

private:
    int n_ = 0, kl_ = 0, ku_ = 0, ldab_ = 0;
    std::vector<double> ab_;
    std::vector<double> inv_diag_;
    std::vector<int> ipiv_;
};

}  // namespace zk
