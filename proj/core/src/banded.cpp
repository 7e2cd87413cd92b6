#include "zk/banded.hpp"

#include <algorithm>
#include <string>

#include "zk/error.hpp"

extern "C" {
void dgbtrf_(const int* m, const int* n, const int* kl, const int* ku, double* ab, const int* ldab,
             int* ipiv, int* info);
void dgbtrs_(const char* trans, const int* n, const int* kl, const int* ku, const int* nrhs,
             const double* ab, const int* ldab, const int* ipiv, double* b, const int* ldb,
             int* info, std::size_t trans_len);
}

namespace zk {

BandedMatrix::BandedMatrix(int n, int kl, int ku)
    : n_(n), kl_(kl), ku_(ku), a_(static_cast<std::size_t>(n) * (kl + ku + 1), 0.0) {}

double BandedMatrix::get(int i, int j) const {
    if (i < 0 || j < 0 || i >= n_ || j >= n_ || !in_band(i, j)) return 0.0;
    return a_[static_cast<std::size_t>(i) * width() + (j - i + kl_)];
}

void BandedMatrix::set(int i, int j, double v) {
    if (i < 0 || j < 0 || i >= n_ || j >= n_ || !in_band(i, j))
        throw InvalidArgument("banded entry outside band");
    a_[static_cast<std::size_t>(i) * width() + (j - i + kl_)] = v;
}

void BandedMatrix::add(int i, int j, double v) { set(i, j, get(i, j) + v); }

BandedMatrix BandedMatrix::scaled(double s) const {
    BandedMatrix r(*this);
    for (double& v : r.a_) v *= s;
    return r;
}

BandedMatrix BandedMatrix::plus(const BandedMatrix& other, double s) const {
    if (other.n_ != n_ || other.kl_ > kl_ || other.ku_ > ku_)
        throw InvalidArgument("incompatible banded matrices");
    BandedMatrix r(*this);
    for (int i = 0; i < n_; ++i)
        for (int j = i - other.kl_; j <= i + other.ku_; ++j)
            if (j >= 0 && j < n_) r.add(i, j, s * other.get(i, j));
    return r;
}

BandedMatrix BandedMatrix::identity(int n, int kl, int ku) {
    BandedMatrix r(n, kl, ku);
    for (int i = 0; i < n; ++i) r.set(i, i, 1.0);
    return r;
}

BandedLU::BandedLU(const BandedMatrix& A, int tag)
    : n_(A.n()), kl_(A.kl()), ku_(A.ku()), ldab_(2 * A.kl() + A.ku() + 1) {
    ab_.assign(static_cast<std::size_t>(ldab_) * n_, 0.0);
    ipiv_.assign(n_, 0);
    // LAPACK band storage: AB(kl + ku + i - j, j) = A(i, j), column-major.
    for (int j = 0; j < n_; ++j)
        for (int i = j - ku_; i <= j + kl_; ++i)
            if (i >= 0 && i < n_)
                ab_[static_cast<std::size_t>(j) * ldab_ + (kl_ + ku_ + i - j)] = A.get(i, j);
    int info = 0;
    dgbtrf_(&n_, &n_, &kl_, &ku_, ab_.data(), &ldab_, ipiv_.data(), &info);
    if (info != 0)
        throw SingularSystem("singular banded system for transverse mode " + std::to_string(tag) +
                                 " (pivot " + std::to_string(info) + ")",
                             tag);
    inv_diag_.resize(n_);
    for (int j = 0; j < n_; ++j) inv_diag_[j] = 1.0 / ab_[static_cast<std::size_t>(j) * ldab_ + kl_ + ku_];
}

void BandedLU::solve(double* b, int nrhs) const {
    int info = 0;
    const char trans = 'N';
    dgbtrs_(&trans, &n_, &kl_, &ku_, &nrhs, ab_.data(), &ldab_, ipiv_.data(), b, &n_, &info, 1);
    if (info != 0) throw Error("dgbtrs failed");
}

void BandedLU::solve(std::complex<double>* b, std::size_t stride) const {
    // Same sweeps as dgbtrs, written out to avoid per-column BLAS calls on narrow bands.
    const int kv = kl_ + ku_;
    auto B = [&](int i) -> std::complex<double>& { return b[i * stride]; };
    auto AB = [&](int r, int j) { return ab_[static_cast<std::size_t>(j) * ldab_ + r]; };
    for (int j = 0; j < n_ - 1; ++j) {
        const int lm = std::min(kl_, n_ - j - 1);
        const int l = ipiv_[j] - 1;
        if (l != j) std::swap(B(l), B(j));
        const std::complex<double> bj = B(j);
        for (int i = 1; i <= lm; ++i) B(j + i) -= AB(kv + i, j) * bj;
    }
    for (int j = n_ - 1; j >= 0; --j) {
        B(j) *= inv_diag_[j];
        const std::complex<double> bj = B(j);
        const int i0 = std::max(0, j - kv);
        for (int i = i0; i < j; ++i) B(i) -= AB(kv + i - j, j) * bj;
    }
}

}  // namespace zk
