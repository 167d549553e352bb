#include "bhg/band_matrix.hpp"

#include <lapacke.h>

#include <algorithm>
#include <stdexcept>

namespace bhg {

BandMatrix::BandMatrix(std::size_t n, int kl, int ku)
    : n_(n), kl_(kl), ku_(ku), data_(n * static_cast<std::size_t>(kl + ku + 1), 0.0) {
    if (kl < 0 || ku < 0) throw std::invalid_argument("BandMatrix: negative bandwidth");
}

bool BandMatrix::in_band(std::size_t i, std::size_t j) const {
    const long d = static_cast<long>(j) - static_cast<long>(i);
    return i < n_ && j < n_ && d >= -kl_ && d <= ku_;
}

double BandMatrix::get(std::size_t i, std::size_t j) const {
    if (!in_band(i, j)) return 0.0;
    return data_[i * (kl_ + ku_ + 1) + (j + kl_ - i)];
}

double& BandMatrix::at(std::size_t i, std::size_t j) {
    if (!in_band(i, j)) throw std::out_of_range("BandMatrix: entry outside band");
    return data_[i * (kl_ + ku_ + 1) + (j + kl_ - i)];
}

std::vector<double> BandMatrix::apply(std::span<const double> x) const {
    if (x.size() != n_) throw std::invalid_argument("BandMatrix::apply: size mismatch");
    std::vector<double> y(n_, 0.0);
    const std::size_t width = kl_ + ku_ + 1;
    for (std::size_t i = 0; i < n_; ++i) {
        const std::size_t j0 = i >= static_cast<std::size_t>(kl_) ? i - kl_ : 0;
        const std::size_t j1 = std::min(n_ - 1, i + ku_);
        const double* row = &data_[i * width];
        long double acc = 0.0L;
        for (std::size_t j = j0; j <= j1; ++j) acc += static_cast<long double>(row[j + kl_ - i]) * x[j];
        y[i] = static_cast<double>(acc);
    }
    return y;
}

std::vector<double> BandMatrix::apply_transpose(std::span<const double> x) const {
    if (x.size() != n_) throw std::invalid_argument("BandMatrix::apply_transpose: size mismatch");
    std::vector<double> y(n_, 0.0);
    const std::size_t width = kl_ + ku_ + 1;
    for (std::size_t i = 0; i < n_; ++i) {
        const std::size_t j0 = i >= static_cast<std::size_t>(kl_) ? i - kl_ : 0;
        const std::size_t j1 = std::min(n_ - 1, i + ku_);
        const double* row = &data_[i * width];
        for (std::size_t j = j0; j <= j1; ++j) y[j] += row[j + kl_ - i] * x[i];
    }
    return y;
}

void BandMatrix::add_diagonal(std::span<const double> d) {
    if (d.size() != n_) throw std::invalid_argument("BandMatrix::add_diagonal: size mismatch");
    for (std::size_t i = 0; i < n_; ++i) at(i, i) += d[i];
}

BandMatrix operator*(const BandMatrix& a, const BandMatrix& b) {
    if (a.n_ != b.n_) throw std::invalid_argument("BandMatrix product: size mismatch");
    BandMatrix c(a.n_, a.kl_ + b.kl_, a.ku_ + b.ku_);
    const std::size_t n = a.n_;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t k0 = i >= static_cast<std::size_t>(a.kl_) ? i - a.kl_ : 0;
        const std::size_t k1 = std::min(n - 1, i + a.ku_);
        for (std::size_t k = k0; k <= k1; ++k) {
            const double aik = a.get(i, k);
            if (aik == 0.0) continue;
            const std::size_t j0 = k >= static_cast<std::size_t>(b.kl_) ? k - b.kl_ : 0;
            const std::size_t j1 = std::min(n - 1, k + b.ku_);
            for (std::size_t j = j0; j <= j1; ++j) c.at(i, j) += aik * b.get(k, j);
        }
    }
    return c;
}

BandMatrix BandMatrix::transpose() const {
    BandMatrix t(n_, ku_, kl_);
    for (std::size_t i = 0; i < n_; ++i) {
        const std::size_t j0 = i >= static_cast<std::size_t>(kl_) ? i - kl_ : 0;
        const std::size_t j1 = std::min(n_ - 1, i + ku_);
        for (std::size_t j = j0; j <= j1; ++j) t.at(j, i) = get(i, j);
    }
    return t;
}

BandMatrix BandMatrix::weighted_normal(std::span<const double> d) const {
    if (d.size() != n_) throw std::invalid_argument("weighted_normal: size mismatch");
    const int bw = kl_ + ku_;
    BandMatrix m(n_, bw, bw);
    // (A^T D A)_{jk} = sum_i a_ij d_i a_ik
    for (std::size_t i = 0; i < n_; ++i) {
        const std::size_t j0 = i >= static_cast<std::size_t>(kl_) ? i - kl_ : 0;
        const std::size_t j1 = std::min(n_ - 1, i + ku_);
        for (std::size_t j = j0; j <= j1; ++j) {
            const double aij = get(i, j) * d[i];
            if (aij == 0.0) continue;
            for (std::size_t k = j0; k <= j1; ++k) m.at(j, k) += aij * get(i, k);
        }
    }
    return m;
}

bool solve_spd(const BandMatrix& a, std::span<double> rhs) {
    const auto n = static_cast<lapack_int>(a.size());
    if (rhs.size() != a.size()) throw std::invalid_argument("solve_spd: size mismatch");
    const int kd = a.upper();
    const lapack_int ldab = kd + 1;
    // column-major upper band: ab[(kd + i - j) + j * ldab] = A(i, j), i <= j
    std::vector<double> ab(static_cast<std::size_t>(ldab) * n, 0.0);
    for (lapack_int j = 0; j < n; ++j)
        for (lapack_int i = std::max<lapack_int>(0, j - kd); i <= j; ++i)
            ab[(kd + i - j) + static_cast<std::size_t>(j) * ldab] = a.get(i, j);
    const lapack_int info =
        LAPACKE_dpbsv(LAPACK_COL_MAJOR, 'U', n, kd, 1, ab.data(), ldab, rhs.data(), n);
    return info == 0;
}

bool solve_general(const BandMatrix& a, std::span<double> rhs) {
    const auto n = static_cast<lapack_int>(a.size());
    if (rhs.size() != a.size()) throw std::invalid_argument("solve_general: size mismatch");
    const int kl = a.lower();
    const int ku = a.upper();
    const lapack_int ldab = 2 * kl + ku + 1;
    // column-major with kl extra rows for fill-in: ab[(kl + ku + i - j) + j * ldab]
    std::vector<double> ab(static_cast<std::size_t>(ldab) * n, 0.0);
    for (lapack_int j = 0; j < n; ++j)
        for (lapack_int i = std::max<lapack_int>(0, j - ku); i <= std::min<lapack_int>(n - 1, j + kl); ++i)
            ab[(kl + ku + i - j) + static_cast<std::size_t>(j) * ldab] = a.get(i, j);
    std::vector<lapack_int> ipiv(n);
    const lapack_int info = LAPACKE_dgbsv(LAPACK_COL_MAJOR, n, kl, ku, 1, ab.data(), ldab,
                                          ipiv.data(), rhs.data(), n);
    return info == 0;
}

}  // namespace bhg
