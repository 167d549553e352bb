#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace bhg {

// Square banded matrix, row-major band storage: entry (i, j) lives at
// data[i * width + (j - i + kl)] for -kl <= j - i <= ku.
class BandMatrix {
public:
    BandMatrix() = default;
    BandMatrix(std::size_t n, int kl, int ku);

    std::size_t size() const { return n_; }
    int lower() const { return kl_; }
    int upper() const { return ku_; }

    bool in_band(std::size_t i, std::size_t j) const;
    double get(std::size_t i, std::size_t j) const;
    double& at(std::size_t i, std::size_t j);

    std::vector<double> apply(std::span<const double> x) const;
    std::vector<double> apply_transpose(std::span<const double> x) const;

    void add_diagonal(std::span<const double> d);

    friend BandMatrix operator*(const BandMatrix& a, const BandMatrix& b);
    BandMatrix transpose() const;
    // A^T diag(d) A, the symmetric normal matrix of a weighted least squares form.
    BandMatrix weighted_normal(std::span<const double> d) const;

private:
    std::size_t n_ = 0;
    int kl_ = 0;
    int ku_ = 0;
    std::vector<double> data_;
};

// Solves A x = b for symmetric positive definite A (upper band used).
// Returns false when the factorization fails.
bool solve_spd(const BandMatrix& a, std::span<double> rhs);

// Solves A x = b by banded LU with partial pivoting.
bool solve_general(const BandMatrix& a, std::span<double> rhs);

}  // namespace bhg
