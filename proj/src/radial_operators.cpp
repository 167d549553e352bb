#include "bhg/radial_operators.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace bhg {

RadialField::RadialField(GridPtr grid, std::vector<double> values)
    : grid_(std::move(grid)), u_(std::move(values)) {
    if (!grid_) throw std::invalid_argument("RadialField: null grid");
    if (u_.size() != grid_->n)
        throw std::invalid_argument("RadialField: expected " + std::to_string(grid_->n) +
                                    " values, got " + std::to_string(u_.size()));
    for (std::size_t i = 0; i < u_.size(); ++i)
        if (!std::isfinite(u_[i]))
            throw std::invalid_argument("RadialField: non-finite value at index " + std::to_string(i));
}

RadialField RadialField::zeros(GridPtr grid) {
    const std::size_t n = grid ? grid->n : 0;
    return RadialField(std::move(grid), std::vector<double>(n, 0.0));
}

void RadialField::require_compatible(const RadialField& other) const {
    if (!grid_->same_shape(*other.grid_))
        throw std::invalid_argument("RadialField: incompatible grids");
}

RadialField operator+(const RadialField& a, const RadialField& b) {
    a.require_compatible(b);
    std::vector<double> v(a.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = a[i] + b[i];
    return RadialField(a.grid_ptr(), std::move(v));
}

RadialField operator-(const RadialField& a, const RadialField& b) {
    a.require_compatible(b);
    std::vector<double> v(a.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = a[i] - b[i];
    return RadialField(a.grid_ptr(), std::move(v));
}

RadialField operator*(double s, const RadialField& a) {
    std::vector<double> v(a.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = s * a[i];
    return RadialField(a.grid_ptr(), std::move(v));
}

namespace {

constexpr int kHalf = 3;  // 7-point stencils
using Stencil = std::array<double, 2 * kHalf + 1>;

// Adds a stencil centred at row i, folding ghost columns.
void add_stencil(BandMatrix& m, std::size_t i, const Stencil& c) {
    const long n = static_cast<long>(m.size());
    for (int k = 0; k < 2 * kHalf + 1; ++k) {
        long j = static_cast<long>(i) + k - kHalf;
        if (j < 0) j = -j;     // even reflection
        if (j >= n) continue;  // zero beyond R
        m.at(i, static_cast<std::size_t>(j)) += c[k];
    }
}

constexpr Stencil kSecond{1.0 / 90, -3.0 / 20, 3.0 / 2, -49.0 / 18, 3.0 / 2, -3.0 / 20, 1.0 / 90};
constexpr Stencil kFirst{-1.0 / 60, 3.0 / 20, -3.0 / 4, 0.0, 3.0 / 4, -3.0 / 20, 1.0 / 60};

}  // namespace

BandMatrix laplacian_matrix(const RadialGrid& grid) {
    BandMatrix m(grid.n, kHalf, kHalf + 1);
    const double h2 = grid.h * grid.h;
    Stencil c{};
    for (int k = 0; k < 2 * kHalf + 1; ++k) c[k] = grid.N * kSecond[k] / h2;
    add_stencil(m, 0, c);
    // N u''(0) alone leaves an h^6 error that does not match the r -> 0 limit of the
    // interior rows; (N-1) 3/560 h^6 u^(8)(0) from the eighth difference removes the jump
    if (grid.n > 4) {
        const std::array<double, 5> d{70.0, -112.0, 56.0, -16.0, 2.0};
        for (std::size_t j = 0; j < d.size(); ++j) m.at(0, j) += (grid.N - 1) * 3.0 / 560.0 * d[j] / h2;
    }
    for (std::size_t i = 1; i < grid.n; ++i) {
        const double a = (grid.N - 1) / (grid.r[i] * grid.h);
        for (int k = 0; k < 2 * kHalf + 1; ++k) c[k] = kSecond[k] / h2 + a * kFirst[k];
        add_stencil(m, i, c);
    }
    return m;
}

BandMatrix derivative_matrix(const RadialGrid& grid) {
    BandMatrix m(grid.n, kHalf, kHalf);
    Stencil c{};
    for (int k = 0; k < 2 * kHalf + 1; ++k) c[k] = kFirst[k] / grid.h;
    for (std::size_t i = 1; i < grid.n; ++i) add_stencil(m, i, c);
    return m;
}

RadialField laplacian(const RadialField& u) {
    return RadialField(u.grid_ptr(), laplacian_matrix(u.grid()).apply(u.values()));
}

RadialField bilaplacian(const RadialField& u) {
    const BandMatrix lap = laplacian_matrix(u.grid());
    return RadialField(u.grid_ptr(), lap.apply(lap.apply(u.values())));
}

RadialField radial_derivative(const RadialField& u) {
    return RadialField(u.grid_ptr(), derivative_matrix(u.grid()).apply(u.values()));
}

SobolevNorms norms(const RadialField& u) {
    const RadialGrid& g = u.grid();
    const auto lu = laplacian_matrix(g).apply(u.values());
    const auto du = derivative_matrix(g).apply(u.values());
    SobolevNorms s;
    for (std::size_t i = 0; i < g.n; ++i) {
        s.l2_sq += g.w[i] * u[i] * u[i];
        s.grad_sq += g.w[i] * du[i] * du[i];
        s.bilap_sq += g.w[i] * lu[i] * lu[i];
    }
    return s;
}

}  // namespace bhg
