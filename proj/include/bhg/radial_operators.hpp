#pragma once

#include <vector>

#include "bhg/band_matrix.hpp"
#include "bhg/radial_grid.hpp"

namespace bhg {

/// Radial profile u(r_i) on a shared grid. Values are checked finite.
class RadialField {
public:
    RadialField(GridPtr grid, std::vector<double> values);
    static RadialField zeros(GridPtr grid);

    const RadialGrid& grid() const { return *grid_; }
    const GridPtr& grid_ptr() const { return grid_; }
    const std::vector<double>& values() const { return u_; }
    std::size_t size() const { return u_.size(); }
    double operator[](std::size_t i) const { return u_[i]; }

    // Throws std::invalid_argument unless both fields share (N, R, n).
    void require_compatible(const RadialField& other) const;

private:
    GridPtr grid_;
    std::vector<double> u_;
};

RadialField operator+(const RadialField& a, const RadialField& b);
RadialField operator-(const RadialField& a, const RadialField& b);
RadialField operator*(double s, const RadialField& a);

struct SobolevNorms {
    double l2_sq = 0.0;     // int |u|^2
    double grad_sq = 0.0;   // int |grad u|^2
    double bilap_sq = 0.0;  // int |Lap u|^2
};

/// Fourth-order finite-difference Laplacian u'' + (N-1)/r u' as a band matrix
/// (two sub and two super diagonals). The origin row is N u''(0); ghost nodes
/// use the even extension u(-r) = u(r) and u = 0 beyond R.
BandMatrix laplacian_matrix(const RadialGrid& grid);

/// Fourth-order radial derivative u'(r), zero at the origin, same ghost rules.
BandMatrix derivative_matrix(const RadialGrid& grid);

RadialField laplacian(const RadialField& u);
RadialField bilaplacian(const RadialField& u);
RadialField radial_derivative(const RadialField& u);
SobolevNorms norms(const RadialField& u);

}  // namespace bhg
