#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace bhg {

/// Uniform radial grid on [0, R] carrying volume weights, so that
/// sum_i w_i f(r_i) approximates the integral of a radial f over R^N.
struct RadialGrid {
    int N = 0;
    double R = 0.0;
    std::size_t n = 0;
    double h = 0.0;
    double omega = 0.0;  // surface area of the unit sphere in R^N
    std::vector<double> r;
    std::vector<double> w;

    bool same_shape(const RadialGrid& other) const {
        return N == other.N && R == other.R && n == other.n;
    }
};

using GridPtr = std::shared_ptr<const RadialGrid>;

/// 2 pi^{N/2} / Gamma(N/2)
double surface_factor(int N);

/// Critical exponent 2N/(N-4) of the bilaplacian embedding.
double critical_exponent(int N);

/// Throws std::invalid_argument unless N >= 5, R > 0 and n >= 9 is odd.
GridPtr build_grid(int N, double R, std::size_t n);

/// sum_i w_i samples_i; throws on length mismatch or non-finite samples.
double integrate(const RadialGrid& grid, std::span<const double> samples);

}  // namespace bhg
