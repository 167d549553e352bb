#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "bhg/radial_grid.hpp"
#include "bhg/radial_operators.hpp"

namespace bhg::testing {

inline double rel_err(double got, double want) { return std::abs(got - want) / std::abs(want); }

inline GridPtr default_grid(int N = 5) { return build_grid(N, 20.0, 2001); }

template <class F>
RadialField sample(const GridPtr& grid, F f) {
    std::vector<double> v(grid->n);
    for (std::size_t i = 0; i < grid->n; ++i) v[i] = f(grid->r[i]);
    return RadialField(grid, std::move(v));
}

// int_{R^N} u^2 log|u| of the unit Gaussian: -(N/4)(1 + log pi)
inline double gaussian_entropy(int N) { return -0.25 * N * (1.0 + std::log(std::numbers::pi)); }

}  // namespace bhg::testing
