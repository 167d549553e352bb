#include "bhg/radial_grid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace bhg {

double surface_factor(int N) {
    return 2.0 * std::pow(std::numbers::pi, 0.5 * N) / std::tgamma(0.5 * N);
}

double critical_exponent(int N) {
    if (N <= 4) throw std::invalid_argument("critical exponent requires N >= 5");
    return 2.0 * N / (N - 4.0);
}

GridPtr build_grid(int N, double R, std::size_t n) {
    if (N < 5) throw std::invalid_argument("grid dimension must be >= 5, got " + std::to_string(N));
    if (!(R > 0.0) || !std::isfinite(R)) throw std::invalid_argument("grid radius must be positive");
    if (n < 9 || n % 2 == 0)
        throw std::invalid_argument("grid node count must be odd and >= 9, got " + std::to_string(n));

    auto g = std::make_shared<RadialGrid>();
    g->N = N;
    g->R = R;
    g->n = n;
    g->h = R / static_cast<double>(n - 1);
    g->omega = surface_factor(N);
    g->r.resize(n);
    g->w.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        g->r[i] = i == n - 1 ? R : static_cast<double>(i) * g->h;
        g->w[i] = g->omega * g->h * std::pow(g->r[i], N - 1);
    }
    // Trapezoid rule. The integrand r^{N-1} f vanishes to high order at the
    // origin, so only the outer end needs the Gregory correction.
    g->w[n - 1] *= 3.0 / 8.0;
    g->w[n - 2] *= 7.0 / 6.0;
    g->w[n - 3] *= 23.0 / 24.0;
    // volume of the ball of radius h/2, so the centre value carries weight
    g->w[0] = g->omega * std::pow(0.5 * g->h, N) / N;
    return g;
}

double integrate(const RadialGrid& grid, std::span<const double> samples) {
    if (samples.size() != grid.n)
        throw std::invalid_argument("integrate: expected " + std::to_string(grid.n) +
                                    " samples, got " + std::to_string(samples.size()));
    double acc = 0.0;
    for (std::size_t i = 0; i < grid.n; ++i) {
        if (!std::isfinite(samples[i]))
            throw std::invalid_argument("integrate: non-finite sample at index " + std::to_string(i));
        acc += grid.w[i] * samples[i];
    }
    return acc;
}

}  // namespace bhg
