#include "bhg/test_fields.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "bhg/energy.hpp"

namespace bhg {

FieldGenerator::FieldGenerator(std::uint64_t seed, MixtureOptions opts) : rng_(seed), opts_(opts) {}

RadialField FieldGenerator::mixture(const GridPtr& grid) {
    std::uniform_int_distribution<int> count(1, opts_.max_components);
    std::uniform_real_distribution<double> width(opts_.width_min, opts_.width_max);
    std::uniform_real_distribution<double> center(0.0, opts_.center_max);
    std::uniform_real_distribution<double> amp(opts_.amplitude_min, opts_.amplitude_max);
    std::uniform_real_distribution<double> coin(0.0, 1.0);

    std::vector<double> v(grid->n, 0.0);
    const int k = count(rng_);
    for (int j = 0; j < k; ++j) {
        const double s = width(rng_);
        const double c = center(rng_);
        double a = amp(rng_);
        // the first component stays positive so the field cannot cancel out
        if (j > 0 && coin(rng_) < opts_.negative_probability) a = -0.5 * a;
        for (std::size_t i = 0; i < grid->n; ++i) {
            const double r = grid->r[i];
            v[i] += a * (std::exp(-(r - c) * (r - c) / (2 * s * s)) + std::exp(-(r + c) * (r + c) / (2 * s * s)));
        }
    }
    return RadialField(grid, std::move(v));
}

RadialField FieldGenerator::normalized(const GridPtr& grid) { return normalize(mixture(grid)); }

RadialField FieldGenerator::positive_member(const GridPtr& grid, const Nonlinearity& nl) {
    RadialField u = mixture(grid);
    for (int k = 0; k < 40; ++k) {
        if (integrate_G(u, nl, std::nullopt) > kMembershipFloor) return u;
        u = 2.0 * u;
    }
    throw std::runtime_error("positive_member: no amplitude puts the field in the positivity set");
}

RadialField normalize(const RadialField& u) {
    const double m = norms(u).l2_sq;
    if (!(m > 0.0)) throw std::invalid_argument("cannot normalize the zero field");
    return (1.0 / std::sqrt(m)) * u;
}

RadialField dilated_gaussian(const GridPtr& grid, double lambda) {
    if (!(lambda > 0.0)) throw std::invalid_argument("dilation factor must be positive");
    const double c = std::pow(lambda, 0.5 * grid->N) * std::pow(std::numbers::pi, -0.25 * grid->N);
    std::vector<double> v(grid->n);
    for (std::size_t i = 0; i < grid->n; ++i) {
        const double x = lambda * grid->r[i];
        v[i] = c * std::exp(-0.5 * x * x);
    }
    return RadialField(grid, std::move(v));
}

}  // namespace bhg
