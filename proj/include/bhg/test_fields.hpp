#pragma once

#include <cstdint>
#include <random>

#include "bhg/nonlinearity.hpp"
#include "bhg/radial_operators.hpp"

namespace bhg {

/// Parameters of the random radial Gaussian mixtures
///   u(r) = sum_k a_k (exp(-(r - c_k)^2 / 2 s_k^2) + exp(-(r + c_k)^2 / 2 s_k^2)).
/// The mirrored term keeps u even in r, hence smooth on R^N.
struct MixtureOptions {
    int max_components = 3;
    double width_min = 0.7;
    double width_max = 1.2;
    double center_max = 1.5;
    double amplitude_min = 0.3;
    double amplitude_max = 1.0;
    double negative_probability = 0.25;  // chance that a component enters with a minus sign
};

class FieldGenerator {
public:
    explicit FieldGenerator(std::uint64_t seed, MixtureOptions opts = {});

    RadialField mixture(const GridPtr& grid);
    /// mixture scaled to unit L2 norm
    RadialField normalized(const GridPtr& grid);
    /// mixture scaled by doubling until int G(u) is positive
    RadialField positive_member(const GridPtr& grid, const Nonlinearity& nl);

private:
    std::mt19937_64 rng_;
    MixtureOptions opts_;
};

/// u / ||u||_2; throws std::invalid_argument for the zero field.
RadialField normalize(const RadialField& u);

/// lambda^{N/2} pi^{-N/4} exp(-lambda^2 r^2 / 2), unit L2 norm for every lambda.
RadialField dilated_gaussian(const GridPtr& grid, double lambda);

}  // namespace bhg
