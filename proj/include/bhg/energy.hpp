#pragma once

#include <optional>
#include <vector>

#include "bhg/nonlinearity.hpp"
#include "bhg/radial_operators.hpp"

namespace bhg {

/// Fields with int G(u) at or below this are treated as outside the
/// positivity set, where the dilation projection is undefined.
inline constexpr double kMembershipFloor = 1e-12;

struct EnergyBreakdown {
    double bilap_sq = 0.0;
    double G_int = 0.0;
    double J_value = 0.0;  // bilap_sq / 2 - G_int
    std::optional<double> epsilon;
};

/// Pointwise G_eps(u_i), or G(u_i) when eps is empty.
std::vector<double> G_samples(const RadialField& u, const Nonlinearity& nl, std::optional<double> eps);
/// Pointwise g_eps(u_i), or g(u_i) when eps is empty.
std::vector<double> g_samples(const RadialField& u, const Nonlinearity& nl, std::optional<double> eps);

double integrate_G(const RadialField& u, const Nonlinearity& nl, std::optional<double> eps);

EnergyBreakdown energy(const RadialField& u, const Nonlinearity& nl, std::optional<double> eps);

/// bilaplacian(u) - g_eps(u)
RadialField l2_gradient(const RadialField& u, const Nonlinearity& nl, std::optional<double> eps);

/// (1/2 - 1/2**) B^{N/4} (2** G)^{-(N-4)/4} with B = int |Lap u|^2 and G = int G_eps(u);
/// the energy of the dilation of u onto the Pohozaev set. Empty when G <= floor.
std::optional<double> reduced_energy_from(int N, double bilap_sq, double G_int);
std::optional<double> reduced_energy(const RadialField& u, const Nonlinearity& nl,
                                     std::optional<double> eps);

struct AmplitudeMinimum {
    double t = 1.0;
    double value = 0.0;
};

/// min over t > 0 of reduced_energy(t u) with eps empty. Closed form for the
/// logarithmic model, where log t* = (N-4)/8 - int u^2 log|u| / int u^2;
/// Brent search in log t otherwise. Empty when no t puts t u in the
/// positivity set within the search bracket.
std::optional<AmplitudeMinimum> amplitude_minimum(const RadialField& u, const Nonlinearity& nl);

/// ||Lap^2 u - g(u)|| / ||g(u)|| in the grid L2 norm.
double pde_relative_residual(const RadialField& u, const Nonlinearity& nl);

}  // namespace bhg
