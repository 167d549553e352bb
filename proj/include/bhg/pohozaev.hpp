#pragma once

#include <optional>

#include "bhg/nonlinearity.hpp"
#include "bhg/radial_operators.hpp"

namespace bhg {

struct PohozaevReport {
    double bilap_sq = 0.0;
    double G_int = 0.0;
    double residual = 0.0;           // bilap_sq - 2** G_int
    double relative_residual = 0.0;  // |residual| / max(bilap_sq, 1e-30)

    bool on_manifold(double tol) const { return relative_residual <= tol; }
};

struct Projection {
    RadialField field;
    double r = 1.0;  // dilation factor: field(x) = u(r x)
};

/// v(r_i) = u(scale * r_i) by degree-7 Lagrange interpolation on the grid,
/// with the even extension at the origin and u = 0 beyond R.
RadialField dilate(const RadialField& u, double scale);

/// Dilation onto {int |Lap u|^2 = 2** int G_eps(u)}. The closed-form factor
/// (2** G / B)^{1/4} is refined by a few fixed-point passes so the discrete
/// residual of the resampled field is also small. Empty when int G_eps(u)
/// is not positive.
std::optional<Projection> project_to_manifold(const RadialField& u, const Nonlinearity& nl,
                                              std::optional<double> eps);

PohozaevReport pohozaev_residual(const RadialField& u, const Nonlinearity& nl,
                                 std::optional<double> eps = std::nullopt);

}  // namespace bhg
