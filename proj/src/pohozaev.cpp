#include "bhg/pohozaev.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bhg/energy.hpp"

namespace bhg {

namespace {
constexpr int kDegree = 7;
}

RadialField dilate(const RadialField& u, double scale) {
    if (!(scale > 0.0) || !std::isfinite(scale)) throw std::invalid_argument("dilation scale must be positive and finite");
    const RadialGrid& g = u.grid();
    const long n = static_cast<long>(g.n);
    auto value = [&](long k) -> double {
        if (k < 0) k = -k;
        return k < n ? u[static_cast<std::size_t>(k)] : 0.0;
    };
    std::vector<double> out(g.n, 0.0);
    for (std::size_t i = 0; i < g.n; ++i) {
        const double x = scale * g.r[i] / g.h;  // target position in grid units
        if (x > static_cast<double>(n - 1) * (1.0 + 1e-14)) continue;
        const long j = static_cast<long>(std::floor(x));
        if (std::abs(x - std::round(x)) < 1e-13 * std::max(1.0, x)) {
            out[i] = value(std::lround(x));
            continue;
        }
        const long lo = j - kDegree / 2;
        double acc = 0.0;
        for (int a = 0; a <= kDegree; ++a) {
            double l = 1.0;
            for (int b = 0; b <= kDegree; ++b)
                if (b != a) l *= (x - static_cast<double>(lo + b)) / static_cast<double>(a - b);
            acc += l * value(lo + a);
        }
        out[i] = acc;
    }
    return RadialField(u.grid_ptr(), std::move(out));
}

std::optional<Projection> project_to_manifold(const RadialField& u, const Nonlinearity& nl,
                                              std::optional<double> eps) {
    const double crit = nl.critical();
    auto factor = [&](const RadialField& f) -> std::optional<double> {
        const double G = integrate_G(f, nl, eps);
        const double B = norms(f).bilap_sq;
        if (!(G > kMembershipFloor) || !(B > 0.0)) return std::nullopt;
        return std::pow(crit * G / B, 0.25);
    };
    const auto r0 = factor(u);
    if (!r0) return std::nullopt;
    if (std::abs(*r0 - 1.0) < 1e-14) return Projection{u, 1.0};

    double r = *r0;
    RadialField v = dilate(u, r);
    // B scales like r^{4-N} and G like r^{-N}, so the same closed form applied
    // to the resampled field corrects r multiplicatively.
    for (int pass = 0; pass < 4; ++pass) {
        const auto c = factor(v);
        if (!c || std::abs(*c - 1.0) < 1e-13) break;
        r *= *c;
        v = dilate(u, r);
    }
    return Projection{std::move(v), r};
}

PohozaevReport pohozaev_residual(const RadialField& u, const Nonlinearity& nl, std::optional<double> eps) {
    PohozaevReport rep;
    rep.bilap_sq = norms(u).bilap_sq;
    rep.G_int = integrate_G(u, nl, eps);
    rep.residual = rep.bilap_sq - nl.critical() * rep.G_int;
    rep.relative_residual = std::abs(rep.residual) / std::max(rep.bilap_sq, 1e-30);
    return rep;
}

}  // namespace bhg
