#include "bhg/energy.hpp"

#include <boost/math/tools/minima.hpp>

#include <cmath>
#include <limits>

namespace bhg {

std::vector<double> G_samples(const RadialField& u, const Nonlinearity& nl, std::optional<double> eps) {
    std::vector<double> out(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) out[i] = eval_G_eps(nl, eps, u[i]);
    return out;
}

std::vector<double> g_samples(const RadialField& u, const Nonlinearity& nl, std::optional<double> eps) {
    std::vector<double> out(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) out[i] = eval_g_eps(nl, eps, u[i]);
    return out;
}

double integrate_G(const RadialField& u, const Nonlinearity& nl, std::optional<double> eps) {
    return integrate(u.grid(), G_samples(u, nl, eps));
}

EnergyBreakdown energy(const RadialField& u, const Nonlinearity& nl, std::optional<double> eps) {
    EnergyBreakdown e;
    e.epsilon = eps;
    e.bilap_sq = norms(u).bilap_sq;
    e.G_int = integrate_G(u, nl, eps);
    e.J_value = 0.5 * e.bilap_sq - e.G_int;
    return e;
}

RadialField l2_gradient(const RadialField& u, const Nonlinearity& nl, std::optional<double> eps) {
    std::vector<double> v = bilaplacian(u).values();
    const auto gv = g_samples(u, nl, eps);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] -= gv[i];
    return RadialField(u.grid_ptr(), std::move(v));
}

std::optional<double> reduced_energy_from(int N, double bilap_sq, double G_int) {
    if (!(G_int > kMembershipFloor) || !(bilap_sq > 0.0)) return std::nullopt;
    const double crit = critical_exponent(N);
    const double c = 0.5 - 1.0 / crit;
    // logs keep B^{N/4} from overflowing for strongly peaked fields
    return c * std::exp(0.25 * N * std::log(bilap_sq) - 0.25 * (N - 4) * std::log(crit * G_int));
}

std::optional<double> reduced_energy(const RadialField& u, const Nonlinearity& nl,
                                     std::optional<double> eps) {
    return reduced_energy_from(u.grid().N, norms(u).bilap_sq, integrate_G(u, nl, eps));
}

std::optional<AmplitudeMinimum> amplitude_minimum(const RadialField& u, const Nonlinearity& nl) {
    const int N = u.grid().N;
    const double B = norms(u).bilap_sq;
    if (nl.is_log()) {
        const auto& w = u.grid().w;
        double M = 0.0;
        for (std::size_t i = 0; i < u.size(); ++i) M += w[i] * u[i] * u[i];
        if (!(M > 0.0)) return std::nullopt;
        const double A = integrate_G(u, nl, std::nullopt);
        const double t = std::exp((N - 4) / 8.0 - A / M);
        // int G(t u) = t^2 (A + M log t)
        const auto e = reduced_energy_from(N, t * t * B, t * t * (A + M * std::log(t)));
        if (!e) return std::nullopt;
        return AmplitudeMinimum{t, *e};
    }
    auto f = [&](double tau) {
        const double t = std::exp(tau);
        const auto e = reduced_energy_from(N, t * t * B, integrate_G(t * u, nl, std::nullopt));
        return e ? *e : std::numeric_limits<double>::max();
    };
    const auto [tau, val] = boost::math::tools::brent_find_minima(f, -8.0, 8.0, 52);
    if (val == std::numeric_limits<double>::max()) return std::nullopt;
    return AmplitudeMinimum{std::exp(tau), val};
}

double pde_relative_residual(const RadialField& u, const Nonlinearity& nl) {
    const auto lu = bilaplacian(u).values();
    const auto gv = g_samples(u, nl, std::nullopt);
    const auto& w = u.grid().w;
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < lu.size(); ++i) {
        num += w[i] * (lu[i] - gv[i]) * (lu[i] - gv[i]);
        den += w[i] * gv[i] * gv[i];
    }
    return den > 0.0 ? std::sqrt(num / den) : (num > 0.0 ? INFINITY : 0.0);
}

}  // namespace bhg
