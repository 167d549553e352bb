#include <cmath>

#include "doctest.h"

#include "bhg/energy.hpp"
#include "bhg/ground_solver.hpp"
#include "bhg/pohozaev.hpp"
#include "bhg/test_fields.hpp"
#include "support.hpp"

using namespace bhg;
using bhg::testing::default_grid;
using bhg::testing::gaussian_entropy;
using bhg::testing::rel_err;
using bhg::testing::sample;

TEST_SUITE("pohozaev") {

TEST_CASE("zero field report") {
    const auto rep = pohozaev_residual(RadialField::zeros(default_grid(5)), Nonlinearity::logarithmic(5));
    CHECK(rep.residual == 0.0);
    CHECK(rep.relative_residual == 0.0);
    CHECK(rep.on_manifold(1e-12));
}

TEST_CASE("report fields") {
    const auto g = default_grid(5);
    const auto nl = Nonlinearity::power_mass(5, 4.0, 1.0);
    const auto u = 3.0 * unit_gaussian(g);
    const auto rep = pohozaev_residual(u, nl);
    CHECK(rep.bilap_sq == norms(u).bilap_sq);
    CHECK(rep.G_int == integrate_G(u, nl, std::nullopt));
    CHECK(rep.residual == rep.bilap_sq - 10.0 * rep.G_int);
    CHECK(rep.relative_residual == std::abs(rep.residual) / rep.bilap_sq);
    CHECK(rep.relative_residual >= 0.0);
    CHECK(pohozaev_residual(u, nl, 0.5).G_int == integrate_G(u, nl, 0.5));
}

TEST_CASE("dilation resampling") {
    const auto g = default_grid(5);
    const auto u = sample(g, [](double r) { return std::exp(-r * r); });
    const auto same = dilate(u, 1.0);
    for (std::size_t i = 0; i < g->n; ++i) CHECK(same[i] == u[i]);
    for (double s : {0.37, 0.5, 2.0, 3.3}) {
        const auto d = dilate(u, s);
        double worst = 0.0;
        for (std::size_t i = 0; i < g->n; ++i) {
            const double x = s * g->r[i];
            worst = std::max(worst, std::abs(d[i] - std::exp(-x * x)));
        }
        CAPTURE(s);
        CHECK(worst <= 1e-10);
    }
    // support pushed beyond R is cut off
    const auto wide = dilate(sample(g, [](double r) { return r < 19.0 ? 1.0 : 0.0; }), 2.0);
    CHECK(wide[g->n - 1] == 0.0);
    CHECK_THROWS_AS(dilate(u, 0.0), std::invalid_argument);
}

TEST_CASE("projection of an amplified gaussian") {
    const auto g = default_grid(5);
    const auto nl = Nonlinearity::logarithmic(5);
    const double t = 15.0;
    const double G = t * t * (gaussian_entropy(5) + std::log(t));
    const double B = 8.75 * t * t;
    const double r = std::pow(10.0 * G / B, 0.25);
    CHECK(r == doctest::Approx(0.41965).epsilon(1e-4));
    const auto p = project_to_manifold(t * unit_gaussian(g), nl, std::nullopt);
    REQUIRE(p);
    CHECK(rel_err(p->r, r) <= 1e-6);
    CHECK(pohozaev_residual(p->field, nl).relative_residual <= 1e-6);
}

TEST_CASE("projection outside the positivity set") {
    const auto g = default_grid(5);
    CHECK_FALSE(project_to_manifold(unit_gaussian(g), Nonlinearity::logarithmic(5), std::nullopt));
    CHECK_FALSE(project_to_manifold(RadialField::zeros(g), Nonlinearity::logarithmic(5), std::nullopt));
    // positive for eps = 1/2 is not enough once eps is gone
    CHECK_FALSE(project_to_manifold(unit_gaussian(g), Nonlinearity::power_mass(5, 4.0, 1.0), std::nullopt));
}

TEST_CASE("projection properties on random members") {
    for (int N : {5, 6, 8}) {
        const auto g = default_grid(N);
        FieldGenerator gen(60 + N);
        for (const auto& nl : {Nonlinearity::logarithmic(N), Nonlinearity::power_mass(N, N == 8 ? 3.0 : 4.0, 1.0)}) {
            for (int k = 0; k < 10; ++k) {
                const auto u = gen.positive_member(g, nl);
                for (std::optional<double> eps : {std::optional<double>(), std::optional<double>(0.25)}) {
                    const auto p = project_to_manifold(u, nl, eps);
                    REQUIRE(p);
                    CAPTURE(N);
                    CAPTURE(nl.describe());
                    const auto rep = pohozaev_residual(p->field, nl, eps);
                    CHECK(rep.relative_residual <= 1e-6);

                    // idempotence
                    const auto again = project_to_manifold(p->field, nl, eps);
                    REQUIRE(again);
                    CHECK(std::abs(again->r - 1.0) <= 1e-6);

                    // homogeneity of the bilaplacian norm under u -> u(r .), exact once
                    // the dilated field has left nothing at the truncation radius
                    double edge = 0.0, peak = 0.0;
                    for (std::size_t i = 0; i < g->n; ++i) {
                        peak = std::max(peak, std::abs(p->field[i]));
                        if (g->r[i] >= 0.9 * g->R) edge = std::max(edge, std::abs(p->field[i]));
                    }
                    if (edge <= 1e-12 * peak)
                        CHECK(rel_err(norms(p->field).bilap_sq, std::pow(p->r, 4.0 - N) * norms(u).bilap_sq) <= 1e-6);

                    // energy on the manifold
                    if (rep.relative_residual <= 1e-8) {
                        const double J = energy(p->field, nl, eps).J_value;
                        CHECK(rel_err(J, (0.5 - 1.0 / nl.critical()) * rep.bilap_sq) <= 1e-6);
                    }
                }
            }
        }
    }
}

TEST_CASE("a field on the manifold is a fixed point") {
    const auto g = default_grid(5);
    const auto nl = Nonlinearity::power_mass(5, 4.0, 1.0);
    // t^4 int phi^4 / 4 > t^2 / 2 needs t > 14.07 for the unit gaussian phi
    const auto p = project_to_manifold(20.0 * unit_gaussian(g), nl, std::nullopt);
    REQUIRE(p);
    const auto q = project_to_manifold(p->field, nl, std::nullopt);
    REQUIRE(q);
    CHECK(std::abs(q->r - 1.0) <= 1e-10);
    for (std::size_t i = 0; i < g->n; i += 97) CHECK(q->field[i] == doctest::Approx(p->field[i]).epsilon(1e-8));
}

}  // TEST_SUITE
