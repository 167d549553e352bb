#include <cmath>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "doctest.h"

#include "bhg/nonlinearity.hpp"
#include "bhg/radial_grid.hpp"
#include "support.hpp"

using namespace bhg;
using bhg::testing::rel_err;

namespace {

// G(s) = s^4 / 4: g >= 0 on [0, inf), so g_minus vanishes there
class QuarticModel final : public Model {
public:
    std::string name() const override { return "quartic"; }
    double G(double s) const override { return 0.25 * s * s * s * s; }
    double g(double s) const override { return s * s * s; }
};

// the power-mass model through the generic quadrature routes only
class GenericPowerMass final : public Model {
public:
    std::string name() const override { return "generic_power_mass"; }
    double G(double s) const override { return 0.25 * s * s * s * s - 0.5 * s * s; }
    double g(double s) const override { return s * s * s - s; }
};

std::vector<double> sample_points() {
    std::vector<double> s;
    for (double a : {1e-6, 1e-3, 0.01, 0.1, 0.25, 0.4, 0.5, 0.6, 0.9, 1.0, 1.3, 2.0, 3.7, 10.0, 100.0}) {
        s.push_back(a);
        s.push_back(-a);
    }
    return s;
}

const std::vector<double> kEps = {0.5, 0.25, 0.1, 1.0 / 64, 1e-3, 1.0 / (1 << 20)};

}  // namespace

TEST_SUITE("nonlinearity") {

TEST_CASE("log model values") {
    const auto nl = Nonlinearity::logarithmic(5);
    CHECK(eval_G(nl, 1.0) == 0.0);
    CHECK(eval_g(nl, 1.0) == 1.0);
    CHECK(eval_G(nl, 0.0) == 0.0);
    CHECK(eval_g(nl, 0.0) == 0.0);
    CHECK(eval_G(nl, -2.0) == doctest::Approx(4.0 * std::log(2.0)));
    CHECK(eval_g(nl, -2.0) == doctest::Approx(-4.0 * std::log(2.0) - 2.0));
    CHECK(nl.critical() == 10.0);
    CHECK(nl.cutoff_exponent() == 9.0);
    CHECK(nl.is_log());
}

TEST_CASE("power-mass values") {
    const auto nl = Nonlinearity::power_mass(5, 4.0, 1.0);
    CHECK(eval_G(nl, 2.0) == doctest::Approx(2.0));
    CHECK(eval_g(nl, 2.0) == doctest::Approx(6.0));
    CHECK(eval_G(nl, -2.0) == doctest::Approx(2.0));
    CHECK(eval_G(nl, 0.0) == 0.0);
    CHECK_FALSE(nl.is_log());
    CHECK_THROWS_AS(Nonlinearity::power_mass(5, 10.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(Nonlinearity::power_mass(8, 4.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(Nonlinearity::power_mass(5, 2.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(Nonlinearity::power_mass(5, 4.0, 0.0), std::invalid_argument);
    CHECK_NOTHROW(Nonlinearity::power_mass(8, 3.0, 1.0));
}

TEST_CASE("cutoff function") {
    const auto nl = Nonlinearity::logarithmic(5);
    CHECK(eval_phi_eps(nl, 0.5, 0.25) == doctest::Approx(0.001953125).epsilon(1e-15));
    CHECK(eval_phi_eps(nl, 0.5, 0.5) == 1.0);
    CHECK(eval_phi_eps(nl, 0.5, -3.0) == 1.0);
    CHECK(eval_phi_eps(nl, 0.5, 0.0) == 0.0);
    CHECK_THROWS_AS(eval_phi_eps(nl, 0.0, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(eval_phi_eps(nl, 1.0, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(eval_phi_eps(nl, -0.2, 0.1), std::invalid_argument);
    for (double eps : kEps) {
        for (double s : sample_points()) {
            const double p = eval_phi_eps(nl, eps, s);
            CHECK(p >= 0.0);
            CHECK(p <= 1.0);
            if (std::abs(s) >= eps) CHECK(p == 1.0);
        }
        // continuity at |s| = eps
        CHECK(eval_phi_eps(nl, eps, eps * (1.0 - 1e-9)) == doctest::Approx(1.0).epsilon(1e-7));
    }
}

TEST_CASE("regularized primitive at zero and where g_minus vanishes") {
    const Nonlinearity quartic(5, std::make_shared<QuarticModel>());
    for (double eps : kEps) {
        CHECK(eval_G_eps(Nonlinearity::logarithmic(5), eps, 0.0) == 0.0);
        CHECK(eval_G_eps(Nonlinearity::power_mass(5, 4.0, 1.0), eps, 0.0) == 0.0);
        for (double s : {0.7, 1.0, 3.0, -2.0})
            CHECK(eval_G_eps(quartic, eps, s) == doctest::Approx(eval_G(quartic, s)).epsilon(1e-12));
    }
}

TEST_CASE("log model regularization example") {
    const auto nl = Nonlinearity::logarithmic(5);
    const double G = eval_G(nl, 0.25);
    CHECK(G == doctest::Approx(0.0625 * std::log(0.25)).epsilon(1e-14));
    CHECK(G == doctest::Approx(-0.0866434).epsilon(1e-6));
    const double Geps = eval_G_eps(nl, 0.5, 0.25);
    CHECK(Geps >= G);
    CHECK(Geps == doctest::Approx(nl.model().G_plus(0.25) - nl.model().G_minus_eps_quadrature(0.25, 0.5, 9.0)));
}

TEST_CASE("closed forms agree with quadrature") {
    for (int N : {5, 6, 8}) {
        std::vector<Nonlinearity> models = {Nonlinearity::logarithmic(N)};
        models.push_back(Nonlinearity::power_mass(N, N == 8 ? 3.0 : 4.0, 1.0));
        models.push_back(Nonlinearity::power_mass(N, N == 8 ? 3.5 : 3.0, 0.5));
        for (const auto& nl : models) {
            const Model& m = nl.model();
            for (double s : sample_points()) {
                CAPTURE(nl.describe());
                CAPTURE(s);
                const double gp = m.G_plus(s);
                CHECK(std::abs(gp - m.G_plus_quadrature(s)) <= 1e-10 * std::max(1.0, std::abs(gp)));
                for (double eps : kEps) {
                    CAPTURE(eps);
                    const double k = nl.cutoff_exponent();
                    const double gm = m.G_minus_eps(s, eps, k);
                    CHECK(std::abs(gm - m.G_minus_eps_quadrature(s, eps, k)) <= 1e-10 * std::max(1.0, std::abs(gm)));
                }
            }
        }
    }
}

TEST_CASE("split is nonnegative and recombines to G") {
    for (const auto& nl : {Nonlinearity::logarithmic(5), Nonlinearity::power_mass(6, 4.0, 2.0)}) {
        for (double s : sample_points()) {
            const double gp = eval_G_plus(nl, s), gm = eval_G_minus(nl, s);
            CHECK(gp >= 0.0);
            CHECK(gm >= 0.0);
            CHECK(gp - gm == doctest::Approx(eval_G(nl, s)).epsilon(1e-10).scale(1e-14));
        }
    }
}

TEST_CASE("regularized primitive dominates G and decreases with eps") {
    for (const auto& nl : {Nonlinearity::logarithmic(5), Nonlinearity::logarithmic(8),
                           Nonlinearity::power_mass(5, 4.0, 1.0), Nonlinearity::power_mass(8, 3.0, 1.0)}) {
        for (double s : sample_points()) {
            const double G = eval_G(nl, s);
            CHECK(eval_G_eps(nl, std::nullopt, s) == G);
            double prev = std::numeric_limits<double>::infinity();
            // kEps is decreasing, so G_eps must decrease towards G
            for (double eps : kEps) {
                const double Ge = eval_G_eps(nl, eps, s);
                CAPTURE(s);
                CAPTURE(eps);
                CHECK(Ge >= G - 1e-15 * std::abs(G));
                CHECK(Ge <= prev + 1e-15 * std::abs(prev));
                prev = Ge;
            }
        }
    }
}

TEST_CASE("derivatives match finite differences") {
    const auto fd = [](auto f, double s) {
        const double t = 1e-6 * std::max(1.0, std::abs(s));
        return (f(s + t) - f(s - t)) / (2 * t);
    };
    for (const auto& nl : {Nonlinearity::logarithmic(5), Nonlinearity::power_mass(5, 4.0, 1.0),
                           Nonlinearity::power_mass(8, 3.0, 1.0)}) {
        for (double a = 1e-3; a <= 1e3; a *= 1.7) {
            for (double s : {a, -a}) {
                CAPTURE(nl.describe());
                CAPTURE(s);
                const double g = eval_g(nl, s);
                const double dG = fd([&](double x) { return eval_G(nl, x); }, s);
                CHECK(std::abs(dG - g) <= 1e-6 * std::max(std::abs(g), 1e-3 * std::abs(s)));
                const double dg = eval_dg(nl, s);
                const double ddg = fd([&](double x) { return eval_g(nl, x); }, s);
                CHECK(std::abs(ddg - dg) <= 1e-5 * std::max(1.0, std::abs(dg)));
                for (double eps : {0.5, 0.01}) {
                    if (std::abs(std::abs(s) - eps) < 1e-4) continue;
                    const double ge = eval_g_eps(nl, eps, s);
                    const double dGe = fd([&](double x) { return eval_G_eps(nl, eps, x); }, s);
                    CHECK(std::abs(dGe - ge) <= 1e-6 * std::max(1.0, std::abs(ge)));
                    const double dge = eval_dg_eps(nl, eps, s);
                    const double ddge = fd([&](double x) { return eval_g_eps(nl, eps, x); }, s);
                    CHECK(std::abs(ddge - dge) <= 1e-5 * std::max(1.0, std::abs(dge)));
                }
            }
        }
    }
}

TEST_CASE("generic model routes match the closed forms") {
    const Nonlinearity generic(5, std::make_shared<GenericPowerMass>());
    const auto closed = Nonlinearity::power_mass(5, 4.0, 1.0);
    for (double s : sample_points()) {
        CHECK(eval_G_plus(generic, s) == doctest::Approx(eval_G_plus(closed, s)).epsilon(1e-10).scale(1e-12));
        for (double eps : {0.5, 0.01})
            CHECK(eval_G_eps(generic, eps, s) == doctest::Approx(eval_G_eps(closed, eps, s)).epsilon(1e-10).scale(1e-12));
        if (std::abs(s) > 1e-3)
            CHECK(eval_dg(generic, s) == doctest::Approx(eval_dg(closed, s)).epsilon(1e-6).scale(1e-6));
    }
}

TEST_CASE("growth diagnostics") {
    SUBCASE("log model") {
        const auto rep = check_growth_conditions(Nonlinearity::logarithmic(5), 200);
        CHECK(rep.all_ok());
        REQUIRE(rep.witness);
        CHECK(*rep.witness == doctest::Approx(std::numbers::e));
        CHECK(rep.G_at_witness == doctest::Approx(std::numbers::e * std::numbers::e));
        CHECK(rep.ratio_near_zero < 1e-6);
        CHECK(rep.ratio_near_infinity < 1e-6);
        CHECK(rep.s_min == doctest::Approx(1e-8));
        CHECK(rep.s_max == doctest::Approx(1e8));
    }
    SUBCASE("power-mass model") {
        const auto rep = check_growth_conditions(Nonlinearity::power_mass(5, 4.0, 1.0), 100);
        CHECK(rep.all_ok());
        REQUIRE(rep.witness);
        CHECK(*rep.witness == 2.0);
        CHECK(rep.G_at_witness == doctest::Approx(2.0));
    }
    SUBCASE("quartic model has no negative part but fails nothing sampled") {
        const auto rep = check_growth_conditions(Nonlinearity(5, std::make_shared<QuarticModel>()), 100);
        CHECK(rep.positive_ok);
    }
    SUBCASE("too few samples") {
        CHECK_THROWS_AS(check_growth_conditions(Nonlinearity::logarithmic(5), 99), std::invalid_argument);
    }
}

}  // TEST_SUITE
