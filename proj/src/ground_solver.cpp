#include "bhg/ground_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "bhg/band_matrix.hpp"
#include "bhg/energy.hpp"
#include "bhg/pohozaev.hpp"

namespace bhg {

std::vector<double> SolverConfig::geometric_schedule(int stages) {
    std::vector<double> s;
    for (int k = 1; k <= stages; ++k) s.push_back(std::ldexp(1.0, -k));
    return s;
}

std::vector<double> SolverConfig::doubling_amplitudes(int doublings) {
    std::vector<double> a;
    for (int k = 0; k <= doublings; ++k) a.push_back(std::ldexp(1.0, k));
    return a;
}

void SolverConfig::validate() const {
    if (max_iterations <= 0) throw std::invalid_argument("solver.max_iterations must be positive");
    if (!(tolerance > 0.0)) throw std::invalid_argument("solver.tolerance must be positive");
    if (!(backtrack > 0.0 && backtrack < 1.0))
        throw std::invalid_argument("solver.backtrack must lie in (0, 1)");
    if (!(armijo > 0.0 && armijo < 1.0)) throw std::invalid_argument("solver.armijo must lie in (0, 1)");
    if (newton_steps < 0) throw std::invalid_argument("solver.newton_steps must be non-negative");
    if (epsilon_schedule.empty()) throw std::invalid_argument("solver.epsilon_schedule is empty");
    for (std::size_t i = 0; i < epsilon_schedule.size(); ++i) {
        const double e = epsilon_schedule[i];
        if (!(e > 0.0 && e < 1.0)) throw std::invalid_argument("epsilon schedule entries must lie in (0, 1)");
        if (i > 0 && !(e < epsilon_schedule[i - 1]))
            throw std::invalid_argument("epsilon schedule must be strictly decreasing");
    }
    if (amplitudes.empty()) throw std::invalid_argument("solver.amplitudes is empty");
    for (double a : amplitudes)
        if (!(a > 0.0) || !std::isfinite(a)) throw std::invalid_argument("amplitudes must be positive");
}

const char* SolverError::name(Kind kind) {
    switch (kind) {
        case Kind::NoPositiveG: return "NoPositiveG";
        case Kind::MaxIterations: return "MaxIterations";
        case Kind::LostMembership: return "LostMembership";
    }
    return "unknown";
}

RadialField unit_gaussian(const GridPtr& grid) {
    const double c = std::pow(std::numbers::pi, -0.25 * grid->N);
    std::vector<double> v(grid->n);
    for (std::size_t i = 0; i < grid->n; ++i) v[i] = c * std::exp(-0.5 * grid->r[i] * grid->r[i]);
    return RadialField(grid, std::move(v));
}

double initial_amplitude(const Nonlinearity& nl, const GridPtr& grid, const SolverConfig& cfg) {
    const RadialField base = unit_gaussian(grid);
    for (double t : cfg.amplitudes)
        if (integrate_G(t * base, nl, std::nullopt) > kMembershipFloor) return t;
    throw SolverError(SolverError::Kind::NoPositiveG,
                      "no amplitude in the scan gives a positive int G for " + nl.describe());
}

RadialField initial_guess(const Nonlinearity& nl, const GridPtr& grid, const SolverConfig& cfg) {
    return initial_amplitude(nl, grid, cfg) * unit_gaussian(grid);
}

namespace {

// Diagonal shift of the preconditioner, relative to the volume weights.
constexpr double kShift = 1e-3;
// Curvature contributions are clipped here to keep the band solve well scaled.
constexpr double kCurvatureCap = 1e8;
// Newton decrement below which a stalled line search counts as converged:
// further progress is below the rounding level of the energy.
constexpr double kFloorDecrement = 1e-9;
// Largest |log r| of the stage-start dilation accepted for a warm start.
constexpr double kMaxWarmDilation = 0.7;

struct Eval {
    double B = 0.0;
    double G = 0.0;
    double E = std::numeric_limits<double>::infinity();
    bool member = false;
};

// Preconditioned descent on the reduced energy
//   E(u) = c B(u)^{N/4} (2** G_eps(u))^{-(N-4)/4},  B = |L u|_W^2,  G = <w, G_eps(u)>.
// Its gradient is E N / (2B) (A u - lam W g_eps(u)) with A = L^T W L and
// lam = B / (2** G), i.e. the weak form of Lap^2 u - g_eps(u) at the
// projected iterate. Directions solve with A + W diag(max(-lam g_eps', 0))
// restricted to the tangent of lam = 1, so iterates stay on the Pohozaev set
// of the stage. Without that constraint the truncation at R breaks the
// dilation invariance of E and the iterates drift towards concentration.
class Descent {
public:
    Descent(const Nonlinearity& nl, const GridPtr& grid, const SolverConfig& cfg)
        : nl_(nl), grid_(grid), cfg_(cfg),
          L_(laplacian_matrix(*grid)),
          A_(L_.weighted_normal(grid->w)) {}

    Eval eval(const std::vector<double>& u, std::optional<double> eps) const {
        const auto lu = L_.apply(u);
        Eval e;
        const auto& w = grid_->w;
        for (std::size_t i = 0; i < u.size(); ++i) {
            e.B += w[i] * lu[i] * lu[i];
            e.G += w[i] * eval_G_eps(nl_, eps, u[i]);
        }
        if (const auto r = reduced_energy_from(grid_->N, e.B, e.G)) {
            e.E = *r;
            e.member = std::isfinite(*r);
        }
        return e;
    }

    StageRecord run_stage(std::vector<double>& u, std::optional<double> eps) const {
        const auto& w = grid_->w;
        const std::size_t n = grid_->n;
        const double crit = nl_.critical();
        const int N = grid_->N;

        StageRecord rec;
        rec.epsilon = eps;
        Eval cur = eval(u, eps);
        if (!cur.member) {
            throw SolverError(SolverError::Kind::LostMembership,
                              "stage start left the positivity set" + stage_label(eps));
        }
        rec.energy_trace.push_back(cur.E);

        std::vector<double> res(n), d(n), c(n), y(n), trial(n);
        for (int it = 0; it < cfg_.max_iterations; ++it) {
            const double lam = cur.B / (crit * cur.G);
            const auto Au = A_.apply(u);
            BandMatrix P = A_;
            std::vector<double> diag(n);
            for (std::size_t i = 0; i < n; ++i) {
                res[i] = Au[i] - lam * w[i] * eval_g_eps(nl_, eps, u[i]);
                const double curv = std::clamp(-lam * eval_dg_eps(nl_, eps, u[i]), 0.0, kCurvatureCap);
                diag[i] = w[i] * (curv + kShift);
            }
            P.add_diagonal(diag);
            for (std::size_t i = 0; i < n; ++i) d[i] = -res[i];
            if (!solve_spd(P, d)) {
                throw SolverError(SolverError::Kind::MaxIterations,
                                  "preconditioner factorization failed" + stage_label(eps));
            }
            // Tangent step for {log lam = 0}, with a restoring term for the
            // second-order drift: c = grad log lam = 2 A u / B - W g_eps / G.
            for (std::size_t i = 0; i < n; ++i)
                c[i] = 2.0 * Au[i] / cur.B - w[i] * eval_g_eps(nl_, eps, u[i]) / cur.G;
            y = c;
            if (!solve_spd(P, y)) {
                throw SolverError(SolverError::Kind::MaxIterations,
                                  "preconditioner factorization failed" + stage_label(eps));
            }
            const double cy = dot(c, y);
            const double scale = cur.E * N / (2.0 * cur.B);
            double gd = 0.0;
            if (cy > 0.0) {
                const double mu = dot(c, d) / cy;
                for (std::size_t i = 0; i < n; ++i) d[i] -= mu * y[i];
                gd = scale * dot(res, d);
                // restoring part only while it keeps the step a descent step
                const double nu = std::log(lam) / cy;
                const double gd_restored = gd - nu * scale * dot(res, y);
                if (gd_restored < 0.0) {
                    for (std::size_t i = 0; i < n; ++i) d[i] -= nu * y[i];
                    gd = gd_restored;
                }
            } else {
                gd = scale * dot(res, d);
            }
            const double decrement = -gd / cur.E;
            if (!(gd < 0.0)) {
                // no descent left in the gauge-fixed direction
                if (std::abs(decrement) < kFloorDecrement) return finish(rec, it, cur);
                throw SolverError(SolverError::Kind::MaxIterations,
                                  "search direction is not a descent direction" + stage_label(eps));
            }

            double step = 1.0;
            bool accepted = false;
            bool any_member = false;
            Eval next;
            for (int k = 0; k < 60; ++k) {
                for (std::size_t i = 0; i < n; ++i) trial[i] = u[i] + step * d[i];
                next = eval(trial, eps);
                if (next.member) {
                    any_member = true;
                    if (next.E <= cur.E + cfg_.armijo * step * gd) {
                        accepted = true;
                        break;
                    }
                }
                step *= cfg_.backtrack;
            }
            if (!accepted) {
                if (decrement < kFloorDecrement) return finish(rec, it, cur);
                if (!any_member) {
                    throw SolverError(SolverError::Kind::LostMembership,
                                      "every trial step left the positivity set" + stage_label(eps));
                }
                throw SolverError(SolverError::Kind::MaxIterations,
                                  "line search stalled" + stage_label(eps));
            }
            const double change = (cur.E - next.E) / cur.E;
            u.swap(trial);
            cur = next;
            rec.energy_trace.push_back(cur.E);
            if ((change < cfg_.tolerance && decrement < 1e-3 * cfg_.tolerance) || decrement < 1e-15)
                return finish(rec, it + 1, cur);
        }
        std::ostringstream os;
        os << "stage did not converge within " << cfg_.max_iterations << " iterations" << stage_label(eps);
        throw SolverError(SolverError::Kind::MaxIterations, os.str());
    }

    // Newton iteration on the discrete equation L L u = g(u).
    bool polish(std::vector<double>& u) const {
        if (cfg_.newton_steps == 0) return false;
        const BandMatrix LL = L_ * L_;
        auto residual = [&](const std::vector<double>& v, std::vector<double>* F) {
            const auto llv = LL.apply(v);
            double num = 0.0;
            double den = 0.0;
            for (std::size_t i = 0; i < v.size(); ++i) {
                const double g = eval_g(nl_, v[i]);
                const double f = llv[i] - g;
                if (F) (*F)[i] = f;
                num += grid_->w[i] * f * f;
                den += grid_->w[i] * g * g;
            }
            return den > 0.0 ? std::sqrt(num / den) : std::numeric_limits<double>::infinity();
        };
        const std::size_t n = u.size();
        std::vector<double> F(n), trial(n);
        double res = residual(u, &F);
        const double start = res;
        for (int k = 0; k < cfg_.newton_steps && res > 1e-13; ++k) {
            BandMatrix J = LL;
            std::vector<double> diag(n);
            for (std::size_t i = 0; i < n; ++i) diag[i] = -eval_dg(nl_, u[i]);
            J.add_diagonal(diag);
            std::vector<double> delta = F;
            if (!solve_general(J, delta)) break;
            bool improved = false;
            for (double step = 1.0; step >= 1.0 / 32; step *= 0.5) {
                for (std::size_t i = 0; i < n; ++i) trial[i] = u[i] - step * delta[i];
                const double tr = residual(trial, nullptr);
                if (tr < res) {
                    u.swap(trial);
                    res = residual(u, &F);
                    improved = true;
                    break;
                }
            }
            if (!improved) break;
        }
        return res < start;
    }

private:
    static double dot(const std::vector<double>& a, const std::vector<double>& b) {
        double s = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
        return s;
    }

    static std::string stage_label(std::optional<double> eps) {
        std::ostringstream os;
        os << " (stage eps = ";
        if (eps) os << *eps;
        else os << "none";
        os << ")";
        return os.str();
    }

    static StageRecord& finish(StageRecord& rec, int iterations, const Eval& cur) {
        rec.iterations = iterations;
        rec.energy = cur.E;
        return rec;
    }

    const Nonlinearity& nl_;
    GridPtr grid_;
    const SolverConfig& cfg_;
    BandMatrix L_;
    BandMatrix A_;
};

}  // namespace

GroundStateResult minimize(const Nonlinearity& nl, const GridPtr& grid, const SolverConfig& cfg) {
    cfg.validate();
    if (nl.dimension() != grid->N)
        throw std::invalid_argument("nonlinearity and grid disagree on the dimension");

    const double t0 = initial_amplitude(nl, grid, cfg);
    const Descent descent(nl, grid, cfg);

    std::vector<std::optional<double>> stages(cfg.epsilon_schedule.begin(), cfg.epsilon_schedule.end());
    stages.push_back(std::nullopt);

    std::vector<double> u = (t0 * unit_gaussian(grid)).values();

    std::vector<StageRecord> records;
    int iterations = 0;
    for (const auto& eps : stages) {
        // The warm start can fall outside the positivity set of the next
        // stage: large eps switches off the mass term in the tail, and the
        // resulting slowly decaying tail turns int G_eps negative once the
        // cutoff shrinks. Such stages restart from the initial guess.
        auto on_stage = project_to_manifold(RadialField(grid, u), nl, eps);
        bool restarted = false;
        // a barely positive int G_eps gives a huge dilation that the
        // truncated domain cannot represent
        if (on_stage && std::abs(std::log(on_stage->r)) > kMaxWarmDilation) on_stage.reset();
        if (!on_stage) {
            on_stage = project_to_manifold(t0 * unit_gaussian(grid), nl, eps);
            restarted = true;
        }
        if (!on_stage) throw SolverError(SolverError::Kind::LostMembership, "stage projection failed");
        u = on_stage->field.values();
        records.push_back(descent.run_stage(u, eps));
        records.back().restarted = restarted;
        iterations += records.back().iterations;
    }

    const auto proj = project_to_manifold(RadialField(grid, u), nl, std::nullopt);
    if (!proj) throw SolverError(SolverError::Kind::LostMembership, "final projection failed");
    std::vector<double> v = proj->field.values();
    const double j_projected = energy(proj->field, nl, std::nullopt).J_value;
    bool polished = false;
    {
        std::vector<double> trial = v;
        if (descent.polish(trial)) {
            // keep the polished field only when it is the same critical point
            const double j_polished = energy(RadialField(grid, trial), nl, std::nullopt).J_value;
            if (std::abs(j_polished - j_projected) <= 1e-4 * std::abs(j_projected)) {
                v.swap(trial);
                polished = true;
            }
        }
    }

    RadialField profile(grid, std::move(v));
    const auto en = energy(profile, nl, std::nullopt);
    const auto nrm = norms(profile);
    const auto poh = pohozaev_residual(profile, nl);

    GroundStateResult res(profile);
    res.energy = en.J_value;
    res.bilap_sq = en.bilap_sq;
    res.G_int = en.G_int;
    res.l2_sq = nrm.l2_sq;
    res.pohozaev_relative_residual = poh.relative_residual;
    res.pde_relative_residual = pde_relative_residual(profile, nl);
    const auto amp = amplitude_minimum(profile, nl);
    const auto own = reduced_energy(profile, nl, std::nullopt);
    res.inf_energy_upper = amp ? amp->value : (own ? *own : en.J_value);
    if (own) res.inf_energy_upper = std::min(res.inf_energy_upper, *own);
    res.iterations = iterations;
    res.final_epsilon = cfg.epsilon_schedule.back();
    double tail = 0.0;
    for (std::size_t i = 0; i < grid->n; ++i)
        if (grid->r[i] > 0.9 * grid->R) tail += grid->w[i] * profile[i] * profile[i];
    res.tail_mass = nrm.l2_sq > 0.0 ? tail / nrm.l2_sq : 0.0;
    res.initial_amplitude = t0;
    res.newton_polished = polished;
    res.stages = std::move(records);
    return res;
}

}  // namespace bhg
