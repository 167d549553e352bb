#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bhg/nonlinearity.hpp"
#include "bhg/radial_operators.hpp"

namespace bhg {

struct SolverConfig {
    int max_iterations = 5000;  // per continuation stage
    double tolerance = 1e-8;    // relative change of the reduced energy
    std::vector<double> epsilon_schedule = geometric_schedule(20);
    double backtrack = 0.5;
    double armijo = 1e-4;
    std::vector<double> amplitudes = doubling_amplitudes(10);
    int newton_steps = 10;

    /// 2^-1, 2^-2, ..., 2^-stages
    static std::vector<double> geometric_schedule(int stages);
    /// 1, 2, 4, ..., 2^doublings
    static std::vector<double> doubling_amplitudes(int doublings);

    /// Throws std::invalid_argument on a non-decreasing schedule, entries
    /// outside (0, 1) or non-positive tolerances.
    void validate() const;
};

class SolverError : public std::runtime_error {
public:
    enum class Kind { NoPositiveG, MaxIterations, LostMembership };
    SolverError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    Kind kind() const { return kind_; }
    static const char* name(Kind kind);

private:
    Kind kind_;
};

struct StageRecord {
    std::optional<double> epsilon;  // empty for the unregularized stage
    double energy = 0.0;            // converged reduced energy of the stage
    int iterations = 0;
    bool restarted = false;  // started from the initial guess, not the previous stage
    std::vector<double> energy_trace;  // accepted iterates, starting point first
};

struct GroundStateResult {
    explicit GroundStateResult(RadialField u) : profile(std::move(u)) {}

    RadialField profile;
    double energy = 0.0;  // J at the profile
    double bilap_sq = 0.0;
    double l2_sq = 0.0;
    double G_int = 0.0;
    double pohozaev_relative_residual = 0.0;
    double pde_relative_residual = 0.0;
    // min over t > 0 of the reduced energy of t * profile: the energy of an
    // explicit point of the Pohozaev set, hence an upper bound for its infimum
    double inf_energy_upper = 0.0;
    std::optional<double> C_N_log;
    int iterations = 0;
    double final_epsilon = 0.0;  // last regularized stage
    double tail_mass = 0.0;      // share of int u^2 carried by r > 0.9 R
    double initial_amplitude = 0.0;
    bool newton_polished = false;
    std::vector<StageRecord> stages;
};

/// pi^{-N/4} exp(-r^2/2), the L2-normalized Gaussian.
RadialField unit_gaussian(const GridPtr& grid);

/// First amplitude t in cfg.amplitudes with int G(t * unit Gaussian) > 0.
/// This implies int G_eps > 0 for every eps since G_eps >= G.
double initial_amplitude(const Nonlinearity& nl, const GridPtr& grid, const SolverConfig& cfg);
RadialField initial_guess(const Nonlinearity& nl, const GridPtr& grid, const SolverConfig& cfg);

GroundStateResult minimize(const Nonlinearity& nl, const GridPtr& grid, const SolverConfig& cfg);

}  // namespace bhg
