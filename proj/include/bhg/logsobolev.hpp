#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bhg/ground_solver.hpp"
#include "bhg/radial_operators.hpp"

namespace bhg {

enum class InequalityKind { BiharmonicLSI, ClassicalLSI, Interpolation, PohozaevScaledIneq };

const char* inequality_name(InequalityKind kind);

struct InequalityReport {
    InequalityKind name = InequalityKind::BiharmonicLSI;
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;  // lhs - rhs
    bool holds = false;   // margin >= -1e-10
    std::string label;
};

InequalityReport make_report(InequalityKind kind, double lhs, double rhs, std::string label);

struct LsiConstants {
    double C_N_log = 0.0;       // 2** (1/2 - 1/2**)^{-4/(N-4)} J^{4/(N-4)}
    double lsi_constant = 0.0;  // (8e / (C_N_log (N-4)))^{(N-4)/N}
    double upper_bound = 0.0;   // (2 / (pi e N))^2
};

/// (2 / (pi e N))^2
double lsi_upper_bound(int N);

/// Throws std::invalid_argument unless inf_J > 0 and N >= 5.
LsiConstants constant_from_energy(int N, double inf_J);

/// int u^2 log|u| with the integrand taken as 0 where u = 0.
double log_entropy(const RadialField& u);

/// (N/8) log(lsi_constant B) >= int u^2 log|u| for ||u||_2 = 1.
InequalityReport biharmonic_lsi_check(const RadialField& u, double lsi_constant, std::string label = "");
/// (N/4) log(2/(pi e N) int |grad u|^2) >= int u^2 log|u| for ||u||_2 = 1.
InequalityReport classical_lsi_check(const RadialField& u, std::string label = "");
/// sqrt(int |Lap u|^2) > int |grad u|^2 for ||u||_2 = 1.
InequalityReport interpolation_check(const RadialField& u, std::string label = "");
/// (int |Lap u|^2)^{N/(N-4)} >= C_N_log int u^2 log|u| for any u, reported
/// divided by the left side: lhs = 1, rhs = C_N_log int u^2 log|u| / B^{N/(N-4)}.
InequalityReport pohozaev_scaled_check(const RadialField& u, double C_N_log, std::string label = "");

/// The maximizer (N-4)/8 - int u^2 log|u| of
///   alpha -> e^{-alpha 2**} int |e^alpha u|^2 log|e^alpha u|
/// for normalized u.
double optimal_log_amplitude(const RadialField& u);
/// The function above, for finite-difference checks.
double scaled_entropy(const RadialField& u, double alpha);

/// Fills C_N_log from inf_energy_upper for the logarithmic model.
void attach_log_constant(GroundStateResult& result, const Nonlinearity& nl);

struct LsiBattery {
    LsiConstants constants;
    InequalityReport gaussian_with_bound;  // unit Gaussian against (2/(pi e N))^2
    std::vector<InequalityReport> reports;
    double ground_state_margin = 0.0;  // BiharmonicLSI margin at u0 / ||u0||
    bool constant_below_bound = false;

    bool all_hold() const;
};

/// Runs every inequality on the unit Gaussian, its dilations by 1/2, 1, 2,
/// the normalized ground state and `random_fields` seeded mixtures. The
/// scaled Pohozaev inequality is checked on the ground state and on 20
/// mixtures amplified into the positivity set.
LsiBattery run_lsi_battery(const GroundStateResult& gs, const Nonlinearity& nl, std::uint64_t seed,
                           int random_fields = 50);

}  // namespace bhg
