#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bhg/ground_solver.hpp"
#include "bhg/nonlinearity.hpp"

namespace bhg {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ModelSpec {
    std::string kind = "log";  // log | power_mass
    std::optional<double> p;   // power_mass only; defaults per dimension
    double mu = 1.0;

    /// The default power is 4, or the midpoint of (2, 2**) when 4 is not subcritical.
    static double default_power(int N);
    Nonlinearity build(int N) const;
    /// "log" or "power_mass:p:mu", the sweep item syntax without the dimension
    std::string label(int N) const;
};

struct SweepItem {
    std::string text;
    int N = 0;
    ModelSpec model;
    std::optional<std::string> error;  // set when the item does not parse or validate
};

/// Parses "N:log" or "N:power_mass[:p[:mu]]". Never throws; problems land in `error`.
SweepItem parse_sweep_item(const std::string& text);

struct RunConfig {
    int dimension = 5;
    ModelSpec model;
    double grid_R = 20.0;
    std::size_t grid_n = 2001;
    SolverConfig solver;
    std::string out_dir = "out";
    std::string format = "json";  // json | csv
    std::uint64_t seed = 42;
    double pohozaev_tol = 1e-4;
    double pde_tol = 1e-4;
    int random_fields = 50;
    std::vector<SweepItem> sweep_items;  // defaults to N in {5, 6, 8} x both models
    int sweep_threads = 0;               // 0: one per item, capped by the hardware

    Nonlinearity nonlinearity() const { return model.build(dimension); }
    GridPtr grid() const;
};

/// Flat `key = value` lines, `#` comments, dotted section names. Unknown or
/// repeated keys, malformed values and configurations rejected by the
/// grid, model or solver all raise ConfigError.
RunConfig parse_config(const std::string& text, const std::string& origin = "<config>");
RunConfig load_config(const std::string& path);

/// Every key parse_config accepts.
const std::vector<std::string>& config_keys();

}  // namespace bhg
