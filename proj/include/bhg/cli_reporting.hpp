#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>

#include "json.hpp"

#include "bhg/config.hpp"
#include "bhg/ground_solver.hpp"
#include "bhg/logsobolev.hpp"

namespace bhg {

enum ExitCode : int {
    kExitOk = 0,
    kExitConfig = 2,     // config, parse or grid mismatch
    kExitSolver = 3,     // solver failure
    kExitIo = 4,         // files and directories
    kExitTolerance = 5,  // tolerance breach or partial sweep failure
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using Json = nlohmann::ordered_json;

/// %.17g; round-trips every double.
std::string format_double(double v);

/// Pretty JSON with doubles as %.17g and non-finite numbers as null.
std::string to_json_text(const Json& j);
/// Two-column key,value CSV of the leaves of j, keys joined with dots.
std::string to_flat_csv(const Json& j);

void write_text_file(const std::string& path, const std::string& content);

/// Header `r,u`, one row per grid node.
void write_profile_csv(const std::string& path, const RadialField& u);
/// Throws IoError when the file cannot be read and ConfigError when the
/// contents do not describe a profile on `grid`.
RadialField read_profile_csv(const std::string& path, const GridPtr& grid);

Json report_json(const InequalityReport& r);
Json result_json(const GroundStateResult& res);

int run_solve(const RunConfig& cfg);
/// `profile_path` defaults to profile.csv in the output directory.
int run_verify(const RunConfig& cfg, const std::optional<std::string>& profile_path = std::nullopt);
int run_logsob(const RunConfig& cfg);
int run_sweep(const RunConfig& cfg);

/// Runs `body`, printing the diagnostic of any escaping exception to stderr
/// and mapping it to an exit code.
int guarded(const std::function<int()>& body);

}  // namespace bhg
