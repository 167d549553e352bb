#include "bhg/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

namespace bhg {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string part;
    while (std::getline(ss, part, sep)) out.push_back(trim(part));
    if (!s.empty() && s.back() == sep) out.push_back("");
    return out;
}

template <class T>
std::optional<T> parse_number(const std::string& s) {
    T v{};
    const char* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc() || ptr != end) return std::nullopt;
    return v;
}

class Reader {
public:
    Reader(std::map<std::string, std::string> kv, std::string origin) : kv_(std::move(kv)), origin_(std::move(origin)) {}

    bool has(const std::string& key) const { return kv_.count(key) > 0; }

    [[noreturn]] void fail(const std::string& key, const std::string& why) const {
        throw ConfigError(origin_ + ": " + key + ": " + why);
    }

    template <class T>
    void number(const std::string& key, T& target) const {
        auto it = kv_.find(key);
        if (it == kv_.end()) return;
        auto v = parse_number<T>(it->second);
        if (!v) fail(key, "not a valid number '" + it->second + "'");
        target = *v;
    }

    void text(const std::string& key, std::string& target) const {
        auto it = kv_.find(key);
        if (it == kv_.end()) return;
        if (it->second.empty()) fail(key, "empty value");
        target = it->second;
    }

    std::optional<std::vector<double>> list(const std::string& key) const {
        auto it = kv_.find(key);
        if (it == kv_.end()) return std::nullopt;
        std::vector<double> out;
        for (const auto& part : split(it->second, ',')) {
            auto v = parse_number<double>(part);
            if (!v) fail(key, "not a valid number '" + part + "'");
            out.push_back(*v);
        }
        if (out.empty()) fail(key, "empty list");
        return out;
    }

    const std::string& raw(const std::string& key) const { return kv_.at(key); }

private:
    std::map<std::string, std::string> kv_;
    std::string origin_;
};

}  // namespace

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys = {
        "dimension",
        "nonlinearity",
        "nonlinearity.p",
        "nonlinearity.mu",
        "grid.R",
        "grid.n",
        "solver.max_iterations",
        "solver.tolerance",
        "solver.epsilon_schedule",
        "solver.epsilon_stages",
        "solver.backtrack",
        "solver.armijo",
        "solver.amplitudes",
        "solver.newton_steps",
        "output.dir",
        "output.format",
        "seed",
        "verify.pohozaev_tol",
        "verify.pde_tol",
        "logsob.random_fields",
        "sweep.items",
        "sweep.threads",
    };
    return keys;
}

double ModelSpec::default_power(int N) {
    const double crit = critical_exponent(N);
    return 4.0 < crit ? 4.0 : 0.5 * (2.0 + crit);
}

Nonlinearity ModelSpec::build(int N) const {
    if (kind == "log") {
        if (p) throw std::invalid_argument("the log model takes no power");
        return Nonlinearity::logarithmic(N);
    }
    if (kind == "power_mass") return Nonlinearity::power_mass(N, p.value_or(default_power(N)), mu);
    throw std::invalid_argument("unknown nonlinearity '" + kind + "' (expected log or power_mass)");
}

std::string ModelSpec::label(int N) const {
    if (kind != "power_mass") return kind;
    std::ostringstream os;
    os << "power_mass:" << p.value_or(default_power(N)) << ":" << mu;
    return os.str();
}

SweepItem parse_sweep_item(const std::string& text) {
    SweepItem item;
    item.text = trim(text);
    const auto parts = split(item.text, ':');
    try {
        if (parts.size() < 2) throw std::invalid_argument("expected N:model");
        auto N = parse_number<int>(parts[0]);
        if (!N) throw std::invalid_argument("bad dimension '" + parts[0] + "'");
        item.N = *N;
        item.model.kind = parts[1];
        if (parts.size() > 4 || (parts[1] == "log" && parts.size() > 2))
            throw std::invalid_argument("too many fields");
        if (parts.size() > 2) {
            auto p = parse_number<double>(parts[2]);
            if (!p) throw std::invalid_argument("bad power '" + parts[2] + "'");
            item.model.p = *p;
        }
        if (parts.size() > 3) {
            auto mu = parse_number<double>(parts[3]);
            if (!mu) throw std::invalid_argument("bad mass '" + parts[3] + "'");
            item.model.mu = *mu;
        }
        item.model.build(item.N);
    } catch (const std::exception& e) {
        item.error = "sweep item '" + item.text + "': " + e.what();
    }
    return item;
}

GridPtr RunConfig::grid() const { return build_grid(dimension, grid_R, grid_n); }

RunConfig parse_config(const std::string& text, const std::string& origin) {
    const auto& known = config_keys();
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::string where = origin + ":" + std::to_string(lineno);
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(where + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (std::find(known.begin(), known.end(), key) == known.end())
            throw ConfigError(where + ": unknown key '" + key + "'");
        if (!kv.emplace(key, value).second) throw ConfigError(where + ": repeated key '" + key + "'");
    }

    Reader rd(kv, origin);
    RunConfig cfg;
    rd.number("dimension", cfg.dimension);
    rd.text("nonlinearity", cfg.model.kind);
    if (rd.has("nonlinearity.p")) {
        double p = 0.0;
        rd.number("nonlinearity.p", p);
        cfg.model.p = p;
    }
    rd.number("nonlinearity.mu", cfg.model.mu);
    rd.number("grid.R", cfg.grid_R);
    rd.number("grid.n", cfg.grid_n);

    SolverConfig& s = cfg.solver;
    rd.number("solver.max_iterations", s.max_iterations);
    rd.number("solver.tolerance", s.tolerance);
    rd.number("solver.backtrack", s.backtrack);
    rd.number("solver.armijo", s.armijo);
    rd.number("solver.newton_steps", s.newton_steps);
    if (rd.has("solver.epsilon_schedule") && rd.has("solver.epsilon_stages"))
        rd.fail("solver.epsilon_stages", "conflicts with solver.epsilon_schedule");
    if (auto l = rd.list("solver.epsilon_schedule")) s.epsilon_schedule = *l;
    if (rd.has("solver.epsilon_stages")) {
        int stages = 0;
        rd.number("solver.epsilon_stages", stages);
        if (stages < 1 || stages > 60) rd.fail("solver.epsilon_stages", "must lie in [1, 60]");
        s.epsilon_schedule = SolverConfig::geometric_schedule(stages);
    }
    if (auto l = rd.list("solver.amplitudes")) s.amplitudes = *l;

    rd.text("output.dir", cfg.out_dir);
    rd.text("output.format", cfg.format);
    rd.number("seed", cfg.seed);
    rd.number("verify.pohozaev_tol", cfg.pohozaev_tol);
    rd.number("verify.pde_tol", cfg.pde_tol);
    rd.number("logsob.random_fields", cfg.random_fields);
    rd.number("sweep.threads", cfg.sweep_threads);

    if (rd.has("sweep.items")) {
        for (const auto& part : split(rd.raw("sweep.items"), ',')) cfg.sweep_items.push_back(parse_sweep_item(part));
    } else {
        for (int N : {5, 6, 8})
            for (const char* m : {"log", "power_mass"})
                cfg.sweep_items.push_back(parse_sweep_item(std::to_string(N) + ":" + m));
    }

    // Preconditions of the downstream modules, checked here so a bad run
    // fails before any work is done.
    try {
        critical_exponent(cfg.dimension);
    } catch (const std::exception& e) {
        rd.fail("dimension", e.what());
    }
    try {
        cfg.nonlinearity();
    } catch (const std::exception& e) {
        rd.fail("nonlinearity", e.what());
    }
    try {
        cfg.grid();
    } catch (const std::exception& e) {
        rd.fail("grid", e.what());
    }
    try {
        s.validate();
    } catch (const std::exception& e) {
        rd.fail("solver", e.what());
    }
    if (cfg.format != "json" && cfg.format != "csv") rd.fail("output.format", "expected json or csv");
    if (!(cfg.pohozaev_tol > 0.0)) rd.fail("verify.pohozaev_tol", "must be positive");
    if (!(cfg.pde_tol > 0.0)) rd.fail("verify.pde_tol", "must be positive");
    if (cfg.random_fields < 0) rd.fail("logsob.random_fields", "must be non-negative");
    if (cfg.sweep_threads < 0) rd.fail("sweep.threads", "must be non-negative");
    if (cfg.sweep_items.empty()) rd.fail("sweep.items", "empty list");
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), path);
}

}  // namespace bhg
