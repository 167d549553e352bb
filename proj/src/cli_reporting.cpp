#include "bhg/cli_reporting.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>
#include <vector>

#include "bhg/energy.hpp"
#include "bhg/pohozaev.hpp"
#include "bhg/test_fields.hpp"

namespace bhg {

namespace fs = std::filesystem;

namespace {

void write_json_value(std::ostream& os, const Json& j, int indent) {
    const std::string pad(indent + 2, ' ');
    switch (j.type()) {
        case Json::value_t::object: {
            if (j.empty()) {
                os << "{}";
                return;
            }
            os << "{\n";
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) os << ",\n";
                first = false;
                os << pad << Json(it.key()).dump() << ": ";
                write_json_value(os, it.value(), indent + 2);
            }
            os << "\n" << std::string(indent, ' ') << "}";
            return;
        }
        case Json::value_t::array: {
            if (j.empty()) {
                os << "[]";
                return;
            }
            os << "[\n";
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i) os << ",\n";
                os << pad;
                write_json_value(os, j[i], indent + 2);
            }
            os << "\n" << std::string(indent, ' ') << "]";
            return;
        }
        case Json::value_t::number_float: {
            const double v = j.get<double>();
            os << (std::isfinite(v) ? format_double(v) : "null");
            return;
        }
        default: os << j.dump();
    }
}

std::string csv_cell(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + "\"";
}

void flatten(const Json& j, const std::string& prefix, std::ostream& os) {
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it)
            flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), os);
    } else if (j.is_array()) {
        for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "." + std::to_string(i), os);
    } else {
        std::string v;
        if (j.is_number_float())
            v = std::isfinite(j.get<double>()) ? format_double(j.get<double>()) : "";
        else if (j.is_string())
            v = j.get<std::string>();
        else if (!j.is_null())
            v = j.dump();
        os << csv_cell(prefix) << "," << csv_cell(v) << "\n";
    }
}

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

std::string ensure_out_dir(const RunConfig& cfg) {
    std::error_code ec;
    fs::create_directories(cfg.out_dir, ec);
    if (ec || !fs::is_directory(cfg.out_dir))
        throw IoError("cannot create output directory '" + cfg.out_dir + "'");
    return cfg.out_dir;
}

void write_report(const RunConfig& cfg, const std::string& stem, const Json& j) {
    const std::string dir = ensure_out_dir(cfg);
    if (cfg.format == "csv")
        write_text_file((fs::path(dir) / (stem + ".csv")).string(), to_flat_csv(j));
    else
        write_text_file((fs::path(dir) / (stem + ".json")).string(), to_json_text(j));
}

Json run_header(const RunConfig& cfg, const char* command, const Nonlinearity& nl) {
    Json h;
    h["command"] = command;
    h["dimension"] = cfg.dimension;
    h["nonlinearity"] = nl.describe();
    h["grid"] = {{"R", cfg.grid_R}, {"n", cfg.grid_n}};
    h["seed"] = cfg.seed;
    return h;
}

Json growth_json(const GrowthReport& g) {
    Json j;
    j["sample_count"] = g.sample_count;
    j["s_min"] = g.s_min;
    j["s_max"] = g.s_max;
    j["c_bound"] = g.c_bound;
    j["bounded_ok"] = g.bounded_ok;
    j["ratio_near_zero"] = g.ratio_near_zero;
    j["ratio_near_infinity"] = g.ratio_near_infinity;
    j["small_ok"] = g.small_ok;
    j["large_ok"] = g.large_ok;
    j["witness"] = optional_number(g.witness);
    j["G_at_witness"] = g.G_at_witness;
    j["positive_ok"] = g.positive_ok;
    j["all_ok"] = g.all_ok();
    return j;
}

Json constants_json(const LsiConstants& k) {
    Json j;
    j["label"] = "upper estimate";
    j["C_N_log_upper"] = k.C_N_log;
    j["lsi_constant"] = k.lsi_constant;
    j["upper_bound"] = k.upper_bound;
    j["constant_below_bound"] = k.lsi_constant < k.upper_bound;
    return j;
}

GroundStateResult solve_with(const RunConfig& cfg, int N, const Nonlinearity& nl) {
    GroundStateResult res = minimize(nl, build_grid(N, cfg.grid_R, cfg.grid_n), cfg.solver);
    attach_log_constant(res, nl);
    return res;
}

bool parse_double(const std::string& s, double& v) {
    const char* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, v);
    return ec == std::errc() && ptr == end;
}

}  // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string to_json_text(const Json& j) {
    std::ostringstream os;
    write_json_value(os, j, 0);
    os << "\n";
    return os.str();
}

std::string to_flat_csv(const Json& j) {
    std::ostringstream os;
    os << "key,value\n";
    flatten(j, "", os);
    return os.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << content;
    out.close();
    if (!out) throw IoError("write to '" + path + "' failed");
}

void write_profile_csv(const std::string& path, const RadialField& u) {
    std::string text = "r,u\n";
    const auto& r = u.grid().r;
    for (std::size_t i = 0; i < u.size(); ++i) text += format_double(r[i]) + "," + format_double(u[i]) + "\n";
    write_text_file(path, text);
}

RadialField read_profile_csv(const std::string& path, const GridPtr& grid) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open profile '" + path + "'");
    std::string line;
    auto next = [&]() {
        if (!std::getline(in, line)) return false;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return true;
    };
    if (!next() || line != "r,u") throw ConfigError(path + ": expected header 'r,u'");
    std::vector<double> u;
    u.reserve(grid->n);
    const double rtol = 1e-12 * std::max(1.0, grid->R);
    std::size_t row = 0;
    while (next()) {
        if (line.empty()) continue;
        ++row;
        const auto comma = line.find(',');
        double r = 0.0, v = 0.0;
        if (comma == std::string::npos || !parse_double(line.substr(0, comma), r) ||
            !parse_double(line.substr(comma + 1), v) || !std::isfinite(v))
            throw ConfigError(path + ":" + std::to_string(row + 1) + ": malformed row");
        if (row > grid->n)
            throw ConfigError(path + ": more rows than the grid has nodes (" + std::to_string(grid->n) + ")");
        if (std::abs(r - grid->r[row - 1]) > rtol)
            throw ConfigError(path + ":" + std::to_string(row + 1) + ": r = " + format_double(r) +
                              " does not match the configured grid");
        u.push_back(v);
    }
    if (u.size() != grid->n)
        throw ConfigError(path + ": " + std::to_string(u.size()) + " rows, the configured grid has " +
                          std::to_string(grid->n) + " nodes");
    return RadialField(grid, std::move(u));
}

Json report_json(const InequalityReport& r) {
    Json j;
    j["name"] = inequality_name(r.name);
    j["label"] = r.label;
    j["lhs"] = r.lhs;
    j["rhs"] = r.rhs;
    j["margin"] = r.margin;
    j["holds"] = r.holds;
    return j;
}

Json result_json(const GroundStateResult& res) {
    Json j;
    j["energy"] = res.energy;
    j["bilap_sq"] = res.bilap_sq;
    j["l2_sq"] = res.l2_sq;
    j["G_int"] = res.G_int;
    j["pohozaev_relative_residual"] = res.pohozaev_relative_residual;
    j["pde_relative_residual"] = res.pde_relative_residual;
    j["inf_energy_upper"] = res.inf_energy_upper;
    j["C_N_log"] = optional_number(res.C_N_log);
    j["iterations"] = res.iterations;
    j["final_epsilon"] = res.final_epsilon;
    j["tail_mass"] = res.tail_mass;
    j["initial_amplitude"] = res.initial_amplitude;
    j["newton_polished"] = res.newton_polished;
    Json stages = Json::array();
    for (const auto& s : res.stages) {
        Json st;
        st["epsilon"] = optional_number(s.epsilon);
        st["energy"] = s.energy;
        st["iterations"] = s.iterations;
        st["restarted"] = s.restarted;
        st["energy_trace"] = s.energy_trace;
        stages.push_back(std::move(st));
    }
    j["stages"] = std::move(stages);
    return j;
}

int run_solve(const RunConfig& cfg) {
    const Nonlinearity nl = cfg.nonlinearity();
    ensure_out_dir(cfg);
    const GroundStateResult res = solve_with(cfg, cfg.dimension, nl);

    Json report = run_header(cfg, "solve", nl);
    report["result"] = result_json(res);
    report["growth"] = growth_json(check_growth_conditions(nl, 200));
    if (nl.is_log()) {
        const LsiConstants k = constant_from_energy(cfg.dimension, res.inf_energy_upper);
        Json ls = constants_json(k);
        Json reports = Json::array();
        reports.push_back(report_json(biharmonic_lsi_check(normalize(res.profile), k.lsi_constant, "ground state")));
        reports.push_back(report_json(pohozaev_scaled_check(res.profile, k.C_N_log, "ground state")));
        ls["reports"] = std::move(reports);
        report["log_sobolev"] = std::move(ls);
    }

    write_profile_csv((fs::path(cfg.out_dir) / "profile.csv").string(), res.profile);
    write_report(cfg, "report", report);
    std::cout << "solve: " << nl.describe() << " N=" << cfg.dimension << " J=" << format_double(res.energy)
              << " pohozaev_relative_residual=" << format_double(res.pohozaev_relative_residual) << "\n";
    return kExitOk;
}

int run_verify(const RunConfig& cfg, const std::optional<std::string>& profile_path) {
    const Nonlinearity nl = cfg.nonlinearity();
    const std::string path = profile_path.value_or((fs::path(cfg.out_dir) / "profile.csv").string());
    const RadialField u = read_profile_csv(path, cfg.grid());

    const PohozaevReport poh = pohozaev_residual(u, nl);
    const EnergyBreakdown en = energy(u, nl, std::nullopt);
    const double pde = pde_relative_residual(u, nl);
    const bool poh_ok = poh.relative_residual <= cfg.pohozaev_tol;
    const bool pde_ok = pde <= cfg.pde_tol;

    Json report = run_header(cfg, "verify", nl);
    report["profile"] = path;
    report["energy"] = en.J_value;
    report["bilap_sq"] = en.bilap_sq;
    report["G_int"] = en.G_int;
    report["l2_sq"] = norms(u).l2_sq;
    report["reduced_energy"] = optional_number(reduced_energy(u, nl, std::nullopt));
    report["pohozaev_residual"] = poh.residual;
    report["pohozaev_relative_residual"] = poh.relative_residual;
    report["pohozaev_tol"] = cfg.pohozaev_tol;
    report["pohozaev_ok"] = poh_ok;
    report["pde_relative_residual"] = pde;
    report["pde_tol"] = cfg.pde_tol;
    report["pde_ok"] = pde_ok;
    report["ok"] = poh_ok && pde_ok;
    write_report(cfg, "verify", report);

    std::cout << "verify: pohozaev_relative_residual=" << format_double(poh.relative_residual)
              << " pde_relative_residual=" << format_double(pde) << (poh_ok && pde_ok ? " ok" : " FAILED") << "\n";
    return poh_ok && pde_ok ? kExitOk : kExitTolerance;
}

int run_logsob(const RunConfig& cfg) {
    const Nonlinearity nl = cfg.nonlinearity();
    if (!nl.is_log()) throw ConfigError("logsob needs nonlinearity = log");
    ensure_out_dir(cfg);
    const GroundStateResult res = solve_with(cfg, cfg.dimension, nl);
    const LsiBattery bat = run_lsi_battery(res, nl, cfg.seed, cfg.random_fields);
    const bool equality_ok = std::abs(bat.ground_state_margin) <= 1e-3;
    const bool ok = bat.all_hold() && equality_ok;

    Json report = run_header(cfg, "logsob", nl);
    report["ground_state"] = {{"energy", res.energy},
                              {"inf_energy_upper", res.inf_energy_upper},
                              {"pohozaev_relative_residual", res.pohozaev_relative_residual},
                              {"bilap_over_l2", res.bilap_sq / res.l2_sq}};
    report["constants"] = constants_json(bat.constants);
    report["gaussian_with_bound"] = report_json(bat.gaussian_with_bound);
    report["ground_state_margin"] = bat.ground_state_margin;
    report["ground_state_equality_ok"] = equality_ok;
    report["all_hold"] = bat.all_hold();
    report["ok"] = ok;
    Json reports = Json::array();
    for (const auto& r : bat.reports) reports.push_back(report_json(r));
    report["reports"] = std::move(reports);
    write_report(cfg, "logsob", report);

    std::cout << "logsob: lsi_constant=" << format_double(bat.constants.lsi_constant)
              << " bound=" << format_double(bat.constants.upper_bound)
              << " ground_state_margin=" << format_double(bat.ground_state_margin) << (ok ? " ok" : " FAILED")
              << "\n";
    return ok ? kExitOk : kExitTolerance;
}

int run_sweep(const RunConfig& cfg) {
    ensure_out_dir(cfg);
    struct Row {
        std::optional<double> inf_J, C, bound;
        bool ok = false;
        std::string error;
    };
    const auto& items = cfg.sweep_items;
    std::vector<Row> rows(items.size());

    auto work = [&](std::size_t i) {
        const SweepItem& it = items[i];
        Row& row = rows[i];
        if (it.error) {
            row.error = *it.error;
            return;
        }
        try {
            const Nonlinearity nl = it.model.build(it.N);
            const GroundStateResult res = solve_with(cfg, it.N, nl);
            row.inf_J = res.inf_energy_upper;
            row.bound = lsi_upper_bound(it.N);
            row.ok = res.pohozaev_relative_residual <= cfg.pohozaev_tol;
            if (nl.is_log()) {
                const LsiConstants k = constant_from_energy(it.N, res.inf_energy_upper);
                row.C = k.C_N_log;
                row.ok = row.ok && k.lsi_constant < k.upper_bound;
            }
            if (!row.ok) row.error = "sweep item '" + it.text + "': tolerance breach";
        } catch (const std::exception& e) {
            row.error = "sweep item '" + it.text + "': " + e.what();
        }
    };

    unsigned threads = cfg.sweep_threads > 0 ? static_cast<unsigned>(cfg.sweep_threads)
                                             : std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(items.size()));
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < items.size(); i = next++) work(i);
        });
    for (auto& th : pool) th.join();

    auto cell = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
    std::string csv = "N,model,inf_J_upper,C_N_log_upper,bound,ok\n";
    bool all_ok = true;
    for (std::size_t i = 0; i < items.size(); ++i) {
        const SweepItem& it = items[i];
        const Row& row = rows[i];
        all_ok = all_ok && row.ok;
        const std::string N = it.error && it.N == 0 ? "" : std::to_string(it.N);
        const std::string model = it.error ? it.text : it.model.label(it.N);
        csv += N + "," + csv_cell(model) + "," + cell(row.inf_J) + "," + cell(row.C) + "," + cell(row.bound) + "," +
               (row.ok ? "true" : "false") + "\n";
        if (!row.error.empty()) std::cerr << row.error << "\n";
    }
    write_text_file((fs::path(cfg.out_dir) / "sweep.csv").string(), csv);
    std::cout << "sweep: " << items.size() << " items" << (all_ok ? " ok" : " with failures") << "\n";
    return all_ok ? kExitOk : kExitTolerance;
}

int guarded(const std::function<int()>& body) {
    try {
        return body();
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return kExitIo;
    } catch (const SolverError& e) {
        std::cerr << "solver failure (" << SolverError::name(e.kind()) << "): " << e.what() << "\n";
        return kExitSolver;
    } catch (const std::exception& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return kExitSolver;
    }
}

}  // namespace bhg
