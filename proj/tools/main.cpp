#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "bhg/cli_reporting.hpp"
#include "bhg/config.hpp"

namespace {

struct Common {
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--config", c.config, "key = value configuration file");
    sub->add_option("--out", c.out, "output directory (overrides output.dir)");
    sub->add_option("--seed", c.seed, "random seed (overrides seed)");
}

bhg::RunConfig resolve(const Common& c) {
    bhg::RunConfig cfg = c.config.empty() ? bhg::parse_config("") : bhg::load_config(c.config);
    if (!c.out.empty()) cfg.out_dir = c.out;
    if (c.seed) cfg.seed = *c.seed;
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Ground states of the biharmonic equation and the biharmonic log-Sobolev constant"};
    app.require_subcommand(1);
    Common common;
    std::optional<std::string> profile;

    auto* solve = app.add_subcommand("solve", "minimize the energy on the Pohozaev set");
    auto* verify = app.add_subcommand("verify", "recheck residuals of a stored profile");
    auto* logsob = app.add_subcommand("logsob", "log model constants and the inequality battery");
    auto* sweep = app.add_subcommand("sweep", "solve a list of (N, model) pairs in parallel");
    for (auto* sub : {solve, verify, logsob, sweep}) add_common(sub, common);
    verify->add_option("--profile", profile, "profile CSV (default: <out>/profile.csv)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : bhg::kExitConfig;
    }

    return bhg::guarded([&] {
        const bhg::RunConfig cfg = resolve(common);
        if (solve->parsed()) return bhg::run_solve(cfg);
        if (verify->parsed()) return bhg::run_verify(cfg, profile);
        if (logsob->parsed()) return bhg::run_logsob(cfg);
        return bhg::run_sweep(cfg);
    });
}
