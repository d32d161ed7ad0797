#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "polariton/cli/commands.hpp"
#include "polariton/cli/config.hpp"
#include "polariton/version.hpp"

namespace pc = polariton::cli;

int main(int argc, char** argv)
{
    CLI::App app{"Polariton pair-emission spectra in moving and "
                 "time-modulated dielectrics"};
    app.set_version_flag("--version", polariton::kVersion);
    app.require_subcommand(1, 1);

    std::string config_path;
    std::string out_path;
    std::string format;
    pc::CommandOptions opt;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON run configuration");
        sub->add_option("--out", out_path, "output file (default: stdout)");
        sub->add_option("--format", format, "output format")
            ->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--workers", opt.workers,
                        "worker threads (0: all cores)");
        sub->add_option("--seed", opt.seed, "seed for randomized checks");
    };

    auto* map = app.add_subcommand("map", "spectral density over (omega, ck)");
    auto* angular = app.add_subcommand("angular",
                                       "spectral density over directions");
    auto* rate = app.add_subcommand("rate", "total emission rate");
    auto* validate = app.add_subcommand("validate", "run invariant checks");
    for (auto* sub : {map, angular, rate, validate})
        add_common(sub);
    validate->add_flag("--inject-fault", opt.inject_fault,
                       "corrupt the Green function to exercise failure");

    try
    {
        app.parse(argc, argv);
    }
    catch (CLI::ParseError const& e)
    {
        int const code = app.exit(e);
        return code == 0 ? 0 : pc::kExitInvalidConfig;
    }

    pc::RunConfig cfg;
    try
    {
        if (!config_path.empty())
            cfg = pc::load_config(config_path);
        if (!out_path.empty())
            cfg.output.path = out_path;
        if (format == "csv")
            cfg.output.format = pc::OutputFormat::csv;
        else if (format == "json")
            cfg.output.format = pc::OutputFormat::json;
    }
    catch (pc::ConfigError const& e)
    {
        pc::report_error("invalid_config", e.what());
        return pc::kExitInvalidConfig;
    }

    for (auto const& w : polariton::validate(cfg.scenario))
        std::cerr << pc::json{{"warning", w}}.dump() << '\n';

    return pc::dispatch(app.get_subcommands().front()->get_name(), cfg, opt);
}
