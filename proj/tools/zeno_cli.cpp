#include <CLI11.hpp>

#include <iostream>
#include <string>

#include "zeno/errors.hpp"
#include "zeno/scenario.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Survival probability, Zeno timescales and repeated-measurement protocols"};
    app.require_subcommand(1, 1);

    std::string preset, config, out, engine;
    app.add_option("--preset", preset, "photodetachment, quantum-dot or hydrogen");
    app.add_option("--config", config, "key = value scenario file");
    app.add_option("--out", out, "output directory (overrides output_dir)");
    app.add_option("--engine", engine, "auto, quadrature or exact")
        ->check(CLI::IsMember({"auto", "quadrature", "exact"}));

    const char* help[] = {
        "p(t) on a log grid from 1e-3 t_Z to 5 t_ep, with a plot script",
        "t_Z, t_a, t_d, t_ep of the three preset systems",
        "p_N(T) against tau = T/N for several observation times T",
        "N_eps(T): the longest run of measurements keeping p_N within eps of p_1",
        "every characteristic time with its provenance",
    };
    int i = 0;
    for (zeno::Command c : {zeno::Command::Curve, zeno::Command::Table1, zeno::Command::Protocol,
                            zeno::Command::Neps, zeno::Command::Timescales})
        app.add_subcommand(zeno::command_name(c), help[i++])->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        const zeno::Command cmd = zeno::parse_command(app.get_subcommands().front()->get_name());
        zeno::ScenarioConfig cfg;
        if (!config.empty()) {
            cfg = zeno::load_config(config);
            if (!preset.empty() && preset != cfg.preset)
                throw zeno::ConfigError("--preset conflicts with the preset of the config file");
        } else if (!preset.empty()) {
            cfg = zeno::preset_config(preset);
        } else if (cmd != zeno::Command::Table1) {
            throw zeno::ConfigError("give --preset or --config");
        }
        if (!engine.empty()) cfg.engine = zeno::parse_engine(engine, cfg.formfactor);
        if (!out.empty()) cfg.output_dir = out;
        return zeno::run_scenario(cfg, cmd, std::cout, std::cerr);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return zeno::exit_code_for(e);
    }
}
