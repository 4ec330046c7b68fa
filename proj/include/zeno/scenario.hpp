#pragma once

// Scenario configuration and the artifact writers behind the command line tool.
//
// Config files are flat "key = value" text, '#' starts a comment, and every dimensioned key
// names its unit. Lists are comma separated.

#include <exception>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "zeno/amplitude.hpp"
#include "zeno/formfactor.hpp"
#include "zeno/model.hpp"

namespace zeno {

enum class Command { Curve, Table1, Protocol, Neps, Timescales };

std::string command_name(Command c);
// Throws ConfigError for unknown names.
Command parse_command(const std::string& name);

struct ScenarioConfig {
    std::string preset;  // empty when the parameters were given explicitly
    FormfactorId formfactor = FormfactorId::Phi1;
    ModelParams params;
    Engine engine = Engine::Auto;

    std::string custom_table_path;
    double custom_tail_exponent = 0;
    double custom_head_exponent = 0;

    int curve_points = 200;
    std::optional<double> curve_t_min_seconds;  // default 1e-3 t_Z
    std::optional<double> curve_t_max_seconds;  // default 5 t_ep

    std::vector<double> protocol_T_over_td{1e-4, 1e-3, 1e-2, 1e-1};
    int protocol_tau_points = 400;

    std::vector<double> neps_T_over_td{1e-3, 3e-3, 1e-2, 3e-2, 1e-1, 3e-1, 1.0};
    std::vector<double> neps_epsilon{1e-2, 3e-3, 1e-3};

    std::string output_dir = ".";

    // Stem of the output file names: the preset name, or "scenario".
    std::string label() const;
};

// "auto", "quadrature", "exact" (the closed form of phi1 or phi2), "phi1_exact", "phi2_poles".
// Throws ConfigError for unknown names and for "exact" without a closed form.
Engine parse_engine(const std::string& name, FormfactorId ff);

// Parameter triplet and default grids of a named preset. Throws ConfigError for unknown names.
ScenarioConfig preset_config(const std::string& name);

// Keys are applied after the preset named by "preset" (if any), so they override it.
// Throws ConfigError on unknown keys, malformed values, or missing parameters.
ScenarioConfig parse_config(const std::string& text);
ScenarioConfig load_config(const std::string& path);

// Every resolved field as "# key = value" lines; parse_config accepts it back after
// stripping the "# " prefixes.
std::string render_config(const ScenarioConfig& cfg);

// Builds the formfactor of the config (loads the table for custom).
Formfactor scenario_formfactor(const ScenarioConfig& cfg);

struct Artifact {
    std::string filename;  // relative to output_dir
    std::string content;
};

// The files of one command, in memory. Throws the library errors unchanged.
std::vector<Artifact> build_artifacts(const ScenarioConfig& cfg, Command cmd);

// Writes the artifacts into cfg.output_dir and returns the exit status:
// 0 success, 2 configuration error, 3 physics precondition (bound state, divergent moment),
// 4 numerical non-convergence, 1 anything else. Progress goes to `log`, failures to `err`.
int run_scenario(const ScenarioConfig& cfg, Command cmd, std::ostream& log, std::ostream& err);

// Status for an exception escaping scenario code, using the codes above.
int exit_code_for(const std::exception& e);

// Closed-form engines are re-checked against quadrature on every curve sample;
// a larger amplitude difference is a ConvergenceError.
inline constexpr double kEngineAgreement = 1e-8;

}  // namespace zeno
