#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "zeno/amplitude.hpp"
#include "zeno/errors.hpp"
#include "zeno/scenario.hpp"
#include "zeno/timescales.hpp"

using zeno::Command;
using zeno::ConfigError;
using zeno::ScenarioConfig;

namespace {

std::string strip_comment_prefix(const std::string& rendered) {
    std::istringstream in(rendered);
    std::string line, out;
    while (std::getline(in, line)) out += line.substr(2) + "\n";
    return out;
}

const zeno::Artifact& find(const std::vector<zeno::Artifact>& arts, const std::string& suffix) {
    for (const auto& a : arts)
        if (a.filename.ends_with(suffix)) return a;
    throw std::runtime_error("no artifact " + suffix);
}

}  // namespace

TEST_CASE("presets expand to the table parameter triplets") {
    const auto pd = zeno::preset_config("photodetachment");
    CHECK(pd.params.cutoff == 1.0e10);
    CHECK(pd.params.omega1 == 2.0e4);
    CHECK(pd.params.lambda2 == 3.18e-7);
    CHECK(pd.formfactor == zeno::FormfactorId::Phi1);
    const auto qd = zeno::preset_config("quantum-dot");
    CHECK(qd.params.cutoff == 1.67e16);
    CHECK(qd.params.omega1 == 7.25e12);
    CHECK(qd.params.lambda2 == 3.58e-6);
    const auto h = zeno::preset_config("hydrogen");
    CHECK(h.params.cutoff == 8.498e18);
    CHECK(h.params.omega1 == 1.55e16);
    CHECK(h.params.lambda2 == 6.43e-9);
    CHECK(h.formfactor == zeno::FormfactorId::Phi3);
    CHECK_THROWS_AS(zeno::preset_config("muonium"), ConfigError);
}

TEST_CASE("config text parsing") {
    const auto cfg = zeno::parse_config(
        "# explicit triplet\n"
        "formfactor = phi2\n"
        "lambda_cutoff_per_s = 1.67e16\n"
        "omega1_per_s = 7.25e12   # bare level\n"
        "lambda_squared = 3.58e-6\n"
        "engine = exact\n"
        "neps_epsilon = 0.01, 0.001\n"
        "output_dir = out\n");
    CHECK(cfg.preset.empty());
    CHECK(cfg.label() == "scenario");
    CHECK(cfg.engine == zeno::Engine::Phi2Poles);
    CHECK(cfg.neps_epsilon.size() == 2);
    CHECK(cfg.output_dir == "out");

    // preset first, then overrides
    const auto over = zeno::parse_config("preset = hydrogen\nlambda_squared = 1e-8\n");
    CHECK(over.params.cutoff == 8.498e18);
    CHECK(over.params.lambda2 == 1e-8);

    CHECK_THROWS_AS(zeno::parse_config("preset = hydrogen\nlambda = 3\n"), ConfigError);
    CHECK_THROWS_AS(zeno::parse_config("formfactor = phi1\nomega1_per_s = 2e4\n"), ConfigError);
    CHECK_THROWS_AS(zeno::parse_config("preset = hydrogen\ncurve_points = many\n"), ConfigError);
    CHECK_THROWS_AS(zeno::parse_config("preset = hydrogen\nengine = exact\n"), ConfigError);
    CHECK_THROWS_AS(zeno::parse_config("preset = hydrogen\nneps_epsilon = 0.5, 1.5\n"), ConfigError);
    CHECK_THROWS_AS(zeno::parse_config("preset = hydrogen\npreset = quantum-dot\n"), ConfigError);
    CHECK_THROWS_AS(zeno::parse_config("preset hydrogen\n"), ConfigError);
    CHECK_THROWS_AS(zeno::parse_config("preset = hydrogen\nlambda_squared = 1.5\n"), ConfigError);
    CHECK_THROWS_AS(zeno::load_config("no-such-config.txt"), ConfigError);
}

TEST_CASE("rendered config parses back to itself") {
    auto cfg = zeno::preset_config("quantum-dot");
    cfg.protocol_T_over_td = {0.3, 0.03};
    cfg.curve_t_max_seconds = 1e-6;
    const std::string once = zeno::render_config(cfg);
    const auto back = zeno::parse_config(strip_comment_prefix(once));
    CHECK(zeno::render_config(back) == once);
}

TEST_CASE("curve artifact is deterministic and carries the library values") {
    auto cfg = zeno::preset_config("quantum-dot");
    cfg.curve_points = 24;
    const auto first = zeno::build_artifacts(cfg, Command::Curve);
    const auto second = zeno::build_artifacts(cfg, Command::Curve);
    REQUIRE(first.size() == second.size());
    for (std::size_t i = 0; i < first.size(); ++i) CHECK(first[i].content == second[i].content);

    const std::string& csv = find(first, "_curve.csv").content;
    CHECK(csv.rfind("# command = curve\n# preset = quantum-dot\n", 0) == 0);
    CHECK(csv.find("\nt_seconds,t_over_td,p,err_est,engine\n") != std::string::npos);
    CHECK(csv.find('\r') == std::string::npos);

    // the row at t = t_Z holds the library value bit for bit
    const double t_z = zeno::compute_timescales(cfg.params, zeno::Formfactor::phi2()).t_Z.value;
    const auto engine = zeno::make_engine(cfg.params, zeno::Formfactor::phi2());
    const double p = zeno::sample_curve(*engine, cfg.formfactor, {t_z}).samples.front().p;
    std::istringstream in(csv);
    std::string line;
    bool found = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#' || line[0] == 't') continue;
        std::istringstream row(line);
        std::string t, over, pv;
        std::getline(row, t, ',');
        std::getline(row, over, ',');
        std::getline(row, pv, ',');
        if (std::stod(t) == t_z) {
            found = true;
            CHECK(std::stod(pv) == p);
            CHECK(line.ends_with(",phi2_poles"));
        }
    }
    CHECK(found);
}

TEST_CASE("neps and protocol artifacts") {
    auto cfg = zeno::preset_config("hydrogen");
    cfg.neps_T_over_td = {1e-2, 1e-1};
    cfg.neps_epsilon = {1e-2};
    cfg.protocol_T_over_td = {1e-2};
    cfg.protocol_tau_points = 40;
    const auto neps = zeno::build_artifacts(cfg, Command::Neps);
    const std::string& n = find(neps, "_neps.csv").content;
    CHECK(n.find("\nT_over_td,epsilon,N_epsilon\n") != std::string::npos);
    CHECK(find(neps, "_neps.py").content.find("read_csv") != std::string::npos);

    const auto prot = zeno::build_artifacts(cfg, Command::Protocol);
    CHECK(find(prot, "_protocol.csv").content.find("\nT_seconds,N,tau_seconds,tau_over_td,p_N\n") !=
          std::string::npos);
    CHECK(find(prot, "_minima.csv").content.find("tau_star_over_tZ") != std::string::npos);
}

TEST_CASE("run_scenario exit codes") {
    const auto dir = std::filesystem::temp_directory_path() / "zeno_scenario_test";
    std::filesystem::remove_all(dir);
    std::ostringstream log, err;

    auto cfg = zeno::preset_config("hydrogen");
    cfg.output_dir = dir.string();
    CHECK(zeno::run_scenario(cfg, Command::Timescales, log, err) == 0);
    CHECK(std::filesystem::exists(dir / "hydrogen_timescales.txt"));
    CHECK(zeno::run_scenario(cfg, Command::Table1, log, err) == 0);
    CHECK(std::filesystem::exists(dir / "table1.csv"));

    // omega - lambda^2 int phi/x < 0: bound state
    auto bound = zeno::parse_config("formfactor = phi1\nlambda_cutoff_per_s = 1\nomega1_per_s = 1e-3\nlambda_squared = 0.5\n");
    bound.output_dir = dir.string();
    CHECK(zeno::run_scenario(bound, Command::Curve, log, err) == 3);
    CHECK(err.str().find("error:") != std::string::npos);

    CHECK(zeno::exit_code_for(ConfigError("x")) == 2);
    CHECK(zeno::exit_code_for(zeno::ConvergenceError("x", 1.0)) == 4);
    CHECK(zeno::exit_code_for(zeno::BoundStateError("x")) == 3);
    CHECK(zeno::exit_code_for(std::runtime_error("x")) == 1);
    std::filesystem::remove_all(dir);
}
