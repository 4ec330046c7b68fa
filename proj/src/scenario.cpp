#include "zeno/scenario.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include "zeno/errors.hpp"
#include "zeno/protocols.hpp"
#include "zeno/timescales.hpp"

namespace zeno {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
    double x = 0;
    const auto* end = v.data() + v.size();
    const auto [ptr, ec] = std::from_chars(v.data(), end, x);
    if (ec != std::errc() || ptr != end || !std::isfinite(x))
        throw ConfigError(fmt::format("{}: '{}' is not a finite number", key, v));
    return x;
}

int to_int(const std::string& key, const std::string& v) {
    int x = 0;
    const auto* end = v.data() + v.size();
    const auto [ptr, ec] = std::from_chars(v.data(), end, x);
    if (ec != std::errc() || ptr != end) throw ConfigError(fmt::format("{}: '{}' is not an integer", key, v));
    return x;
}

std::vector<double> to_list(const std::string& key, const std::string& v) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(to_double(key, trim(item)));
    if (out.empty()) throw ConfigError(key + ": empty list");
    return out;
}

FormfactorId to_formfactor(const std::string& v) {
    if (v == "phi1") return FormfactorId::Phi1;
    if (v == "phi2") return FormfactorId::Phi2;
    if (v == "phi3") return FormfactorId::Phi3;
    if (v == "custom") return FormfactorId::Custom;
    throw ConfigError(fmt::format("formfactor: unknown id '{}'", v));
}

std::string formfactor_id_name(FormfactorId id) {
    switch (id) {
        case FormfactorId::Phi1: return "phi1";
        case FormfactorId::Phi2: return "phi2";
        case FormfactorId::Phi3: return "phi3";
        default: return "custom";
    }
}

std::string num(double x) { return fmt::format("{:.17g}", x); }

std::string list(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + num(v[i]);
    return s;
}

void check_positive(const std::string& key, const std::vector<double>& v) {
    for (double x : v)
        if (!(x > 0.0)) throw ConfigError(key + ": values must be positive");
}

std::string csv_header(const ScenarioConfig& cfg, Command cmd) {
    return fmt::format("# command = {}\n", command_name(cmd)) + render_config(cfg);
}

std::shared_ptr<const AmplitudeEngine> quadrature_reference(const ScenarioConfig& cfg, const Formfactor& ff,
                                                            const AmplitudeEngine& engine) {
    if (engine.kind() == Engine::Quadrature) return nullptr;
    return make_engine(cfg.params, ff, Engine::Quadrature);
}

std::string plot_script(const std::string& body) {
    return "import sys\n"
           "import pandas as pd\n"
           "import matplotlib\n"
           "matplotlib.use(\"Agg\")\n"
           "import matplotlib.pyplot as plt\n\n" +
           body;
}

std::vector<Artifact> curve_artifacts(const ScenarioConfig& cfg) {
    const Formfactor ff = scenario_formfactor(cfg);
    const auto engine = make_engine(cfg.params, ff, cfg.engine);
    const auto reference = quadrature_reference(cfg, ff, *engine);

    std::optional<double> t_z, t_d, t_ep;
    try {
        const Timescales ts = compute_timescales(cfg.params, ff);
        t_z = ts.t_Z.value;
        if (ts.t_d) t_d = ts.t_d->value;
        if (ts.t_ep) t_ep = ts.t_ep->value;
    } catch (const DivergenceError&) {
        if (!cfg.curve_t_min_seconds || !cfg.curve_t_max_seconds) throw;
    }
    const double t0 = cfg.curve_t_min_seconds ? *cfg.curve_t_min_seconds : 1e-3 * t_z.value_or(0.0);
    if (!cfg.curve_t_max_seconds && !t_ep)
        throw ConfigError("curve_t_max_seconds is required when t_ep is not available");
    const double t1 = cfg.curve_t_max_seconds ? *cfg.curve_t_max_seconds : 5.0 * *t_ep;
    if (!(t0 > 0.0 && t1 > t0)) throw ConfigError("curve range needs 0 < t_min < t_max");

    std::vector<double> times = log_grid(t0, t1, cfg.curve_points);
    if (t_z && *t_z > t0 && *t_z < t1) times.push_back(*t_z);
    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end()), times.end());

    const SurvivalCurve curve = sample_curve(*engine, cfg.formfactor, times);
    if (reference) {
        for (double t : times) {
            const double diff = std::abs(engine->amplitude(t).value - reference->amplitude(t).value);
            if (diff > kEngineAgreement)
                throw ConvergenceError(fmt::format("{} and quadrature disagree by {:.3g} at t = {:.6g} s",
                                                   engine_name(engine->kind()), diff, t),
                                       diff);
        }
    }

    const std::string name = engine_name(curve.engine);
    std::string csv = csv_header(cfg, Command::Curve);
    csv += "t_seconds,t_over_td,p,err_est,engine\n";
    for (const auto& s : curve.samples) {
        const double over = t_d ? s.t / *t_d : std::numeric_limits<double>::quiet_NaN();
        csv += fmt::format("{},{},{},{},{}\n", num(s.t), num(over), num(s.p), num(s.err), name);
    }

    const std::string stem = cfg.label() + "_curve";
    const std::string script = plot_script(fmt::format(
        "data = pd.read_csv(\"{0}.csv\", comment=\"#\")\n"
        "fig, (lin, log) = plt.subplots(1, 2, figsize=(11, 4.5))\n"
        "lin.semilogx(data[\"t_over_td\"], data[\"p\"])\n"
        "log.loglog(data[\"t_over_td\"], data[\"p\"].clip(lower=1e-300))\n"
        "for ax in (lin, log):\n"
        "    ax.set_xlabel(\"t / t_d\")\n"
        "    ax.set_ylabel(\"p(t)\")\n"
        "fig.suptitle(\"{1}\")\n"
        "fig.savefig(sys.argv[1] if len(sys.argv) > 1 else \"{0}.png\", dpi=150)\n",
        stem, cfg.label()));
    return {{stem + ".csv", csv}, {stem + ".py", script}};
}

double require_td(const ScenarioConfig& cfg, const Formfactor& ff, double* t_z) {
    const Timescales ts = compute_timescales(cfg.params, ff);
    if (!ts.t_d) throw ConfigError("this command needs t_d, which is not defined for custom formfactors");
    *t_z = ts.t_Z.value;
    return ts.t_d->value;
}

std::vector<Artifact> protocol_artifacts(const ScenarioConfig& cfg) {
    const Formfactor ff = scenario_formfactor(cfg);
    double t_z = 0;
    const double t_d = require_td(cfg, ff, &t_z);
    const LogSurvival logp = log_survival_of(protocol_engine(cfg.params, ff, cfg.engine));

    std::string csv = csv_header(cfg, Command::Protocol);
    std::string minima = csv_header(cfg, Command::Protocol);
    minima += "T_over_td,tau_star_seconds,tau_star_over_tZ,p_star,p_exponential,edge\n";
    csv += "T_seconds,N,tau_seconds,tau_over_td,p_N\n";
    for (double T_td : cfg.protocol_T_over_td) {
        const double T = T_td * t_d;
        const double tau_min = std::min(1e-3 * t_z, 0.5 * T);
        const ProtocolResult r = protocol_grid(logp, T, tau_min, cfg.protocol_tau_points, t_d);
        for (const auto& row : r.rows)
            csv += fmt::format("{},{},{},{},{}\n", num(T), row.N, num(row.tau), num(row.tau / t_d), num(row.p_N));
        const auto& m = r.anti_zeno_min;
        minima += fmt::format("{},{},{},{},{},{}\n", num(T_td), num(m.tau), num(m.tau / t_z), num(m.p),
                              num(r.reference_exponential), m.degenerate ? 1 : 0);
    }

    const std::string stem = cfg.label() + "_protocol";
    const std::string script = plot_script(fmt::format(
        "data = pd.read_csv(\"{0}.csv\", comment=\"#\")\n"
        "fig, ax = plt.subplots()\n"
        "for T, rows in data.groupby(\"T_seconds\"):\n"
        "    ax.semilogx(rows[\"tau_over_td\"], rows[\"p_N\"], label=\"T = %.3g s\" % T)\n"
        "ax.set_xlabel(\"tau / t_d\")\n"
        "ax.set_ylabel(\"p_N(T)\")\n"
        "ax.legend()\n"
        "ax.set_title(\"{1}\")\n"
        "fig.savefig(sys.argv[1] if len(sys.argv) > 1 else \"{0}.png\", dpi=150)\n",
        stem, cfg.label()));
    return {{stem + ".csv", csv}, {stem + "_minima.csv", minima}, {stem + ".py", script}};
}

std::vector<Artifact> neps_artifacts(const ScenarioConfig& cfg) {
    const Formfactor ff = scenario_formfactor(cfg);
    double t_z = 0;
    const double t_d = require_td(cfg, ff, &t_z);
    const LogSurvival logp = log_survival_of(protocol_engine(cfg.params, ff, cfg.engine));

    std::string csv = csv_header(cfg, Command::Neps);
    csv += fmt::format("# N_epsilon = inf marks no violation up to {}\n", kNEpsilonCap);
    csv += "T_over_td,epsilon,N_epsilon\n";
    for (double eps : cfg.neps_epsilon) {
        for (double T_td : cfg.neps_T_over_td) {
            const NEpsilon n = n_epsilon(logp, T_td * t_d, eps);
            csv += fmt::format("{},{},{}\n", num(T_td), num(eps), n.N ? std::to_string(*n.N) : "inf");
        }
    }

    const std::string stem = cfg.label() + "_neps";
    const std::string script = plot_script(fmt::format(
        "data = pd.read_csv(\"{0}.csv\", comment=\"#\")\n"
        "fig, ax = plt.subplots()\n"
        "for eps, rows in data.groupby(\"epsilon\"):\n"
        "    ax.loglog(rows[\"T_over_td\"], rows[\"N_epsilon\"], \"o-\", label=\"eps = %g\" % eps)\n"
        "ax.set_xlabel(\"T / t_d\")\n"
        "ax.set_ylabel(\"N_eps(T)\")\n"
        "ax.legend()\n"
        "ax.set_title(\"{1}\")\n"
        "fig.savefig(sys.argv[1] if len(sys.argv) > 1 else \"{0}.png\", dpi=150)\n",
        stem, cfg.label()));
    return {{stem + ".csv", csv}, {stem + ".py", script}};
}

std::vector<Artifact> table1_artifacts(const ScenarioConfig& cfg) {
    const Table1 t = render_table1(presets());
    std::string header = "# command = table1\n";
    for (const auto& p : presets())
        header += fmt::format("# {}: formfactor = {}, lambda_cutoff_per_s = {}, omega1_per_s = {}, lambda_squared = {}\n",
                              p.name, formfactor_id_name(p.formfactor), num(p.params.cutoff), num(p.params.omega1),
                              num(p.params.lambda2));
    header += "# output_dir = " + cfg.output_dir + "\n";
    return {{"table1.txt", t.text}, {"table1.csv", header + t.csv}};
}

std::vector<Artifact> timescales_artifacts(const ScenarioConfig& cfg) {
    const Timescales ts = compute_timescales(cfg.params, scenario_formfactor(cfg));
    std::string text = csv_header(cfg, Command::Timescales) + render_timescales(ts);
    return {{cfg.label() + "_timescales.txt", text}};
}

}  // namespace

std::string command_name(Command c) {
    switch (c) {
        case Command::Curve: return "curve";
        case Command::Table1: return "table1";
        case Command::Protocol: return "protocol";
        case Command::Neps: return "neps";
        case Command::Timescales: return "timescales";
    }
    return "?";
}

Command parse_command(const std::string& name) {
    for (Command c : {Command::Curve, Command::Table1, Command::Protocol, Command::Neps, Command::Timescales})
        if (command_name(c) == name) return c;
    throw ConfigError(fmt::format("unknown command '{}'", name));
}

Engine parse_engine(const std::string& name, FormfactorId ff) {
    if (name == "auto") return Engine::Auto;
    if (name == "quadrature") return Engine::Quadrature;
    if (name == "exact") {
        if (ff == FormfactorId::Phi1) return Engine::Phi1Exact;
        if (ff == FormfactorId::Phi2) return Engine::Phi2Poles;
        throw ConfigError("engine 'exact' needs phi1 or phi2");
    }
    if (name == "phi1_exact" || name == "phi2_poles") {
        const Engine e = name == "phi1_exact" ? Engine::Phi1Exact : Engine::Phi2Poles;
        try {
            return resolve_engine(e, ff);
        } catch (const UnsupportedError& err) {
            throw ConfigError(err.what());
        }
    }
    throw ConfigError(fmt::format("unknown engine '{}'", name));
}

std::string ScenarioConfig::label() const { return preset.empty() ? "scenario" : preset; }

ScenarioConfig preset_config(const std::string& name) {
    ScenarioConfig cfg;
    try {
        const Preset& p = preset(name);
        cfg.preset = p.name;
        cfg.formfactor = p.formfactor;
        cfg.params = p.params;
    } catch (const std::out_of_range& e) {
        throw ConfigError(e.what());
    }
    return cfg;
}

ScenarioConfig parse_config(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(fmt::format("line {}: expected 'key = value'", lineno));
        const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) throw ConfigError(fmt::format("line {}: empty key or value", lineno));
        if (!kv.emplace(key, value).second) throw ConfigError(fmt::format("line {}: duplicate key '{}'", lineno, key));
    }

    ScenarioConfig cfg;
    bool have_params = false;
    if (auto it = kv.find("preset"); it != kv.end()) {
        cfg = preset_config(it->second);
        have_params = true;
        kv.erase(it);
    }
    auto take = [&](const char* key) -> std::optional<std::string> {
        auto it = kv.find(key);
        if (it == kv.end()) return std::nullopt;
        std::string v = it->second;
        kv.erase(it);
        return v;
    };

    if (auto v = take("formfactor")) cfg.formfactor = to_formfactor(*v);
    const auto cutoff = take("lambda_cutoff_per_s"), omega1 = take("omega1_per_s"), l2 = take("lambda_squared");
    if (cutoff || omega1 || l2) {
        if (!have_params && !(cutoff && omega1 && l2))
            throw ConfigError("without a preset, lambda_cutoff_per_s, omega1_per_s and lambda_squared are all required");
        const double c = cutoff ? to_double("lambda_cutoff_per_s", *cutoff) : cfg.params.cutoff;
        const double w = omega1 ? to_double("omega1_per_s", *omega1) : cfg.params.omega1;
        const double g = l2 ? to_double("lambda_squared", *l2) : cfg.params.lambda2;
        try {
            cfg.params = ModelParams::make(c, w, g);
        } catch (const DomainError& e) {
            throw ConfigError(e.what());
        }
        have_params = true;
    }
    if (!have_params) throw ConfigError("no preset and no parameter triplet given");

    if (auto v = take("custom_table_path")) cfg.custom_table_path = *v;
    if (auto v = take("custom_tail_exponent")) cfg.custom_tail_exponent = to_double("custom_tail_exponent", *v);
    if (auto v = take("custom_head_exponent")) cfg.custom_head_exponent = to_double("custom_head_exponent", *v);
    if (cfg.formfactor == FormfactorId::Custom && cfg.custom_table_path.empty())
        throw ConfigError("formfactor custom needs custom_table_path");

    if (auto v = take("engine")) cfg.engine = parse_engine(*v, cfg.formfactor);
    if (cfg.engine != Engine::Auto && cfg.engine != Engine::Quadrature) {
        try {
            resolve_engine(cfg.engine, cfg.formfactor);
        } catch (const UnsupportedError& e) {
            throw ConfigError(e.what());
        }
    }

    if (auto v = take("curve_points")) cfg.curve_points = to_int("curve_points", *v);
    if (cfg.curve_points < 2) throw ConfigError("curve_points must be at least 2");
    if (auto v = take("curve_t_min_seconds")) cfg.curve_t_min_seconds = to_double("curve_t_min_seconds", *v);
    if (auto v = take("curve_t_max_seconds")) cfg.curve_t_max_seconds = to_double("curve_t_max_seconds", *v);
    if (auto v = take("protocol_T_over_td")) cfg.protocol_T_over_td = to_list("protocol_T_over_td", *v);
    if (auto v = take("protocol_tau_points")) cfg.protocol_tau_points = to_int("protocol_tau_points", *v);
    if (cfg.protocol_tau_points < 2) throw ConfigError("protocol_tau_points must be at least 2");
    if (auto v = take("neps_T_over_td")) cfg.neps_T_over_td = to_list("neps_T_over_td", *v);
    if (auto v = take("neps_epsilon")) cfg.neps_epsilon = to_list("neps_epsilon", *v);
    if (auto v = take("output_dir")) cfg.output_dir = *v;

    check_positive("protocol_T_over_td", cfg.protocol_T_over_td);
    check_positive("neps_T_over_td", cfg.neps_T_over_td);
    for (double e : cfg.neps_epsilon)
        if (!(e > 0.0 && e < 1.0)) throw ConfigError("neps_epsilon: values must lie in (0, 1)");

    if (!kv.empty()) throw ConfigError(fmt::format("unknown key '{}'", kv.begin()->first));
    return cfg;
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(fmt::format("cannot read config '{}'", path));
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string render_config(const ScenarioConfig& cfg) {
    std::string out;
    auto put = [&](const std::string& key, const std::string& value) { out += "# " + key + " = " + value + "\n"; };
    if (!cfg.preset.empty()) put("preset", cfg.preset);
    put("formfactor", formfactor_id_name(cfg.formfactor));
    put("lambda_cutoff_per_s", num(cfg.params.cutoff));
    put("omega1_per_s", num(cfg.params.omega1));
    put("lambda_squared", num(cfg.params.lambda2));
    put("engine", engine_name(cfg.engine));
    if (cfg.formfactor == FormfactorId::Custom) {
        put("custom_table_path", cfg.custom_table_path);
        put("custom_tail_exponent", num(cfg.custom_tail_exponent));
        put("custom_head_exponent", num(cfg.custom_head_exponent));
    }
    put("curve_points", std::to_string(cfg.curve_points));
    if (cfg.curve_t_min_seconds) put("curve_t_min_seconds", num(*cfg.curve_t_min_seconds));
    if (cfg.curve_t_max_seconds) put("curve_t_max_seconds", num(*cfg.curve_t_max_seconds));
    put("protocol_T_over_td", list(cfg.protocol_T_over_td));
    put("protocol_tau_points", std::to_string(cfg.protocol_tau_points));
    put("neps_T_over_td", list(cfg.neps_T_over_td));
    put("neps_epsilon", list(cfg.neps_epsilon));
    put("output_dir", cfg.output_dir);
    return out;
}

Formfactor scenario_formfactor(const ScenarioConfig& cfg) {
    if (cfg.formfactor != FormfactorId::Custom) return Formfactor::builtin(cfg.formfactor);
    try {
        return Formfactor::load_table(cfg.custom_table_path, cfg.custom_tail_exponent, cfg.custom_head_exponent);
    } catch (const std::exception& e) {
        throw ConfigError(fmt::format("custom table: {}", e.what()));
    }
}

std::vector<Artifact> build_artifacts(const ScenarioConfig& cfg, Command cmd) {
    switch (cmd) {
        case Command::Curve: return curve_artifacts(cfg);
        case Command::Table1: return table1_artifacts(cfg);
        case Command::Protocol: return protocol_artifacts(cfg);
        case Command::Neps: return neps_artifacts(cfg);
        case Command::Timescales: return timescales_artifacts(cfg);
    }
    return {};
}

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const DomainError*>(&e) ||
        dynamic_cast<const UnsupportedError*>(&e))
        return 2;
    if (dynamic_cast<const BoundStateError*>(&e) || dynamic_cast<const DivergenceError*>(&e)) return 3;
    if (dynamic_cast<const ConvergenceError*>(&e)) return 4;
    return 1;
}

int run_scenario(const ScenarioConfig& cfg, Command cmd, std::ostream& log, std::ostream& err) {
    try {
        const auto artifacts = build_artifacts(cfg, cmd);
        const std::filesystem::path dir(cfg.output_dir);
        std::filesystem::create_directories(dir);
        for (const auto& a : artifacts) {
            const auto path = dir / a.filename;
            std::ofstream out(path, std::ios::binary);
            out << a.content;
            if (!out) throw std::runtime_error(fmt::format("cannot write '{}'", path.string()));
            log << "wrote " << path.string() << "\n";
        }
        if (cmd == Command::Table1 || cmd == Command::Timescales) {
            for (const auto& a : artifacts)
                if (a.filename.ends_with(".txt")) log << a.content;
        }
        return 0;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_code_for(e);
    }
}

}  // namespace zeno
