#include "zeno/timescales.hpp"

#include <cmath>

#include <boost/math/tools/roots.hpp>
#include <fmt/format.h>

#include "zeno/amplitude.hpp"
#include "zeno/dispersion.hpp"
#include "zeno/errors.hpp"

namespace zeno {

std::string provenance_name(Provenance p) {
    switch (p) {
        case Provenance::ClosedForm: return "closed_form";
        case Provenance::RootBased: return "root_based";
        case Provenance::Numeric: return "numeric";
    }
    return "?";
}

namespace {

Tagged<double> closed(double v) { return {v, Provenance::ClosedForm}; }
Tagged<double> rooted(double v) { return {v, Provenance::RootBased}; }
Tagged<double> numeric(double v) { return {v, Provenance::Numeric}; }

// phi2 and phi3 share the exponential-era formulas; gamma1 from the resonance root
void fill_rational_decay(Timescales& ts, const ModelParams& p, const Formfactor& ff) {
    const double l2 = p.lambda2, l = p.lambda(), w1 = p.omega1;
    ts.t_d = closed(1.0 / (2.0 * M_PI * l2 * w1));
    ts.t_ep = closed(-2.0 * std::log(2.0 * M_PI * l2 * l) / (M_PI * l2 * w1));
    const auto roots = resonance_roots(p.dimensionless(), ff);
    const auto& res = resonance_of(roots);
    ts.gamma1 = rooted(2.0 * res.z.imag());
    ts.omega_tilde = rooted(p.cutoff * res.z.real());
}

}  // namespace

Timescales compute_timescales(const ModelParams& p, const Formfactor& ff) {
    if (!(p.lambda2 > 0.0)) throw DomainError("timescales need lambda2 > 0");
    Timescales ts;
    ts.formfactor = ff.name();
    const double L = p.cutoff, l = p.lambda(), l2 = p.lambda2;
    switch (ff.id()) {
        case FormfactorId::Phi1: {
            ts.exponent = 1.5;
            ts.t_Z = closed(32.0 / (9.0 * M_PI * L));
            ts.t_a = closed(std::pow(3.0 / (4.0 * std::sqrt(2.0 * M_PI)), 2.0 / 3.0) / (std::pow(l, 4.0 / 3.0) * L));
            ts.t_b = closed(1.0 / (std::sqrt(M_PI) * l * L));
            const auto roots = resonance_roots(p.dimensionless(), ff);
            const auto& res = resonance_of(roots);
            const double w = res.z.real();          // shifted frequency in units of Lambda
            const double wt = L * w;                // s^-1
            ts.omega_tilde = rooted(wt);
            ts.gamma = rooted(res.z.imag() / (2.0 * std::sqrt(w)));
            const double td = 1.0 / (M_PI * l2 * std::sqrt(L * wt));
            ts.t_d = rooted(td);
            ts.t_ep = rooted(-5.0 * std::log(l2 * l2 * L / wt) / (4.0 * M_PI * l2 * std::sqrt(L * wt)));
            ts.notes.push_back(fmt::format(
                "factor 2: the exponential era decays as exp(-4 gamma sqrt(w Lambda) t) = exp(-{:.6g} t/t_d), "
                "i.e. at twice the rate 1/t_d of the t_d row",
                4.0 * ts.gamma->value * std::sqrt(wt * L) * td));
            return ts;
        }
        case FormfactorId::Phi2: {
            ts.exponent = 2.0;
            ts.t_Z = closed(std::sqrt(6.0) / (L * std::sqrt(std::abs(std::log(2.0 * std::sqrt(6.0) * p.omega1 / L)))));
            ts.t_a = closed(std::sqrt(2.0) / (l * L));
            fill_rational_decay(ts, p, ff);
            return ts;
        }
        default: break;
    }
    // generic short-time path; phi3 lands here too
    const auto e = short_time_expansion(p, ff);
    ts.exponent = e.exponent;
    ts.t_a = numeric(e.t_a);
    ts.t_b = numeric(*e.t_b);
    ts.t_Z = numeric(e.validity_time);
    if (ff.id() == FormfactorId::Phi3) fill_rational_decay(ts, p, ff);
    return ts;
}

double crossover_time_numeric(const ModelParams& p, const Formfactor& ff) {
    const auto form = LongTimeForm::make(p, ff);
    // log(exponential / power) as a function of log s
    auto g = [&](double ls) {
        const double s = std::exp(ls);
        return std::log(form.amplitude2) - form.rate * s - std::log(form.power_coefficient) +
               form.power_exponent * ls;
    };
    // the ratio is positive in the exponential era (s ~ 1/rate) and falls without bound
    double lo = std::log(1.0 / form.rate);
    if (!(g(lo) > 0.0)) throw ConvergenceError("crossover: exponential term does not dominate at s = 1/rate", g(lo));
    double hi = lo;
    for (int k = 0; k < 200 && g(hi) > 0.0; ++k) hi += std::log(2.0);
    if (!(g(hi) <= 0.0)) throw ConvergenceError("crossover: no sign change of the log ratio", g(hi));
    std::uintmax_t iters = 200;
    auto tol = [](double a, double b) { return std::abs(b - a) <= 1e-14 * std::max(1.0, std::abs(a)); };
    const auto br = boost::math::tools::toms748_solve(g, lo, hi, tol, iters);
    return std::exp(0.5 * (br.first + br.second)) / p.cutoff;
}

Table1 render_table1(const std::vector<Preset>& systems) {
    std::vector<Timescales> cols;
    for (const auto& s : systems) cols.push_back(compute_timescales(s.params, Formfactor::builtin(s.formfactor)));
    struct Row {
        const char* name;
        std::optional<double> (*get)(const Timescales&);
    };
    const Row rows[] = {
        {"t_Z", [](const Timescales& t) -> std::optional<double> { return t.t_Z.value; }},
        {"t_a", [](const Timescales& t) -> std::optional<double> { return t.t_a.value; }},
        {"t_d", [](const Timescales& t) -> std::optional<double> {
             return t.t_d ? std::optional<double>(t.t_d->value) : std::nullopt;
         }},
        {"t_ep", [](const Timescales& t) -> std::optional<double> {
             return t.t_ep ? std::optional<double>(t.t_ep->value) : std::nullopt;
         }},
    };
    Table1 out;
    std::string& txt = out.text;
    std::string& csv = out.csv;
    txt += fmt::format("{:<6}", "");
    csv += "quantity,unit";
    for (const auto& s : systems) {
        txt += fmt::format("{:>34}", s.name);
        csv += "," + s.name;
    }
    txt += "\n";
    csv += "\n";
    for (const char* unit : {"s", "t_d"}) {
        for (const auto& row : rows) {
            txt += fmt::format("{:<6}", row.name);
            csv += fmt::format("{},{}", row.name, unit);
            for (const auto& c : cols) {
                const auto v = row.get(c);
                const double scale = std::string(unit) == "s" ? 1.0 : (c.t_d ? 1.0 / c.t_d->value : NAN);
                if (v && std::isfinite(scale)) {
                    txt += fmt::format("{:>30.4g} {:<3}", *v * scale, unit);
                    csv += fmt::format(",{:.17g}", *v * scale);
                } else {
                    txt += fmt::format("{:>34}", "-");
                    csv += ",";
                }
            }
            txt.erase(txt.find_last_not_of(' ') + 1);
            txt += "\n";
            csv += "\n";
        }
        if (std::string(unit) == "s") txt += "\n";
    }
    txt += "\nparameters:\n";
    for (const auto& s : systems)
        txt += fmt::format("  {:<16} {}  Lambda = {:.4g} s^-1  omega1 = {:.4g} s^-1  lambda^2 = {:.4g}\n", s.name,
                           Formfactor::builtin(s.formfactor).name(), s.params.cutoff, s.params.omega1,
                           s.params.lambda2);
    return out;
}

std::string render_timescales(const Timescales& ts) {
    std::string out = fmt::format("formfactor           {}\nshort-time exponent  {}\n", ts.formfactor, ts.exponent);
    auto line = [&](const char* name, const char* unit, const std::optional<Tagged<double>>& v) {
        if (v)
            out += fmt::format("{:<20} {:<24.17g} {:<6} [{}]\n", name, v->value, unit, provenance_name(v->source));
        else
            out += fmt::format("{:<20} {:<24} {:<6}\n", name, "unavailable", unit);
    };
    line("t_Z", "s", ts.t_Z);
    line("t_a", "s", ts.t_a);
    line("t_b", "s", ts.t_b);
    line("t_d", "s", ts.t_d);
    line("t_ep", "s", ts.t_ep);
    if (ts.gamma) line("gamma", "-", ts.gamma);
    if (ts.gamma1) line("gamma1", "-", ts.gamma1);
    line("omega_tilde", "s^-1", ts.omega_tilde);
    if (ts.t_d) out += fmt::format("{:<20} {:<24.6g}\n", "t_ep / t_d", ts.t_ep->value / ts.t_d->value);
    out += fmt::format("{:<20} {:<24.6g}\n", "t_Z / t_a", ts.t_Z.value / ts.t_a.value);
    for (const auto& n : ts.notes) out += "note: " + n + "\n";
    return out;
}

}  // namespace zeno
