#include <doctest.h>

#include <cmath>
#include <complex>
#include <memory>

#include "zeno/amplitude.hpp"
#include "zeno/errors.hpp"
#include "zeno/timescales.hpp"

using zeno::Engine;
using zeno::Formfactor;

namespace {

struct Case {
    const zeno::Preset* preset;
    Formfactor ff;
    double t_z, t_d;
};

Case preset_case(const char* name) {
    const auto& pr = zeno::preset(name);
    const auto ff = Formfactor::builtin(pr.formfactor);
    const auto ts = zeno::compute_timescales(pr.params, ff);
    return {&pr, ff, ts.t_Z.value, ts.t_d->value};
}

}  // namespace

TEST_CASE("p(0) = 1 for every engine") {
    for (const auto& pr : zeno::presets()) {
        const auto ff = Formfactor::builtin(pr.formfactor);
        for (Engine e : {Engine::Auto, Engine::Quadrature}) {
            const auto eng = zeno::make_engine(pr.params, ff, e);
            CAPTURE(pr.name);
            CHECK(std::abs(eng->probability(0.0) - 1.0) < 1e-8);
            CHECK(std::abs(eng->deficit(0.0)) < 1e-8);
        }
    }
}

TEST_CASE("engine resolution") {
    CHECK(zeno::resolve_engine(Engine::Auto, zeno::FormfactorId::Phi1) == Engine::Phi1Exact);
    CHECK(zeno::resolve_engine(Engine::Auto, zeno::FormfactorId::Phi2) == Engine::Phi2Poles);
    CHECK(zeno::resolve_engine(Engine::Auto, zeno::FormfactorId::Phi3) == Engine::Quadrature);
    CHECK_THROWS_AS(zeno::resolve_engine(Engine::Phi1Exact, zeno::FormfactorId::Phi2), zeno::UnsupportedError);
    CHECK_THROWS_AS(zeno::resolve_engine(Engine::Phi2Poles, zeno::FormfactorId::Phi3), zeno::UnsupportedError);
    CHECK_THROWS_AS(zeno::resolve_engine(Engine::SeriesShort, zeno::FormfactorId::Phi1), zeno::UnsupportedError);
}

TEST_CASE("zero coupling leaves the level undecayed") {
    const auto p = zeno::ModelParams::make(1e10, 2e4, 0.0);
    const auto eng = zeno::make_engine(p, Formfactor::phi3(), Engine::Quadrature);
    for (double t : {0.0, 1e-9, 1.0, 1e3}) CHECK(eng->probability(t) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("the model depends on Lambda t, omega_Lambda and lambda^2 only") {
    for (const auto& pr : zeno::presets()) {
        const auto ff = Formfactor::builtin(pr.formfactor);
        const auto full = zeno::make_engine(pr.params, ff);
        const auto unit = zeno::make_engine(pr.params.dimensionless(), ff);
        for (double s : {1e-2, 10.0, 1e4, 1e7}) {
            CAPTURE(pr.name);
            CAPTURE(s);
            const double a = full->probability(s / pr.params.cutoff);
            const double b = unit->probability(s);
            CHECK(std::abs(a - b) < 1e-10);
        }
    }
}

TEST_CASE("closed-form engines agree with quadrature") {
    for (const char* name : {"photodetachment", "quantum-dot"}) {
        const Case c = preset_case(name);
        const auto exact = zeno::make_engine(c.preset->params, c.ff);
        const auto quad = zeno::make_engine(c.preset->params, c.ff, Engine::Quadrature);
        for (double t : zeno::log_grid(1e-3 * c.t_z, 5 * c.t_d, 25)) {
            CAPTURE(name);
            CAPTURE(t);
            CHECK(std::abs(exact->amplitude(t).value - quad->amplitude(t).value) < 1e-8);
        }
    }
}

TEST_CASE("sample_curve bounds and ordering") {
    const Case c = preset_case("hydrogen");
    const auto eng = zeno::make_engine(c.preset->params, c.ff);
    const auto curve = zeno::sample_curve(*eng, c.ff.id(), zeno::log_grid(1e-3 * c.t_z, 50 * c.t_d, 60));
    CHECK(curve.samples.size() == 60);
    for (const auto& s : curve.samples) {
        CHECK(s.p >= 0.0);
        CHECK(s.p <= 1.0 + 1e-8);
        CHECK(s.err >= 0.0);
    }
    CHECK_THROWS_AS(zeno::sample_curve(*eng, c.ff.id(), {1e-9, 1e-10}), zeno::DomainError);
}

TEST_CASE("short-time expansions") {
    const auto pd = zeno::short_time_expansion(zeno::preset("photodetachment").params, Formfactor::phi1());
    CHECK(pd.exponent == 1.5);
    CHECK(pd.t_a == doctest::Approx(9.6e-7).epsilon(0.01));
    CHECK(pd.t_b.has_value());

    const auto qd = zeno::short_time_expansion(zeno::preset("quantum-dot").params, Formfactor::phi2());
    CHECK(qd.exponent == 2.0);
    CHECK(qd.log_correction);

    const auto h = zeno::short_time_expansion(zeno::preset("hydrogen").params, Formfactor::phi3());
    CHECK(h.exponent == 2.0);
    CHECK_FALSE(h.log_correction);

    // a custom formfactor with the phi1 tail has no second moment
    const auto heavy = Formfactor::custom([](double x) { return std::sqrt(x) / (1 + x); }, 0.5, 0.5);
    CHECK_THROWS_AS(zeno::short_time_expansion(zeno::preset("photodetachment").params, heavy), zeno::DivergenceError);
}

TEST_CASE("short-time series tracks the engines well inside the Zeno region") {
    for (const auto& pr : zeno::presets()) {
        const auto ff = Formfactor::builtin(pr.formfactor);
        const auto e = zeno::short_time_expansion(pr.params, ff);
        const auto eng = zeno::make_engine(pr.params, ff, Engine::Quadrature);
        const double t = 1e-2 * e.validity_time;
        CAPTURE(pr.name);
        CHECK(eng->deficit(t) == doctest::Approx(1.0 - e.series(t)).epsilon(2e-2));
    }
}

TEST_CASE("long-time form") {
    const auto& pd = zeno::preset("photodetachment");
    const auto ts = zeno::compute_timescales(pd.params, Formfactor::phi1());
    // at twice the crossover time the power law dominates
    const auto v = zeno::long_time_asymptote(pd.params, Formfactor::phi1(), 2 * ts.t_ep->value);
    CHECK(v.power >= v.exponential);

    const Case qd = preset_case("quantum-dot");
    const auto form = zeno::LongTimeForm::make(qd.preset->params, qd.ff);
    const auto poles = zeno::make_engine(qd.preset->params, qd.ff, Engine::Phi2Poles);
    for (double k : {1.0, 1.5, 2.0, 3.0}) {
        const double t = k * qd.t_d;
        const double ref = poles->probability(t);
        CAPTURE(k);
        CHECK(std::abs(form.at(t).p - ref) < 0.05 * ref);
    }

    // the interference enters with the negative cosine: at a trough near t_ep the exact p
    // lies below exponential + power law
    for (const char* name : {"photodetachment", "quantum-dot"}) {
        const Case c = preset_case(name);
        const auto lt = zeno::LongTimeForm::make(c.preset->params, c.ff);
        CHECK(std::cos(lt.phase) > 0.0);
        const double t_ep = zeno::compute_timescales(c.preset->params, c.ff).t_ep->value;
        const double s_ep = 0.8 * t_ep * c.preset->params.cutoff;
        const double k = std::ceil((lt.frequency * s_ep + lt.phase) / (2 * M_PI));
        const double t = (2 * M_PI * k - lt.phase) / lt.frequency / c.preset->params.cutoff;
        const auto v = lt.at(t);
        CAPTURE(name);
        CHECK(v.cross < 0.0);
        CHECK(zeno::make_engine(c.preset->params, c.ff)->probability(t) < v.exponential + v.power);
    }
}
