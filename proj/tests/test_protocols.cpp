#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <set>

#include "zeno/errors.hpp"
#include "zeno/protocols.hpp"
#include "zeno/timescales.hpp"

using zeno::Formfactor;
using zeno::LogSurvival;

TEST_CASE("N = 1 is the free survival probability") {
    const auto& qd = zeno::preset("quantum-dot");
    const auto eng = zeno::protocol_engine(qd.params, Formfactor::phi2());
    const double T = 1e-9;
    CHECK(zeno::repeated_measurement_survival(zeno::log_survival_of(eng), T, 1) ==
          doctest::Approx(eng->probability(T)).epsilon(1e-12));
    CHECK_THROWS_AS(zeno::repeated_measurement_survival(zeno::log_survival_of(eng), T, 0), zeno::DomainError);
}

TEST_CASE("no coupling, no decay, whatever N") {
    const auto p = zeno::ModelParams::make(1e16, 7e12, 0.0);
    const auto logp = zeno::log_survival_of(zeno::protocol_engine(p, Formfactor::phi2()));
    for (std::int64_t N : {1, 7, 1000, 1000000}) CHECK(zeno::repeated_measurement_survival(logp, 1e-9, N) == 1.0);
}

TEST_CASE("log-space product equals direct powering") {
    const auto& pd = zeno::preset("photodetachment");
    const auto eng = zeno::protocol_engine(pd.params, Formfactor::phi1());
    const auto logp = zeno::log_survival_of(eng);
    const double T = 0.01;
    for (std::int64_t N : {1, 2, 5, 40, 300, 2500}) {
        const double direct = std::pow(1.0 - eng->deficit(T / N), double(N));
        CAPTURE(N);
        CHECK(zeno::repeated_measurement_survival(logp, T, N) == doctest::Approx(direct).epsilon(1e-12));
    }
}

TEST_CASE("exponential decay is a fixed point of repeated measurement") {
    const double rate = 3.7;
    const auto logp = zeno::exponential_log_survival(rate);
    const double T = 0.4, ref = std::exp(-rate * T);
    for (std::int64_t N : {1, 3, 10, 1000, 123457, 100000000})
        CHECK(std::abs(zeno::repeated_measurement_survival(logp, T, N) - ref) < 1e-12);
}

TEST_CASE("Zeno limit classification") {
    zeno::ShortTimeExpansion e;
    e.t_a = 2.0;
    e.exponent = 2.0;
    CHECK(zeno::zeno_limit_class(e).kind == zeno::ZenoLimit::Freeze);
    e.exponent = 1.5;
    CHECK(zeno::zeno_limit_class(e).kind == zeno::ZenoLimit::Freeze);
    e.exponent = 1.0;
    const auto c = zeno::zeno_limit_class(e);
    CHECK(c.kind == zeno::ZenoLimit::Exponential);
    CHECK(c.rate == 0.5);
    e.exponent = 0.5;
    CHECK(zeno::zeno_limit_class(e).kind == zeno::ZenoLimit::Vanish);
}

TEST_CASE("anti-Zeno minimum of a synthetic rate with a known maximum") {
    // -ln p(t)/t = c t/(b^2 + t^2) is largest at t = b, so p_N(T) is smallest at tau = b
    const double b = 1e-3, c = 2e-3;
    const LogSurvival logp = [=](double t) { return -c * t * t / (b * b + t * t); };
    const double T = 1.0;
    const auto m = zeno::anti_zeno_minimum(logp, T, 1e-7);
    CHECK_FALSE(m.degenerate);
    CHECK(m.N == 1000);
    CHECK(m.tau == doctest::Approx(b).epsilon(1e-12));
    CHECK(m.p == doctest::Approx(std::exp(-c * T / (2 * b))).epsilon(1e-12));

    // monotone rate: the minimum sits on the edge of the range
    const auto flat = zeno::anti_zeno_minimum([](double t) { return -t * t; }, 1.0, 1e-4);
    CHECK(flat.degenerate);
}

TEST_CASE("N_epsilon is the exact integer boundary") {
    // p(t) = exp(-sqrt(t)) gives p_N(T) = exp(-sqrt(N T)): violation once sqrt(N T) - sqrt(T) > -ln(1-eps)
    const LogSurvival logp = [](double t) { return -std::sqrt(t); };
    for (double T : {0.01, 1.0, 30.0}) {
        for (double eps : {1e-1, 1e-2, 1e-3}) {
            const auto r = zeno::n_epsilon(logp, T, eps);
            REQUIRE(r.N.has_value());
            const double thr = (1 - eps) * std::exp(-std::sqrt(T));
            CAPTURE(T);
            CAPTURE(eps);
            CHECK(zeno::repeated_measurement_survival(logp, T, *r.N) >= thr);
            CHECK(zeno::repeated_measurement_survival(logp, T, *r.N + 1) < thr);
            const double s = std::sqrt(T) - std::log1p(-eps);
            CHECK(*r.N == std::int64_t(std::floor(s * s / T)));
        }
    }
    // Zeno-type survival never drops below p_1: unbounded up to the cap
    const auto zeno_only = zeno::n_epsilon([](double t) { return -t * t; }, 1.0, 0.5, 1000000);
    CHECK_FALSE(zeno_only.N.has_value());
    CHECK(zeno_only.cap == 1000000);
}

TEST_CASE("protocol grid collapses duplicate N") {
    const LogSurvival logp = [](double t) { return -std::sqrt(t); };
    const auto r = zeno::protocol_grid(logp, 1.0, 1e-3, 400, 2.0);
    std::set<std::int64_t> seen;
    double last_tau = 2.0;
    for (const auto& row : r.rows) {
        CHECK(seen.insert(row.N).second);
        CHECK(row.tau < last_tau);
        last_tau = row.tau;
    }
    CHECK(r.rows.front().N == 1);
    CHECK(r.rows.back().N == 1000);
    CHECK(r.reference_exponential == doctest::Approx(std::exp(-0.5)));
}

TEST_CASE("quantum dot: longer observation gives a deeper anti-Zeno dip") {
    const auto& qd = zeno::preset("quantum-dot");
    const auto ts = zeno::compute_timescales(qd.params, Formfactor::phi2());
    const double t_d = ts.t_d->value;
    const auto logp = zeno::log_survival_of(zeno::protocol_engine(qd.params, Formfactor::phi2()));
    auto relative = [&](double T) {
        const auto m = zeno::anti_zeno_minimum(logp, T, 1e-3 * ts.t_Z.value);
        return m.p / std::exp(-T / t_d);
    };
    const double shallow = relative(1e-4 * t_d), deep = relative(1e-1 * t_d);
    CHECK(shallow < 1.0);
    CHECK(deep < shallow);
}
