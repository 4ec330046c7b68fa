#include <doctest.h>

#include <cmath>
#include <string>

#include "zeno/amplitude.hpp"
#include "zeno/errors.hpp"
#include "zeno/timescales.hpp"

using zeno::Formfactor;
using zeno::Provenance;

namespace {

zeno::Timescales of(const char* name) {
    const auto& pr = zeno::preset(name);
    return zeno::compute_timescales(pr.params, Formfactor::builtin(pr.formfactor));
}

}  // namespace

TEST_CASE("generic weak-coupling path reproduces the rational closed forms") {
    const auto& qd = zeno::preset("quantum-dot");
    const double lam = qd.params.lambda(), L = qd.params.cutoff;
    // generic t_a = 1/(lambda Lambda sqrt(I_0)); phi2 has no generic t_Z because I_2 diverges
    const auto phi2 = Formfactor::custom([](double x) { return x / ((1 + x * x) * (1 + x * x)); }, 3.0, 1.0);
    const double generic = 1.0 / (lam * L * std::sqrt(*zeno::moment(phi2, 0)));
    CHECK(generic == doctest::Approx(std::sqrt(2.0) / (lam * L)).epsilon(1e-10));
    CHECK(of("quantum-dot").t_a.value == doctest::Approx(generic).epsilon(1e-10));
    CHECK_THROWS_AS(zeno::short_time_expansion(qd.params, phi2), zeno::DivergenceError);

    const auto& h = zeno::preset("hydrogen");
    const auto ts = of("hydrogen");
    CHECK(ts.t_a.value == doctest::Approx(std::sqrt(6.0) / (h.params.lambda() * h.params.cutoff)).epsilon(1e-10));
    CHECK(ts.t_Z.value == doctest::Approx(2 * std::sqrt(6.0) / h.params.cutoff).epsilon(1e-10));
}

TEST_CASE("Zeno time is far below t_a for every preset") {
    for (const char* name : {"photodetachment", "quantum-dot", "hydrogen"}) {
        const auto ts = of(name);
        CAPTURE(name);
        CHECK(ts.t_Z.value / ts.t_a.value < 1e-2);
    }
}

TEST_CASE("provenance flags") {
    const auto pd = of("photodetachment");
    CHECK(pd.t_Z.source == Provenance::ClosedForm);
    CHECK(pd.t_a.source == Provenance::ClosedForm);
    CHECK(pd.t_d->source == Provenance::RootBased);
    CHECK(pd.omega_tilde.has_value());
    CHECK(pd.omega_tilde->value == doctest::Approx(1.0e4).epsilon(0.01));
    bool factor_two = false;
    for (const auto& n : pd.notes) factor_two |= n.find("factor 2") != std::string::npos;
    CHECK(factor_two);

    const auto h = of("hydrogen");
    CHECK(h.t_Z.source == Provenance::Numeric);
    CHECK(zeno::provenance_name(Provenance::RootBased) == "root_based");
}

TEST_CASE("decay and crossover times") {
    const auto pd = of("photodetachment");
    CHECK(pd.t_d->value == doctest::Approx(0.1).epsilon(0.05));
    const auto h = of("hydrogen");
    CHECK(h.t_ep->value / h.t_d->value == doctest::Approx(110).epsilon(0.05));

    // the numeric crossover brackets a genuine equality of the two terms
    const auto& pr = zeno::preset("photodetachment");
    const double t = zeno::crossover_time_numeric(pr.params, Formfactor::phi1());
    const auto v = zeno::long_time_asymptote(pr.params, Formfactor::phi1(), t);
    CHECK(v.exponential == doctest::Approx(v.power).epsilon(1e-8));
}

TEST_CASE("table and report rendering") {
    const auto t = zeno::render_table1(zeno::presets());
    for (const char* row : {"t_Z", "t_a", "t_d", "t_ep"}) CHECK(t.text.find(row) != std::string::npos);
    CHECK(t.csv.find("quantum-dot") != std::string::npos);
    const std::string report = zeno::render_timescales(of("photodetachment"));
    CHECK(report.find("root_based") != std::string::npos);
    CHECK(report.find("closed_form") != std::string::npos);
}
