#pragma once

// Characteristic times of the decay: Zeno time t_Z, short-time scales t_a and t_b, decay time
// t_d and the exponential-to-power-law crossover t_ep. All times in seconds.

#include <optional>
#include <string>
#include <vector>

#include "zeno/formfactor.hpp"
#include "zeno/model.hpp"

namespace zeno {

enum class Provenance { ClosedForm, RootBased, Numeric };

std::string provenance_name(Provenance p);

template <class T>
struct Tagged {
    T value{};
    Provenance source = Provenance::ClosedForm;
};

struct Timescales {
    std::string formfactor;
    double exponent = 2.0;                 // short-time power that t_a belongs to
    Tagged<double> t_a;
    std::optional<Tagged<double>> t_b;     // absent for phi2 (logarithmic quartic term)
    Tagged<double> t_Z;
    std::optional<Tagged<double>> t_d;    // absent for custom formfactors
    std::optional<Tagged<double>> t_ep;
    std::optional<Tagged<double>> gamma;        // phi1: p ~ exp(-4 gamma sqrt(w Lambda) t)
    std::optional<Tagged<double>> gamma1;       // phi2, phi3: p ~ exp(-gamma1 Lambda t)
    std::optional<Tagged<double>> omega_tilde;  // s^-1, shifted level frequency Lambda Re z_res
    std::vector<std::string> notes;
};

// Throws DivergenceError when the generic path needs a divergent moment.
Timescales compute_timescales(const ModelParams& p, const Formfactor& ff);

// Time at which the exponential and power-law terms of the long-time form are equal,
// by bracketing the log of their ratio (phi1, phi2). Throws ConvergenceError without a sign change.
double crossover_time_numeric(const ModelParams& p, const Formfactor& ff);

struct Table1 {
    std::string text;
    std::string csv;
};

// Rows t_Z, t_a, t_d, t_ep; one column per preset, in seconds and in units of t_d.
Table1 render_table1(const std::vector<Preset>& systems);

// Multi-line report of every field with its provenance and notes.
std::string render_timescales(const Timescales& ts);

}  // namespace zeno
