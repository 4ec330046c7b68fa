#pragma once

// Repeated ideal measurements: N projections at spacing tau = T/N give p_N(T) = p(T/N)^N.

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "zeno/amplitude.hpp"

namespace zeno {

// ln p(t) for t in seconds; -inf where p = 0.
using LogSurvival = std::function<double(double)>;

LogSurvival log_survival_of(std::shared_ptr<const AmplitudeEngine> engine);
// exp(-rate t): the fixed point of repeated measurement
LogSurvival exponential_log_survival(double rate);

// Engine for the protocol computations. Auto means quadrature here: its deficit 1 - p carries
// no cancellation at short tau, unlike 1 - |A|^2 from the closed forms.
std::shared_ptr<const AmplitudeEngine> protocol_engine(const ModelParams& p, const Formfactor& ff,
                                                       Engine e = Engine::Auto);

// exp(N ln p(T/N)); 0 when p(T/N) = 0.
double repeated_measurement_survival(const LogSurvival& logp, double T, std::int64_t N);
double repeated_measurement_survival(const ModelParams& p, const Formfactor& ff, double T, std::int64_t N);

enum class ZenoLimit { Freeze, Exponential, Vanish };

struct ZenoLimitClass {
    ZenoLimit kind = ZenoLimit::Freeze;
    double rate = 0;  // c in exp(-c T), s^-1, for the Exponential class
};

ZenoLimitClass zeno_limit_class(const ShortTimeExpansion& e);

struct AntiZenoMinimum {
    double tau = 0;        // seconds
    std::int64_t N = 1;
    double p = 1;
    bool degenerate = false;  // minimum on the edge of the scanned range
};

// Minimizes p_N(T) over tau in [tau_min, T]: 400-point log scan, golden section on log tau,
// then the best of the neighbouring integers N.
AntiZenoMinimum anti_zeno_minimum(const LogSurvival& logp, double T, double tau_min);
AntiZenoMinimum anti_zeno_minimum(const ModelParams& p, const Formfactor& ff, double T);

struct NEpsilon {
    std::optional<std::int64_t> N;  // nullopt: no violation up to the cap
    std::int64_t cap = 0;
};

inline constexpr std::int64_t kNEpsilonCap = 1000000000;

// Largest N with p_n(T) >= (1 - eps) p_1(T) for every n up to N. N below 4096 is scanned one
// by one; past that a doubling scan brackets the next violation and bisection finds the integer
// boundary.
NEpsilon n_epsilon(const LogSurvival& logp, double T, double eps, std::int64_t cap = kNEpsilonCap);
NEpsilon n_epsilon(const ModelParams& p, const Formfactor& ff, double T, double eps,
                   std::int64_t cap = kNEpsilonCap);

struct ProtocolRow {
    std::int64_t N = 1;
    double tau = 0;
    double p_N = 0;
};

struct ProtocolResult {
    double T = 0;
    std::vector<ProtocolRow> rows;  // decreasing tau
    AntiZenoMinimum anti_zeno_min;
    double reference_exponential = 0;  // exp(-T/t_d), 0 when t_d is unknown
};

// tau log-spaced over [tau_min, T] (points values), N rounded to the nearest integer >= 1,
// duplicates collapsed.
ProtocolResult protocol_grid(const LogSurvival& logp, double T, double tau_min, int points = 400,
                             std::optional<double> t_d = std::nullopt);

}  // namespace zeno
