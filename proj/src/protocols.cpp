#include "zeno/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "zeno/errors.hpp"
#include "zeno/timescales.hpp"

namespace zeno {

namespace {

constexpr int kScanPoints = 400;
constexpr std::int64_t kDenseScan = 4096;

// N ln p(T/N) with N real
double log_pn(const LogSurvival& logp, double T, double N) {
    const double l = logp(T / N);
    if (l == -std::numeric_limits<double>::infinity()) return l;
    return N * l;
}

}  // namespace

LogSurvival log_survival_of(std::shared_ptr<const AmplitudeEngine> engine) {
    return [engine](double t) { return engine->log_survival(t); };
}

LogSurvival exponential_log_survival(double rate) {
    return [rate](double t) { return -rate * t; };
}

std::shared_ptr<const AmplitudeEngine> protocol_engine(const ModelParams& p, const Formfactor& ff, Engine e) {
    if (e == Engine::Auto) e = Engine::Quadrature;
    return make_engine(p, ff, e);
}

double repeated_measurement_survival(const LogSurvival& logp, double T, std::int64_t N) {
    if (N < 1) throw DomainError("repeated measurement needs N >= 1");
    if (!(T > 0.0)) throw DomainError("repeated measurement needs T > 0");
    return std::exp(log_pn(logp, T, double(N)));
}

double repeated_measurement_survival(const ModelParams& p, const Formfactor& ff, double T, std::int64_t N) {
    return repeated_measurement_survival(log_survival_of(protocol_engine(p, ff)), T, N);
}

ZenoLimitClass zeno_limit_class(const ShortTimeExpansion& e) {
    if (e.exponent > 1.0) return {ZenoLimit::Freeze, 0.0};
    if (e.exponent < 1.0) return {ZenoLimit::Vanish, 0.0};
    return {ZenoLimit::Exponential, 1.0 / e.t_a};
}

AntiZenoMinimum anti_zeno_minimum(const LogSurvival& logp, double T, double tau_min) {
    if (!(T > 0.0 && tau_min > 0.0 && tau_min < T)) throw DomainError("anti-Zeno search needs 0 < tau_min < T");
    auto f = [&](double ltau) { return log_pn(logp, T, T / std::exp(ltau)); };
    const double a = std::log(tau_min), b = std::log(T);
    const double h = (b - a) / (kScanPoints - 1);
    int best = 0;
    double fbest = f(a);
    for (int i = 1; i < kScanPoints; ++i) {
        const double v = f(a + h * i);
        if (v < fbest) {
            fbest = v;
            best = i;
        }
    }
    AntiZenoMinimum out;
    out.degenerate = best == 0 || best == kScanPoints - 1;
    double lo = a + h * std::max(best - 1, 0), hi = a + h * std::min(best + 1, kScanPoints - 1);
    // golden section on log tau
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < 100 && hi - lo > 1e-10; ++it) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2);
        }
    }
    const double Nstar = T / std::exp(0.5 * (lo + hi));
    const auto n0 = static_cast<std::int64_t>(std::floor(Nstar));
    double pbest = std::numeric_limits<double>::infinity();
    for (std::int64_t n = std::max<std::int64_t>(1, n0 - 1); n <= n0 + 2; ++n) {
        const double v = log_pn(logp, T, double(n));
        if (v < pbest) {
            pbest = v;
            out.N = n;
        }
    }
    out.tau = T / double(out.N);
    out.p = std::exp(pbest);
    return out;
}

AntiZenoMinimum anti_zeno_minimum(const ModelParams& p, const Formfactor& ff, double T) {
    const auto ts = compute_timescales(p, ff);
    return anti_zeno_minimum(log_survival_of(protocol_engine(p, ff)), T, 1e-3 * ts.t_Z.value);
}

NEpsilon n_epsilon(const LogSurvival& logp, double T, double eps, std::int64_t cap) {
    if (!(eps > 0.0 && eps < 1.0)) throw DomainError("n_epsilon needs 0 < eps < 1");
    if (!(T > 0.0)) throw DomainError("n_epsilon needs T > 0");
    const double threshold = std::log1p(-eps) + logp(T);
    auto ok = [&](std::int64_t n) { return log_pn(logp, T, double(n)) >= threshold; };
    NEpsilon out;
    out.cap = cap;
    // p_n is not monotone in n: below kDenseScan every n is tested, so the result is the exact
    // prefix before the first violation; beyond it the doubling scan brackets a violation
    const std::int64_t dense = std::min(cap, kDenseScan);
    for (std::int64_t n = 2; n <= dense; ++n) {
        if (!ok(n)) {
            out.N = n - 1;
            return out;
        }
    }
    if (dense == cap) return out;
    std::int64_t good = dense, bad = 0;
    for (std::int64_t n = 2 * dense;; n *= 2) {
        if (n >= cap) {
            if (ok(cap)) return out;
            bad = cap;
            break;
        }
        if (!ok(n)) {
            bad = n;
            break;
        }
        good = n;
    }
    while (bad - good > 1) {
        const std::int64_t mid = good + (bad - good) / 2;
        (ok(mid) ? good : bad) = mid;
    }
    out.N = good;
    return out;
}

NEpsilon n_epsilon(const ModelParams& p, const Formfactor& ff, double T, double eps, std::int64_t cap) {
    return n_epsilon(log_survival_of(protocol_engine(p, ff)), T, eps, cap);
}

ProtocolResult protocol_grid(const LogSurvival& logp, double T, double tau_min, int points, std::optional<double> t_d) {
    if (!(T > 0.0 && tau_min > 0.0 && tau_min < T)) throw DomainError("protocol grid needs 0 < tau_min < T");
    if (points < 2) throw DomainError("protocol grid needs at least two points");
    ProtocolResult r;
    r.T = T;
    std::int64_t last = -1;
    const double a = std::log(T), b = std::log(tau_min);
    for (int i = 0; i < points; ++i) {
        const double tau = std::exp(a + (b - a) * i / (points - 1));
        const auto N = std::max<std::int64_t>(1, std::llround(T / tau));
        if (N == last) continue;
        last = N;
        r.rows.push_back({N, T / double(N), repeated_measurement_survival(logp, T, N)});
    }
    r.anti_zeno_min = anti_zeno_minimum(logp, T, tau_min);
    r.reference_exponential = t_d ? std::exp(-T / *t_d) : 0.0;
    return r;
}

}  // namespace zeno
