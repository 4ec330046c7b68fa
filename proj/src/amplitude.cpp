#include "zeno/amplitude.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "zeno/errors.hpp"
#include "zeno/faddeeva.hpp"

namespace zeno {

namespace {

constexpr cplx I{0.0, 1.0};

// largest tolerated excursion of p outside [0, 1]
constexpr double kProbabilitySlack = 1e-8;
// error budget above which an amplitude is refused
constexpr double kAmplitudeBudget = 1e-8;

template <class T>
quad::Estimate<T> checked(quad::Estimate<T> r, const char* who) {
    if (!(r.error <= kAmplitudeBudget))
        throw ConvergenceError(fmt::format("{}: accuracy not reached (estimate {:.3g})", who, r.error), r.error);
    return r;
}

}  // namespace

std::string engine_name(Engine e) {
    switch (e) {
        case Engine::Auto: return "auto";
        case Engine::Quadrature: return "quadrature";
        case Engine::Phi1Exact: return "phi1_exact";
        case Engine::Phi2Poles: return "phi2_poles";
        case Engine::AsymptoticLong: return "asymptotic_long";
        case Engine::SeriesShort: return "series_short";
    }
    return "?";
}

Engine resolve_engine(Engine requested, FormfactorId ff) {
    switch (requested) {
        case Engine::Auto:
            if (ff == FormfactorId::Phi1) return Engine::Phi1Exact;
            if (ff == FormfactorId::Phi2) return Engine::Phi2Poles;
            return Engine::Quadrature;
        case Engine::Quadrature: return requested;
        case Engine::Phi1Exact:
            if (ff != FormfactorId::Phi1) throw UnsupportedError("the error-function engine needs phi1");
            return requested;
        case Engine::Phi2Poles:
            if (ff != FormfactorId::Phi2) throw UnsupportedError("the pole engine needs phi2");
            return requested;
        default: throw UnsupportedError(engine_name(requested) + " does not produce amplitudes");
    }
}

quad::Estimate<double> AmplitudeEngine::deficit_scaled(double s) const {
    const auto a = amplitude_scaled(s);
    return {1.0 - std::norm(a.value), 2.0 * a.error};
}

double AmplitudeEngine::probability(double t) const { return std::norm(amplitude(t).value); }

double AmplitudeEngine::log_survival(double t) const {
    const double d = deficit(t);
    if (d >= 1.0) return -std::numeric_limits<double>::infinity();
    return std::log1p(-d);
}

// ---------------------------------------------------------------- quadrature

QuadratureEngine::QuadratureEngine(const ModelParams& p, const Formfactor& ff) : AmplitudeEngine(p) {
    if (p.lambda2 > 0.0) spectrum_ = std::make_shared<const SpectralApproximant>(p, ff);
}

quad::Estimate<cplx> QuadratureEngine::amplitude_scaled(double s) const {
    if (!(s >= 0.0)) throw DomainError("amplitude: time must be nonnegative");
    if (!spectrum_) return {std::polar(1.0, -params_.omega() * s), 0.0};
    return checked(spectrum_->fourier(s), "quadrature engine");
}

quad::Estimate<double> QuadratureEngine::deficit_scaled(double s) const {
    if (!(s >= 0.0)) throw DomainError("amplitude: time must be nonnegative");
    if (!spectrum_) return {0.0, 0.0};
    return spectrum_->deficit(s);
}

// ---------------------------------------------------------------- phi1 closed form

Phi1ExactEngine::Phi1ExactEngine(const ModelParams& p) : AmplitudeEngine(p) {
    if (p.lambda2 == 0.0) return;
    roots_ = resonance_roots(p, Formfactor::phi1());
    // partial fractions of u(1 - iu) / (i prod (u - u_k)); they sum to -1 so that A(0) = 1
    for (std::size_t k = 0; k < roots_.size(); ++k) {
        cplx den = I;
        for (std::size_t m = 0; m < roots_.size(); ++m)
            if (m != k) den *= roots_[k].u - roots_[m].u;
        const cplx u = roots_[k].u;
        weights_.push_back(u * (1.0 - I * u) / den);
    }
}

quad::Estimate<cplx> Phi1ExactEngine::amplitude_scaled(double s) const {
    if (!(s >= 0.0)) throw DomainError("amplitude: time must be nonnegative");
    if (roots_.empty()) return {std::polar(1.0, -params_.omega() * s), 0.0};
    const cplx rot = std::polar(std::sqrt(s), -M_PI / 4.0);
    cplx a = 0.0;
    for (std::size_t k = 0; k < roots_.size(); ++k) {
        const cplx zeta = roots_[k].u * rot;
        cplx w;
        if (zeta.imag() > 0.0) {
            // keep the Faddeeva argument in the upper half plane: w(-x) = 2 e^{-x^2} - w(x),
            // and e^{-zeta^2} = e^{i z_k s} is the decaying pole term
            w = 2.0 * std::exp(I * roots_[k].z * s) - faddeeva(zeta);
        } else {
            w = faddeeva(-zeta);
        }
        a -= weights_[k] * w;
    }
    return {std::conj(a), 1e-13 * (1.0 + std::abs(a))};
}

cplx Phi1ExactEngine::resonance_coefficient() const {
    for (std::size_t k = 0; k < roots_.size(); ++k)
        if (roots_[k].kind == RootKind::Resonance) return -2.0 * weights_[k];
    throw std::logic_error("no resonance root");
}

// ---------------------------------------------------------------- phi2 poles + background

Phi2PoleEngine::Phi2PoleEngine(const ModelParams& p) : AmplitudeEngine(p) {
    if (p.lambda2 == 0.0) return;
    roots_ = resonance_roots(p, Formfactor::phi2());
}

quad::Estimate<cplx> Phi2PoleEngine::background(double s) const {
    const ModelParams q = params_.dimensionless();
    const double l2 = q.lambda2, l = q.lambda(), w = q.omega();
    // The two denominator factors Q + lambda^2 pi x / 2 and Q - 3 lambda^2 pi x / 2 expanded so
    // that the first one, which vanishes linearly at x = 1, carries no cancellation there.
    auto f = [&](double x) -> cplx {
        if (x <= 0.0 || x == 1.0) return 0.0;
        const double damp = std::exp(-x * s);
        if (damp == 0.0) return 0.0;
        const double d = 1.0 - x;
        const double e = d * (1.0 + x);
        const double lx = std::abs(d) < 0.5 ? std::log1p(-d) : std::log(x);
        const cplx plus = (w - I * x) * e * e - 0.25 * l2 * (M_PI - 2.0 * I * x) * e + 0.5 * l2 * M_PI * x * d +
                          I * l2 * x * lx;
        const cplx minus = plus - 2.0 * l2 * M_PI * x;
        return x * e * (e / plus) * damp / minus;
    };
    std::vector<double> br{0.0};
    const double lo = std::min(w, s > 0.0 ? 1.0 / s : w) * 1e-8;
    for (double x = lo; x < 0.5; x *= 2.0) br.push_back(x);
    for (double d = 0.5; d > l * 1e-3; d *= 0.25) {
        br.push_back(1.0 - d);
        br.push_back(1.0 + d);
    }
    br.push_back(1.0);
    br.push_back(8.0);
    std::sort(br.begin(), br.end());
    br.erase(std::unique(br.begin(), br.end()), br.end());
    auto r = quad::gk_breaks(f, br);
    auto tail = quad::gk_to_infinity(f, 8.0);
    r.value += tail.value;
    r.error += tail.error;
    return r;
}

quad::Estimate<cplx> Phi2PoleEngine::amplitude_scaled(double s) const {
    if (!(s >= 0.0)) throw DomainError("amplitude: time must be nonnegative");
    if (roots_.empty()) return {std::polar(1.0, -params_.omega() * s), 0.0};
    const ModelParams q = params_.dimensionless();
    // closed-form representation: conj(A) = -[sum_k R(z_k) e^{i z_k s} + lambda^2 I(s)]
    cplx a = 0.0;
    for (const auto& r : roots_)
        if (r.contributes) a += phi2_closed_form_residue(q, r.z) * std::exp(I * r.z * s);
    const auto bg = background(s);
    a = -(a + q.lambda2 * bg.value);
    return checked(quad::Estimate<cplx>{std::conj(a), q.lambda2 * bg.error + 1e-15}, "pole engine");
}

cplx Phi2PoleEngine::resonance_coefficient() const { return resonance_of(roots_).residue_weight; }

// ---------------------------------------------------------------- factory and one-shots

std::unique_ptr<AmplitudeEngine> make_engine(const ModelParams& p, const Formfactor& ff, Engine e) {
    switch (resolve_engine(e, ff.id())) {
        case Engine::Phi1Exact: return std::make_unique<Phi1ExactEngine>(p);
        case Engine::Phi2Poles: return std::make_unique<Phi2PoleEngine>(p);
        default: return std::make_unique<QuadratureEngine>(p, ff);
    }
}

quad::Estimate<cplx> survival_amplitude_quadrature(const ModelParams& p, const Formfactor& ff, double t) {
    return QuadratureEngine(p, ff).amplitude(t);
}

quad::Estimate<cplx> survival_amplitude_phi1_exact(const ModelParams& p, double t) {
    return Phi1ExactEngine(p).amplitude(t);
}

quad::Estimate<cplx> survival_amplitude_phi2(const ModelParams& p, double t) {
    return Phi2PoleEngine(p).amplitude(t);
}

double survival_probability(const ModelParams& p, const Formfactor& ff, double t, Engine e) {
    return make_engine(p, ff, e)->probability(t);
}

SurvivalCurve sample_curve(const AmplitudeEngine& engine, FormfactorId ff, const std::vector<double>& times) {
    SurvivalCurve c;
    c.params = engine.params();
    c.formfactor = ff;
    c.engine = engine.kind();
    double last = -1.0;
    for (double t : times) {
        if (!(t > last)) throw DomainError("sample times must be strictly increasing");
        last = t;
        const double s = engine.params().cutoff * t;
        const auto d = engine.deficit_scaled(s);
        SurvivalSample smp{t, 1.0 - d.value, d.error, false};
        if (d.value > 0.5) {
            // past the first e-fold |A|^2 keeps the relative precision that 1 - d loses
            const auto a = engine.amplitude_scaled(s);
            const double m = std::abs(a.value);
            smp.p = m * m;
            smp.err = a.error * (2.0 * m + a.error);
        }
        if (smp.p < 0.0 || smp.p > 1.0) {
            const double excess = smp.p < 0.0 ? -smp.p : smp.p - 1.0;
            if (excess > kProbabilitySlack)
                throw ConvergenceError(fmt::format("p({:.6g}) = {:.17g} outside [0, 1]", t, smp.p), excess);
            smp.p = std::clamp(smp.p, 0.0, 1.0);
            smp.clamped = true;
        }
        c.samples.push_back(smp);
    }
    return c;
}

std::vector<double> log_grid(double t0, double t1, int n) {
    if (!(t0 > 0.0 && t1 > t0 && n >= 2)) throw DomainError("log_grid needs 0 < t0 < t1 and n >= 2");
    std::vector<double> g(n);
    const double l0 = std::log(t0), l1 = std::log(t1);
    for (int i = 0; i < n; ++i) g[i] = std::exp(l0 + (l1 - l0) * i / (n - 1));
    g.front() = t0;
    g.back() = t1;
    return g;
}

// ---------------------------------------------------------------- short times

double ShortTimeExpansion::leading_deficit(double t) const { return std::pow(t / t_a, exponent); }

double ShortTimeExpansion::series(double t) const {
    double p = 1.0 - leading_deficit(t);
    if (log_correction) {
        p -= log_coefficient * std::log(2.0 * omega1 * t) * std::pow(t, 4);
    } else if (t_b) {
        p += exponent == 1.5 ? std::pow(t / *t_b, 2) : std::pow(t / *t_b, 4);
    }
    return p;
}

ShortTimeExpansion short_time_expansion(const ModelParams& p, const Formfactor& ff) {
    const double L = p.cutoff, l = p.lambda(), l2 = p.lambda2;
    if (!(l2 > 0.0)) throw DomainError("short-time expansion needs lambda2 > 0");
    ShortTimeExpansion e;
    e.omega1 = p.omega1;
    switch (ff.id()) {
        case FormfactorId::Phi1:
            e.exponent = 1.5;
            e.t_a = std::pow(3.0 / (4.0 * std::sqrt(2.0 * M_PI)), 2.0 / 3.0) / (std::pow(l, 4.0 / 3.0) * L);
            e.t_b = 1.0 / (std::sqrt(M_PI) * l * L);
            e.validity_time = 32.0 / (9.0 * M_PI * L);
            return e;
        case FormfactorId::Phi2:
            e.exponent = 2.0;
            e.t_a = std::sqrt(2.0) / (l * L);
            e.log_correction = true;
            e.log_coefficient = l2 * std::pow(L, 4) / 12.0;
            e.validity_time = std::sqrt(6.0) / (L * std::sqrt(std::abs(std::log(2.0 * std::sqrt(6.0) * p.omega1 / L))));
            return e;
        default: break;
    }
    const auto i0 = moment(ff, 0);
    if (!i0) throw DivergenceError("short-time expansion unavailable: moment I_0 diverges");
    const auto i2 = moment(ff, 2);
    if (!i2) throw DivergenceError("short-time expansion unavailable: moment I_2 diverges");
    e.exponent = 2.0;
    e.t_a = 1.0 / (l * L * std::sqrt(*i0));
    double inv_tb4;
    if (p.weak_coupling()) {
        inv_tb4 = l2 * std::pow(L, 4) * *i2 / 12.0;
    } else {
        const auto i1 = moment(ff, 1);
        if (!i1) throw DivergenceError("short-time expansion unavailable: moment I_1 diverges");
        const auto n2 = squared_norm(ff);
        if (!n2) throw DivergenceError("short-time expansion unavailable: int phi^2 diverges");
        const double w = p.omega1;
        inv_tb4 = l2 * (w * w * L * L * *i0 / 12.0 - w * std::pow(L, 3) * *i1 / 6.0 + std::pow(L, 4) * *i2 / 12.0) +
                  l2 * l2 * std::pow(L, 4) * (*i0 * *i0 / 4.0 + *n2 / 12.0);
    }
    if (!(inv_tb4 > 0.0)) throw DivergenceError("short-time expansion: quartic coefficient is not positive");
    e.t_b = std::pow(inv_tb4, -0.25);
    e.validity_time = (*e.t_b) * (*e.t_b) / e.t_a;
    return e;
}

// ---------------------------------------------------------------- long times

LongTimeForm LongTimeForm::make(const ModelParams& p, const Formfactor& ff) {
    LongTimeForm f;
    f.params = p;
    f.formfactor = ff.id();
    const double l2 = p.lambda2;
    if (ff.id() == FormfactorId::Phi1) {
        const Phi1ExactEngine eng(p);
        const auto& res = resonance_of(eng.roots());
        const cplx a1 = eng.resonance_coefficient();
        f.amplitude2 = std::norm(a1);
        f.rate = 2.0 * res.z.imag();
        f.frequency = res.z.real();
        // tail of conj(A): e^{3 i pi/4} sqrt(pi) lambda^2 / (2 w^2) s^{-3/2}
        const double w = f.frequency;
        f.power_coefficient = M_PI * l2 * l2 / (4.0 * std::pow(w, 4));
        f.power_exponent = 3.0;
        f.phase = M_PI / 4.0 + std::arg(a1);
        f.validity_time = 24.0 / p.omega1;
        return f;
    }
    if (ff.id() == FormfactorId::Phi2) {
        const Phi2PoleEngine eng(p);
        const auto& res = resonance_of(eng.roots());
        const cplx a2 = res.residue_weight;
        f.amplitude2 = std::norm(a2);
        f.rate = 2.0 * res.z.imag();
        f.frequency = res.z.real();
        const double q0 = p.omega() - l2 * M_PI / 4.0;
        f.power_coefficient = l2 * l2 / std::pow(q0, 4);
        f.power_exponent = 4.0;
        // background of conj(A) is -lambda^2 / (Q(0)^2 s^2)
        f.phase = std::arg(a2);
        f.validity_time = 4.0 / p.omega1;
        return f;
    }
    throw UnsupportedError("long-time asymptote exists for phi1 and phi2 only");
}

LongTimeValue LongTimeForm::at(double t) const {
    const double s = params.cutoff * t;
    LongTimeValue v;
    v.exponential = amplitude2 * std::exp(-rate * s);
    v.power = power_coefficient * std::pow(s, -power_exponent);
    v.cross = -2.0 * std::sqrt(v.exponential * v.power) * std::cos(frequency * s + phase);
    v.p = v.exponential + v.power + v.cross;
    v.below_validity = t < validity_time;
    return v;
}

LongTimeValue long_time_asymptote(const ModelParams& p, const Formfactor& ff, double t) {
    return LongTimeForm::make(p, ff).at(t);
}

}  // namespace zeno
