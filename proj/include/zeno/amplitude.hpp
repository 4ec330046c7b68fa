#pragma once

// Survival amplitude A(t) = <1|exp(-iHt)|1> = int rho(x) exp(-i x Lambda t) dx and p(t) = |A|^2.
// Three engines: quadrature of the spectral density (any formfactor), the closed form through the
// complex error function (phi1), and the pole sum plus background integral (phi2).

#include <complex>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "zeno/dispersion.hpp"
#include "zeno/formfactor.hpp"
#include "zeno/model.hpp"
#include "zeno/quadrature.hpp"
#include "zeno/spectral.hpp"

namespace zeno {

enum class Engine { Auto, Quadrature, Phi1Exact, Phi2Poles, AsymptoticLong, SeriesShort };

std::string engine_name(Engine e);

// Engine actually used for `requested` with this formfactor (Auto resolved).
// Throws UnsupportedError on a mismatch such as Phi1Exact for phi2.
Engine resolve_engine(Engine requested, FormfactorId ff);

class AmplitudeEngine {
public:
    explicit AmplitudeEngine(const ModelParams& p) : params_(p) {}
    virtual ~AmplitudeEngine() = default;

    virtual Engine kind() const = 0;
    // A as a function of s = Lambda t
    virtual quad::Estimate<cplx> amplitude_scaled(double s) const = 0;
    // 1 - |A(s)|^2; engines with a cancellation-free form override this
    virtual quad::Estimate<double> deficit_scaled(double s) const;

    quad::Estimate<cplx> amplitude(double t) const { return amplitude_scaled(params_.cutoff * t); }
    double probability(double t) const;
    double deficit(double t) const { return deficit_scaled(params_.cutoff * t).value; }
    // ln p(t) from the deficit, accurate when p is close to 1; -inf when p <= 0
    double log_survival(double t) const;

    const ModelParams& params() const { return params_; }

protected:
    ModelParams params_;
};

class QuadratureEngine final : public AmplitudeEngine {
public:
    QuadratureEngine(const ModelParams& p, const Formfactor& ff);
    Engine kind() const override { return Engine::Quadrature; }
    quad::Estimate<cplx> amplitude_scaled(double s) const override;
    quad::Estimate<double> deficit_scaled(double s) const override;
    // null when lambda2 == 0
    const SpectralApproximant* spectrum() const { return spectrum_.get(); }

private:
    std::shared_ptr<const SpectralApproximant> spectrum_;
};

class Phi1ExactEngine final : public AmplitudeEngine {
public:
    explicit Phi1ExactEngine(const ModelParams& p);
    Engine kind() const override { return Engine::Phi1Exact; }
    quad::Estimate<cplx> amplitude_scaled(double s) const override;
    const std::vector<ResonanceRoot>& roots() const { return roots_; }
    // coefficient of exp(i z_res s) in conj(A): the constant A_1 of the exponential era
    cplx resonance_coefficient() const;

private:
    std::vector<ResonanceRoot> roots_;
    std::vector<cplx> weights_;  // a_k in conj(A) = -sum_k a_k w(-u_k e^{-i pi/4} sqrt(s))
};

class Phi2PoleEngine final : public AmplitudeEngine {
public:
    explicit Phi2PoleEngine(const ModelParams& p);
    Engine kind() const override { return Engine::Phi2Poles; }
    quad::Estimate<cplx> amplitude_scaled(double s) const override;
    const std::vector<ResonanceRoot>& roots() const { return roots_; }
    // lambda^2-free background integral I(s) of the pole representation
    quad::Estimate<cplx> background(double s) const;
    // coefficient of exp(i z_1 s) in conj(A): the constant A_2 of the exponential era
    cplx resonance_coefficient() const;

private:
    std::vector<ResonanceRoot> roots_;
};

// Engine factory; Auto picks the closed-form engine when one exists.
std::unique_ptr<AmplitudeEngine> make_engine(const ModelParams& p, const Formfactor& ff, Engine e = Engine::Auto);

// One-shot conveniences (each call builds its engine).
quad::Estimate<cplx> survival_amplitude_quadrature(const ModelParams& p, const Formfactor& ff, double t);
quad::Estimate<cplx> survival_amplitude_phi1_exact(const ModelParams& p, double t);
quad::Estimate<cplx> survival_amplitude_phi2(const ModelParams& p, double t);
double survival_probability(const ModelParams& p, const Formfactor& ff, double t, Engine e = Engine::Auto);

enum class TimeUnit { Seconds, DecayTime };

struct SurvivalSample {
    double t = 0;      // seconds
    double p = 0;
    double err = 0;    // bound on |p - exact|
    bool clamped = false;
};

struct SurvivalCurve {
    ModelParams params;
    FormfactorId formfactor = FormfactorId::Phi1;
    Engine engine = Engine::Quadrature;
    TimeUnit t_unit = TimeUnit::Seconds;
    std::vector<SurvivalSample> samples;
};

// Samples p on strictly increasing times: 1 - deficit while p > 1/2, |A|^2 after. Values
// outside [0, 1] by less than 1e-8 are clamped and flagged; larger excursions throw
// ConvergenceError.
SurvivalCurve sample_curve(const AmplitudeEngine& engine, FormfactorId ff, const std::vector<double>& times);

// n log-spaced points on [t0, t1]
std::vector<double> log_grid(double t0, double t1, int n);

struct ShortTimeExpansion {
    double exponent = 2.0;           // leading power s of 1 - p
    double t_a = 0;                  // 1 - p ~ (t/t_a)^s
    std::optional<double> t_b;       // next term +(t/t_b)^2 (phi1) or +(t/t_b)^4 (generic)
    bool log_correction = false;     // phi2: -(lambda^2/12) ln(2 omega1 t) Lambda^4 t^4
    double log_coefficient = 0;      // lambda^2 Lambda^4 / 12, s^-4
    double omega1 = 0;
    double validity_time = 0;        // t_Z, where the first two correction terms balance

    double leading_deficit(double t) const;
    // truncated series for p(t)
    double series(double t) const;
};

// Throws DivergenceError naming the missing moment when no expansion exists.
ShortTimeExpansion short_time_expansion(const ModelParams& p, const Formfactor& ff);

struct LongTimeValue {
    double p = 0;
    double exponential = 0;   // |A_k|^2 e^{-rate t}
    double power = 0;         // power-law tail
    double cross = 0;         // interference term
    bool below_validity = false;  // t under 24/omega1 (phi1) or 4/omega1 (phi2)
};

// Three-term long-time form with crossover functions set to 1; phi1 and phi2 only:
//   p ~ |A_k|^2 e^{-rate s} + C s^{-n} - 2 sqrt(C) |A_k| e^{-rate s / 2} s^{-n/2} cos(Re z_k s + phase)
// with s = Lambda t, (C, n) = (pi lambda^4 / 4 w^4, 3) for phi1 and (lambda^4 / Q(0)^4, 4) for phi2.
struct LongTimeForm {
    ModelParams params;
    FormfactorId formfactor = FormfactorId::Phi1;
    double amplitude2 = 0;    // |A_k|^2
    double rate = 0;          // 2 Im z_k, per unit s
    double frequency = 0;     // Re z_k
    double phase = 0;         // cross-term phase offset
    double power_coefficient = 0;
    double power_exponent = 0;
    double validity_time = 0; // seconds

    static LongTimeForm make(const ModelParams& p, const Formfactor& ff);
    LongTimeValue at(double t) const;
};

LongTimeValue long_time_asymptote(const ModelParams& p, const Formfactor& ff, double t);

}  // namespace zeno
