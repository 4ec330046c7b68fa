#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "zeno/model.hpp"

namespace zeno {

// Dimensionless coupling density phi(x), x = omega/Lambda, with its power-law behavior
// phi ~ x^head near 0 and phi ~ x^(-tail) at infinity.
class Formfactor {
public:
    static Formfactor phi1();  // sqrt(x)/(1+x)
    static Formfactor phi2();  // x/(1+x^2)^2
    static Formfactor phi3();  // x/(1+x^2)^4
    static Formfactor builtin(FormfactorId id);

    // User evaluator. The declared exponents are trusted; check_exponents() compares them to the data.
    static Formfactor custom(std::function<double(double)> f, double tail_exponent, double head_exponent);
    // Tabulated samples, interpolated linearly in (log x, log phi) and extended beyond the
    // table with the declared power laws. x must be strictly increasing and positive.
    static Formfactor tabulated(std::vector<double> x, std::vector<double> phi, double tail_exponent,
                                double head_exponent);
    // Two whitespace separated columns (x, phi); '#' starts a comment.
    static Formfactor load_table(const std::string& path, double tail_exponent, double head_exponent);

    FormfactorId id() const { return id_; }
    std::string name() const;
    double tail_exponent() const { return tail_; }
    double head_exponent() const { return head_; }

    // Throws DomainError for x <= 0.
    double operator()(double x) const;

    // Analytic continuation off the positive axis (built-ins only, principal branches).
    bool has_continuation() const { return id_ != FormfactorId::Custom; }
    std::complex<double> continuation(std::complex<double> z) const;

    // Windows [lo, hi] over which check_exponents() fits the head and tail slopes.
    std::pair<double, double> head_window() const { return head_window_; }
    std::pair<double, double> tail_window() const { return tail_window_; }

private:
    Formfactor(FormfactorId id, std::function<double(double)> f, double tail, double head)
        : id_(id), f_(std::move(f)), tail_(tail), head_(head) {}

    FormfactorId id_;
    std::function<double(double)> f_;
    double tail_;
    double head_;
    std::pair<double, double> head_window_{1e-6, 1e-4};
    std::pair<double, double> tail_window_{1e4, 1e6};
};

double eval_formfactor(const Formfactor& ff, double x);

// I_k = int_0^inf x^k phi(x) dx. std::nullopt marks a divergent moment; divergence is decided
// from the exponents (finite iff tail > k+1 and head > -k-1), never from the quadrature.
std::optional<double> moment(const Formfactor& ff, int k);

// int_0^inf phi^2 dx, nullopt when divergent (2*tail <= 1 or 2*head <= -1).
std::optional<double> squared_norm(const Formfactor& ff);

// int_0^inf phi(x)/x dx, nullopt when divergent (head <= 0 or tail <= 0).
std::optional<double> inverse_moment(const Formfactor& ff);

// omega_Lambda - lambda^2 int phi/x dx. Positive means no bound state.
// Throws DivergenceError when the integral diverges.
double bound_state_margin(const ModelParams& p, const Formfactor& ff);

// Compares declared exponents with log-log slopes fitted over two decades at each end.
// Returns one human readable line per mismatch larger than 0.1.
std::vector<std::string> check_exponents(const Formfactor& ff);

}  // namespace zeno
