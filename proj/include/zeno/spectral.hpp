#pragma once

// Piecewise Chebyshev model of the spectral density rho(x) on (0, inf) and its Fourier integrals.
// The approximant is built once per (params, formfactor); each time point then costs O(pieces).

#include <array>
#include <complex>
#include <vector>

#include "zeno/formfactor.hpp"
#include "zeno/model.hpp"
#include "zeno/quadrature.hpp"

namespace zeno {

class SpectralApproximant {
public:
    static constexpr int kDegree = 24;

    struct Piece {
        double a = 0, b = 0;  // offsets from peak()
        std::array<double, kDegree + 1> coef{};   // rho(peak + m + r t) = sum_k coef[k] T_k(t), t in [-1, 1]
        std::array<double, kDegree + 1> d_right{}; // k-th t-derivative of the series at t = +1
        std::array<double, kDegree + 1> d_left{};  // ... and at t = -1
        double mass = 0;       // integral over the piece
        double error = 0;      // bound on int |rho - series| over the piece
    };

    // Throws BoundStateError when the margin is not positive and ConvergenceError if the
    // refinement budget is exhausted. lambda2 must be > 0.
    SpectralApproximant(const ModelParams& p, const Formfactor& ff);

    // int rho(x) exp(-i x s) dx, s = Lambda t >= 0
    quad::Estimate<std::complex<double>> fourier(double s) const;

    // 1 - |A|^2 without cancellation at small s:
    //   2 int rho (1 - cos((x-c)s)) - |int rho (exp(-i(x-c)s) - 1)|^2,  c = omega_Lambda
    quad::Estimate<double> deficit(double s) const;

    double mass() const { return mass_; }
    double approximation_error() const { return error_; }
    double peak() const { return peak_; }
    double lower() const { return peak_ + pieces_.front().a; }
    double upper() const { return peak_ + pieces_.back().b; }
    const std::vector<Piece>& pieces() const { return pieces_; }
    double evaluate(double x) const;  // the interpolant (0 outside its support)

private:
    // int over the piece of rho(x) exp(-i (x - omega_Lambda) s)
    std::complex<double> piece_fourier(const Piece& pc, double s) const;

    ModelParams params_;
    std::vector<Piece> pieces_;
    double mass_ = 0;
    double error_ = 0;
    double peak_ = 0;
    double center_ = 0;
};

}  // namespace zeno
