#pragma once

// The resolvent denominator
//   eta(z) = omega_Lambda - z - lambda^2 int_0^inf phi(x)/(x - z) dx
// on the physical sheet, its boundary values on the cut [0, inf), its continuation through the
// cut and the zeros there. All frequencies are dimensionless (units of Lambda).
//
// Orientation: the second sheet is reached from below the cut, so that in the upper half plane
// eta_II(z) = eta_I(z) + 2 pi i lambda^2 phi(z). Resonance zeros then have Im z > 0 and the pole
// terms e^{i z Lambda t} decay; they describe conj(A), with A(t) = <1|exp(-iHt)|1>. In the lower
// half plane the Schwarz reflection eta_II(conj z) = conj eta_II(z) defines the other half.

#include <complex>
#include <vector>

#include "zeno/formfactor.hpp"
#include "zeno/model.hpp"

namespace zeno {

using cplx = std::complex<double>;

enum class Sheet { I, II };

struct SheetPoint {
    cplx z;
    Sheet sheet = Sheet::I;
};

enum class RootKind {
    Resonance,  // near the real axis with Im z > 0: the decaying pole
    Mirror,     // reflection of the resonance into the lower half plane (enters only through
                // the branch-point integral, never as a pole term)
    Cutoff,     // near z = i or deeper, set by the formfactor scale
};

struct ResonanceRoot {
    cplx z;                // zero of eta_II
    cplx residue_weight;   // -1/eta_II'(z): coefficient of e^{i z Lambda t} in conj(A)
    RootKind kind = RootKind::Resonance;
    bool contributes = true;  // appears as a pole term in the amplitude
    cplx u;                // phi1 only: the cubic variable, u^2 = z, Im u < 0
    double residual = 0.0; // |eta_II(z)| after polishing
};

enum class Side { Plus, Minus };  // y + i0, y - i0

// Throws DomainError for z on [0, inf).
cplx eta_first_sheet(const ModelParams& p, const Formfactor& ff, cplx z);

// eta(y +- i0) = omega - y - lambda^2 [P int phi/(x-y) dx +- i pi phi(y)]; Minus carries +i pi lambda^2 phi.
cplx eta_boundary(const ModelParams& p, const Formfactor& ff, double y, Side side);

// Throws UnsupportedError for custom formfactors.
cplx eta_second_sheet(const ModelParams& p, const Formfactor& ff, cplx z);
cplx eta_second_sheet_derivative(const ModelParams& p, const Formfactor& ff, cplx z);

// P int_0^inf phi(x)/(x - y) dx, y > 0.
double dispersion_shift(const Formfactor& ff, double y);

// Zeros of eta_II. phi1: all three roots of the cubic in u = sqrt(z); phi2, phi3: the three
// roots reachable from the weak-coupling seeds. Throws BoundStateError when the margin is <= 0,
// ConvergenceError when Newton does not converge.
std::vector<ResonanceRoot> resonance_roots(const ModelParams& p, const Formfactor& ff);

// The root of kind Resonance (throws std::logic_error if absent).
const ResonanceRoot& resonance_of(const std::vector<ResonanceRoot>& roots);

// rho(x) = (1/pi) Im 1/eta(x + i0) written in manifestly nonnegative form. Its Fourier transform
// is the survival amplitude and its integral is 1.
double spectral_density(const ModelParams& p, const Formfactor& ff, double x);

// phi2 only: the pole weight in the rational closed form, equal to minus residue_weight
//   R(z) = -[1 - (lambda^2/2)((3 - z^2 + 2 pi z)/(1+z^2)^2 + (1-3z^2)/(1+z^2)^3 (pi z + 2 log z + 2 i pi))]^{-1}
// which equals +1/eta_II'(z), i.e. minus residue_weight.
cplx phi2_closed_form_residue(const ModelParams& p, cplx z);

// phi2 only: Q(x) = (omega - ix)(1-x^2)^2 - (lambda^2/4)(pi - 2ix)(1-x^2) - (lambda^2/2)(pi x^2 - 2ix log x).
cplx phi2_background_q(const ModelParams& p, double x);

}  // namespace zeno
