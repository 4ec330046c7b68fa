#include "zeno/dispersion.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#include "zeno/errors.hpp"
#include "zeno/quadrature.hpp"

namespace zeno {

namespace {

constexpr cplx I{0.0, 1.0};

// square root with nonnegative imaginary part: the physical-sheet branch of sqrt(z)
cplx sqrt_upper(cplx z) {
    cplx s = std::sqrt(z);
    if (s.imag() < 0.0) s = -s;
    return s;
}

bool on_cut(cplx z) { return z.imag() == 0.0 && z.real() >= 0.0; }

// int_0^inf f(x) dx over panels graded around `scale`
template <class F>
auto half_line(F&& f, double scale) {
    std::vector<double> br{0.0};
    for (double a = scale * std::ldexp(1.0, -40); a < std::max(8.0 * scale, 8.0); a *= 2.0) br.push_back(a);
    auto r = quad::gk_breaks(f, br);
    auto tail = quad::gk_to_infinity(f, br.back());
    r.value += tail.value;
    r.error += tail.error;
    return r;
}

// K(z) = int_0^inf phi(x)/(x - z) dx for z off the cut, by quadrature
cplx cauchy_integral(const Formfactor& ff, cplx z) {
    const double xr = z.real(), y = z.imag();
    auto phi = [&](double x) { return x > 0.0 ? ff(x) : 0.0; };
    if (xr > 0.0 && std::abs(y) < xr) {
        // subtract phi(xr) so that the near-singular part is handled analytically
        const double f0 = ff(xr);
        auto g = [&](double x) -> cplx { return (phi(x) - f0) / (x - z); };
        std::vector<double> br{0.0};
        const double floor = std::max(std::abs(y), xr * 1e-12);
        std::vector<double> left, right;
        for (double d = 0.5 * xr; d > floor; d *= 0.25) {
            left.push_back(xr - d);
            right.push_back(xr + d);
        }
        std::reverse(right.begin(), right.end());
        br.insert(br.end(), left.begin(), left.end());
        br.push_back(xr);
        br.insert(br.end(), right.begin(), right.end());
        br.push_back(2.0 * xr);
        cplx k = quad::gk_breaks(g, br).value;
        k += f0 * (std::log(2.0 * xr - z) - std::log(-z));
        k += quad::gk_to_infinity([&](double x) -> cplx { return ff(x) / (x - z); }, 2.0 * xr).value;
        return k;
    }
    return half_line([&](double x) -> cplx { return phi(x) / (x - z); }, std::max(std::abs(z), 1e-6)).value;
}

// R(w) = w / (1 + w^2)^n. Keyhole contour around the cut:
//   int_0^inf R(x)/(x - z) dx = -[R(z) Log(-z) + Res_{w=i} + Res_{w=-i}] of R(w) Log(-w)/(w - z).
// The order-n residues are Taylor coefficients of the regular factor, expanded term by term.
// With order = 2 the same sum gives d/dz of the integral (second pole factor (w - z)^-2).
cplx rational_pole_residues(int n, cplx z, int order) {
    cplx total = 0.0;
    for (const cplx p : {I, -I}) {
        const cplx q = -p;
        std::vector<cplx> a(n, 0.0), b(n, 0.0), c(n, 0.0), d(n, 0.0);
        // w = p + t
        a[0] = p;
        if (n > 1) a[1] = 1.0;
        // (w - q)^-n
        cplx binom = 1.0;
        for (int k = 0; k < n; ++k) {
            b[k] = binom * std::pow(p - q, -double(n + k));
            binom *= -double(n + k) / double(k + 1);
        }
        // Log(-w) = Log(-p) + log(1 + t/p)
        c[0] = std::log(-p);
        for (int k = 1; k < n; ++k) c[k] = (k % 2 ? 1.0 : -1.0) * std::pow(p, -double(k)) / double(k);
        // (w - z)^-order
        for (int k = 0; k < n; ++k) {
            const double sgn = k % 2 ? -1.0 : 1.0;
            d[k] = order == 1 ? sgn * std::pow(p - z, -double(k + 1)) : sgn * double(k + 1) * std::pow(p - z, -double(k + 2));
        }
        auto mul = [n](const std::vector<cplx>& x, const std::vector<cplx>& y) {
            std::vector<cplx> r(n, 0.0);
            for (int i = 0; i < n; ++i)
                for (int j = 0; i + j < n; ++j) r[i + j] += x[i] * y[j];
            return r;
        };
        total += mul(mul(a, b), mul(c, d))[n - 1];
    }
    return total;
}

int rational_order(FormfactorId id) { return id == FormfactorId::Phi2 ? 2 : 4; }

cplx rational_value(int n, cplx w) { return w / std::pow(1.0 + w * w, double(n)); }

cplx rational_derivative(int n, cplx w) {
    const cplx d = 1.0 + w * w;
    return 1.0 / std::pow(d, double(n)) - 2.0 * n * w * w / std::pow(d, double(n + 1));
}

// K(z) for the rational formfactors, z off the cut; L stands for Log(-z)
cplx rational_cauchy(int n, cplx z, cplx L) { return -(rational_value(n, z) * L + rational_pole_residues(n, z, 1)); }

cplx rational_cauchy_derivative(int n, cplx z, cplx L) {
    return -(rational_derivative(n, z) * L + rational_value(n, z) / z + rational_pole_residues(n, z, 2));
}

// phi2 closed form with the logarithm L standing for log(-z) on sheet I
cplx eta_phi2(const ModelParams& p, cplx z, cplx L) {
    const double w = p.omega(), l2 = p.lambda2;
    const cplx d = 1.0 + z * z;
    return w - z - l2 * (M_PI - 2.0 * z) / (4.0 * d) + l2 * (M_PI * z * z + 2.0 * z * L) / (2.0 * d * d);
}

cplx eta_phi2_derivative(const ModelParams& p, cplx z, cplx L) {
    const double l2 = p.lambda2;
    const cplx d = 1.0 + z * z;
    const cplx d2 = d * d;
    return -1.0 - l2 * (z * z - M_PI * z - 1.0) / (2.0 * d2) + l2 * (M_PI * z + L + 1.0) / d2 -
           l2 * 2.0 * z * (M_PI * z * z + 2.0 * z * L) / (d2 * d);
}

// log(-z) continued to sheet II from below the cut (upper half plane) or above it (lower half)
cplx log_second_sheet(cplx z) { return std::log(z) + (z.imag() >= 0.0 ? I : -I) * M_PI; }

// eta with sqrt(z) replaced by a chosen branch value u (phi1)
cplx eta_phi1_u(const ModelParams& p, cplx z, cplx u) {
    return p.omega() - z - M_PI * p.lambda2 / (1.0 - I * u);
}

cplx eta_phi1_u_derivative(const ModelParams& p, cplx u) {
    const cplx q = 1.0 - I * u;
    return -1.0 - M_PI * p.lambda2 * I / (q * q * 2.0 * u);
}

// sheet-II branch of sqrt for phi1: the lower-half root
cplx sqrt_second_sheet(cplx z) { return -sqrt_upper(z); }

void check_margin(const ModelParams& p, const Formfactor& ff) {
    const double m = bound_state_margin(p, ff);
    if (!(m > 0.0))
        throw BoundStateError(fmt::format("bound state present: omega - lambda^2 int phi/x = {:.6g} <= 0", m));
}

struct NewtonResult {
    cplx z;
    int iterations;
};

template <class F, class D>
NewtonResult newton(F&& f, D&& df, cplx z) {
    for (int it = 1; it <= 100; ++it) {
        const cplx step = f(z) / df(z);
        z -= step;
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) break;
        if (std::abs(step) < 1e-14 * (1.0 + std::abs(z))) {
            // two more steps: quadratic convergence takes the last iterate to rounding level
            for (int k = 0; k < 2; ++k) {
                const cplx s2 = f(z) / df(z);
                if (std::abs(s2) < std::abs(step)) z -= s2;
            }
            return {z, it};
        }
    }
    throw ConvergenceError(fmt::format("Newton iteration on eta_II did not converge (last iterate {} {:+}i)",
                                       z.real(), z.imag()),
                           std::abs(f(z)));
}

std::vector<ResonanceRoot> roots_phi1(const ModelParams& p) {
    const double w = p.omega(), l2 = p.lambda2;
    // (omega - u^2)(1 - iu) - pi lambda^2 = 0, made monic:
    // u^3 + i u^2 - omega u - i (omega - pi lambda^2) = 0
    const cplx c2 = I, c1 = -w, c0 = -I * (w - M_PI * l2);
    Eigen::Matrix3cd companion;
    companion << -c2, -c1, -c0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0;
    Eigen::ComplexEigenSolver<Eigen::Matrix3cd> solver(companion, false);
    if (solver.info() != Eigen::Success) throw ConvergenceError("companion eigenvalue solver failed", 0.0);

    auto poly = [&](cplx u) { return ((u + c2) * u + c1) * u + c0; };
    auto dpoly = [&](cplx u) { return (3.0 * u + 2.0 * c2) * u + c1; };

    std::vector<ResonanceRoot> roots;
    for (int k = 0; k < 3; ++k) {
        cplx u = solver.eigenvalues()[k];
        for (int it = 0; it < 8; ++it) {
            const cplx d = dpoly(u);
            if (d == 0.0) break;
            const cplx step = poly(u) / d;
            u -= step;
            if (std::abs(step) <= 1e-17 * std::abs(u)) break;
        }
        if (!(u.imag() < 0.0))
            throw ConvergenceError("cubic root on the physical sheet: parameters admit a bound state", u.imag());
        ResonanceRoot r;
        r.u = u;
        r.z = u * u;
        r.residue_weight = -1.0 / eta_phi1_u_derivative(p, u);
        if (std::abs(u) > 0.5)
            r.kind = RootKind::Cutoff;
        else
            r.kind = r.z.imag() > 0.0 ? RootKind::Resonance : RootKind::Mirror;
        r.contributes = r.kind == RootKind::Resonance;
        r.residual = std::abs(eta_phi1_u(p, r.z, u));
        roots.push_back(r);
    }
    std::sort(roots.begin(), roots.end(), [](const auto& a, const auto& b) { return std::abs(a.z) < std::abs(b.z); });
    return roots;
}

std::vector<ResonanceRoot> roots_newton(const ModelParams& p, const Formfactor& ff,
                                        const std::vector<std::pair<cplx, RootKind>>& seeds) {
    std::vector<ResonanceRoot> roots;
    for (const auto& [seed, kind] : seeds) {
        auto f = [&](cplx z) { return eta_second_sheet(p, ff, z); };
        auto df = [&](cplx z) { return eta_second_sheet_derivative(p, ff, z); };
        const auto res = newton(f, df, seed);
        ResonanceRoot r;
        r.z = res.z;
        r.u = std::sqrt(res.z);
        r.residue_weight = -1.0 / df(res.z);
        r.kind = kind;
        r.contributes = res.z.real() > 0.0 && res.z.imag() > 0.0;
        r.residual = std::abs(f(res.z));
        roots.push_back(r);
    }
    return roots;
}

}  // namespace

cplx eta_first_sheet(const ModelParams& p, const Formfactor& ff, cplx z) {
    if (on_cut(z)) throw DomainError("eta_first_sheet: z lies on the cut [0, inf)");
    if (p.lambda2 == 0.0) return p.omega() - z;
    switch (ff.id()) {
        case FormfactorId::Phi1: return eta_phi1_u(p, z, sqrt_upper(z));
        case FormfactorId::Phi2: return eta_phi2(p, z, std::log(-z));
        case FormfactorId::Phi3: return p.omega() - z - p.lambda2 * rational_cauchy(4, z, std::log(-z));
        default: return p.omega() - z - p.lambda2 * cauchy_integral(ff, z);
    }
}

double dispersion_shift(const Formfactor& ff, double y) {
    if (!(y > 0.0)) throw DomainError("dispersion_shift: y must be positive");
    switch (ff.id()) {
        case FormfactorId::Phi1: return M_PI / (1.0 + y);
        case FormfactorId::Phi2: {
            const double d = 1.0 + y * y;
            return (M_PI - 2.0 * y) / (4.0 * d) - (M_PI * y * y + 2.0 * y * std::log(y)) / (2.0 * d * d);
        }
        case FormfactorId::Phi3:
            // average of the boundary values: Log(-y -+ i0) -> ln y
            return rational_cauchy(4, y, std::log(y)).real();
        default: {
            auto r = quad::principal_value([&](double x) { return ff(x); }, y);
            return r.value;
        }
    }
}

cplx eta_boundary(const ModelParams& p, const Formfactor& ff, double y, Side side) {
    if (!(y > 0.0)) throw DomainError("eta_boundary: y must be positive");
    const double re = p.omega() - y - (p.lambda2 == 0.0 ? 0.0 : p.lambda2 * dispersion_shift(ff, y));
    const double im = M_PI * p.lambda2 * ff(y);
    return {re, side == Side::Minus ? im : -im};
}

cplx eta_second_sheet(const ModelParams& p, const Formfactor& ff, cplx z) {
    if (!ff.has_continuation()) throw UnsupportedError("eta_second_sheet: custom formfactors cannot be continued");
    if (p.lambda2 == 0.0) return p.omega() - z;
    switch (ff.id()) {
        case FormfactorId::Phi1: return eta_phi1_u(p, z, sqrt_second_sheet(z));
        case FormfactorId::Phi2: return eta_phi2(p, z, log_second_sheet(z));
        default: {
            // Log(-z) on the first sheet plus the jump 2 pi i sgn(Im z) across the cut
            const int n = rational_order(ff.id());
            const cplx L = std::log(-z) + (z.imag() >= 0.0 ? 2.0 : -2.0) * M_PI * I;
            return p.omega() - z - p.lambda2 * rational_cauchy(n, z, L);
        }
    }
}

cplx eta_second_sheet_derivative(const ModelParams& p, const Formfactor& ff, cplx z) {
    if (!ff.has_continuation()) throw UnsupportedError("eta_second_sheet: custom formfactors cannot be continued");
    if (p.lambda2 == 0.0) return -1.0;
    switch (ff.id()) {
        case FormfactorId::Phi1: return eta_phi1_u_derivative(p, sqrt_second_sheet(z));
        case FormfactorId::Phi2: return eta_phi2_derivative(p, z, log_second_sheet(z));
        default: {
            const int n = rational_order(ff.id());
            const cplx L = std::log(-z) + (z.imag() >= 0.0 ? 2.0 : -2.0) * M_PI * I;
            return -1.0 - p.lambda2 * rational_cauchy_derivative(n, z, L);
        }
    }
}

std::vector<ResonanceRoot> resonance_roots(const ModelParams& p, const Formfactor& ff) {
    if (!ff.has_continuation()) throw UnsupportedError("resonance_roots: custom formfactors cannot be continued");
    check_margin(p, ff);
    const double w = p.omega(), l2 = p.lambda2, l = p.lambda();
    switch (ff.id()) {
        case FormfactorId::Phi1: return roots_phi1(p);
        case FormfactorId::Phi2: {
            const double off = std::sqrt(M_PI) / 2.0 * l;
            return roots_newton(p, ff,
                                {{w * cplx(1.0, M_PI * l2), RootKind::Resonance},
                                 {cplx(off, 1.0), RootKind::Cutoff},
                                 {cplx(-off, 1.0), RootKind::Cutoff}});
        }
        default: {
            const double r = std::sqrt(l) * std::pow(M_PI / 8.0, 0.25);
            return roots_newton(p, ff,
                                {{w * cplx(1.0, M_PI * l2), RootKind::Resonance},
                                 {I * (1.0 - r * std::polar(1.0, M_PI / 8.0)), RootKind::Cutoff},
                                 {I * (1.0 - r * std::polar(1.0, 5.0 * M_PI / 8.0)), RootKind::Cutoff}});
        }
    }
}

const ResonanceRoot& resonance_of(const std::vector<ResonanceRoot>& roots) {
    for (const auto& r : roots)
        if (r.kind == RootKind::Resonance) return r;
    throw std::logic_error("no resonance root in list");
}

double spectral_density(const ModelParams& p, const Formfactor& ff, double x) {
    if (!(x > 0.0)) throw DomainError("spectral_density: x must be positive");
    if (p.lambda2 == 0.0) return 0.0;
    const double f = ff(x);
    if (f == 0.0) return 0.0;
    const double re = p.omega() - x - p.lambda2 * dispersion_shift(ff, x);
    const double im = M_PI * p.lambda2 * f;
    return p.lambda2 * f / (re * re + im * im);
}

cplx phi2_closed_form_residue(const ModelParams& p, cplx z) {
    const double l2 = p.lambda2;
    const cplx d = 1.0 + z * z;
    const cplx bracket = (3.0 - z * z + 2.0 * M_PI * z) / (d * d) +
                         (1.0 - 3.0 * z * z) / (d * d * d) * (M_PI * z + 2.0 * std::log(z) + 2.0 * I * M_PI);
    return -1.0 / (1.0 - 0.5 * l2 * bracket);
}

cplx phi2_background_q(const ModelParams& p, double x) {
    const double w = p.omega(), l2 = p.lambda2;
    const double s = 1.0 - x * x;
    const cplx xl = x > 0.0 ? x * std::log(x) : 0.0;
    return (w - I * x) * s * s - 0.25 * l2 * (M_PI - 2.0 * I * x) * s - 0.5 * l2 * (M_PI * x * x - 2.0 * I * xl);
}

}  // namespace zeno
