#include "zeno/spectral.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/tools/roots.hpp>
#include <fmt/format.h>

#include "zeno/dispersion.hpp"
#include "zeno/errors.hpp"

namespace zeno {

namespace {

using cplx = std::complex<double>;
constexpr int N = SpectralApproximant::kDegree;
using Coefs = std::array<double, N + 1>;

// rho below this level on a whole tail is dropped
constexpr double kTailMass = 1e-18;
// acceptance of a piece: absolute error of its mass, or coefficients at rounding level
constexpr double kPieceAbs = 1e-16;
constexpr double kPieceRel = 1e-14;
constexpr std::size_t kMaxPieces = 60000;
// Fourier regimes in terms of the half-width phase r*s of a piece
constexpr double kDirectPhase = 4.0;
constexpr double kIbpPhase = double(N) * N;

struct GaussRule {
    std::array<double, 32> t{}, w{};
    GaussRule() {
        using G = boost::math::quadrature::gauss<double, 32>;
        const auto& x = G::abscissa();
        const auto& wt = G::weights();
        for (std::size_t i = 0; i < x.size(); ++i) {
            t[2 * i] = x[i];
            w[2 * i] = wt[i];
            t[2 * i + 1] = -x[i];
            w[2 * i + 1] = wt[i];
        }
    }
};
const GaussRule& gauss32() {
    static const GaussRule rule;
    return rule;
}

struct CosTable {
    std::array<std::array<double, N + 1>, N + 1> c{};
    std::array<double, N + 1> nodes{};
    CosTable() {
        for (int j = 0; j <= N; ++j) {
            nodes[j] = std::cos(M_PI * j / N);
            for (int k = 0; k <= N; ++k) c[j][k] = std::cos(M_PI * ((j * k) % (2 * N)) / N);
        }
    }
};
const CosTable& cos_table() {
    static const CosTable t;
    return t;
}

double clenshaw(const Coefs& a, double t) {
    double b1 = 0.0, b2 = 0.0;
    for (int k = N; k >= 1; --k) {
        const double b0 = a[k] + 2.0 * t * b1 - b2;
        b2 = b1;
        b1 = b0;
    }
    return a[0] + t * b1 - b2;
}

Coefs chebyshev_coefficients(const std::array<double, N + 1>& f) {
    const auto& ct = cos_table();
    Coefs a{};
    for (int k = 0; k <= N; ++k) {
        double s = 0.5 * (f[0] * ct.c[0][k] + f[N] * ct.c[N][k]);
        for (int j = 1; j < N; ++j) s += f[j] * ct.c[j][k];
        a[k] = 2.0 * s / N;
    }
    a[0] *= 0.5;
    a[N] *= 0.5;
    return a;
}

Coefs derivative(const Coefs& a) {
    Coefs b{};
    for (int j = N; j >= 1; --j) b[j - 1] = (j + 1 <= N ? b[j + 1] : 0.0) + 2.0 * j * a[j];
    b[0] *= 0.5;
    return b;
}

}  // namespace

SpectralApproximant::SpectralApproximant(const ModelParams& p, const Formfactor& ff)
    : params_(p.dimensionless()), center_(p.omega()) {
    if (!(p.lambda2 > 0.0)) throw DomainError("spectral approximant needs lambda2 > 0");
    const double margin = bound_state_margin(p, ff);
    if (!(margin > 0.0)) throw BoundStateError(fmt::format("bound state present (margin {:.6g})", margin));

    const ModelParams& q = params_;
    auto rho = [&](double x) { return spectral_density(q, ff, x); };
    // rho(base + off) with omega - x formed as (omega - base) - off, so that node rounding
    // does not leak into the Lorentzian when the resonance is narrower than ~1e-8 omega
    auto rho_at = [&](double base, double off) {
        const double x = base + off;
        if (!(x > 0.0)) return 0.0;
        const double f = ff(x);
        if (f == 0.0) return 0.0;
        const double re = ((q.omega() - base) - off) - q.lambda2 * dispersion_shift(ff, x);
        const double im = M_PI * q.lambda2 * f;
        return q.lambda2 * f / (re * re + im * im);
    };
    auto shifted = [&](double x) { return q.omega() - x - q.lambda2 * dispersion_shift(ff, x); };

    // locate the resonance peak: first sign change of Re eta(x + i0)
    {
        double lo = q.omega() * std::ldexp(1.0, -30), hi = lo;
        double flo = shifted(lo);
        for (int k = 0; k < 120; ++k) {
            hi = 2.0 * lo;
            const double fhi = shifted(hi);
            if (flo > 0.0 && fhi <= 0.0) break;
            lo = hi;
            flo = fhi;
        }
        std::uintmax_t iters = 200;
        auto tol = [](double a, double b) { return std::abs(b - a) <= 4e-16 * std::abs(a); };
        const auto br = boost::math::tools::toms748_solve(shifted, lo, hi, tol, iters);
        peak_ = 0.5 * (br.first + br.second);
    }
    const double width = std::max(M_PI * q.lambda2 * ff(peak_), 1e-13 * peak_);

    const double head = ff.head_exponent(), tail = ff.tail_exponent() + 2.0;
    double xlo = std::min(peak_, 1.0) * std::ldexp(1.0, -8);
    while (rho(xlo) * xlo / (head + 1.0) > kTailMass && xlo > 1e-280) xlo *= 0.5;
    double xhi = std::max(8.0, 8.0 * peak_);
    while (rho(xhi) * xhi / (tail - 1.0) > kTailMass && xhi < 1e280) xhi *= 2.0;

    // Breakpoints are kept as offsets from the peak: piece midpoints are then exact enough that
    // adjacent pieces tile the axis even when the peak is only a few ulps of x wide.
    std::vector<double> br;
    for (double x = xlo; x < xhi; x *= 2.0) br.push_back(x - peak_);
    br.push_back(xhi - peak_);
    for (double d = width; d < 0.5 * peak_; d *= 4.0) {
        br.push_back(-d);
        br.push_back(d);
    }
    br.push_back(0.0);
    std::sort(br.begin(), br.end());
    std::vector<double> cuts;
    for (double x : br)
        if (cuts.empty() || x - cuts.back() > 1e-12 * (std::abs(x) + peak_)) cuts.push_back(x);

    std::vector<std::pair<double, double>> todo;
    for (std::size_t i = cuts.size() - 1; i >= 1; --i) todo.emplace_back(cuts[i - 1], cuts[i]);

    const auto& ct = cos_table();
    while (!todo.empty()) {
        auto [a, b] = todo.back();
        todo.pop_back();
        const double m = 0.5 * (a + b), r = 0.5 * (b - a);
        std::array<double, N + 1> f{};
        for (int j = 0; j <= N; ++j) f[j] = rho_at(peak_, m + r * ct.nodes[j]);
        Piece pc;
        pc.a = a;
        pc.b = b;
        pc.coef = chebyshev_coefficients(f);
        double amax = 0.0;
        for (double c : pc.coef) amax = std::max(amax, std::abs(c));
        const double tailc = std::abs(pc.coef[N - 3]) + std::abs(pc.coef[N - 2]) + std::abs(pc.coef[N - 1]) +
                             std::abs(pc.coef[N]);
        pc.error = tailc * (b - a);
        const bool resolved = pc.error <= kPieceAbs || tailc <= kPieceRel * amax;
        const bool too_thin = r <= 1e-13 * (std::abs(m) + peak_);
        if (!resolved && !too_thin) {
            todo.emplace_back(m, b);
            todo.emplace_back(a, m);
            if (pieces_.size() + todo.size() > kMaxPieces)
                throw ConvergenceError("spectral approximant: refinement budget exhausted", pc.error);
            continue;
        }
        double mass = 0.0;
        for (int k = 0; k <= N; k += 2) mass += pc.coef[k] * 2.0 / (1.0 - double(k) * k);
        pc.mass = r * mass;
        Coefs cur = pc.coef;
        for (int k = 0; k <= N; ++k) {
            double sr = 0.0, sl = 0.0;
            for (int j = 0; j <= N; ++j) {
                sr += cur[j];
                sl += (j % 2 ? -cur[j] : cur[j]);
            }
            pc.d_right[k] = sr;
            pc.d_left[k] = sl;
            cur = derivative(cur);
        }
        pieces_.push_back(pc);
    }
    std::sort(pieces_.begin(), pieces_.end(), [](const Piece& x, const Piece& y) { return x.a < y.a; });
    for (const auto& pc : pieces_) {
        mass_ += pc.mass;
        error_ += pc.error;
    }
    // dropped tails
    error_ += 2.0 * kTailMass;
}

double SpectralApproximant::evaluate(double x) const {
    if (x < lower() || x > upper()) return 0.0;
    x -= peak_;
    auto it = std::upper_bound(pieces_.begin(), pieces_.end(), x, [](double v, const Piece& p) { return v < p.a; });
    if (it != pieces_.begin()) --it;
    const double m = 0.5 * (it->a + it->b), r = 0.5 * (it->b - it->a);
    return clenshaw(it->coef, (x - m) / r);
}

cplx SpectralApproximant::piece_fourier(const Piece& pc, double s) const {
    const double m = 0.5 * (pc.a + pc.b), r = 0.5 * (pc.b - pc.a);
    const double wp = r * s;
    const auto& g = gauss32();
    cplx J = 0.0;
    if (wp <= kDirectPhase) {
        for (int i = 0; i < 32; ++i) J += g.w[i] * clenshaw(pc.coef, g.t[i]) * std::polar(1.0, -wp * g.t[i]);
    } else if (wp < kIbpPhase) {
        const int panels = static_cast<int>(std::ceil(wp / kDirectPhase));
        const double h = 1.0 / panels;
        for (int pnl = 0; pnl < panels; ++pnl) {
            const double tc = -1.0 + (2 * pnl + 1) * h;
            cplx sub = 0.0;
            for (int i = 0; i < 32; ++i) {
                const double t = tc + h * g.t[i];
                sub += g.w[i] * clenshaw(pc.coef, t) * std::polar(1.0, -wp * t);
            }
            J += h * sub;
        }
    } else {
        // integration by parts, exact for the polynomial:
        // int q e^{lt} = sum_k (-1)^k l^{-k-1} [q^(k)(1) e^{l} - q^(k)(-1) e^{-l}],  l = -i wp
        const cplx l(0.0, -wp);
        const cplx el = std::polar(1.0, -wp), eml = std::polar(1.0, wp);
        cplx fac = 1.0 / l;
        for (int k = 0; k <= N; ++k) {
            J += fac * (pc.d_right[k] * el - pc.d_left[k] * eml);
            fac *= -1.0 / l;
        }
    }
    return r * std::polar(1.0, -((peak_ - center_) + m) * s) * J;
}

quad::Estimate<cplx> SpectralApproximant::fourier(double s) const {
    quad::Estimate<cplx> r;
    for (const auto& pc : pieces_) r.value += piece_fourier(pc, s);
    r.value *= std::polar(1.0, -center_ * s);
    r.error = error_ + 1e-15 * std::abs(r.value) + 1e-16 * pieces_.size();
    return r;
}

quad::Estimate<double> SpectralApproximant::deficit(double s) const {
    const auto& g = gauss32();
    const double c = center_;
    double S = 0.0;    // int rho (1 - cos theta)
    cplx D = 0.0;      // int rho (e^{-i theta} - 1)
    for (const auto& pc : pieces_) {
        const double m = 0.5 * (pc.a + pc.b), r = 0.5 * (pc.b - pc.a);
        if (r * s <= kDirectPhase) {
            for (int i = 0; i < 32; ++i) {
                const double theta = ((peak_ - c) + m + r * g.t[i]) * s;
                const double sh = std::sin(0.5 * theta);
                const double wq = r * g.w[i] * clenshaw(pc.coef, g.t[i]);
                S += wq * 2.0 * sh * sh;
                D += wq * cplx(-2.0 * sh * sh, -std::sin(theta));
            }
        } else {
            const cplx f = piece_fourier(pc, s);
            S += pc.mass - f.real();
            D += f - pc.mass;
        }
    }
    quad::Estimate<double> r;
    r.value = 2.0 * S - std::norm(D);
    r.error = 4.0 * error_ + 1e-15 * std::abs(r.value) + 1e-16 * pieces_.size();
    return r;
}

}  // namespace zeno
