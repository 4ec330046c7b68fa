#include "zeno/formfactor.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "zeno/errors.hpp"
#include "zeno/quadrature.hpp"

namespace zeno {

using cplx = std::complex<double>;

Formfactor Formfactor::phi1() {
    return {FormfactorId::Phi1, [](double x) { return std::sqrt(x) / (1.0 + x); }, 0.5, 0.5};
}

Formfactor Formfactor::phi2() {
    return {FormfactorId::Phi2,
            [](double x) {
                const double d = 1.0 + x * x;
                return x / (d * d);
            },
            3.0, 1.0};
}

Formfactor Formfactor::phi3() {
    return {FormfactorId::Phi3,
            [](double x) {
                const double d = 1.0 + x * x;
                const double d2 = d * d;
                return x / (d2 * d2);
            },
            7.0, 1.0};
}

Formfactor Formfactor::builtin(FormfactorId id) {
    switch (id) {
        case FormfactorId::Phi1: return phi1();
        case FormfactorId::Phi2: return phi2();
        case FormfactorId::Phi3: return phi3();
        default: throw UnsupportedError("custom formfactors need an evaluator or a table");
    }
}

Formfactor Formfactor::custom(std::function<double(double)> f, double tail_exponent,
                              double head_exponent) {
    if (!f) throw DomainError("custom formfactor without evaluator");
    return {FormfactorId::Custom, std::move(f), tail_exponent, head_exponent};
}

Formfactor Formfactor::tabulated(std::vector<double> x, std::vector<double> phi, double tail,
                                 double head) {
    if (x.size() < 2 || x.size() != phi.size()) throw DomainError("table needs >= 2 (x, phi) rows");
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || (i > 0 && !(x[i] > x[i - 1])))
            throw DomainError("table x column must be positive and strictly increasing");
        if (!(phi[i] >= 0.0)) throw DomainError("table phi column must be nonnegative");
    }
    const std::pair<double, double> hw{x.front(), std::min(100.0 * x.front(), x.back())};
    const std::pair<double, double> tw{std::max(x.back() / 100.0, x.front()), x.back()};
    auto f = [x = std::move(x), phi = std::move(phi), tail, head](double t) {
        const std::size_t n = x.size();
        if (t <= x.front()) return phi.front() * std::pow(t / x.front(), head);
        if (t >= x.back()) return phi.back() * std::pow(t / x.back(), -tail);
        const auto it = std::upper_bound(x.begin(), x.end(), t);
        const std::size_t j = std::min<std::size_t>(it - x.begin(), n - 1);
        const std::size_t i = j - 1;
        const double f0 = phi[i], f1 = phi[j];
        if (f0 > 0.0 && f1 > 0.0) {
            const double w = std::log(t / x[i]) / std::log(x[j] / x[i]);
            return f0 * std::pow(f1 / f0, w);
        }
        const double w = (t - x[i]) / (x[j] - x[i]);
        return f0 + w * (f1 - f0);
    };
    Formfactor ff{FormfactorId::Custom, std::move(f), tail, head};
    ff.head_window_ = hw;
    ff.tail_window_ = tw;
    return ff;
}

Formfactor Formfactor::load_table(const std::string& path, double tail, double head) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open formfactor table '" + path + "'");
    std::vector<double> xs, ps;
    std::string line;
    while (std::getline(in, line)) {
        if (auto c = line.find('#'); c != std::string::npos) line.erase(c);
        std::istringstream ss(line);
        double a, b;
        if (!(ss >> a)) continue;
        if (!(ss >> b)) throw DomainError("malformed row in '" + path + "': " + line);
        xs.push_back(a);
        ps.push_back(b);
    }
    return tabulated(std::move(xs), std::move(ps), tail, head);
}

std::string Formfactor::name() const {
    switch (id_) {
        case FormfactorId::Phi1: return "phi1";
        case FormfactorId::Phi2: return "phi2";
        case FormfactorId::Phi3: return "phi3";
        default: return "custom";
    }
}

double Formfactor::operator()(double x) const {
    if (!(x > 0.0)) throw DomainError(fmt::format("formfactor argument must be positive, got {}", x));
    return f_(x);
}

cplx Formfactor::continuation(cplx z) const {
    switch (id_) {
        case FormfactorId::Phi1: return std::sqrt(z) / (1.0 + z);
        case FormfactorId::Phi2: {
            const cplx d = 1.0 + z * z;
            return z / (d * d);
        }
        case FormfactorId::Phi3: {
            const cplx d = 1.0 + z * z;
            const cplx d2 = d * d;
            return z / (d2 * d2);
        }
        default: throw UnsupportedError("no analytic continuation for a custom formfactor");
    }
}

double eval_formfactor(const Formfactor& ff, double x) { return ff(x); }

std::optional<double> moment(const Formfactor& ff, int k) {
    if (k < 0) throw DomainError("moment order must be >= 0");
    if (!(ff.tail_exponent() > k + 1) || !(ff.head_exponent() > -k - 1)) return std::nullopt;
    return quad::compactified([&](double x) { return std::pow(x, k) * ff(x); }, 1e-12).value;
}

std::optional<double> squared_norm(const Formfactor& ff) {
    if (!(2.0 * ff.tail_exponent() > 1.0) || !(2.0 * ff.head_exponent() > -1.0)) return std::nullopt;
    return quad::compactified(
               [&](double x) {
                   const double f = ff(x);
                   return f * f;
               },
               1e-12)
        .value;
}

std::optional<double> inverse_moment(const Formfactor& ff) {
    if (!(ff.head_exponent() > 0.0) || !(ff.tail_exponent() > 0.0)) return std::nullopt;
    switch (ff.id()) {
        case FormfactorId::Phi1: return M_PI;
        case FormfactorId::Phi2: return M_PI / 4.0;
        default: break;
    }
    return quad::compactified([&](double x) { return ff(x) / x; }, 1e-12).value;
}

double bound_state_margin(const ModelParams& p, const Formfactor& ff) {
    if (p.lambda2 == 0.0) return p.omega();
    const auto inv = inverse_moment(ff);
    if (!inv) throw DivergenceError("int phi(x)/x dx diverges for this formfactor");
    return p.omega() - p.lambda2 * *inv;
}

namespace {

// least-squares slope of log phi against log x over [lo, hi]
std::optional<double> loglog_slope(const Formfactor& ff, double lo, double hi) {
    constexpr int n = 9;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < n; ++i) {
        const double lx = std::log(lo) + (std::log(hi) - std::log(lo)) * i / (n - 1);
        const double f = ff(std::exp(lx));
        if (!(f > 0.0)) return std::nullopt;
        const double ly = std::log(f);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

std::vector<std::string> check_exponents(const Formfactor& ff) {
    std::vector<std::string> warnings;
    const auto [hl, hh] = ff.head_window();
    const auto [tl, th] = ff.tail_window();
    if (auto s = loglog_slope(ff, hl, hh); hh > hl && s && std::abs(*s - ff.head_exponent()) > 0.1)
        warnings.push_back(fmt::format("head exponent declared {} but fitted slope near 0 is {:.3f}",
                                       ff.head_exponent(), *s));
    if (auto s = loglog_slope(ff, tl, th); th > tl && s && std::abs(-*s - ff.tail_exponent()) > 0.1)
        warnings.push_back(fmt::format("tail exponent declared {} but fitted decay at infinity is {:.3f}",
                                       ff.tail_exponent(), -*s));
    return warnings;
}

}  // namespace zeno
