#pragma once

// Thin adaptive-quadrature layer over Boost.Math: breakpoint sums, semi-infinite ranges
// and principal values. Integrands may return double or std::complex<double>.

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <type_traits>
#include <vector>

namespace zeno::quad {

template <class T>
struct Estimate {
    T value{};
    double error = 0.0;
};

inline constexpr double kDefaultTol = 1e-13;
inline constexpr int kMaxSegments = 4000;

namespace detail {

// One 31-point Kronrod panel on [a, b] (Boost node and weight tables) with |K - G| as the
// error and the integral of |f| for the rounding floor.
template <class F>
auto kronrod_panel(F& f, double a, double b, double* err, double* l1) {
    using Rule = boost::math::quadrature::gauss_kronrod<double, 31>;
    using Gauss = boost::math::quadrature::gauss<double, 15>;
    using T = std::decay_t<decltype(f(a))>;
    const auto& x = Rule::abscissa();
    const auto& wk = Rule::weights();
    const auto& wg = Gauss::weights();
    const double m = 0.5 * (a + b), h = 0.5 * (b - a);
    // 15-point Gauss: odd-order rule with the centre among its nodes
    T fc = f(m);
    T k = fc * wk[0], g = fc * wg[0];
    double L = std::abs(fc) * wk[0];
    for (std::size_t i = 1; i < x.size(); ++i) {
        const T fp = f(m + h * x[i]), fm = f(m - h * x[i]);
        k += (fp + fm) * wk[i];
        L += (std::abs(fp) + std::abs(fm)) * wk[i];
        if (i % 2 == 0) g += (fp + fm) * wg[i / 2];
    }
    *err = std::abs(k - g) * h;
    *l1 = L * h;
    return T(k * h);
}

}  // namespace detail

// Globally adaptive Gauss-Kronrod (31 points): the panel with the largest error is bisected
// until the total error is below tol |I| or reaches the rounding floor of int |f|.
// The returned error is absolute. Boost's own driver is not used because its recursion
// compares unscaled panel errors against scaled tolerances and degenerates into full
// bisection to the maximum depth once the tolerance nears machine precision.
template <class F>
auto gk(F&& f, double a, double b, double tol = kDefaultTol) {
    using T = std::decay_t<decltype(f(a))>;
    Estimate<T> r;
    if (a == b) return r;
    struct Seg {
        double a, b, err, l1;
        T val;
        bool operator<(const Seg& o) const { return err < o.err; }
    };
    std::vector<Seg> heap;
    Seg s0{a, b, 0, 0, T{}};
    s0.val = detail::kronrod_panel(f, a, b, &s0.err, &s0.l1);
    heap.push_back(s0);
    T total = s0.val;
    double err = s0.err, l1 = s0.l1;
    constexpr double eps = std::numeric_limits<double>::epsilon();
    while (static_cast<int>(heap.size()) < kMaxSegments) {
        if (err <= tol * std::abs(total) || err <= 50.0 * eps * l1) break;
        std::pop_heap(heap.begin(), heap.end());
        const Seg top = heap.back();
        const double mid = 0.5 * (top.a + top.b);
        if (!(mid > top.a && mid < top.b)) {
            heap.back().err = 0.0;  // cannot be split further; keep its value, drop it from the queue order
            std::push_heap(heap.begin(), heap.end());
            err -= top.err;
            r.error += top.err;
            continue;
        }
        heap.pop_back();
        Seg lo{top.a, mid, 0, 0, T{}}, hi{mid, top.b, 0, 0, T{}};
        lo.val = detail::kronrod_panel(f, lo.a, lo.b, &lo.err, &lo.l1);
        hi.val = detail::kronrod_panel(f, hi.a, hi.b, &hi.err, &hi.l1);
        total += lo.val + hi.val - top.val;
        err += lo.err + hi.err - top.err;
        l1 += lo.l1 + hi.l1 - top.l1;
        heap.push_back(lo);
        std::push_heap(heap.begin(), heap.end());
        heap.push_back(hi);
        std::push_heap(heap.begin(), heap.end());
    }
    // re-sum to shed the drift of the running totals
    r.value = T{};
    double e = 0.0, L = 0.0;
    for (const auto& sg : heap) {
        r.value += sg.val;
        e += sg.err;
        L += sg.l1;
    }
    r.error += std::max(e, 50.0 * eps * L);
    return r;
}

// Sum of adaptive integrals over consecutive breakpoints.
template <class F>
auto gk_breaks(F&& f, const std::vector<double>& breaks, double tol = kDefaultTol) {
    using T = std::decay_t<decltype(f(breaks.front()))>;
    Estimate<T> r;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        auto piece = gk(f, breaks[i], breaks[i + 1], tol);
        r.value += piece.value;
        r.error += piece.error;
    }
    return r;
}

// Octave breakpoints a, 2a, 4a, ... until the last one reaches at least b.
inline std::vector<double> octaves(double a, double b) {
    std::vector<double> br{a};
    while (br.back() < b) br.push_back(std::min(2.0 * br.back(), b));
    return br;
}

// int_a^inf f(x) dx, a > 0: octave panels up to max(8a, 8) then x = c/(1-u) on the rest.
template <class F>
auto gk_to_infinity(F&& f, double a, double tol = kDefaultTol) {
    const double c = std::max(8.0 * a, 8.0);
    auto r = gk_breaks(f, octaves(a, c), tol);
    using T = decltype(r.value);
    auto mapped = [&](double u) -> T {
        const double w = 1.0 - u;
        const double x = c / w;
        if (!std::isfinite(x) || x > 1e150) return T{};
        return f(x) * (c / (w * w));
    };
    auto tail = gk(mapped, 0.0, 1.0, tol);
    r.value += tail.value;
    r.error += tail.error;
    return r;
}

// int_0^inf g(x) dx through x = u/(1-u) with double-exponential quadrature, which copes with
// integrable power singularities at both ends of (0,1).
template <class G>
Estimate<double> compactified(G&& g, double tol = 1e-12) {
    boost::math::quadrature::tanh_sinh<double> ts;
    auto h = [&](double u, double uc) -> double {
        const double w = uc > 0.0 ? uc : 1.0 - u;  // 1-u without cancellation near u=1
        const double x = u / w;
        if (!std::isfinite(x) || x > 1e100 || x <= 0.0) return 0.0;
        const double v = g(x) * (1.0 + x) * (1.0 + x);
        return std::isfinite(v) ? v : 0.0;
    };
    Estimate<double> r;
    double L1 = 0.0;
    std::size_t levels = 0;
    r.value = ts.integrate(h, 0.0, 1.0, tol, &r.error, &L1, &levels);
    return r;
}

// Principal value P int_0^inf f(x)/(x-y) dx for real f, y > 0, by folding the symmetric
// neighbourhood: int_0^y [f(y+u)-f(y-u)]/u du + int_{2y}^inf f(x)/(x-y) dx.
template <class F>
Estimate<double> principal_value(F&& f, double y, double tol = kDefaultTol) {
    auto folded = [&](double u) -> double {
        if (u <= 0.0) return 0.0;
        const double lo = y - u;
        const double flo = lo > 0.0 ? f(lo) : 0.0;
        return (f(y + u) - flo) / u;
    };
    // refine toward u = y where f(y-u) meets the x -> 0 behaviour
    std::vector<double> br{0.0, 0.5 * y};
    for (double g = 0.25; g > 1e-6; g *= 0.25) br.push_back(y * (1.0 - g));
    br.push_back(y);
    auto r = gk_breaks(folded, br, tol);
    auto tail = gk_to_infinity([&](double x) { return f(x) / (x - y); }, 2.0 * y, tol);
    r.value += tail.value;
    r.error += tail.error;
    return r;
}

}  // namespace zeno::quad
