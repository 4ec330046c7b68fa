#include <doctest.h>

#include <cmath>
#include <complex>
#include <utility>
#include <vector>

#include "zeno/faddeeva.hpp"

using cplx = std::complex<double>;

namespace {
// w(z) reference values from a 40-digit evaluation of exp(-z^2) erfc(-iz)
const std::vector<std::pair<cplx, cplx>> kReference = {
    {{0.1, 0.1}, {0.88847856247564368, 0.094331651057285106}},
    {{1.0, 1.0}, {0.30474420525691259, 0.20821893820283163}},
    {{3.0, 0.5}, {0.037126366054692345, 0.19298375530036209}},
    {{-2.0, 0.3}, {0.076395951675642117, -0.3098311071402927}},
    {{0.5, 4.0}, {0.13515598496200036, 0.01598407529348621}},
    {{5.0, 5.0}, {0.056965439888176979, 0.055838742775391028}},
    {{10.0, 0.01}, {5.7287116224900799e-5, 0.056705336054809614}},
    {{-7.0, 2.0}, {0.021853396687438291, -0.075009635935424815}},
    {{0.01, 0.02}, {0.97773087827669466, 0.010891947677851495}},
    {{2.5, 2.5}, {0.11673712504465026, 0.10790858599648141}},
    {{6.0, 0.2}, {0.0032710219332206062, 0.095282121658329109}},
    {{30.0, 30.0}, {0.009405769534934073, 0.0094005455633548719}},
    {{-50.0, 10.0}, {0.0021711486621042987, -0.010851565860444866}},
    {{0.0001, 0.0001}, {0.99988716208479475, 0.00011281791821405681}},
    {{0.3, -0.4}, {1.4505398172399685, 0.68007865863086348}},
    {{-1.2, -0.6}, {-0.19495778522141852, -0.99329962666506825}},
    {{50.0, 0.0}, {0.0, 0.011286049784700271}},
    {{0.0, 7.5}, {0.074573693062876683, 0.0}},
    {{1.5, 0.0}, {0.10539922456186434, 0.48322733014076906}},
    {{100.0, 200.0}, {0.0022567538201598535, 0.0011283543433090029}},
};
}  // namespace

TEST_CASE("faddeeva matches high-precision reference values") {
    for (const auto& [z, w] : kReference) {
        const cplx got = zeno::faddeeva(z);
        CAPTURE(z);
        CHECK(std::abs(got - w) <= 1e-13 * std::abs(w));
    }
}

TEST_CASE("faddeeva satisfies reflection and derivative identities") {
    const double sqrtpi = std::sqrt(M_PI);
    for (double x : {-8.0, -2.5, -0.7, 0.0, 0.3, 1.9, 4.4, 12.0}) {
        for (double y : {0.05, 0.4, 1.3, 3.7, 9.0}) {
            const cplx z(x, y);
            // w(z) + w(-z) = 2 exp(-z^2); checked where both sides stay moderate
            if (std::abs(z) < 4.0) {
                const cplx lhs = zeno::faddeeva(z) + zeno::faddeeva(-z);
                CHECK(std::abs(lhs - 2.0 * std::exp(-z * z)) < 1e-12 * std::abs(2.0 * std::exp(-z * z)) + 1e-14);
            }
            // w'(z) = -2 z w + 2i/sqrt(pi), compared with a central difference
            const double h = 1e-5;
            const cplx d = (zeno::faddeeva(z + h) - zeno::faddeeva(z - h)) / (2 * h);
            const cplx expect = -2.0 * z * zeno::faddeeva(z) + cplx(0, 2.0 / sqrtpi);
            CHECK(std::abs(d - expect) < 1e-8 * (1.0 + std::abs(expect)));
        }
    }
}

TEST_CASE("faddeeva on the imaginary axis is the scaled erfc") {
    for (double y : {0.01, 0.5, 2.0, 6.0, 25.0}) {
        const double ref = std::exp(y * y) * std::erfc(y);
        if (y < 20) CHECK(zeno::faddeeva({0.0, y}).real() == doctest::Approx(ref).epsilon(1e-13));
    }
    // large y: w(iy) ~ 1/(sqrt(pi) y) (1 - 1/(2y^2))
    const double y = 1e6;
    CHECK(zeno::faddeeva({0.0, y}).real() == doctest::Approx(1.0 / (std::sqrt(M_PI) * y)).epsilon(1e-12));
}

TEST_CASE("erfc through w") {
    CHECK(zeno::erfc_complex({0.5, 0.0}).real() == doctest::Approx(std::erfc(0.5)).epsilon(1e-13));
    CHECK(zeno::erfc_complex({-1.5, 0.0}).real() == doctest::Approx(std::erfc(-1.5)).epsilon(1e-13));
}
