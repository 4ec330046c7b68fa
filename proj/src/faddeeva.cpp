#include "zeno/faddeeva.hpp"

#include <cmath>

namespace zeno {

using cplx = std::complex<double>;

// Algorithm of Poppe & Wijers (ACM TOMS 16, 1990), first-quadrant evaluation plus symmetries.
cplx faddeeva(cplx z) {
    constexpr double factor = 1.12837916709551257388;  // 2/sqrt(pi)
    const double xi = z.real(), yi = z.imag();
    const double xabs = std::abs(xi), yabs = std::abs(yi);
    const double x = xabs / 6.3, y = yabs / 4.4;

    double qrho = x * x + y * y;
    const double xquad0 = xabs * xabs - yabs * yabs;
    const double yquad = 2.0 * xabs * yabs;

    double u = 0.0, v = 0.0, u2 = 0.0, v2 = 0.0;
    const bool small = qrho < 0.085264;
    if (small) {
        // power series of erf around the origin
        qrho = (1.0 - 0.85 * y) * std::sqrt(qrho);
        const int n = static_cast<int>(std::lround(6.0 + 72.0 * qrho));
        int j = 2 * n + 1;
        double xsum = 1.0 / j, ysum = 0.0;
        for (int i = n; i >= 1; --i) {
            j -= 2;
            const double xaux = (xsum * xquad0 - ysum * yquad) / i;
            ysum = (xsum * yquad + ysum * xquad0) / i;
            xsum = xaux + 1.0 / j;
        }
        const double u1 = -factor * (xsum * yabs + ysum * xabs) + 1.0;
        const double v1 = factor * (xsum * xabs - ysum * yabs);
        const double daux = std::exp(-xquad0);
        u2 = daux * std::cos(yquad);
        v2 = -daux * std::sin(yquad);
        u = u1 * u2 - v1 * v2;
        v = u1 * v2 + v1 * u2;
    } else {
        double h = 0.0, h2 = 0.0, qlambda = 0.0;
        int kapn = 0, nu;
        if (qrho > 1.0) {
            qrho = std::sqrt(qrho);
            nu = static_cast<int>(3.0 + 1442.0 / (26.0 * qrho + 77.0));
        } else {
            qrho = (1.0 - y) * std::sqrt(1.0 - qrho);
            h = 1.88 * qrho;
            h2 = 2.0 * h;
            kapn = static_cast<int>(std::lround(7.0 + 34.0 * qrho));
            nu = static_cast<int>(std::lround(16.0 + 26.0 * qrho));
        }
        const bool taylor = h > 0.0;
        if (taylor) qlambda = std::pow(h2, kapn);
        double rx = 0.0, ry = 0.0, sx = 0.0, sy = 0.0;
        for (int n = nu; n >= 0; --n) {
            const double np1 = n + 1;
            double tx = yabs + h + np1 * rx;
            double ty = xabs - np1 * ry;
            const double c = 0.5 / (tx * tx + ty * ty);
            rx = c * tx;
            ry = c * ty;
            if (taylor && n <= kapn) {
                tx = qlambda + sx;
                sx = rx * tx - ry * sy;
                sy = ry * tx + rx * sy;
                qlambda /= h2;
            }
        }
        if (taylor) {
            u = factor * sx;
            v = factor * sy;
        } else {
            u = factor * rx;
            v = factor * ry;
        }
        if (yabs == 0.0) u = std::exp(-xabs * xabs);
    }

    if (yi < 0.0) {
        if (small) {
            u2 *= 2.0;
            v2 *= 2.0;
        } else {
            const double w1 = 2.0 * std::exp(-xquad0);
            u2 = w1 * std::cos(yquad);
            v2 = -w1 * std::sin(yquad);
        }
        u = u2 - u;
        v = v2 - v;
        if (xi > 0.0) v = -v;
    } else if (xi < 0.0) {
        v = -v;
    }
    return {u, v};
}

cplx erfc_complex(cplx z) {
    const cplx iz(-z.imag(), z.real());
    return std::exp(-z * z) * faddeeva(iz);
}

}  // namespace zeno
