#pragma once

#include <complex>

namespace zeno {

// Faddeeva function w(z) = exp(-z^2) erfc(-iz), valid in the whole complex plane.
// Series near the origin, continued fraction (Laplace) far from it and a hybrid Taylor/continued
// fraction in between; about 14 correct digits in the upper half plane. In the lower half plane
// the reflection w(z) = 2 exp(-z^2) - w(-z) is used and may overflow for large |z|.
std::complex<double> faddeeva(std::complex<double> z);

// erfc(z) expressed through w; only safe where exp(-z^2) does not overflow.
std::complex<double> erfc_complex(std::complex<double> z);

}  // namespace zeno
