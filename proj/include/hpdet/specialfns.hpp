#pragma once

#include <complex>

#include "hpdet/errors.hpp"

namespace hpdet {

using cplx = std::complex<double>;

// Terminating Gauss series 2F1[-m, b; c; z]: the exact finite sum of m+1
// terms. Throws PolePassed if any of c, c+1, ..., c+m-1 vanishes (tolerance
// 1e-14).
cplx hyp2f1_terminating(int m, cplx b, cplx c, cplx z);

// Kummer confluent hypergeometric 1F1[a; c; z].
//
// Regimes: Kummer transform 1F1[a;c;z] = e^z 1F1[c-a;c;-z] first when
// Re z < 0, then a double-double Taylor sum for |z| <= 34 and the large-|z|
// Poincare expansion beyond. The split point keeps the worst-case
// cancellation (~e^|z| for imaginary z) within double-double headroom while
// the asymptotic tail is already at machine precision there.
// Throws PolePassed (c near a nonpositive integer, tolerance 1e-12) and
// NoConvergence (10000-term cap).
cplx hyp1f1(cplx a, cplx c, cplx z);

// Principal branch of log Gamma (continuation from the positive reals).
// Lanczos g=7 for Re z >= 0.5, downward recurrence otherwise; relative
// accuracy ~1e-14 for |z| <= 200. Throws PolePassed near nonpositive
// integers (tolerance 1e-12).
cplx log_gamma(cplx z);

// 1/Gamma(z); zero at the poles.
cplx reciprocal_gamma(cplx z);

// Bessel function of the first kind, real order. Requires x > 0 and
// |nu| <= 50. Backed by GSL, with the reflection formula for nu < 0.
double bessel_j(double nu, double x);

}  // namespace hpdet
