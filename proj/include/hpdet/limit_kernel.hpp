#pragma once

#include <complex>

#include "hpdet/errors.hpp"
#include "hpdet/point_config.hpp"
#include "hpdet/quadrature.hpp"

namespace hpdet {

using cplx = std::complex<double>;

struct LimitKernelParams {
    cplx s;

    explicit LimitKernelParams(cplx s_) : s(s_) {
        if (!(s.real() > -0.5)) throw DomainError("LimitKernelParams: Re s must exceed -1/2");
    }
};

// The integrable-form functions of the scaling-limit kernel. P and Q are
// real-valued; P~ (the regularization valid on all of Re s > -1/2) is real
// only up to an additive imaginary multiple of Q, which cancels in the
// kernel antisymmetrization, so it is returned as a complex value.
//
// Domain: |x| >= 0.01 (keeps the confluent-series argument |2/x| <= 200
// inside the certified range). fn_P additionally requires Re s != 0 or
// s = 0 exactly (closed form cos(1/x)); on the rest of the line Re s = 0
// only the P~ route exists.
double fn_P(double x, const LimitKernelParams& p);
double fn_Q(double x, const LimitKernelParams& p);
cplx fn_P_tilde(double x, const LimitKernelParams& p);

// Bessel-function route for real s (agrees with the confluent route):
//   P(x) = 2^(2s-1/2) Gamma(s+1/2) |x|^(-1/2) J_{s-1/2}(1/|x|)
//   Q(x) = sgn(x) 2^(2s+3/2) Gamma(s+3/2) |x|^(-1/2) J_{s+1/2}(1/|x|)
double fn_P_bessel(double x, double s);
double fn_Q_bessel(double x, double s);

// Scaling-limit kernel K^(s,inf)(x1, x2) on R* x R*, real symmetric; uses
// the P~/Q form (regular for every Re s > -1/2) and the confluent derivative
// form when |x1-x2| < 1e-8 (1+|x1|).
double kernel_inf(double x1, double x2, const LimitKernelParams& p);

// Whittaker M function via its 1F1 representation,
// M_{kappa,mu}(t) = e^{-t/2} t^{mu+1/2} 1F1[mu-kappa+1/2; 1+2mu; t].
// For t on the cut (-infinity, 0] the Im -> 0+ limit is taken.
cplx whittaker_M(cplx kappa, cplx mu, cplx t);

// x -> y = -1/(pi x) on configurations (an involution on R*).
PointConfiguration to_sine_coordinates(const PointConfiguration& config);

// The kernel transported to y = -1/(pi x) coordinates with the Jacobian
// factors and the sign gauge sgn(y1 y2) folded in:
//   K_y(y1, y2) = K(x(y1), x(y2)) / (pi y1 y2).
// Conjugating a kernel by a unimodular function leaves every correlation
// determinant unchanged; with the gauge included this equals
// sin(pi(y1-y2))/(pi(y1-y2)) exactly at s = 0.
double sine_kernel_from_limit(double y1, double y2, const LimitKernelParams& p);

struct FredholmResult {
    double value;
    double error_estimate;  // |value - half-order value|
};

// Nystrom approximation of det(I - K|_(lo,hi)) on a Gauss-Legendre grid of
// the given order (<= 400). The interval must avoid zero with
// min(|lo|,|hi|) >= 0.01. Returns 1 for an empty interval; throws
// NonPositive if the determinant is not in (0, 1].
FredholmResult fredholm_det(const LimitKernelParams& p, double lo, double hi, int order);

// log det(I - K|_(1/t, infinity)). Computed exactly on a finite grid by the
// inversion u = 1/x, which maps the tail to (0, t) and turns the kernel into
// (2u)^{Re s} (2v)^{Re s} A(u, v) with A entire; the algebraic endpoint
// factor is absorbed into a Gauss-Jacobi weight, so the Nystrom rule keeps
// spectral accuracy. order <= 400.
double log_det_tail(const LimitKernelParams& p, double t, int order);

// Relative residual of the sigma-Painleve V equation
//   -(t s'')^2 = (2(t s' - s) + (s')^2 + i(sbar-s) s')^2
//                - (s')^2 (s' - 2is)(s' + 2i sbar)
// along sigma(t) = t d/dt log det(I - K|_(1/t, inf)), with sigma and its
// derivatives from central differences (two-level Richardson) at step h
// (default 1e-3 t). Requires t in [0.5, 5].
double painleve_residual(double t, const LimitKernelParams& p, double h = 0.0);

// |(sgn x1 sgn x2)^N * N * K^(s,N)(N x1, N x2) - K^(s,inf)(x1, x2)| for
// |x1|, |x2| in [0.05, 20], N <= 500.
double kernel_convergence_gap(double x1, double x2, const LimitKernelParams& p, int n);

// The same gap transported to sine coordinates (multiplied by the Jacobian
// factor pi |x1 x2|), which makes it uniformly comparable across the grid:
// the transported kernels are O(1) there.
double kernel_convergence_gap_sine_gauge(double x1, double x2, const LimitKernelParams& p, int n);

}  // namespace hpdet
