#pragma once

#include <complex>
#include <span>

#include "hpdet/errors.hpp"

namespace hpdet {

using cplx = std::complex<double>;

// Parameters of the N-particle pseudo-Jacobi ensemble with weight
// phi(x) = (1+ix)^(-s-N) (1-ix)^(-sbar-N). Requires Re s > -1/2 and
// 1 <= N <= 500 (all (x-i)^N-type products are evaluated in log-magnitude +
// phase form; the cap keeps the exponents within double range).
struct EnsembleParams {
    cplx s;
    int n;

    EnsembleParams(cplx s_, int n_) : s(s_), n(n_) {
        if (!(s.real() > -0.5)) throw DomainError("EnsembleParams: Re s must exceed -1/2");
        if (n < 1 || n > 500) throw DomainError("EnsembleParams: N in [1, 500] required");
    }
};

struct PolyEval {
    double value;
    double derivative;
};

// The regularized degree-N polynomial is real only up to an additive
// imaginary multiple of p_{N-1} (the multiple drops out of every kernel
// antisymmetrization), so it is exposed with complex fields.
struct CPolyEval {
    cplx value;
    cplx derivative;
};

// Weight phi(x) = (1+x^2)^(-Re s - N) * exp(2 Im s * atan x), strictly
// positive. weight_phi throws Underflow when the value is not representable;
// log_weight_phi never does.
double weight_phi(double x, const EnsembleParams& p);
double log_weight_phi(double x, const EnsembleParams& p);

// Monic pseudo-Jacobi polynomial p_m, m <= N, and its derivative. The
// coefficients are real; an imaginary residue above 1e-9 relative raises
// ImaginaryLeak. At s = 0 the degrees N and N-1 use the closed
// ((x+i)^N +/- (x-i)^N) forms. Exists as an orthogonal polynomial only for
// m < Re s + N - 1/2; evaluation is the analytic continuation beyond that
// and throws PolePassed only when a series denominator is hit
// (m = N with Re s = 0).
PolyEval poly_p(int m, double x, const EnsembleParams& p);

// True iff the L^2(phi) existence condition m < Re s + N - 1/2 holds.
bool poly_exists(int m, const EnsembleParams& p);

// Degree-N regularization p~_N = p_N - (2iNs / (2Re s (2Re s + 1))) p_{N-1},
// evaluated by its hypergeometric form, which is regular on all of
// Re s > -1/2 (including the line Re s = 0 where p_N itself degenerates).
CPolyEval poly_p_tilde(double x, const EnsembleParams& p);

// Squared norm of p_m in L^2(phi) via its Gamma-factor product. Throws
// NotDefined when the existence condition fails.
double norm_sq(int m, const EnsembleParams& p);

// Christoffel-Darboux correlation kernel K^(s,N)(x1, x2), including the
// sqrt(phi(x1) phi(x2)) factor. Symmetric; switches to the confluent
// (derivative) form when |x1-x2| < 1e-8 (1+|x1|).
double cd_kernel(double x1, double x2, const EnsembleParams& p);

// n-point correlation function det[K(x_i, x_j)], n <= 8. Clamps tiny
// negative determinants to zero; a determinant below the negative tolerance
// (scaled by the kernel magnitude) raises NegativeDeterminant.
double correlation_fn(std::span<const double> points, const EnsembleParams& p);

// Scaled correlation N^n rho_n(N x_1, ..., N x_n); points in R^*.
double scaled_correlation(std::span<const double> points, const EnsembleParams& p);

// Residual of the hypergeometric-type ODE satisfied by p_m:
//   -(1+x^2) p'' + 2(-Im s + (Re s + N - 1) x) p' + m(m+1-2Re s-2N) p.
// Returns the residual relative to the scale of the three terms.
double ode_residual(int m, double x, const EnsembleParams& p);

namespace detail {

// p_m(x) sqrt(phi(x)) (or the p~_N variant) with value and x-derivative held
// as unit-scaled complex numbers times exp(log_scale); products of two such
// factors stay within double range for any N <= 500. value_abs and
// derivative_abs carry the absolute-sum magnitudes of the underlying series
// (the conditioning scale for rounding-residue checks).
struct WeightedPoly {
    cplx value;
    cplx derivative;
    double value_abs;
    double derivative_abs;
    double log_scale;
};

WeightedPoly weighted_poly(int m, double x, const EnsembleParams& p);
WeightedPoly weighted_poly_tilde(double x, const EnsembleParams& p);

// log of the Gamma-factor prefactor of the correlation kernel (equals
// 1/||p_{N-1}||^2).
double log_kernel_prefactor(const EnsembleParams& p);

}  // namespace detail

}  // namespace hpdet
