#include "hpdet/pseudo_jacobi.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "hpdet/specialfns.hpp"

namespace hpdet {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;
constexpr cplx kI{0.0, 1.0};

bool is_zero_param(cplx s) { return s.real() == 0.0 && s.imag() == 0.0; }

// Terminating 2F1 with first two z-derivatives, summed in one pass.
// f_abs and fz_abs track the absolute-value sums of the series; rounding
// residues are judged against them rather than against the (possibly
// cancelled) sums themselves.
struct HypEval {
    cplx f{0.0}, fz{0.0}, fzz{0.0};
    double f_abs = 0.0, fz_abs = 0.0;
};

HypEval hyp2f1_d2(int m, cplx b, cplx c, cplx z) {
    for (int k = 0; k < m; ++k) {
        if (std::abs(c + double(k)) <= 1e-14) {
            throw PolePassed("pseudo_jacobi: hypergeometric denominator pole");
        }
    }
    HypEval h;
    cplx coef = 1.0;  // A_n = (-m)_n (b)_n / ((c)_n n!)
    cplx zp = 1.0;    // z^n
    for (int n = 0; n <= m; ++n) {
        cplx an_zn = coef * zp;
        h.f += an_zn;
        h.f_abs += std::abs(an_zn);
        if (n >= 1) {
            h.fz += double(n) * coef * zp / z;
            h.fz_abs += double(n) * std::abs(an_zn) / std::abs(z);
        }
        if (n >= 2) h.fzz += double(n) * double(n - 1) * coef * zp / (z * z);
        coef *= (double(-m + n) * (b + double(n))) / ((c + double(n)) * double(n + 1));
        zp *= z;
    }
    return h;
}

// z(x) = 2/(1+ix) and its x-derivatives.
struct ZChain {
    cplx z, dz, d2z;
};

ZChain z_chain(double x) {
    cplx u = 1.0 + kI * x;
    cplx u2 = u * u;
    return {2.0 / u, -2.0 * kI / u2, -4.0 / (u2 * u)};
}

struct BareEval {
    cplx p, dp, d2p;
    double p_scale = 0.0, dp_scale = 0.0;  // absolute-sum magnitudes for residue checks
};

// p_m and derivatives by direct complex evaluation; fine at desk scale, the
// kernel path uses the log-scaled variant instead.
BareEval bare_poly(int m, cplx b, cplx c, double x) {
    ZChain zc = z_chain(x);
    HypEval h = hyp2f1_d2(m, b, c, zc.z);
    cplx xm = x - kI;
    cplx pw2 = (m >= 2) ? std::pow(xm, m - 2) : 0.0;
    cplx pw1 = (m >= 1) ? ((m >= 2) ? pw2 * xm : std::pow(xm, m - 1)) : 0.0;
    cplx pw0 = (m >= 1) ? pw1 * xm : 1.0;
    BareEval e;
    e.p = pw0 * h.f;
    e.dp = double(m) * pw1 * h.f + pw0 * h.fz * zc.dz;
    e.d2p = double(m) * double(m - 1) * pw2 * h.f + 2.0 * double(m) * pw1 * h.fz * zc.dz +
            pw0 * (h.fzz * zc.dz * zc.dz + h.fz * zc.d2z);
    e.p_scale = std::abs(pw0) * h.f_abs;
    e.dp_scale = double(m) * std::abs(pw1) * h.f_abs + std::abs(pw0) * h.fz_abs * std::abs(zc.dz);
    return e;
}

// arg(x+i) = k theta evaluated without losing the tiny angle next to pi:
// for x < 0 the reduced angle theta' = atan2(1, |x|) is used with
// sin(k(pi - t')) = (-1)^{k+1} sin(k t'), cos(k(pi - t')) = (-1)^k cos(k t').
double sin_k_theta(int k, double x) {
    double tp = std::atan2(1.0, std::abs(x));
    if (x >= 0.0) return std::sin(k * tp);
    return ((k % 2 == 0) ? -1.0 : 1.0) * std::sin(k * tp);
}

double cos_k_theta(int k, double x) {
    double tp = std::atan2(1.0, std::abs(x));
    if (x >= 0.0) return std::cos(k * tp);
    return ((k % 2 == 0) ? 1.0 : -1.0) * std::cos(k * tp);
}

// s = 0 closed forms for degrees N and N-1 (limit along the real axis):
// p_N = ((x+i)^N + (x-i)^N)/2,  p_{N-1} = ((x+i)^N - (x-i)^N)/(2iN).
BareEval bare_poly_s0(int m, int N, double x) {
    double R = std::hypot(x, 1.0);
    auto rc = [&](int k) { return std::pow(R, k) * cos_k_theta(k, x); };
    auto rs = [&](int k) { return std::pow(R, k) * sin_k_theta(k, x); };
    BareEval e;
    if (m == N) {
        e.p = rc(N);
        e.dp = N * rc(N - 1);
        e.d2p = double(N) * (N - 1) * rc(N - 2);
    } else {
        e.p = rs(N) / N;
        e.dp = rs(N - 1);
        e.d2p = double(N - 1) * rs(N - 2);
    }
    return e;
}

detail::WeightedPoly weighted_generic(int m, cplx b, cplx c, double x, const EnsembleParams& p) {
    ZChain zc = z_chain(x);
    HypEval h = hyp2f1_d2(m, b, c, zc.z);
    double sr = p.s.real(), si = p.s.imag();
    double L = std::log1p(x * x);
    detail::WeightedPoly w;
    w.log_scale = 0.5 * (double(m) - sr - p.n) * L + si * std::atan(x);
    double phase = m * std::atan2(-1.0, x);
    cplx rot{std::cos(phase), std::sin(phase)};
    // d/dx log sqrt(phi)
    double wp = (-(sr + p.n) * x + si) / (1.0 + x * x);
    cplx xm = x - kI;
    w.value = rot * h.f;
    w.derivative = rot * (double(m) / xm * h.f + h.fz * zc.dz + wp * h.f);
    double xm_abs = std::abs(xm);
    w.value_abs = h.f_abs;
    w.derivative_abs =
        double(m) / xm_abs * h.f_abs + h.fz_abs * std::abs(zc.dz) + std::abs(wp) * h.f_abs;
    double mag = std::max({std::abs(w.value), std::abs(w.derivative), w.value_abs,
                           w.derivative_abs});
    if (mag > 0.0 && (mag > 1e12 || mag < 1e-12)) {
        w.value /= mag;
        w.derivative /= mag;
        w.value_abs /= mag;
        w.derivative_abs /= mag;
        w.log_scale += std::log(mag);
    }
    return w;
}

detail::WeightedPoly weighted_s0(int m, double x, const EnsembleParams& p) {
    // Degrees N and N-1 at s = 0; weighted values are O(1) by construction.
    int N = p.n;
    double R2 = 1.0 + x * x;
    double R = std::sqrt(R2);
    detail::WeightedPoly w;
    w.log_scale = 0.0;
    if (m == N) {
        w.value = cos_k_theta(N, x);
        w.derivative = (N / R) * cos_k_theta(N - 1, x) - (N * x / R2) * cos_k_theta(N, x);
    } else {
        w.value = sin_k_theta(N, x) / N;
        w.derivative = sin_k_theta(N - 1, x) / R - (x / R2) * sin_k_theta(N, x);
    }
    w.value_abs = std::abs(w.value) + 1.0 / N;
    w.derivative_abs = std::abs(w.derivative) + (N / R + N * std::abs(x) / R2) / N;
    return w;
}

double residue_checked_real(cplx v, double scale, const char* what) {
    if (std::abs(v.imag()) > 1e-9 * (scale + 1e-300)) {
        throw ImaginaryLeak(std::string(what) + ": imaginary residue above tolerance");
    }
    return v.real();
}

}  // namespace

double log_weight_phi(double x, const EnsembleParams& p) {
    return -(p.s.real() + p.n) * std::log1p(x * x) + 2.0 * p.s.imag() * std::atan(x);
}

double weight_phi(double x, const EnsembleParams& p) {
    double lw = log_weight_phi(x, p);
    if (lw < -744.0 || lw > 709.0) {
        throw Underflow("weight_phi: value outside representable range; use log_weight_phi");
    }
    return std::exp(lw);
}

bool poly_exists(int m, const EnsembleParams& p) {
    return double(m) < p.s.real() + p.n - 0.5;
}

PolyEval poly_p(int m, double x, const EnsembleParams& p) {
    if (m < 0 || m > p.n) throw DomainError("poly_p: degree must satisfy 0 <= m <= N");
    BareEval e;
    if (is_zero_param(p.s) && (m == p.n || m == p.n - 1)) {
        e = bare_poly_s0(m, p.n, x);
        e.p_scale = std::abs(e.p);
        e.dp_scale = std::abs(e.dp);
    } else {
        e = bare_poly(m, p.s + double(p.n) - double(m), 2.0 * p.s.real() + 2.0 * (p.n - m), x);
    }
    double val = residue_checked_real(e.p, e.p_scale, "poly_p");
    double dval = residue_checked_real(e.dp, e.dp_scale, "poly_p derivative");
    if (!std::isfinite(val) || !std::isfinite(dval)) {
        throw Underflow("poly_p: value outside double range at this x");
    }
    return {val, dval};
}

CPolyEval poly_p_tilde(double x, const EnsembleParams& p) {
    BareEval e = bare_poly(p.n, p.s, 2.0 * p.s.real() + 1.0, x);
    if (!std::isfinite(e.p.real()) || !std::isfinite(e.p.imag())) {
        throw Underflow("poly_p_tilde: value outside double range at this x");
    }
    return {e.p, e.dp};
}

double norm_sq(int m, const EnsembleParams& p) {
    if (m < 0) throw DomainError("norm_sq: nonnegative degree required");
    if (!poly_exists(m, p)) {
        throw NotDefined("norm_sq: polynomial does not exist for this degree");
    }
    double sr = p.s.real();
    int nm = p.n - m;
    double lg = log_gamma(cplx(2.0 * sr + 2.0 * nm - 1.0)).real() +
                log_gamma(cplx(2.0 * sr + 2.0 * nm)).real() + std::lgamma(double(m + 1)) -
                2.0 * log_gamma(p.s + double(nm)).real() -
                log_gamma(cplx(2.0 * sr + 2.0 * p.n - m)).real();
    double l2 = (-2.0 * sr - 2.0 * (nm - 1)) * std::log(2.0);
    return kPi * std::exp(l2 + lg);
}

namespace detail {

WeightedPoly weighted_poly(int m, double x, const EnsembleParams& p) {
    if (m < 0 || m > p.n) throw DomainError("weighted_poly: 0 <= m <= N required");
    if (is_zero_param(p.s) && (m == p.n || m == p.n - 1)) return weighted_s0(m, x, p);
    return weighted_generic(m, p.s + double(p.n) - double(m), 2.0 * p.s.real() + 2.0 * (p.n - m),
                            x, p);
}

WeightedPoly weighted_poly_tilde(double x, const EnsembleParams& p) {
    return weighted_generic(p.n, p.s, 2.0 * p.s.real() + 1.0, x, p);
}

double log_kernel_prefactor(const EnsembleParams& p) {
    double sr = p.s.real();
    return 2.0 * sr * std::log(2.0) - std::log(kPi) +
           log_gamma(cplx(2.0 * sr + p.n + 1.0)).real() + 2.0 * log_gamma(p.s + 1.0).real() -
           std::lgamma(double(p.n)) - log_gamma(cplx(2.0 * sr + 1.0)).real() -
           log_gamma(cplx(2.0 * sr + 2.0)).real();
}

}  // namespace detail

double cd_kernel(double x1, double x2, const EnsembleParams& p) {
    const double lpref = detail::log_kernel_prefactor(p);
    if (std::abs(x1 - x2) < 1e-8 * (1.0 + std::abs(x1))) {
        double xm = 0.5 * (x1 + x2);
        auto pt = detail::weighted_poly_tilde(xm, p);
        auto pn = detail::weighted_poly(p.n - 1, xm, p);
        cplx w = pt.derivative * pn.value - pn.derivative * pt.value;
        double scale = pt.derivative_abs * pn.value_abs + pn.derivative_abs * pt.value_abs;
        double v = residue_checked_real(w, scale, "cd_kernel diagonal");
        return v * std::exp(lpref + pt.log_scale + pn.log_scale);
    }
    auto pt1 = detail::weighted_poly_tilde(x1, p);
    auto pn1 = detail::weighted_poly(p.n - 1, x1, p);
    auto pt2 = detail::weighted_poly_tilde(x2, p);
    auto pn2 = detail::weighted_poly(p.n - 1, x2, p);
    double A = pt1.log_scale + pn2.log_scale;
    double B = pn1.log_scale + pt2.log_scale;
    double C = std::max(A, B);
    cplx wa = pt1.value * pn2.value;
    cplx wb = pn1.value * pt2.value;
    cplx bracket = std::exp(A - C) * wa - std::exp(B - C) * wb;
    double scale = std::exp(A - C) * pt1.value_abs * pn2.value_abs +
                   std::exp(B - C) * pn1.value_abs * pt2.value_abs;
    double v = residue_checked_real(bracket, scale, "cd_kernel");
    return v / (x1 - x2) * std::exp(lpref + C);
}

double correlation_fn(std::span<const double> points, const EnsembleParams& p) {
    const int n = int(points.size());
    if (n < 1 || n > 8) throw DomainError("correlation_fn: 1 <= n <= 8 points");
    Eigen::MatrixXd G(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            G(i, j) = G(j, i) = cd_kernel(points[i], points[j], p);
        }
    }
    if (n == 1) return G(0, 0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw EigenFailure("correlation_fn: eigensolve failed");
    double det = 1.0;
    for (int i = 0; i < n; ++i) det *= es.eigenvalues()(i);
    double scale = 1.0;
    for (int i = 0; i < n; ++i) scale *= std::max(1.0, std::abs(G(i, i)));
    if (det < -1e-10 * scale) {
        throw NegativeDeterminant("correlation_fn: determinant below negative tolerance");
    }
    return std::max(det, 0.0);
}

double scaled_correlation(std::span<const double> points, const EnsembleParams& p) {
    const int n = int(points.size());
    if (n < 1 || n > 8) throw DomainError("scaled_correlation: 1 <= n <= 8 points");
    std::vector<double> scaled(points.begin(), points.end());
    for (auto& x : scaled) {
        if (x == 0.0) throw DomainError("scaled_correlation: points must be nonzero");
        x *= p.n;
    }
    return std::pow(double(p.n), n) * correlation_fn(scaled, p);
}

double ode_residual(int m, double x, const EnsembleParams& p) {
    if (m < 0 || m > p.n) throw DomainError("ode_residual: 0 <= m <= N required");
    BareEval e;
    if (is_zero_param(p.s) && (m == p.n || m == p.n - 1)) {
        e = bare_poly_s0(m, p.n, x);
    } else {
        e = bare_poly(m, p.s + double(p.n) - double(m), 2.0 * p.s.real() + 2.0 * (p.n - m), x);
    }
    double sr = p.s.real(), si = p.s.imag();
    cplx t1 = -(1.0 + x * x) * e.d2p;
    cplx t2 = 2.0 * (-si + (sr + p.n - 1.0) * x) * e.dp;
    cplx t3 = double(m) * (m + 1.0 - 2.0 * sr - 2.0 * p.n) * e.p;
    double scale = std::abs(t1) + std::abs(t2) + std::abs(t3);
    if (scale == 0.0) return 0.0;
    return std::abs(t1 + t2 + t3) / scale;
}

}  // namespace hpdet
