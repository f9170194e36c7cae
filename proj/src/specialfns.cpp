#include "hpdet/specialfns.hpp"

#include <cmath>
#include <limits>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_sf_bessel.h>

#include "hpdet/ddcomplex.hpp"

namespace hpdet {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

bool near_nonpositive_integer(cplx z, double tol) {
    if (std::abs(z.imag()) > tol) return false;
    double r = std::round(z.real());
    return r <= 0.0 && std::abs(z.real() - r) <= tol;
}

// Lanczos g=7 coefficients.
constexpr int kLanczosG = 7;
constexpr double kLanczosP[kLanczosG + 2] = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

// Valid for Re z >= 0.5.
cplx lanczos_log_gamma(cplx z) {
    cplx zm = z - 1.0;
    cplx x = kLanczosP[0];
    for (int i = 1; i < kLanczosG + 2; ++i) x += kLanczosP[i] / (zm + double(i));
    cplx t = zm + (kLanczosG + 0.5);
    return 0.5 * std::log(2.0 * kPi) + (zm + 0.5) * std::log(t) - t + std::log(x);
}

// 2F0-style asymptotic tail: sum (p)_k (q)_k / k! * w^k, truncated at the
// smallest term (the series is divergent; the smallest term bounds the
// remainder).
cplx poincare_tail(cplx p, cplx q, cplx w) {
    cplx term = 1.0, sum = 1.0;
    double prev = 1.0;
    for (int k = 0; k < 200; ++k) {
        term *= (p + double(k)) * (q + double(k)) / double(k + 1) * w;
        double mag = std::abs(term);
        if (k > 1 && mag > prev) break;
        sum += term;
        prev = mag;
        if (mag < 1e-18 * std::abs(sum)) break;
    }
    return sum;
}

cplx hyp1f1_taylor_dd(cplx a, cplx c, cplx z) {
    cdd term(1.0), sum(1.0);
    const cdd zdd(z);
    const cdd add(a), cdd_c(c);
    for (int n = 0; n < 10000; ++n) {
        // The shifted factors a+n, c+n must be formed in dd as well: their
        // double roundings would be amplified by the e^|z| cancellation.
        cdd an = add + double(n);
        cdd cn = cdd_c + double(n);
        double cn_mag = abs_estimate(cn);
        if (cn_mag < 1e-14 * (1.0 + std::abs(c))) {
            throw PolePassed("hyp1f1: denominator parameter pole passed in series");
        }
        term = term * an * zdd / (cn * cdd(double(n + 1)));
        sum = sum + term;
        double ratio = abs_estimate(an) * std::abs(z) / (cn_mag * double(n + 1));
        if (ratio < 0.5 && 2.0 * abs_estimate(term) < 1e-15 * abs_estimate(sum)) {
            return sum.to_complex();
        }
    }
    throw NoConvergence("hyp1f1: 10000-term cap exceeded");
}

cplx hyp1f1_asymptotic(cplx a, cplx c, cplx z) {
    // DLMF 13.7.1/13.7.2 rearranged; sigma picks the branch consistent with
    // the principal phase of z.
    double sigma = (z.imag() >= 0.0) ? 1.0 : -1.0;
    cplx logz = std::log(z);
    cplx gc = log_gamma(c);
    cplx t1 = reciprocal_gamma(c - a) * std::exp(gc + sigma * cplx(0.0, kPi) * a - a * logz) *
              poincare_tail(a, a - c + 1.0, -1.0 / z);
    cplx t2 = reciprocal_gamma(a) * std::exp(gc + z + (a - c) * logz) *
              poincare_tail(c - a, 1.0 - a, 1.0 / z);
    return t1 + t2;
}

}  // namespace

cplx hyp2f1_terminating(int m, cplx b, cplx c, cplx z) {
    if (m < 0) throw DomainError("hyp2f1_terminating: m must be nonnegative");
    for (int k = 0; k < m; ++k) {
        cplx ck = c + double(k);
        if (std::abs(ck) <= 1e-14) {
            throw PolePassed("hyp2f1_terminating: denominator parameter hits a pole");
        }
    }
    cplx term = 1.0, sum = 1.0;
    for (int n = 0; n < m; ++n) {
        term *= (double(-m + n) * (b + double(n))) / ((c + double(n)) * double(n + 1)) * z;
        sum += term;
    }
    return sum;
}

cplx hyp1f1(cplx a, cplx c, cplx z) {
    if (near_nonpositive_integer(c, 1e-12)) {
        throw PolePassed("hyp1f1: c is a nonpositive integer");
    }
    if (z == cplx(0.0)) return 1.0;
    if (a == cplx(0.0)) return 1.0;
    if (z.real() < 0.0) {
        return std::exp(z) * hyp1f1(c - a, c, -z);
    }
    if (std::abs(z) <= 34.0) return hyp1f1_taylor_dd(a, c, z);
    return hyp1f1_asymptotic(a, c, z);
}

cplx log_gamma(cplx z) {
    if (near_nonpositive_integer(z, 1e-12)) {
        throw PolePassed("log_gamma: nonpositive integer argument");
    }
    if (z.imag() < 0.0) return std::conj(log_gamma(std::conj(z)));
    if (z.real() >= 0.5) return lanczos_log_gamma(z);
    // Downward recurrence log Gamma(z) = log Gamma(z+n) - sum log(z+k); the
    // identity holds with principal logs on the cut plane. Negative-real
    // arguments take the Im -> 0+ limit.
    int n = int(std::ceil(0.5 - z.real()));
    cplx acc = 0.0;
    for (int k = 0; k < n; ++k) {
        cplx w = z + double(k);
        if (w.imag() == 0.0 && w.real() < 0.0) {
            acc += cplx(std::log(-w.real()), kPi);
        } else {
            acc += std::log(w);
        }
    }
    return lanczos_log_gamma(z + double(n)) - acc;
}

cplx reciprocal_gamma(cplx z) {
    if (near_nonpositive_integer(z, 1e-12)) return 0.0;
    return std::exp(-log_gamma(z));
}

double bessel_j(double nu, double x) {
    if (!(x > 0.0)) throw DomainError("bessel_j: requires x > 0");
    if (std::abs(nu) > 50.0) throw DomainError("bessel_j: |nu| <= 50 supported");
    static gsl_error_handler_t* old_handler [[maybe_unused]] = gsl_set_error_handler_off();
    gsl_sf_result res;
    if (nu >= 0.0) {
        if (gsl_sf_bessel_Jnu_e(nu, x, &res) != GSL_SUCCESS) {
            throw Error("bessel_j: GSL evaluation failed");
        }
        return res.val;
    }
    double mu = -nu;
    double mu_round = std::round(mu);
    if (std::abs(mu - mu_round) < 1e-12) {
        int mi = int(mu_round);
        if (gsl_sf_bessel_Jnu_e(mu_round, x, &res) != GSL_SUCCESS) {
            throw Error("bessel_j: GSL evaluation failed");
        }
        return (mi % 2 == 0) ? res.val : -res.val;
    }
    gsl_sf_result ry;
    if (gsl_sf_bessel_Jnu_e(mu, x, &res) != GSL_SUCCESS ||
        gsl_sf_bessel_Ynu_e(mu, x, &ry) != GSL_SUCCESS) {
        throw Error("bessel_j: GSL evaluation failed");
    }
    return std::cos(mu * kPi) * res.val - std::sin(mu * kPi) * ry.val;
}

}  // namespace hpdet
