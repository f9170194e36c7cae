#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <vector>

#include "hpdet/errors.hpp"

namespace hpdet {

// One-sample Kolmogorov-Smirnov statistic against a CDF.
inline double ks_statistic(std::vector<double> data, const std::function<double(double)>& cdf) {
    if (data.empty()) throw DomainError("ks_statistic: empty sample");
    std::sort(data.begin(), data.end());
    const double n = double(data.size());
    double d = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        double f = cdf(data[i]);
        d = std::max(d, std::abs(f - double(i) / n));
        d = std::max(d, std::abs(double(i + 1) / n - f));
    }
    return d;
}

// Asymptotic critical value c(alpha)/sqrt(n), c(alpha) = sqrt(ln(2/alpha)/2).
inline double ks_critical(std::size_t n, double alpha) {
    return std::sqrt(std::log(2.0 / alpha) / 2.0) / std::sqrt(double(n));
}

// Two-sample Kolmogorov-Smirnov statistic.
inline double ks_statistic_2s(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw DomainError("ks_statistic_2s: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double d = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] <= b[j]) ++i; else ++j;
        d = std::max(d, std::abs(double(i) / a.size() - double(j) / b.size()));
    }
    return d;
}

inline double ks2_critical(std::size_t n, std::size_t m, double alpha) {
    return std::sqrt(std::log(2.0 / alpha) / 2.0) *
           std::sqrt((double(n) + double(m)) / (double(n) * double(m)));
}

// Chi-squared statistic of data mapped through its hypothesized CDF into K
// equiprobable bins. Degrees of freedom: K - 1.
inline double chi2_equiprob(std::span<const double> data,
                            const std::function<double(double)>& cdf, int bins) {
    if (bins < 2) throw DomainError("chi2_equiprob: bins >= 2");
    std::vector<double> counts(bins, 0.0);
    for (double x : data) {
        double u = cdf(x);
        int b = std::min(bins - 1, std::max(0, int(u * bins)));
        counts[b] += 1.0;
    }
    double expect = double(data.size()) / bins;
    double stat = 0.0;
    for (double c : counts) stat += (c - expect) * (c - expect) / expect;
    return stat;
}

// Upper quantile of chi-squared with k dof via the Wilson-Hilferty cube
// approximation (adequate for test thresholds at the percent level).
inline double chi2_quantile(int k, double p) {
    // inverse normal by Acklam rational approximation
    auto inv_norm = [](double q) {
        static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                   -2.759285104469687e+02, 1.383577518672690e+02,
                                   -3.066479806614716e+01, 2.506628277459239e+00};
        static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                   -1.556989798598866e+02, 6.680131188771972e+01,
                                   -1.328068155288572e+01};
        static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                   -2.400758277161838e+00, -2.549732539343734e+00,
                                   4.374664141464968e+00,  2.938163982698783e+00};
        static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                   2.445134137142996e+00, 3.754408661907416e+00};
        const double plow = 0.02425, phigh = 1 - plow;
        double x;
        if (q < plow) {
            double u = std::sqrt(-2 * std::log(q));
            x = (((((c[0] * u + c[1]) * u + c[2]) * u + c[3]) * u + c[4]) * u + c[5]) /
                ((((d[0] * u + d[1]) * u + d[2]) * u + d[3]) * u + 1);
        } else if (q <= phigh) {
            double u = q - 0.5, r = u * u;
            x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * u /
                (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1);
        } else {
            double u = std::sqrt(-2 * std::log(1 - q));
            x = -(((((c[0] * u + c[1]) * u + c[2]) * u + c[3]) * u + c[4]) * u + c[5]) /
                ((((d[0] * u + d[1]) * u + d[2]) * u + d[3]) * u + 1);
        }
        return x;
    };
    double z = inv_norm(p);
    double t = 1.0 - 2.0 / (9.0 * k) + z * std::sqrt(2.0 / (9.0 * k));
    return k * t * t * t;
}

}  // namespace hpdet
