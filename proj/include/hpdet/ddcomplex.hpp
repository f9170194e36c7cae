#pragma once

#include <cmath>
#include <complex>

namespace hpdet {

// Double-double arithmetic (Dekker/Knuth error-free transformations).
// Roughly 31 significant digits; used where a plain double series summation
// would lose the result to cancellation, e.g. Kummer series with a purely
// imaginary argument of moderate size.
struct dd {
    double hi = 0.0;
    double lo = 0.0;

    dd() = default;
    dd(double h) : hi(h), lo(0.0) {}
    dd(double h, double l) : hi(h), lo(l) {}

    explicit operator double() const { return hi + lo; }
};

namespace dd_detail {

inline dd two_sum(double a, double b) {
    double s = a + b;
    double bb = s - a;
    double err = (a - (s - bb)) + (b - bb);
    return {s, err};
}

inline dd quick_two_sum(double a, double b) {
    double s = a + b;
    return {s, b - (s - a)};
}

inline dd two_prod(double a, double b) {
    double p = a * b;
    return {p, std::fma(a, b, -p)};
}

}  // namespace dd_detail

inline dd operator+(dd a, dd b) {
    using namespace dd_detail;
    dd s = two_sum(a.hi, b.hi);
    dd t = two_sum(a.lo, b.lo);
    s.lo += t.hi;
    s = quick_two_sum(s.hi, s.lo);
    s.lo += t.lo;
    return quick_two_sum(s.hi, s.lo);
}

inline dd operator-(dd a) { return {-a.hi, -a.lo}; }
inline dd operator-(dd a, dd b) { return a + (-b); }

inline dd operator*(dd a, dd b) {
    using namespace dd_detail;
    dd p = two_prod(a.hi, b.hi);
    p.lo += a.hi * b.lo + a.lo * b.hi;
    return quick_two_sum(p.hi, p.lo);
}

inline dd operator/(dd a, dd b) {
    using namespace dd_detail;
    double q1 = a.hi / b.hi;
    dd r = a - b * dd(q1);
    double q2 = r.hi / b.hi;
    r = r - b * dd(q2);
    double q3 = r.hi / b.hi;
    dd q = quick_two_sum(q1, q2);
    return q + dd(q3);
}

inline double to_double(dd a) { return a.hi + a.lo; }
inline double fabs_hi(dd a) { return std::fabs(a.hi); }

// Complex double-double.
struct cdd {
    dd re, im;

    cdd() = default;
    cdd(dd r, dd i) : re(r), im(i) {}
    cdd(double r, double i = 0.0) : re(r), im(i) {}
    cdd(std::complex<double> z) : re(z.real()), im(z.imag()) {}

    std::complex<double> to_complex() const { return {to_double(re), to_double(im)}; }
};

inline cdd operator+(cdd a, cdd b) { return {a.re + b.re, a.im + b.im}; }
inline cdd operator-(cdd a, cdd b) { return {a.re - b.re, a.im - b.im}; }
inline cdd operator+(cdd a, double b) { return {a.re + dd(b), a.im}; }

inline cdd operator*(cdd a, cdd b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

inline cdd operator/(cdd a, cdd b) {
    dd den = b.re * b.re + b.im * b.im;
    dd re = (a.re * b.re + a.im * b.im) / den;
    dd im = (a.im * b.re - a.re * b.im) / den;
    return {re, im};
}

inline double abs_estimate(cdd a) {
    return std::hypot(to_double(a.re), to_double(a.im));
}

}  // namespace hpdet
