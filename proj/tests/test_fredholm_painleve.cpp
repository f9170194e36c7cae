#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hpdet/limit_kernel.hpp"
#include "hpdet/quadrature.hpp"

using namespace hpdet;

namespace {

// Truncated Fredholm expansion det(I - K) ~ 1 - S1 + S2 - S3 on a short
// interval, with the next coefficient certified by the Hadamard bound
// |c_n| <= n^{n/2} (sup|K| |J|)^n / n!.
double fredholm_series_oracle(const LimitKernelParams& p, double lo, double hi,
                              double* remainder_bound) {
    auto g1 = gauss_legendre(24, lo, hi);
    double s1 = 0.0;
    for (std::size_t i = 0; i < g1.nodes.size(); ++i) {
        s1 += g1.weights[i] * kernel_inf(g1.nodes[i], g1.nodes[i], p);
    }
    auto k = [&](double x, double y) { return kernel_inf(x, y, p); };
    double s2 = 0.0;
    for (std::size_t i = 0; i < g1.nodes.size(); ++i) {
        for (std::size_t j = 0; j < g1.nodes.size(); ++j) {
            double kxx = k(g1.nodes[i], g1.nodes[i]);
            double kyy = k(g1.nodes[j], g1.nodes[j]);
            double kxy = k(g1.nodes[i], g1.nodes[j]);
            s2 += g1.weights[i] * g1.weights[j] * (kxx * kyy - kxy * kxy);
        }
    }
    s2 /= 2.0;
    auto g3 = gauss_legendre(14, lo, hi);
    double s3 = 0.0;
    for (std::size_t i = 0; i < g3.nodes.size(); ++i) {
        for (std::size_t j = 0; j < g3.nodes.size(); ++j) {
            for (std::size_t l = 0; l < g3.nodes.size(); ++l) {
                double a = k(g3.nodes[i], g3.nodes[i]), b = k(g3.nodes[i], g3.nodes[j]),
                       c = k(g3.nodes[i], g3.nodes[l]);
                double d = k(g3.nodes[j], g3.nodes[i]), e = k(g3.nodes[j], g3.nodes[j]),
                       f = k(g3.nodes[j], g3.nodes[l]);
                double gg = k(g3.nodes[l], g3.nodes[i]), h = k(g3.nodes[l], g3.nodes[j]),
                       ii = k(g3.nodes[l], g3.nodes[l]);
                double det3 = a * (e * ii - f * h) - b * (d * ii - f * gg) + c * (d * h - e * gg);
                s3 += g3.weights[i] * g3.weights[j] * g3.weights[l] * det3;
            }
        }
    }
    s3 /= 6.0;
    // sup |K| over the box (kernel is continuous; sample on the grid)
    double sup = 0.0;
    for (std::size_t i = 0; i < g1.nodes.size(); ++i) {
        for (std::size_t j = 0; j < g1.nodes.size(); ++j) {
            sup = std::max(sup, std::abs(k(g1.nodes[i], g1.nodes[j])));
        }
    }
    double q = 1.1 * sup * (hi - lo);  // 10% headroom over the sampled sup
    *remainder_bound = 16.0 * q * q * q * q / 24.0;
    return 1.0 - s1 + s2 - s3;
}

double sigma_of_t(const LimitKernelParams& p, double t, int order) {
    double h = 1e-4 * t;
    double f1 = log_det_tail(p, t + h, order);
    double f2 = log_det_tail(p, t - h, order);
    return t * (f1 - f2) / (2.0 * h);
}

}  // namespace

TEST_CASE("fredholm determinant basics") {
    LimitKernelParams p(cplx{0.0, 0.0});
    CHECK(fredholm_det(p, 0.7, 0.7, 50).value == 1.0);  // empty interval
    auto d = fredholm_det(p, 0.5, 1.5, 80);
    CHECK(d.value > 0.0);
    CHECK(d.value <= 1.0);
    // decreasing in interval length (nested intervals)
    auto d1 = fredholm_det(p, 0.5, 1.0, 80);
    auto d2 = fredholm_det(p, 0.5, 1.3, 80);
    CHECK(d2.value < d1.value);
    CHECK(d.value < d2.value);
    CHECK_THROWS_AS(fredholm_det(p, -0.5, 0.5, 40), DomainError);
    CHECK_THROWS_AS(fredholm_det(p, 0.001, 0.5, 40), DomainError);
    CHECK_THROWS_AS(fredholm_det(p, 0.5, 1.0, 500), DomainError);
}

TEST_CASE("fredholm determinant against the truncated series") {
    for (cplx s : {cplx{0.0, 0.0}, cplx{0.6, 0.4}}) {
        LimitKernelParams p(s);
        double rem = 0.0;
        double want = fredholm_series_oracle(p, 1.0, 1.025, &rem);
        REQUIRE(rem < 1e-8);  // certified truncation
        auto got = fredholm_det(p, 1.0, 1.025, 60);
        CHECK(std::abs(got.value - want) < 1e-8);
    }
}

TEST_CASE("fredholm self-convergence under order doubling") {
    for (cplx s : {cplx{0.0, 0.0}, cplx{0.5, 0.0}, cplx{0.9, 0.7}}) {
        LimitKernelParams p(s);
        auto a = fredholm_det(p, 0.4, 2.0, 100);
        auto b = fredholm_det(p, 0.4, 2.0, 200);
        CHECK(std::abs(a.value - b.value) < 1e-10);
        CHECK(std::abs(a.value - b.value) <= a.error_estimate + 1e-12);
    }
}

TEST_CASE("tail determinant: inversion route agrees with a wide direct grid") {
    // det(I - K|_(1/t, inf)) computed on the inverted interval (0, t) vs a
    // direct Gauss-Legendre box (1/t, X) with a crude truncation; the direct
    // route carries O(1/X) truncation error, so the match is loose.
    LimitKernelParams p(cplx{0.0, 0.0});
    double t = 1.2;
    double f_inv = log_det_tail(p, t, 120);
    auto direct = fredholm_det(p, 1.0 / t, 400.0, 400);
    CHECK(std::abs(std::exp(f_inv) - direct.value) < 5e-3);
    // self-convergence of the inverted rule is at machine precision
    CHECK(std::abs(log_det_tail(p, t, 60) - log_det_tail(p, t, 120)) < 1e-12);
    LimitKernelParams ph(cplx{0.5, 0.0});
    CHECK(std::abs(log_det_tail(ph, t, 60) - log_det_tail(ph, t, 120)) < 1e-12);
    LimitKernelParams pc(cplx{0.3, 0.4});
    CHECK(std::abs(log_det_tail(pc, t, 60) - log_det_tail(pc, t, 120)) < 1e-12);
}

TEST_CASE("sigma closed form at s = 1/2") {
    // sigma(t) = -t^2/4 solves the sigma equation at s = 1/2 and is what the
    // determinant produces
    LimitKernelParams p(cplx{0.5, 0.0});
    for (double t : {0.8, 1.0, 2.0}) {
        CHECK(sigma_of_t(p, t, 120) == doctest::Approx(-t * t / 4.0).epsilon(1e-6));
    }
}

TEST_CASE("sigma-Painleve V residual") {
    LimitKernelParams p0(cplx{0.0, 0.0});
    CHECK(painleve_residual(1.0, p0) <= 1e-3);
    CHECK(painleve_residual(0.8, p0) <= 1e-3);
    LimitKernelParams ph(cplx{0.5, 0.0});
    CHECK(painleve_residual(2.0, ph) <= 1e-3);
    // complex parameter: the i(sbar - s) terms must cancel to a real identity
    LimitKernelParams pc(cplx{0.3, 0.4});
    CHECK(painleve_residual(1.0, pc) <= 1e-3);
    CHECK_THROWS_AS(painleve_residual(0.1, p0), DomainError);
}

TEST_CASE("quadrature grids") {
    // Gauss-Legendre: nodes strictly increasing inside the interval, weights
    // summing to its length, exactness through degree 2n-1
    auto g = gauss_legendre(12, -0.3, 1.7);
    double wsum = 0.0;
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        wsum += g.weights[i];
        CHECK(g.nodes[i] > -0.3);
        CHECK(g.nodes[i] < 1.7);
        if (i > 0) CHECK(g.nodes[i] > g.nodes[i - 1]);
    }
    CHECK(wsum == doctest::Approx(2.0).epsilon(1e-13));
    for (int k : {1, 5, 17, 23}) {
        double got = 0.0;
        for (std::size_t i = 0; i < g.nodes.size(); ++i) {
            got += g.weights[i] * std::pow(g.nodes[i], k);
        }
        double want = (std::pow(1.7, k + 1) - std::pow(-0.3, k + 1)) / (k + 1);
        CHECK(got == doctest::Approx(want).epsilon(1e-12));
    }
    // Gauss-Jacobi for weight (1+x)^beta: first moments against closed forms
    for (double beta : {-0.9, -0.4, 0.0, 1.3}) {
        auto gj = gauss_jacobi_beta(10, beta);
        double m0 = 0, m1 = 0, m2 = 0;
        for (std::size_t i = 0; i < gj.nodes.size(); ++i) {
            m0 += gj.weights[i];
            m1 += gj.weights[i] * gj.nodes[i];
            m2 += gj.weights[i] * gj.nodes[i] * gj.nodes[i];
        }
        double p2 = std::pow(2.0, beta + 1.0);
        CHECK(m0 == doctest::Approx(p2 / (beta + 1)).epsilon(1e-12));
        CHECK(m1 == doctest::Approx(p2 * (2.0 / (beta + 2) - 1.0 / (beta + 1))).epsilon(1e-11));
        CHECK(m2 == doctest::Approx(p2 * (4.0 / (beta + 3) - 4.0 / (beta + 2) +
                                          1.0 / (beta + 1)))
                        .epsilon(1e-11));
    }
}

TEST_CASE("tail determinant with a negative-power endpoint weight") {
    // Re s < 0 makes the inverted kernel singular at u = 0 like u^{2 Re s};
    // the Jacobi weight absorbs it and keeps the rule spectral
    LimitKernelParams p(cplx{-0.2, 0.5});
    CHECK(std::abs(log_det_tail(p, 1.3, 80) - log_det_tail(p, 1.3, 160)) < 1e-12);
    LimitKernelParams p2(cplx{-0.45, 0.0});
    CHECK(std::abs(log_det_tail(p2, 1.0, 80) - log_det_tail(p2, 1.0, 160)) < 1e-12);
    CHECK(painleve_residual(1.0, p2) < 1e-3);
}
