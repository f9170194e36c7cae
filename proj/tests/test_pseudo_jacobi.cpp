#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include <Eigen/Dense>

#include "hpdet/pseudo_jacobi.hpp"
#include "hpdet/quadrature.hpp"
#include "hpdet/rng.hpp"
#include "oracles.hpp"

using namespace hpdet;

namespace {

// Direct evaluation of p_m through its monomial coefficients (independent of
// the library's hypergeometric route).
double eval_by_coefficients(int m, double x, const EnsembleParams& p) {
    auto c = oracles::poly_coefficients(m, p);
    cplx acc = 0.0;
    for (int t = m; t >= 0; --t) acc = acc * x + c[t];
    return acc.real();
}

}  // namespace

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(EnsembleParams({-0.6, 0.0}, 5), DomainError);
    CHECK_THROWS_AS(EnsembleParams({0.0, 0.0}, 0), DomainError);
    CHECK_THROWS_AS(EnsembleParams({0.0, 0.0}, 501), DomainError);
}

TEST_CASE("weight function") {
    EnsembleParams p0({0.0, 0.0}, 2);
    CHECK(weight_phi(0.0, p0) == 1.0);
    CHECK(weight_phi(1.0, p0) == doctest::Approx(0.25).epsilon(1e-15));
    // log-domain recomputation in extended precision
    EnsembleParams p1({1.0, 1.0}, 3);
    long double lw = -4.0L * std::log(1.0L + 4.0L) + 2.0L * std::atan(2.0L);
    CHECK(weight_phi(2.0, p1) == doctest::Approx(double(std::exp(lw))).epsilon(1e-14));
    // underflow routes to the log variant
    EnsembleParams pbig({0.3, 0.0}, 400);
    CHECK_THROWS_AS(weight_phi(1e4, pbig), Underflow);
    CHECK(std::isfinite(log_weight_phi(1e4, pbig)));
}

TEST_CASE("closed forms at s = 0 (degrees N and N-1)") {
    EnsembleParams p({0.0, 0.0}, 2);
    CHECK(poly_p(2, 2.0, p).value == doctest::Approx(3.0).epsilon(1e-14));  // x^2 - 1
    CHECK(poly_p(1, 2.0, p).value == doctest::Approx(2.0).epsilon(1e-14));  // x
    CHECK(poly_p(0, 1.7, p).value == 1.0);
    // closed forms against an independent complex-arithmetic recomputation
    for (int n = 2; n <= 8; ++n) {
        EnsembleParams pn({0.0, 0.0}, n);
        for (int g = 0; g < 20; ++g) {
            double x = -3.0 + 6.0 * g / 19.0;
            cplx xp = std::pow(cplx(x, 1.0), n), xm = std::pow(cplx(x, -1.0), n);
            double want_n = (0.5 * (xp + xm)).real();
            double want_n1 = ((xp - xm) / cplx(0.0, 2.0 * n)).real();
            CHECK(poly_p(n, x, pn).value ==
                  doctest::Approx(want_n).epsilon(1e-12).scale(1.0 + std::abs(want_n)));
            CHECK(poly_p(n - 1, x, pn).value ==
                  doctest::Approx(want_n1).epsilon(1e-12).scale(1.0 + std::abs(want_n1)));
        }
    }
}

TEST_CASE("generic path approaches the s -> 0 closed forms") {
    // the limit is linear in s: at s = 1e-7 the generic hypergeometric path
    // must sit within ~1e-5 of the closed form
    for (int n = 2; n <= 5; ++n) {
        EnsembleParams p0({0.0, 0.0}, n);
        EnsembleParams ps({1e-7, 0.0}, n);
        for (double x : {0.4, 1.3, -2.2}) {
            double want = poly_p(n, x, p0).value;
            CHECK(poly_p(n, x, ps).value ==
                  doctest::Approx(want).epsilon(1e-5).scale(1.0 + std::abs(want)));
        }
    }
}

TEST_CASE("poly_p against the coefficient oracle") {
    SeededRng rng(21);
    EnsembleParams pex({0.2, 0.3}, 3);
    CHECK(poly_p(3, 1.5, pex).value ==
          doctest::Approx(eval_by_coefficients(3, 1.5, pex)).epsilon(1e-12));
    for (int rep = 0; rep < 100; ++rep) {
        cplx s{rng.uniform() * 2.0 - 0.45, rng.uniform() * 4 - 2};
        int n = 1 + int(rng.uniform() * 8);
        int m = int(rng.uniform() * n);
        double x = rng.uniform() * 8 - 4;
        EnsembleParams p(s, n);
        double want = eval_by_coefficients(m, x, p);
        CHECK(poly_p(m, x, p).value ==
              doctest::Approx(want).epsilon(1e-10).scale(1.0 + std::abs(want)));
    }
}

TEST_CASE("poly_p derivative matches a central difference") {
    EnsembleParams p({0.7, -0.4}, 5);
    for (double x : {0.3, 1.2, -2.6}) {
        double h = 1e-6 * (1.0 + std::abs(x));
        double want = (poly_p(4, x + h, p).value - poly_p(4, x - h, p).value) / (2 * h);
        CHECK(poly_p(4, x, p).derivative ==
              doctest::Approx(want).epsilon(1e-7).scale(1.0 + std::abs(want)));
    }
}

TEST_CASE("existence condition and poles") {
    EnsembleParams p({0.2, 0.0}, 4);
    CHECK(poly_exists(3, p));
    CHECK_FALSE(poly_exists(4, p));  // m < Re s + N - 1/2 fails
    // the m = N series itself is still evaluable for Re s != 0
    CHECK_NOTHROW(poly_p(4, 0.7, p));
    // on the line Re s = 0 the degree-N series hits its denominator pole
    EnsembleParams pline({0.0, 0.8}, 4);
    CHECK_THROWS_AS(poly_p(4, 0.7, pline), PolePassed);
    CHECK_NOTHROW(poly_p_tilde(0.7, pline));
}

TEST_CASE("reflection symmetry") {
    SeededRng rng(17);
    for (int rep = 0; rep < 60; ++rep) {
        cplx s{rng.uniform() * 2.0 - 0.45, rng.uniform() * 4 - 2};
        int n = 1 + int(rng.uniform() * 7);
        int m = int(rng.uniform() * n);
        double x = rng.uniform() * 6 - 3;
        EnsembleParams p(s, n);
        EnsembleParams pbar(std::conj(s), n);
        double lhs = poly_p(m, -x, p).value;
        double rhs = ((m % 2) ? -1.0 : 1.0) * poly_p(m, x, pbar).value;
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12).scale(1.0 + std::abs(rhs)));
    }
}

TEST_CASE("regularized degree-N polynomial") {
    // equality with the p_N - (2iNs / (2Re s(2Re s+1))) p_{N-1} combination
    // (complex identity, valid where p_N exists)
    SeededRng rng(19);
    for (int rep = 0; rep < 40; ++rep) {
        cplx s{0.51 + rng.uniform() * 2.0, rng.uniform() * 4 - 2};
        int n = 1 + int(rng.uniform() * 7);
        double x = rng.uniform() * 6 - 3;
        EnsembleParams p(s, n);
        auto pt = poly_p_tilde(x, p);
        cplx coef = 2.0 * cplx(0.0, 1.0) * double(n) * s /
                    (2.0 * s.real() * (2.0 * s.real() + 1.0));
        cplx combo = cplx(poly_p(n, x, p).value, 0.0) - coef * poly_p(n - 1, x, p).value;
        CHECK(std::abs(pt.value - combo) <= 1e-10 * (std::abs(combo) + 1.0));
    }
    // monic normalization: value / x^N -> 1 for large x
    EnsembleParams p({0.2, 0.3}, 3);
    auto pt = poly_p_tilde(1e6, p);
    CHECK(std::abs(pt.value / 1e18 - 1.0) < 1e-5);
    // high-precision series oracle at a spot point (same hypergeometric shape
    // with b = s, c = 2 Re s + 1, summed in double-double)
    {
        cdd sum(1.0), term(1.0);
        cplx z = 2.0 / cplx(1.0, 1.5);
        cplx b{0.2, 0.3};
        double c = 2.0 * 0.2 + 1.0;
        for (int k = 0; k < 3; ++k) {
            term = term * (cdd(b) + double(k)) * cdd(z) * cdd(double(-3 + k)) /
                   ((cdd(cplx(c, 0.0)) + double(k)) * cdd(double(k + 1)));
            sum = sum + term;
        }
        cplx want = std::pow(cplx(1.5, -1.0), 3) * sum.to_complex();
        auto got = poly_p_tilde(1.5, EnsembleParams({0.2, 0.3}, 3));
        CHECK(std::abs(got.value - want) < 1e-12 * std::abs(want));
    }
    // at s = 0 the regularization collapses to (x - i)^N
    auto pt0 = poly_p_tilde(0.8, EnsembleParams({0.0, 0.0}, 4));
    CHECK(std::abs(pt0.value - std::pow(cplx(0.8, -1.0), 4)) < 1e-13);
}

TEST_CASE("norm_sq") {
    // int (1+x^2)^{-2} dx = pi/2
    EnsembleParams p0({0.0, 0.0}, 2);
    CHECK(norm_sq(0, p0) == doctest::Approx(M_PI / 2).epsilon(1e-14));
    CHECK_THROWS_AS(norm_sq(2, p0), NotDefined);
    // quadrature oracle
    {
        EnsembleParams p({0.7, 0.0}, 4);
        double want = oracles::weighted_product_integral(2, 2, p, norm_sq(2, p));
        CHECK(norm_sq(2, p) == doctest::Approx(want).epsilon(1e-8));
    }
    {
        EnsembleParams p({1.0, 2.0}, 5);
        double got = norm_sq(3, p);
        CHECK(got > 0.0);
        double want = oracles::weighted_product_integral(3, 3, p, got);
        CHECK(got == doctest::Approx(want).epsilon(1e-8));
    }
}

TEST_CASE("orthogonality spot checks") {
    for (cplx s : {cplx{0.5, 0.0}, cplx{1.0, 0.7}}) {
        EnsembleParams p(s, 5);
        double scale = std::sqrt(norm_sq(1, p)) * std::sqrt(norm_sq(3, p));
        double val = oracles::weighted_product_integral(1, 3, p, scale);
        CHECK(std::abs(val) < 1e-8 * scale);
    }
}

TEST_CASE("kernel: symmetry, diagonal, and the direct-sum oracle") {
    EnsembleParams p({1.0, 0.0}, 4);
    CHECK(cd_kernel(0.5, -0.3, p) == cd_kernel(-0.3, 0.5, p));  // exact swap
    // direct Christoffel-Darboux sum over degrees < N
    auto direct = [&](double x, double y) {
        double acc = 0.0;
        for (int m = 0; m < 4; ++m) {
            acc += poly_p(m, x, p).value * poly_p(m, y, p).value / norm_sq(m, p);
        }
        return acc * std::sqrt(weight_phi(x, p) * weight_phi(y, p));
    };
    for (auto [x, y] : {std::pair{0.5, -0.3}, {1.2, 0.9}, {-2.0, 0.1}}) {
        CHECK(cd_kernel(x, y, p) == doctest::Approx(direct(x, y)).epsilon(1e-9));
    }
    // confluent branch consistency across the switch
    double near = cd_kernel(0.5, 0.5 + 2e-8, p);
    double far = cd_kernel(0.5, 0.5 + 2e-7, p);
    CHECK(near == doctest::Approx(far).epsilon(1e-4));
    // diagonal at s = 0 is (N/pi)/(1+x^2)
    EnsembleParams p0({0.0, 0.0}, 10);
    for (double x : {0.0, 0.7, 3.0, -11.0}) {
        CHECK(cd_kernel(x, x, p0) ==
              doctest::Approx(10.0 / M_PI / (1.0 + x * x)).epsilon(1e-12));
    }
    // large-N, large-argument evaluation stays finite (log-scale internals)
    EnsembleParams pbig({0.3, 0.2}, 500);
    CHECK(std::isfinite(cd_kernel(500.0 * 20.0, 500.0 * 19.0, pbig)));
}

TEST_CASE("two kernel routes agree away from the line Re s = 0") {
    SeededRng rng(29);
    for (int rep = 0; rep < 30; ++rep) {
        double sre = 0.05 + rng.uniform() * 1.5;
        if (rng.uniform() < 0.5) sre = -std::min(0.45, sre);
        if (std::abs(sre) <= 0.01) continue;
        cplx s{sre, rng.uniform() * 2 - 1};
        int n = 2 + int(rng.uniform() * 6);
        EnsembleParams p(s, n);
        double x = rng.uniform() * 4 - 2, y = rng.uniform() * 4 - 2;
        if (std::abs(x - y) < 1e-3) continue;
        // route via p_N (the analytic continuation off the line Re s = 0)
        double pref = std::exp(detail::log_kernel_prefactor(p));
        double num = poly_p(n, x, p).value * poly_p(n - 1, y, p).value -
                     poly_p(n - 1, x, p).value * poly_p(n, y, p).value;
        double direct = pref * num / (x - y) *
                        std::sqrt(weight_phi(x, p) * weight_phi(y, p));
        double viatilde = cd_kernel(x, y, p);
        CHECK(viatilde == doctest::Approx(direct).epsilon(1e-9).scale(1.0 + std::abs(direct)));
    }
}

TEST_CASE("correlation functions") {
    EnsembleParams p({0.0, 0.0}, 6);
    // 1x1 determinant is the kernel diagonal
    std::vector<double> one{0.4};
    CHECK(correlation_fn(one, p) == doctest::Approx(cd_kernel(0.4, 0.4, p)));
    // repeated point kills the determinant
    std::vector<double> rep2{0.4, 0.4};
    CHECK(correlation_fn(rep2, p) <= 1e-10);
    // kernel Gram matrices are positive semidefinite
    SeededRng rng(31);
    for (int repn = 0; repn < 25; ++repn) {
        int n = 2 + int(rng.uniform() * 5);
        std::vector<double> pts(n);
        for (auto& x : pts) x = rng.uniform() * 6 - 3;
        Eigen::MatrixXd g(n, n);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) g(i, j) = cd_kernel(pts[i], pts[j], p);
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g, Eigen::EigenvaluesOnly);
        CHECK(es.eigenvalues()(0) >= -1e-9);
        CHECK(correlation_fn(pts, p) >= 0.0);
    }
    std::vector<double> nine(9, 0.1);
    CHECK_THROWS_AS(correlation_fn(nine, p), DomainError);
}

TEST_CASE("scaled correlation against the closed-form density at s = 0") {
    // N rho_1(N x) = (1/pi) N^2 / (1 + N^2 x^2)
    for (int n : {5, 20, 100}) {
        EnsembleParams p({0.0, 0.0}, n);
        for (double x : {0.25, 1.0, -4.0}) {
            std::vector<double> pt{x};
            double want = (1.0 / M_PI) * n * n / (1.0 + double(n) * n * x * x);
            CHECK(scaled_correlation(pt, p) == doctest::Approx(want).epsilon(1e-10));
        }
    }
    EnsembleParams p({0.0, 0.0}, 20);
    std::vector<double> pair{0.3, 0.3};
    CHECK(scaled_correlation(pair, p) <= 1e-6);
    std::vector<double> zero{0.0};
    CHECK_THROWS_AS(scaled_correlation(zero, p), DomainError);
}

TEST_CASE("differential equation residual") {
    EnsembleParams p2({0.0, 0.0}, 2);
    CHECK(ode_residual(0, 0.7, p2) == 0.0);
    CHECK(ode_residual(2, 1.0, p2) <= 1e-12);
    SeededRng rng(37);
    for (int rep = 0; rep < 80; ++rep) {
        cplx s{rng.uniform() * 2.0 - 0.45, rng.uniform() * 4 - 2};
        int n = 1 + int(rng.uniform() * 8);
        int m = int(rng.uniform() * (n + 1));
        if (m == n && std::abs(s.real()) < 1e-9) continue;
        double x = rng.uniform() * 8 - 4;
        EnsembleParams p(s, n);
        CHECK(ode_residual(m, x, p) <= 1e-8);
    }
}

TEST_CASE("trace of the scaled density over a fixed window is bounded in N") {
    // int_A N rho_1(N x) dx over A = [0.5, 2] stays within a fixed band
    auto g = gauss_legendre(40, 0.5, 2.0);
    for (int n : {10, 25, 50, 100, 200}) {
        EnsembleParams p({0.0, 0.0}, n);
        double acc = 0.0;
        for (std::size_t i = 0; i < g.nodes.size(); ++i) {
            std::vector<double> pt{g.nodes[i]};
            acc += g.weights[i] * scaled_correlation(pt, p);
        }
        CHECK(acc > 0.05);
        CHECK(acc < 1.0);
    }
}

TEST_CASE("regularized polynomial derivative matches a central difference") {
    EnsembleParams p({0.3, -0.8}, 5);
    for (double x : {0.4, -1.7}) {
        double h = 1e-6 * (1.0 + std::abs(x));
        cplx want = (poly_p_tilde(x + h, p).value - poly_p_tilde(x - h, p).value) / (2 * h);
        CHECK(std::abs(poly_p_tilde(x, p).derivative - want) <
              1e-7 * (1.0 + std::abs(want)));
    }
}
