#include "hpdet/quadrature.hpp"

#include <cmath>

#include <Eigen/Dense>

namespace hpdet {

QuadratureGrid gauss_legendre(int n, double lo, double hi) {
    if (n < 1) throw DomainError("gauss_legendre: n >= 1 required");
    if (!(hi > lo)) throw DomainError("gauss_legendre: empty interval");
    QuadratureGrid g;
    g.lo = lo;
    g.hi = hi;
    g.nodes.resize(n);
    g.weights.resize(n);
    const double xm = 0.5 * (hi + lo), xl = 0.5 * (hi - lo);
    const int mhalf = (n + 1) / 2;
    for (int i = 0; i < mhalf; ++i) {
        // Tricomi initial guess, then Newton on P_n.
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            double dx = p0 / pp;
            x -= dx;
            if (std::fabs(dx) < 1e-15) break;
        }
        g.nodes[i] = xm - xl * x;
        g.nodes[n - 1 - i] = xm + xl * x;
        double w = 2.0 * xl / ((1.0 - x * x) * pp * pp);
        g.weights[i] = w;
        g.weights[n - 1 - i] = w;
    }
    return g;
}

QuadratureGrid gauss_jacobi_beta(int n, double beta) {
    if (n < 1) throw DomainError("gauss_jacobi_beta: n >= 1 required");
    if (!(beta > -1.0)) throw DomainError("gauss_jacobi_beta: beta > -1 required");
    // Golub-Welsch on the Jacobi (alpha=0) recurrence.
    const double alpha = 0.0;
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(n, n);
    auto diag = [&](int k) -> double {
        double s = 2.0 * k + alpha + beta;
        if (k == 0) return (beta - alpha) / (alpha + beta + 2.0);
        return (beta * beta - alpha * alpha) / (s * (s + 2.0));
    };
    auto offdiag2 = [&](int k) -> double {
        double s = 2.0 * k + alpha + beta;
        if (k == 1) {
            return 4.0 * (1.0 + alpha) * (1.0 + beta) /
                   ((2.0 + alpha + beta) * (2.0 + alpha + beta) * (3.0 + alpha + beta));
        }
        return 4.0 * k * (k + alpha) * (k + beta) * (k + alpha + beta) /
               (s * s * (s + 1.0) * (s - 1.0));
    };
    for (int k = 0; k < n; ++k) T(k, k) = diag(k);
    for (int k = 1; k < n; ++k) {
        double b = std::sqrt(offdiag2(k));
        T(k, k - 1) = T(k - 1, k) = b;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
    if (es.info() != Eigen::Success) throw EigenFailure("gauss_jacobi_beta: eigensolve failed");
    // mu0 = int_{-1}^{1} (1+x)^beta dx = 2^{beta+1}/(beta+1).
    const double mu0 = std::pow(2.0, beta + 1.0) / (beta + 1.0);
    QuadratureGrid g;
    g.lo = -1.0;
    g.hi = 1.0;
    g.nodes.resize(n);
    g.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        g.nodes[i] = es.eigenvalues()(i);
        double v = es.eigenvectors()(0, i);
        g.weights[i] = mu0 * v * v;
    }
    return g;
}

}  // namespace hpdet
