#include "hpdet/limit_kernel.hpp"

#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "hpdet/pseudo_jacobi.hpp"
#include "hpdet/specialfns.hpp"

namespace hpdet {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;
constexpr cplx kI{0.0, 1.0};

bool is_zero_param(cplx s) { return s.real() == 0.0 && s.imag() == 0.0; }

double sgn(double x) { return (x > 0.0) - (x < 0.0); }

// log of the Gamma-factor constant of the limit kernel.
double log_prefactor(cplx s) {
    double sr = s.real();
    return -std::log(2.0 * kPi) + 2.0 * log_gamma(s + 1.0).real() -
           log_gamma(cplx(2.0 * sr + 1.0)).real() - log_gamma(cplx(2.0 * sr + 2.0)).real();
}

// Core functions of w (= 1/x in kernel coordinates, = u on the inverted
// half-line), without the algebraic |2w|^{Re s} prefactor:
//   pc(w) = e^{pi Im s sgn(w)/2} e^{-iw} 1F1[s;   2Re s + 1; 2iw]
//   qc(w) = e^{pi Im s sgn(w)/2} e^{-iw} 2w 1F1[s+1; 2Re s + 2; 2iw]
// plus d/dw of both. The kernel combination pc qc' - qc pc' is real.
struct Core {
    cplx pc, qc, dpc, dqc;
};

Core core_eval(double w, cplx s) {
    double sr = s.real();
    cplx F1 = hyp1f1(s, 2.0 * sr + 1.0, 2.0 * kI * w);
    cplx F2 = hyp1f1(s + 1.0, 2.0 * sr + 2.0, 2.0 * kI * w);
    cplx F3 = hyp1f1(s + 2.0, 2.0 * sr + 3.0, 2.0 * kI * w);
    cplx E = std::exp(cplx(0.0, -w)) * std::exp(kPi * s.imag() * sgn(w) / 2.0);
    Core c;
    c.pc = E * F1;
    c.qc = E * 2.0 * w * F2;
    c.dpc = E * (-kI * F1 + 2.0 * kI * (s / (2.0 * sr + 1.0)) * F2);
    c.dqc = E * (2.0 * F2 + 2.0 * w * (-kI * F2 + 2.0 * kI * ((s + 1.0) / (2.0 * sr + 2.0)) * F3));
    return c;
}

void check_domain(double x) {
    if (!(std::abs(x) >= 0.01)) {
        throw DomainError("limit kernel: |x| >= 0.01 required");
    }
}

double checked_real(cplx v, double scale, const char* what) {
    if (std::abs(v.imag()) > 1e-9 * (scale + 1e-300)) {
        throw ImaginaryLeak(std::string(what) + ": imaginary residue above tolerance");
    }
    return v.real();
}

}  // namespace

double fn_P(double x, const LimitKernelParams& p) {
    check_domain(x);
    if (is_zero_param(p.s)) return std::cos(1.0 / x);
    if (p.s.real() == 0.0) {
        throw DomainError("fn_P: undefined on the line Re s = 0 (use the P~ route)");
    }
    double w = 1.0 / x;
    double sr = p.s.real();
    cplx F0 = hyp1f1(p.s, 2.0 * sr, 2.0 * kI * w);
    cplx E = std::exp(cplx(0.0, -w)) * std::exp(kPi * p.s.imag() * sgn(x) / 2.0);
    cplx v = std::pow(std::abs(2.0 * w), sr) * E * F0;
    return checked_real(v, std::abs(v), "fn_P");
}

double fn_Q(double x, const LimitKernelParams& p) {
    check_domain(x);
    if (is_zero_param(p.s)) return 2.0 * std::sin(1.0 / x);
    double w = 1.0 / x;
    Core c = core_eval(w, p.s);
    cplx v = std::pow(std::abs(2.0 * w), p.s.real()) * c.qc;
    return checked_real(v, std::abs(v), "fn_Q");
}

cplx fn_P_tilde(double x, const LimitKernelParams& p) {
    check_domain(x);
    double w = 1.0 / x;
    Core c = core_eval(w, p.s);
    return std::pow(std::abs(2.0 * w), p.s.real()) * c.pc;
}

double fn_P_bessel(double x, double s) {
    check_domain(x);
    double ax = std::abs(x);
    return std::pow(2.0, 2.0 * s - 0.5) * std::tgamma(s + 0.5) / std::sqrt(ax) *
           bessel_j(s - 0.5, 1.0 / ax);
}

double fn_Q_bessel(double x, double s) {
    check_domain(x);
    double ax = std::abs(x);
    return sgn(x) * std::pow(2.0, 2.0 * s + 1.5) * std::tgamma(s + 1.5) / std::sqrt(ax) *
           bessel_j(s + 0.5, 1.0 / ax);
}

double kernel_inf(double x1, double x2, const LimitKernelParams& p) {
    check_domain(x1);
    check_domain(x2);
    double pref = std::exp(log_prefactor(p.s));
    double sr = p.s.real();
    if (std::abs(x1 - x2) < 1e-8 * (1.0 + std::abs(x1))) {
        double x = 0.5 * (x1 + x2);
        double w = 1.0 / x;
        Core c = core_eval(w, p.s);
        double alg = std::pow(std::abs(2.0 * w), 2.0 * sr);
        // d/dx = -w^2 d/dw; the algebraic prefactor contributes
        // -Re s * w per function but cancels in the Wronskian.
        cplx wr = (-w * w) * (c.dpc * c.qc - c.dqc * c.pc);
        double scale = w * w * (std::abs(c.dpc * c.qc) + std::abs(c.dqc * c.pc));
        return pref * alg * checked_real(wr, scale, "kernel_inf diagonal");
    }
    double w1 = 1.0 / x1, w2 = 1.0 / x2;
    Core c1 = core_eval(w1, p.s);
    Core c2 = core_eval(w2, p.s);
    double alg = std::pow(std::abs(4.0 * w1 * w2), sr);
    cplx cross = c1.pc * c2.qc - c1.qc * c2.pc;
    double scale = std::abs(c1.pc * c2.qc) + std::abs(c1.qc * c2.pc);
    return pref * alg * checked_real(cross, scale, "kernel_inf") / (x1 - x2);
}

cplx whittaker_M(cplx kappa, cplx mu, cplx t) {
    cplx c = 1.0 + 2.0 * mu;
    cplx logt;
    if (t.imag() == 0.0 && t.real() < 0.0) {
        logt = cplx(std::log(-t.real()), kPi);
    } else {
        logt = std::log(t);
    }
    return std::exp(-t / 2.0 + (mu + 0.5) * logt) * hyp1f1(mu - kappa + 0.5, c, t);
}

PointConfiguration to_sine_coordinates(const PointConfiguration& config) {
    std::vector<double> out;
    out.reserve(config.points.size());
    for (double x : config.points) {
        if (x == 0.0) throw DomainError("to_sine_coordinates: zero point");
        out.push_back(-1.0 / (kPi * x));
    }
    return PointConfiguration::from(std::move(out));
}

double sine_kernel_from_limit(double y1, double y2, const LimitKernelParams& p) {
    if (y1 == 0.0 || y2 == 0.0) throw DomainError("sine_kernel_from_limit: zero point");
    double x1 = -1.0 / (kPi * y1), x2 = -1.0 / (kPi * y2);
    return kernel_inf(x1, x2, p) / (kPi * y1 * y2);
}

namespace {

// Symmetrized Nystrom eigenvalues for K on a weighted grid.
Eigen::VectorXd nystrom_eigenvalues(const LimitKernelParams& p, const std::vector<double>& nodes,
                                    const std::vector<double>& weights) {
    const int n = int(nodes.size());
    Eigen::MatrixXd A(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            A(i, j) = A(j, i) = kernel_inf(nodes[i], nodes[j], p) *
                                std::sqrt(weights[i] * weights[j]);
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw EigenFailure("fredholm_det: eigensolve failed");
    return es.eigenvalues();
}

double det_from_eigenvalues(const Eigen::VectorXd& ev) {
    double det = 1.0;
    for (int i = 0; i < ev.size(); ++i) det *= (1.0 - ev(i));
    return det;
}

}  // namespace

FredholmResult fredholm_det(const LimitKernelParams& p, double lo, double hi, int order) {
    if (lo == hi) return {1.0, 0.0};
    if (!(hi > lo)) throw DomainError("fredholm_det: lo <= hi required");
    if (lo < 0.0 && hi > 0.0) throw DomainError("fredholm_det: interval must avoid zero");
    if (std::min(std::abs(lo), std::abs(hi)) < 0.01) {
        throw DomainError("fredholm_det: endpoints must satisfy |x| >= 0.01");
    }
    if (order < 2 || order > 400) throw DomainError("fredholm_det: order in [2, 400]");
    auto g = gauss_legendre(order, lo, hi);
    double det = det_from_eigenvalues(nystrom_eigenvalues(p, g.nodes, g.weights));
    auto gh = gauss_legendre(std::max(2, order / 2), lo, hi);
    double det_half = det_from_eigenvalues(nystrom_eigenvalues(p, gh.nodes, gh.weights));
    if (!(det > 0.0)) throw NonPositive("fredholm_det: determinant not in (0, 1]");
    return {det, std::abs(det - det_half)};
}

double log_det_tail(const LimitKernelParams& p, double t, int order) {
    if (!(t > 0.0)) throw DomainError("log_det_tail: t > 0 required");
    if (order < 2 || order > 400) throw DomainError("log_det_tail: order in [2, 400]");
    const double beta = 2.0 * p.s.real();
    auto g = gauss_jacobi_beta(order, beta);
    const int n = order;
    std::vector<double> u(n), w(n);
    const double wscale = 0.5 * t * std::pow(t, beta);
    for (int i = 0; i < n; ++i) {
        u[i] = 0.5 * t * (g.nodes[i] + 1.0);
        w[i] = g.weights[i] * wscale;
    }
    const double pref = std::exp(log_prefactor(p.s));
    std::vector<Core> cores(n);
    for (int i = 0; i < n; ++i) cores[i] = core_eval(u[i], p.s);
    Eigen::MatrixXd A(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            cplx val;
            double scale;
            if (i == j) {
                val = cores[i].pc * cores[i].dqc - cores[i].qc * cores[i].dpc;
                scale = std::abs(cores[i].pc * cores[i].dqc) + std::abs(cores[i].qc * cores[i].dpc);
            } else {
                val = (cores[i].pc * cores[j].qc - cores[i].qc * cores[j].pc) / (u[j] - u[i]);
                scale = (std::abs(cores[i].pc * cores[j].qc) + std::abs(cores[i].qc * cores[j].pc)) /
                        std::abs(u[j] - u[i]);
            }
            double a = pref * checked_real(val, scale, "log_det_tail kernel");
            A(i, j) = A(j, i) = a * std::sqrt(w[i] * w[j]);
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw EigenFailure("log_det_tail: eigensolve failed");
    double f = 0.0;
    for (int i = 0; i < n; ++i) {
        double lam = es.eigenvalues()(i);
        if (lam >= 1.0) throw NonPositive("log_det_tail: determinant not positive");
        f += std::log1p(-lam);
    }
    return f;
}

double painleve_residual(double t, const LimitKernelParams& p, double h) {
    if (!(t >= 0.5 && t <= 5.0)) throw DomainError("painleve_residual: t in [0.5, 5]");
    if (h <= 0.0) h = 1e-3 * t;
    const int order = 140;
    // F on a 9-point stencil.
    double F[9];
    for (int k = -4; k <= 4; ++k) F[k + 4] = log_det_tail(p, t + k * h, order);
    auto at = [&](int k) { return F[k + 4]; };
    double F1 = (8.0 * (at(1) - at(-1)) - (at(2) - at(-2))) / (12.0 * h);
    double F2 = (-(at(2) + at(-2)) + 16.0 * (at(1) + at(-1)) - 30.0 * at(0)) / (12.0 * h * h);
    double d3a = (at(2) - 2.0 * at(1) + 2.0 * at(-1) - at(-2)) / (2.0 * h * h * h);
    double d3b = (at(4) - 2.0 * at(2) + 2.0 * at(-2) - at(-4)) / (16.0 * h * h * h);
    double F3 = (4.0 * d3a - d3b) / 3.0;
    double sig = t * F1;
    double sigp = F1 + t * F2;
    double sigpp = 2.0 * F2 + t * F3;
    cplx s = p.s, sb = std::conj(p.s);
    cplx lhs = -(t * sigpp) * (t * sigpp);
    cplx inner = 2.0 * (t * sigp - sig) + sigp * sigp + kI * (sb - s) * sigp;
    cplx rhs = inner * inner - (sigp * sigp) * (sigp - 2.0 * kI * s) * (sigp + 2.0 * kI * sb);
    cplx diff = lhs - rhs;
    double mag = std::max(std::abs(lhs), std::abs(rhs));
    if (std::abs(diff.imag()) > 1e-6 * (mag + 1e-300)) {
        throw ImaginaryLeak("painleve_residual: residual has a nonreal part");
    }
    return std::abs(diff) / (mag + 1e-300);
}

double kernel_convergence_gap(double x1, double x2, const LimitKernelParams& p, int n) {
    if (!(std::abs(x1) >= 0.05 && std::abs(x1) <= 20.0 && std::abs(x2) >= 0.05 &&
          std::abs(x2) <= 20.0)) {
        throw DomainError("kernel_convergence_gap: |x| in [0.05, 20] required");
    }
    EnsembleParams ep(p.s, n);
    double sign = 1.0;
    if (sgn(x1) * sgn(x2) < 0.0 && (n % 2 == 1)) sign = -1.0;
    double finite = sign * n * cd_kernel(n * x1, n * x2, ep);
    return std::abs(finite - kernel_inf(x1, x2, p));
}

double kernel_convergence_gap_sine_gauge(double x1, double x2, const LimitKernelParams& p, int n) {
    return kPi * std::abs(x1 * x2) * kernel_convergence_gap(x1, x2, p, n);
}

}  // namespace hpdet
