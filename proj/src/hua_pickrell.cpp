#include "hpdet/hua_pickrell.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>

#include "hpdet/specialfns.hpp"

namespace hpdet {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;
constexpr cplx kI{0.0, 1.0};

void check_param(cplx s) {
    if (!(s.real() > -0.5)) throw DomainError("hua_pickrell: Re s must exceed -1/2");
}

// Symmetric heavy-tail draw, density proportional to (1+t^2)^(-c):
// t = v/sqrt(1-v^2) with v = 2B - 1, B ~ Beta(c - 1/2, c - 1/2).
double sample_symmetric_t(double c, SeededRng& rng) {
    double b = rng.beta(c - 0.5, c - 0.5);
    double v = 2.0 * b - 1.0;
    double one_minus = std::max(1.0 - v * v, 1e-300);
    return v / std::sqrt(one_minus);
}

// Draw from density proportional to (1+t^2)^(-c) e^{2 b atan t}; rejection
// against the symmetric law with envelope e^{pi |b|}.
double sample_tilted_t(double c, double b, SeededRng& rng) {
    if (b == 0.0) return sample_symmetric_t(c, rng);
    const double envelope = kPi * std::abs(b);
    for (;;) {
        double t = sample_symmetric_t(c, rng);
        double log_accept = 2.0 * b * std::atan(t) - envelope;
        if (std::log(rng.uniform_open()) < log_accept) return t;
    }
}

std::vector<double> eigen_descending(const Eigen::MatrixXcd& x) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(x, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw EigenFailure("hua_pickrell: eigensolve failed");
    std::vector<double> ev(es.eigenvalues().data(), es.eigenvalues().data() + x.rows());
    std::reverse(ev.begin(), ev.end());
    return ev;
}

}  // namespace

double sample_mu1(cplx s, SeededRng& rng) {
    check_param(s);
    return sample_tilted_t(s.real() + 1.0, s.imag(), rng);
}

cplx sample_muN(int n, cplx s, SeededRng& rng) {
    check_param(s);
    if (n < 2) throw DomainError("sample_muN: N >= 2 required");
    double b = rng.beta(double(n - 1), 2.0 * s.real() + n);
    double r = b / std::max(1.0 - b, 1e-300);
    double tp = sample_tilted_t(s.real() + n, s.imag(), rng);
    return {r, (1.0 + r) * tp};
}

Eigen::MatrixXcd extend_corner(const Eigen::MatrixXcd& y, cplx s, SeededRng& rng) {
    check_param(s);
    const int k = int(y.rows());
    if (k == 0) {
        Eigen::MatrixXcd x(1, 1);
        x(0, 0) = sample_mu1(s, rng);
        return x;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(y);
    if (es.info() != Eigen::Success) throw EigenFailure("extend_corner: eigensolve failed");
    double ynorm = y.norm();
    double backward = (y * es.eigenvectors() -
                       es.eigenvectors() * es.eigenvalues().asDiagonal().toDenseMatrix())
                          .norm();
    if (backward > 1e-12 * std::max(1.0, ynorm) * std::sqrt(double(k))) {
        throw EigenFailure("extend_corner: eigendecomposition backward error too large");
    }
    cplx zeta = sample_muN(k + 1, s, rng);
    double r = zeta.real(), that = zeta.imag();
    auto eta = rng.complex_sphere(k);
    Eigen::VectorXcd xi_eig(k);
    double shift = 0.0;
    for (int j = 0; j < k; ++j) {
        double yj = es.eigenvalues()(j);
        xi_eig(j) = std::sqrt((1.0 + yj * yj) * r) * eta[j];
        shift += std::norm(eta[j]) * yj;
    }
    double t = that + r * shift;
    Eigen::VectorXcd xi = es.eigenvectors() * xi_eig;
    Eigen::MatrixXcd x(k + 1, k + 1);
    x.topLeftCorner(k, k) = y;
    x.block(0, k, k, 1) = xi;
    x.block(k, 0, 1, k) = xi.adjoint();
    x(k, k) = t;
    return x;
}

Eigen::MatrixXcd sample_matrix(int n, cplx s, SeededRng& rng) {
    check_param(s);
    if (n < 1 || n > 200) throw DomainError("sample_matrix: N in [1, 200]");
    Eigen::MatrixXcd x(0, 0);
    for (int k = 0; k < n; ++k) x = extend_corner(x, s, rng);
    return x;
}

std::vector<double> arrow_eigenvalues(std::span<const double> d_desc, std::span<const double> g,
                                      double a) {
    const int k = int(d_desc.size());
    std::vector<double> gg(g.begin(), g.end());
    for (auto& v : gg) v = std::max(v, 1e-300);
    double gsum = 0.0;
    for (double v : gg) gsum += v;
    const double spread = std::sqrt(gsum) + 1.0;

    auto f = [&](double lam) {
        double acc = lam - a;
        for (int i = 0; i < k; ++i) acc -= gg[i] / (lam - d_desc[i]);
        return acc;
    };
    auto fprime = [&](double lam) {
        double acc = 1.0;
        for (int i = 0; i < k; ++i) {
            double dd = lam - d_desc[i];
            acc += gg[i] / (dd * dd);
        }
        return acc;
    };
    auto solve = [&](double lo, double hi) {
        // f is increasing from -inf at lo+ to +inf (or f(hi) > 0) at hi-.
        double a0 = lo, b0 = hi;
        double lam = 0.5 * (a0 + b0);
        for (int it = 0; it < 200; ++it) {
            double fv = f(lam);
            if (fv < 0.0) a0 = lam; else b0 = lam;
            if (b0 - a0 <= 1e-15 * (std::abs(a0) + std::abs(b0) + 1.0)) break;
            double step = fv / fprime(lam);
            double next = lam - step;
            if (!(next > a0 && next < b0)) next = 0.5 * (a0 + b0);
            if (std::abs(next - lam) <= 1e-16 * (std::abs(lam) + 1.0)) { lam = next; break; }
            lam = next;
        }
        return lam;
    };

    std::vector<double> out(k + 1);
    double top = std::max(d_desc.empty() ? a : d_desc[0], a) + spread;
    double bottom = std::min(d_desc.empty() ? a : d_desc[k - 1], a) - spread;
    if (k == 0) return {a};
    out[0] = solve(d_desc[0], top);
    for (int i = 1; i < k; ++i) out[i] = solve(d_desc[i], d_desc[i - 1]);
    out[k] = solve(bottom, d_desc[k - 1]);
    return out;
}

std::vector<std::vector<double>> sample_spectrum_chain(int n, cplx s, SeededRng& rng) {
    check_param(s);
    if (n < 1) throw DomainError("sample_spectrum_chain: N >= 1 required");
    std::vector<std::vector<double>> chain;
    chain.reserve(n);
    chain.push_back({sample_mu1(s, rng)});
    for (int k = 1; k < n; ++k) {
        const auto& y = chain.back();
        cplx zeta = sample_muN(k + 1, s, rng);
        double r = zeta.real(), that = zeta.imag();
        auto dir = rng.dirichlet_uniform(k);
        std::vector<double> g(k);
        double shift = 0.0;
        for (int j = 0; j < k; ++j) {
            g[j] = (1.0 + y[j] * y[j]) * r * dir[j];
            shift += dir[j] * y[j];
        }
        double a = that + r * shift;
        chain.push_back(arrow_eigenvalues(y, g, a));
    }
    return chain;
}

double log_density_msN(const Eigen::MatrixXcd& x, cplx s) {
    check_param(s);
    const int n = int(x.rows());
    auto ev = eigen_descending(x);
    double sr = s.real(), si = s.imag();
    double logf = 0.0;
    for (double lam : ev) {
        logf += -(sr + n) * std::log1p(lam * lam) + 2.0 * si * std::atan(lam);
    }
    // log const_N = sum_j [ j log pi + log Gamma(2Re s + j)
    //   - (2Re s + 2j - 2) log 2 - 2 Re log Gamma(s + j) ]
    double logc = 0.0;
    for (int j = 1; j <= n; ++j) {
        logc += j * std::log(kPi) + log_gamma(cplx(2.0 * sr + j)).real() -
                (2.0 * sr + 2.0 * j - 2.0) * std::log(2.0) -
                2.0 * log_gamma(s + double(j)).real();
    }
    return logf - logc;
}

double density_msN(const Eigen::MatrixXcd& x, cplx s) {
    return std::exp(log_density_msN(x, s));
}

std::vector<cplx> zeta_coordinates(const Eigen::MatrixXcd& x) {
    const int n = int(x.rows());
    if (n < 1) throw DomainError("zeta_coordinates: nonempty matrix required");
    std::vector<cplx> zs(n);
    zs[0] = x(0, 0);
    for (int m = 2; m <= n; ++m) {
        Eigen::MatrixXcd ym1 = x.topLeftCorner(m - 1, m - 1);
        Eigen::VectorXcd xi = x.block(0, m - 1, m - 1, 1);
        cplx t = x(m - 1, m - 1);
        Eigen::MatrixXcd a = Eigen::MatrixXcd::Identity(m - 1, m - 1) + kI * ym1;
        Eigen::VectorXcd sol = a.partialPivLu().solve(xi);
        zs[m - 1] = kI * t + xi.dot(sol);  // xi.dot = conjugate-linear in xi
    }
    return zs;
}

double hellinger_affinity(cplx s1, cplx s2, int n) {
    check_param(s1);
    check_param(s2);
    if (n < 2) throw DomainError("hellinger_affinity: N >= 2 required");
    if (s1 == s2) return 1.0;
    cplx smid = 0.5 * (s1 + s2);
    double lg = 0.5 * (2.0 * log_gamma(s1 + double(n)).real() +
                       2.0 * log_gamma(s2 + double(n)).real() -
                       log_gamma(cplx(2.0 * s1.real() + n)).real() -
                       log_gamma(cplx(2.0 * s2.real() + n)).real()) +
                log_gamma(cplx(2.0 * smid.real() + n)).real() -
                2.0 * log_gamma(smid + double(n)).real();
    return std::exp(lg);
}

KakutaniReport kakutani_divergence_report(cplx s1, cplx s2, int n_max) {
    if (s1 == s2) throw DomainError("kakutani_divergence_report: s1 != s2 required");
    if (n_max < 4) throw DomainError("kakutani_divergence_report: n_max >= 4 required");
    KakutaniReport rep;
    rep.limit_rate = std::norm(s1 - s2) / 4.0;
    rep.log_partial_products.reserve(n_max - 1);
    double acc = 0.0;
    for (int n = 2; n <= n_max; ++n) {
        acc += std::log(hellinger_affinity(s1, s2, n));
        rep.log_partial_products.push_back(acc);
    }
    // Least-squares slope of log-product against log M over the trailing
    // decade (the transient at small M is not part of the asymptotics).
    int m_lo = std::max(2, n_max / 10);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int cnt = 0;
    for (int m = m_lo; m <= n_max; ++m) {
        double lx = std::log(double(m));
        double ly = rep.log_partial_products[m - 2];
        sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
        ++cnt;
    }
    rep.fitted_slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
    return rep;
}

double block_det_identity_gap(const Eigen::MatrixXcd& a, cplx z, int split) {
    const int n = int(a.rows());
    if (split < 1 || split >= n) throw DomainError("block_det_identity_gap: bad split");
    Eigen::MatrixXcd herm = 0.5 * (a + a.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> hs(herm, Eigen::EigenvaluesOnly);
    if (hs.info() != Eigen::Success || hs.eigenvalues()(0) <= 0.0) {
        throw NotInHalfplane("block_det_identity_gap: A + A* is not positive definite");
    }
    auto log_det_power = [&](const Eigen::MatrixXcd& m) {
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m, false);
        if (es.info() != Eigen::Success) {
            throw EigenFailure("block_det_identity_gap: eigensolve failed");
        }
        cplx acc = 0.0;
        for (int i = 0; i < m.rows(); ++i) acc += std::log(es.eigenvalues()(i));
        return z * acc;  // log det(M^z) = z sum Log lambda_i
    };
    Eigen::MatrixXcd a11 = a.topLeftCorner(split, split);
    Eigen::MatrixXcd a12 = a.topRightCorner(split, n - split);
    Eigen::MatrixXcd a21 = a.bottomLeftCorner(n - split, split);
    Eigen::MatrixXcd a22 = a.bottomRightCorner(n - split, n - split);
    Eigen::MatrixXcd schur = a22 - a21 * a11.partialPivLu().solve(a12);
    cplx lhs = log_det_power(a);
    cplx rhs = log_det_power(a11) + log_det_power(schur);
    return std::abs(std::exp(lhs) - std::exp(rhs)) / std::abs(std::exp(lhs));
}

void write_sample_archive(const std::string& path, const std::vector<SampleRecord>& records) {
    std::ofstream out(path);
    if (!out) throw Error("write_sample_archive: cannot open " + path);
    out << "# hpdet-samples v1\n";
    out << "# seed,N,s_re,s_im,eigenvalues(descending)...\n";
    char buf[32];
    for (const auto& r : records) {
        out << r.seed << ',' << r.n;
        std::snprintf(buf, sizeof buf, "%.17g", r.s.real());
        out << ',' << buf;
        std::snprintf(buf, sizeof buf, "%.17g", r.s.imag());
        out << ',' << buf;
        for (double ev : r.eigenvalues) {
            std::snprintf(buf, sizeof buf, "%.17g", ev);
            out << ',' << buf;
        }
        out << '\n';
    }
}

std::vector<SampleRecord> read_sample_archive(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("read_sample_archive: cannot open " + path);
    std::vector<SampleRecord> recs;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        SampleRecord r;
        const char* p = line.c_str();
        char* end = nullptr;
        r.seed = std::strtoull(p, &end, 10);
        if (*end != ',') throw Error("read_sample_archive: malformed record");
        p = end + 1;
        r.n = int(std::strtol(p, &end, 10));
        if (*end != ',') throw Error("read_sample_archive: malformed record");
        p = end + 1;
        double sre = std::strtod(p, &end);
        if (*end != ',') throw Error("read_sample_archive: malformed record");
        p = end + 1;
        double sim = std::strtod(p, &end);
        r.s = {sre, sim};
        p = end;
        while (*p == ',') {
            ++p;
            r.eigenvalues.push_back(std::strtod(p, &end));
            p = end;
        }
        if (int(r.eigenvalues.size()) != r.n) {
            throw Error("read_sample_archive: eigenvalue count mismatch");
        }
        recs.push_back(std::move(r));
    }
    return recs;
}

void write_matrix_dump(const std::string& path, const Eigen::MatrixXcd& x) {
    static_assert(std::endian::native == std::endian::little,
                  "matrix dumps are little-endian");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("write_matrix_dump: cannot open " + path);
    std::uint64_t dim = std::uint64_t(x.rows());
    out.write(reinterpret_cast<const char*>(&dim), sizeof dim);
    for (int i = 0; i < x.rows(); ++i) {
        for (int j = 0; j < x.cols(); ++j) {
            double re = x(i, j).real(), im = x(i, j).imag();
            out.write(reinterpret_cast<const char*>(&re), sizeof re);
            out.write(reinterpret_cast<const char*>(&im), sizeof im);
        }
    }
}

Eigen::MatrixXcd read_matrix_dump(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("read_matrix_dump: cannot open " + path);
    std::uint64_t dim = 0;
    in.read(reinterpret_cast<char*>(&dim), sizeof dim);
    Eigen::MatrixXcd x(dim, dim);
    for (std::uint64_t i = 0; i < dim; ++i) {
        for (std::uint64_t j = 0; j < dim; ++j) {
            double re = 0, im = 0;
            in.read(reinterpret_cast<char*>(&re), sizeof re);
            in.read(reinterpret_cast<char*>(&im), sizeof im);
            x(i, j) = {re, im};
        }
    }
    if (!in) throw Error("read_matrix_dump: truncated file");
    return x;
}

}  // namespace hpdet
