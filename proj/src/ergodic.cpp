#include "hpdet/ergodic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hpdet {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;
constexpr int kMaxStoredAlpha = 64;

void check_sorted_desc(std::span<const double> v, const char* what) {
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (v[i] > v[i - 1]) throw NotSorted(std::string(what) + ": descending order required");
    }
}

}  // namespace

SpectralSummary spectral_summary(std::span<const double> lambda_desc, int n) {
    if (int(lambda_desc.size()) != n) {
        throw DomainError("spectral_summary: spectrum length must equal N");
    }
    check_sorted_desc(lambda_desc, "spectral_summary");
    SpectralSummary s;
    int keep = std::min(n, kMaxStoredAlpha);
    s.a_plus.reserve(keep);
    s.a_minus.reserve(keep);
    for (int i = 0; i < keep; ++i) {
        s.a_plus.push_back(std::max(lambda_desc[i], 0.0) / n);
        s.a_minus.push_back(std::max(-lambda_desc[n - 1 - i], 0.0) / n);
    }
    double c = 0.0, d = 0.0;
    for (double lam : lambda_desc) {
        c += lam;
        d += lam * lam;
    }
    s.c = c / n;
    s.d = d / (double(n) * double(n));
    return s;
}

OmegaPoint::OmegaPoint(std::vector<double> ap, std::vector<double> am, double g1, double del)
    : alpha_plus(std::move(ap)), alpha_minus(std::move(am)), gamma1(g1), delta(del) {
    check_sorted_desc(alpha_plus, "OmegaPoint alpha_plus");
    check_sorted_desc(alpha_minus, "OmegaPoint alpha_minus");
    for (double a : alpha_plus) {
        if (a < 0.0) throw DomainError("OmegaPoint: alpha entries must be nonnegative");
    }
    for (double a : alpha_minus) {
        if (a < 0.0) throw DomainError("OmegaPoint: alpha entries must be nonnegative");
    }
    if (delta < 0.0) throw DomainError("OmegaPoint: delta must be nonnegative");
    if (alpha_sq_sum() > delta + 1e-12) {
        throw DomainError("OmegaPoint: sum alpha^2 must not exceed delta");
    }
}

double OmegaPoint::alpha_sq_sum() const {
    double t = 0.0;
    for (double a : alpha_plus) t += a * a;
    for (double a : alpha_minus) t += a * a;
    return t;
}

namespace {

PointConfiguration config_from(const std::vector<double>& ap, const std::vector<double>& am) {
    std::vector<double> pts;
    pts.reserve(ap.size() + am.size());
    for (double a : ap) {
        if (a != 0.0) pts.push_back(a);
    }
    for (double a : am) {
        if (a != 0.0) pts.push_back(-a);
    }
    return PointConfiguration::from(std::move(pts));
}

}  // namespace

PointConfiguration point_configuration(const SpectralSummary& s) {
    return config_from(s.a_plus, s.a_minus);
}

PointConfiguration point_configuration(const OmegaPoint& w) {
    return config_from(w.alpha_plus, w.alpha_minus);
}

cplx ergodic_fourier(const OmegaPoint& w, std::span<const double> r, int truncation) {
    if (truncation < 0) throw DomainError("ergodic_fourier: truncation >= 0 required");
    const double g2 = w.gamma2();
    cplx total = 1.0;
    for (double rj : r) {
        double tail = 0.0;
        for (std::size_t k = truncation; k < w.alpha_plus.size(); ++k) {
            tail += w.alpha_plus[k] * w.alpha_plus[k] * rj * rj;
        }
        for (std::size_t k = truncation; k < w.alpha_minus.size(); ++k) {
            tail += w.alpha_minus[k] * w.alpha_minus[k] * rj * rj;
        }
        if (tail >= 1e-12) {
            throw TruncationInsufficient("ergodic_fourier: alpha tail above 1e-12");
        }
        cplx factor = std::exp(cplx(-g2 * rj * rj, w.gamma1 * rj));
        int kp = std::min<int>(truncation, int(w.alpha_plus.size()));
        for (int k = 0; k < kp; ++k) {
            double a = w.alpha_plus[k];
            factor *= std::exp(cplx(0.0, -a * rj)) / cplx(1.0, -a * rj);
        }
        int km = std::min<int>(truncation, int(w.alpha_minus.size()));
        for (int k = 0; k < km; ++k) {
            double a = w.alpha_minus[k];
            factor *= std::exp(cplx(0.0, a * rj)) / cplx(1.0, a * rj);
        }
        total *= factor;
    }
    return total;
}

namespace {

// Ordered k-tuple counts with distinct indices via inclusion-exclusion over
// coincidence patterns; O(points * k^2) per box.
double ordered_tuple_count(const PointConfiguration& cfg, const Box& box, int k) {
    auto count_in = [&](int i) {
        auto [lo, hi] = box.sides[i];
        double c = 0.0;
        for (double x : cfg.points) c += (x >= lo && x < hi) ? 1.0 : 0.0;
        return c;
    };
    auto count_in2 = [&](int i, int j) {
        auto [lo1, hi1] = box.sides[i];
        auto [lo2, hi2] = box.sides[j];
        double lo = std::max(lo1, lo2), hi = std::min(hi1, hi2);
        if (!(hi > lo)) return 0.0;
        double c = 0.0;
        for (double x : cfg.points) c += (x >= lo && x < hi) ? 1.0 : 0.0;
        return c;
    };
    if (k == 1) return count_in(0);
    if (k == 2) return count_in(0) * count_in(1) - count_in2(0, 1);
    // k == 3
    auto count_in3 = [&]() {
        double lo = box.sides[0].first, hi = box.sides[0].second;
        for (int i = 1; i < 3; ++i) {
            lo = std::max(lo, box.sides[i].first);
            hi = std::min(hi, box.sides[i].second);
        }
        if (!(hi > lo)) return 0.0;
        double c = 0.0;
        for (double x : cfg.points) c += (x >= lo && x < hi) ? 1.0 : 0.0;
        return c;
    };
    double n1 = count_in(0), n2 = count_in(1), n3 = count_in(2);
    double n12 = count_in2(0, 1), n13 = count_in2(0, 2), n23 = count_in2(1, 2);
    double n123 = count_in3();
    return n1 * n2 * n3 - n12 * n3 - n13 * n2 - n23 * n1 + 2.0 * n123;
}

}  // namespace

CorrelationEstimate estimate_correlation(const std::vector<PointConfiguration>& configs,
                                         const std::vector<Box>& boxes, int k) {
    if (k < 1 || k > 3) throw DomainError("estimate_correlation: k in {1, 2, 3}");
    for (const auto& b : boxes) {
        if (int(b.sides.size()) != k) {
            throw DomainError("estimate_correlation: box dimension must equal k");
        }
    }
    if (configs.empty()) throw DomainError("estimate_correlation: no samples");
    CorrelationEstimate est;
    est.k = k;
    est.boxes = boxes;
    est.n_samples = configs.size();
    est.mean.resize(boxes.size());
    est.stderr_.resize(boxes.size());
    const double ns = double(configs.size());
    for (std::size_t b = 0; b < boxes.size(); ++b) {
        double sum = 0.0, sumsq = 0.0;
        for (const auto& cfg : configs) {
            double c = ordered_tuple_count(cfg, boxes[b], k);
            sum += c;
            sumsq += c * c;
        }
        double mean = sum / ns;
        double var = std::max(0.0, sumsq / ns - mean * mean);
        est.mean[b] = mean;
        est.stderr_[b] = (configs.size() > 1) ? std::sqrt(var / (ns - 1.0)) : 0.0;
    }
    return est;
}

double gamma2_closed_form_s0(int n, double eps) {
    return (2.0 / kPi) * (eps - std::atan(n * eps) / n);
}

Gamma2Report gamma2_diagnostic(const std::vector<std::vector<std::vector<double>>>& spectra_by_n,
                               std::span<const int> n_list, std::span<const double> eps_list,
                               cplx s) {
    if (spectra_by_n.empty()) throw DomainError("gamma2_diagnostic: no samples");
    const bool s_zero = (s == cplx(0.0));
    Gamma2Report rep;
    const double ns = double(spectra_by_n.size());
    for (std::size_t j = 0; j < n_list.size(); ++j) {
        int n = n_list[j];
        for (double eps : eps_list) {
            double sum = 0.0, sumsq = 0.0;
            for (const auto& sample : spectra_by_n) {
                const auto& spec = sample.at(j);
                double v = 0.0;
                for (double lam : spec) {
                    double x = lam / n;
                    if (std::abs(x) < eps) v += x * x;
                }
                sum += v;
                sumsq += v * v;
            }
            double mean = sum / ns;
            double var = std::max(0.0, sumsq / ns - mean * mean);
            Gamma2Cell cell;
            cell.n = n;
            cell.eps = eps;
            cell.mc_mean = mean;
            cell.mc_stderr = (ns > 1) ? std::sqrt(var / (ns - 1.0)) : 0.0;
            cell.closed_form = s_zero ? gamma2_closed_form_s0(n, eps)
                                      : std::numeric_limits<double>::quiet_NaN();
            rep.cells.push_back(cell);
        }
    }
    return rep;
}

double cotransition_density(std::span<const double> mu_desc,
                            std::span<const double> lambda_desc) {
    const int n = int(lambda_desc.size());
    if (int(mu_desc.size()) != n - 1 || n < 2) {
        throw DomainError("cotransition_density: need |mu| = |lambda| - 1");
    }
    check_sorted_desc(mu_desc, "cotransition_density mu");
    check_sorted_desc(lambda_desc, "cotransition_density lambda");
    double scale = std::max(std::abs(lambda_desc.front()), std::abs(lambda_desc.back())) + 1.0;
    for (int i = 0; i + 1 < n; ++i) {
        if (lambda_desc[i] - lambda_desc[i + 1] <= 1e-12 * scale) {
            throw DegenerateSpectrum("cotransition_density: lambda has (near-)ties");
        }
    }
    for (int i = 0; i < n - 1; ++i) {
        if (!(lambda_desc[i] >= mu_desc[i] && mu_desc[i] >= lambda_desc[i + 1])) {
            return 0.0;
        }
    }
    // (N-1)! Vandermonde(mu) / Vandermonde(lambda); the factorial makes q a
    // probability density on the interlacing polytope, by the classical
    // integral  int_{mu < lambda} Vandermonde(mu) dmu = Vandermonde(lambda)/(N-1)!.
    double logq = std::lgamma(double(n));
    for (int i = 0; i < n - 1; ++i) {
        for (int j = i + 1; j < n - 1; ++j) {
            double diff = mu_desc[i] - mu_desc[j];
            if (diff <= 0.0) return 0.0;  // boundary tie: zero density
            logq += std::log(diff);
        }
    }
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) logq -= std::log(lambda_desc[i] - lambda_desc[j]);
    }
    if (logq > 709.0) throw Underflow("cotransition_density: value overflows double range");
    return std::exp(logq);
}

std::vector<SpectralSummary> regularity_trace(const std::vector<std::vector<double>>& chain,
                                              std::span<const int> n_list) {
    std::vector<SpectralSummary> out;
    out.reserve(n_list.size());
    for (int n : n_list) {
        if (n < 1 || n > int(chain.size())) {
            throw DomainError("regularity_trace: N outside the sampled chain");
        }
        out.push_back(spectral_summary(chain[n - 1], n));
    }
    return out;
}

}  // namespace hpdet
