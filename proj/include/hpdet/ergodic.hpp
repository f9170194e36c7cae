#pragma once

#include <complex>
#include <span>
#include <vector>

#include "hpdet/errors.hpp"
#include "hpdet/point_config.hpp"

namespace hpdet {

using cplx = std::complex<double>;

// Scaled spectral functionals of a sorted spectrum lambda^(N):
//   a+_i = max(lambda_i, 0)/N,  a-_i = max(-lambda_{N+1-i}, 0)/N,
//   c = sum lambda / N,         d = sum lambda^2 / N^2.
// Only the top 64 entries of each a-sequence are stored (the rest are below
// resolution at desk scale); c and d always use the full spectrum.
struct SpectralSummary {
    std::vector<double> a_plus;   // weakly decreasing, nonnegative
    std::vector<double> a_minus;  // weakly decreasing, nonnegative
    double c = 0.0;
    double d = 0.0;
};

SpectralSummary spectral_summary(std::span<const double> lambda_desc, int n);

// Parameters of an ergodic invariant measure: alpha sequences, gamma1, and
// delta >= sum alpha^2; gamma2 = delta - sum alpha^2 >= 0 is the Gaussian
// component.
struct OmegaPoint {
    std::vector<double> alpha_plus;
    std::vector<double> alpha_minus;
    double gamma1 = 0.0;
    double delta = 0.0;

    OmegaPoint(std::vector<double> ap, std::vector<double> am, double g1, double del);

    double alpha_sq_sum() const;
    double gamma2() const { return std::max(delta - alpha_sq_sum(), 0.0); }
};

// The point configuration (-a-_1, -a-_2, ..., a+_2, a+_1) with zeros omitted.
PointConfiguration point_configuration(const SpectralSummary& s);
PointConfiguration point_configuration(const OmegaPoint& w);

// Fourier transform of the ergodic measure at diag(r_1, ..., r_n):
//   prod_j e^{i gamma1 r_j - gamma2 r_j^2}
//     prod_k e^{-i a+_k r_j} / (1 - i a+_k r_j)
//     prod_k e^{+i a-_k r_j} / (1 + i a-_k r_j)
// truncated after `truncation` alpha entries; throws TruncationInsufficient
// if the omitted stored entries have sum (alpha_k r_j)^2 >= 1e-12.
cplx ergodic_fourier(const OmegaPoint& w, std::span<const double> r, int truncation);

// Product box in (R*)^k.
struct Box {
    std::vector<std::pair<double, double>> sides;  // [lo, hi) per coordinate
};

struct CorrelationEstimate {
    int k = 1;
    std::vector<Box> boxes;
    std::vector<double> mean;    // expected ordered k-tuple count per box
    std::vector<double> stderr_; // standard error of the mean
    std::size_t n_samples = 0;
};

// Empirical correlation measure: mean count (over samples) of ordered
// k-tuples of distinct particles falling in each box, k <= 3.
CorrelationEstimate estimate_correlation(const std::vector<PointConfiguration>& configs,
                                         const std::vector<Box>& boxes, int k);

// Small-ball uniform-integrability diagnostic: Monte Carlo estimate of
// int_{-eps}^{eps} x^2 rho_1^{(N)}(dx) = E sum_i (lambda_i/N)^2 1{|lambda_i/N| < eps}.
struct Gamma2Cell {
    int n;
    double eps;
    double mc_mean;
    double mc_stderr;
    double closed_form;  // NaN unless s = 0
};

struct Gamma2Report {
    std::vector<Gamma2Cell> cells;  // ordered by (n, eps) as requested
};

// spectra_by_n[i][j] is the sampled spectrum of sample i at dimension
// n_list[j] (descending). s is used only to fill the s = 0 closed form.
Gamma2Report gamma2_diagnostic(const std::vector<std::vector<std::vector<double>>>& spectra_by_n,
                               std::span<const int> n_list, std::span<const double> eps_list,
                               cplx s);

// Closed form of the small-ball second moment at s = 0:
// (2/pi)(eps - atan(N eps)/N).
double gamma2_closed_form_s0(int n, double eps);

// Cotransition density of the corner process on the graph of spectra:
// (N-1)! Vandermonde(mu)/Vandermonde(lambda) for interlacing mu < lambda,
// 0 otherwise (the factorial normalizes the density to total mass one).
// lambda must have distinct entries (DegenerateSpectrum otherwise).
double cotransition_density(std::span<const double> mu_desc, std::span<const double> lambda_desc);

// Per-N summaries along one matrix's corner chain (chain[k] is the spectrum
// at dimension k+1, descending).
std::vector<SpectralSummary> regularity_trace(const std::vector<std::vector<double>>& chain,
                                              std::span<const int> n_list);

}  // namespace hpdet
