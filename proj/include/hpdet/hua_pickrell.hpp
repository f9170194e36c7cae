#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hpdet/errors.hpp"
#include "hpdet/rng.hpp"

namespace hpdet {

using cplx = std::complex<double>;

// --- Elementary coordinate laws of the corner decomposition -----------------

// Draw from mu_1: density proportional to (1+t^2)^(-Re s - 1) e^{2 Im s atan t}.
// Exact tangent transform for the symmetric part; rejection with envelope
// e^{pi |Im s|} for the tilt (acceptance >= e^{-pi |Im s|}).
double sample_mu1(cplx s, SeededRng& rng);

// Draw zeta = r + it in the right halfplane from mu_N (N >= 2):
// r = B/(1-B) with B ~ Beta(N-1, 2Re s + N), then t = (1+r) t' with t' from
// the mu_1-type law with exponents (s+N, sbar+N).
cplx sample_muN(int n, cplx s, SeededRng& rng);

// --- Matrix-level sampling ---------------------------------------------------

// Extend an (N-1)-dimensional Hermitian corner Y to an N-dimensional matrix
// whose conditional law given Y is the Hua-Pickrell conditional at parameter
// s. Throws EigenFailure if the eigendecomposition of Y misses its backward
// error contract (1e-12 ||Y||).
Eigen::MatrixXcd extend_corner(const Eigen::MatrixXcd& y, cplx s, SeededRng& rng);

// Sample an N x N matrix from the Hua-Pickrell projection m^(s,N) by corner
// recursion from dimension 1. N <= 200.
Eigen::MatrixXcd sample_matrix(int n, cplx s, SeededRng& rng);

// Eigenvalue-only corner chain: spectra of dimensions 1..N from one driving
// stream, each obtained from the previous one through the rank-one arrow
// (secular equation) update. Distributionally identical to taking corners of
// sample_matrix and much cheaper (no dense eigensolves). Spectra are sorted
// descending and consecutive ones strictly interlace.
std::vector<std::vector<double>> sample_spectrum_chain(int n, cplx s, SeededRng& rng);

// Eigenvalues (descending) of the Hermitian arrow matrix
// [[diag(d), z], [z*, a]] with |z_i|^2 = g_i, via its secular equation.
std::vector<double> arrow_eigenvalues(std::span<const double> d_desc,
                                      std::span<const double> g, double a);

// --- Densities ---------------------------------------------------------------

// log density of m^(s,N) at X w.r.t. Lebesgue measure on H(N), through the
// spectrum of X.
double log_density_msN(const Eigen::MatrixXcd& x, cplx s);
double density_msN(const Eigen::MatrixXcd& x, cplx s);

// The zeta coordinates (Neretin map) of a matrix: zeta_1 = X_11 and
// zeta_N = i t + xi* (1 + i theta_{N-1}(X))^{-1} xi for N = 2..dim.
std::vector<cplx> zeta_coordinates(const Eigen::MatrixXcd& x);

// --- Disjointness functionals ------------------------------------------------

// Hellinger affinity <mu'_N, mu''_N> of the level-N coordinate laws, via its
// closed Gamma-factor form; in (0, 1] and equal to 1 iff s1 = s2.
double hellinger_affinity(cplx s1, cplx s2, int n);

struct KakutaniReport {
    std::vector<double> log_partial_products;  // log prod_{N=2}^{M}, M = 2..n_max
    double fitted_slope;                       // of log-product against log M
    double limit_rate;                         // |s1-s2|^2 / 4
};

// Partial Kakutani products of the affinities and the fitted decay slope
// (log product ~ slope * log M); slope -> -|s1-s2|^2/4.
KakutaniReport kakutani_divergence_report(cplx s1, cplx s2, int n_max);

// Relative gap |det(A^z) - det(A11^z) det((A22 - A21 A11^{-1} A12)^z)| /
// |det(A^z)| for A with A + A* > 0, split at `split` rows. Throws
// NotInHalfplane if A is not in the matrix right halfplane.
double block_det_identity_gap(const Eigen::MatrixXcd& a, cplx z, int split);

// --- Sample archives ----------------------------------------------------------

struct SampleRecord {
    std::uint64_t seed;
    int n;
    cplx s;
    std::vector<double> eigenvalues;  // descending
};

void write_sample_archive(const std::string& path, const std::vector<SampleRecord>& records);
std::vector<SampleRecord> read_sample_archive(const std::string& path);

// Binary matrix dump: uint64 dimension header, then row-major complex
// entries as little-endian 64-bit float pairs.
void write_matrix_dump(const std::string& path, const Eigen::MatrixXcd& x);
Eigen::MatrixXcd read_matrix_dump(const std::string& path);

}  // namespace hpdet
