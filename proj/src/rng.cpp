#include "hpdet/rng.hpp"

#include <cmath>

#include "hpdet/errors.hpp"

namespace hpdet {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace

SeededRng SeededRng::derive(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t x = seed ^ (0xA0761D6478BD642FULL * (stream + 1));
    std::uint64_t s1 = splitmix64(x);
    std::uint64_t s2 = splitmix64(x);
    return SeededRng(s1 ^ (s2 << 1));
}

double SeededRng::uniform() {
    return double(eng_() >> 11) * 0x1.0p-53;
}

double SeededRng::uniform_open() {
    double u = uniform();
    return u > 0.0 ? u : 0x1.0p-53;
}

double SeededRng::exponential() { return -std::log(uniform_open()); }

double SeededRng::normal() {
    if (have_cached_normal_) {
        have_cached_normal_ = false;
        return cached_normal_;
    }
    double u1 = uniform_open();
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * M_PI * u2;
    cached_normal_ = r * std::sin(a);
    have_cached_normal_ = true;
    return r * std::cos(a);
}

double SeededRng::gamma(double alpha) {
    if (!(alpha > 0.0)) throw DomainError("SeededRng::gamma: alpha > 0 required");
    if (alpha < 1.0) {
        // Boost the shape, then scale back.
        double g = gamma(alpha + 1.0);
        return g * std::pow(uniform_open(), 1.0 / alpha);
    }
    // Marsaglia-Tsang squeeze.
    const double d = alpha - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x = normal();
        double v = 1.0 + c * x;
        if (v <= 0.0) continue;
        v = v * v * v;
        double u = uniform_open();
        if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
}

double SeededRng::beta(double a, double b) {
    double x = gamma(a);
    double y = gamma(b);
    return x / (x + y);
}

std::vector<std::complex<double>> SeededRng::complex_sphere(int k) {
    std::vector<std::complex<double>> v(k);
    double norm2 = 0.0;
    for (int i = 0; i < k; ++i) {
        double re = normal(), im = normal();
        v[i] = {re, im};
        norm2 += re * re + im * im;
    }
    double inv = 1.0 / std::sqrt(norm2);
    for (auto& z : v) z *= inv;
    return v;
}

std::vector<double> SeededRng::dirichlet_uniform(int k) {
    std::vector<double> w(k);
    double total = 0.0;
    for (int i = 0; i < k; ++i) {
        w[i] = exponential();
        total += w[i];
    }
    for (auto& x : w) x /= total;
    return w;
}

}  // namespace hpdet
