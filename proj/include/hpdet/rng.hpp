#pragma once

#include <cstdint>
#include <complex>
#include <random>
#include <vector>

namespace hpdet {

// Deterministic random stream: a fixed seed reproduces the exact draw
// sequence on any platform. All distributions are implemented on top of the
// raw mt19937_64 output (the standard library distribution objects are not
// bit-portable across implementations).
class SeededRng {
  public:
    explicit SeededRng(std::uint64_t seed) : eng_(seed) {}

    // Independent stream for worker `stream` derived from `seed`
    // (splitmix64 mixing).
    static SeededRng derive(std::uint64_t seed, std::uint64_t stream);

    // Uniform on [0, 1) with 53 random bits.
    double uniform();
    // Uniform on (0, 1).
    double uniform_open();
    double exponential();  // rate 1
    double normal();       // standard normal (Box-Muller, cached pair)
    double gamma(double alpha);  // shape alpha > 0, unit scale
    double beta(double a, double b);

    // Uniform point on the unit sphere of C^k.
    std::vector<std::complex<double>> complex_sphere(int k);
    // Squared moduli of a uniform sphere point: Dirichlet(1, ..., 1).
    std::vector<double> dirichlet_uniform(int k);

    std::uint64_t raw() { return eng_(); }

  private:
    std::mt19937_64 eng_;
    bool have_cached_normal_ = false;
    double cached_normal_ = 0.0;
};

}  // namespace hpdet
