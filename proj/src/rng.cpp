#include "nbrach/rng.hpp"

namespace nbrach::rng {

namespace {

std::uint64_t poisson_small(Stream& s, double mean) {
    // Knuth multiplication method; expected draws = mean + 1.
    const double limit = std::exp(-mean);
    double prod = 1.0;
    std::uint64_t n = 0;
    for (;;) {
        prod *= s.u01();
        if (prod <= limit) return n;
        ++n;
    }
}

std::uint64_t poisson_ptrs(Stream& s, double mean) {
    // Transformed rejection with squeeze (Hormann, "The transformed rejection
    // method for generating Poisson random variables").
    const double slam = std::sqrt(mean);
    const double loglam = std::log(mean);
    const double b = 0.931 + 2.53 * slam;
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double vr = 0.9277 - 3.6224 / (b - 2.0);
    for (;;) {
        const double u = s.u01() - 0.5;
        const double v = s.u01();
        const double us = 0.5 - std::abs(u);
        const double k = std::floor((2.0 * a / us + b) * u + mean + 0.43);
        if (us >= 0.07 && v <= vr) return static_cast<std::uint64_t>(k);
        if (k < 0.0 || (us < 0.013 && v > us)) continue;
        if (std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b) <=
            k * loglam - mean - std::lgamma(k + 1.0)) {
            return static_cast<std::uint64_t>(k);
        }
    }
}

}  // namespace

std::uint64_t Stream::poisson(double mean) {
    if (mean <= 0.0) return 0;
    if (mean < 12.0) return poisson_small(*this, mean);
    return poisson_ptrs(*this, mean);
}

}  // namespace nbrach::rng
