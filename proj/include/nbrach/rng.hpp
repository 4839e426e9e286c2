#pragma once

#include <cmath>
#include <cstdint>

// Counter-based random numbers. Every draw is a pure function of a 64-bit key
// chain, so simulation results do not depend on evaluation order or thread
// count. The mixer is the splitmix64 finalizer applied per absorbed word.
namespace nbrach::rng {

inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Hash chain over key words; order-sensitive, collision-resistant enough for
// Monte Carlo streams.
struct Key {
    std::uint64_t state = 0x853c49e6748fea9bULL;

    constexpr Key() = default;
    explicit Key(std::uint64_t w) { absorb(w); }

    void absorb(std::uint64_t w) { state = mix64(state ^ w); }

    Key with(std::uint64_t w) const {
        Key k = *this;
        k.absorb(w);
        return k;
    }
    Key with(std::uint64_t a, std::uint64_t b) const { return with(a).with(b); }
    Key with(std::uint64_t a, std::uint64_t b, std::uint64_t c) const {
        return with(a).with(b).with(c);
    }
};

// Uniform in (0, 1); never returns 0 or 1, safe inside log().
inline double u01(const Key& key, std::uint64_t counter) {
    std::uint64_t r = mix64(key.state ^ (counter * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL));
    return (static_cast<double>(r >> 11) + 0.5) * 0x1.0p-53;
}

inline double exponential(const Key& key, std::uint64_t counter) {
    return -std::log(u01(key, counter));
}

// Sequential draw stream on top of the keyed counter; used where the number
// of draws is data-dependent (Poisson, rejection loops).
class Stream {
  public:
    explicit Stream(Key key) : key_(key) {}

    double u01() { return rng::u01(key_, counter_++); }
    double exponential() { return -std::log(u01()); }
    double normal() {
        // Box-Muller, one value per pair of uniforms.
        double u = u01();
        double v = u01();
        return std::sqrt(-2.0 * std::log(u)) * std::cos(6.283185307179586 * v);
    }

    // Exact Poisson: multiplication method below mean 12, PTRS transformed
    // rejection (Hormann 1993) above.
    std::uint64_t poisson(double mean);

    // Uniform integer in [0, n).
    std::uint64_t uniform_int(std::uint64_t n) {
        return static_cast<std::uint64_t>(u01() * static_cast<double>(n)) % n;
    }

  private:
    Key key_;
    std::uint64_t counter_ = 0;
};

}  // namespace nbrach::rng
