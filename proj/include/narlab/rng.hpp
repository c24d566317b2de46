#ifndef NARLAB_RNG_HPP
#define NARLAB_RNG_HPP

#include <cmath>
#include <cstdint>
#include <vector>

namespace narlab {

// Stateless 64-bit mixer (splitmix64 finalizer). Streams are keyed by
// (seed, stream); drawing sample i of stream s never depends on how many
// draws any other stream consumed, so parallel evaluation is deterministic
// and independent of worker count.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream)
        : key_(mix64(seed ^ mix64(stream))) {}

    std::uint64_t next_u64() { return mix64(key_ + (++ctr_) * 0x9e3779b97f4a7c15ull); }

    // uniform in [0, 1)
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // uniform in (0, 1), never exactly 0
    double next_open() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    double next_gaussian() {
        double u1 = next_open();
        double u2 = next_double();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

    // Marsaglia-Tsang; shape < 1 handled with the power boost.
    double next_gamma(double shape) {
        if (shape < 1.0) {
            double u = next_open();
            return next_gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
        }
        double d = shape - 1.0 / 3.0;
        double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x = next_gaussian();
            double v = 1.0 + c * x;
            if (v <= 0.0) continue;
            v = v * v * v;
            double u = next_open();
            if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) return d * v;
        }
    }

    double next_beta(double a, double b) {
        double g1 = next_gamma(a);
        double g2 = next_gamma(b);
        return g1 / (g1 + g2);
    }

    std::vector<double> unit_vector(int dim) {
        std::vector<double> v(dim);
        double norm2 = 0.0;
        do {
            norm2 = 0.0;
            for (int i = 0; i < dim; ++i) {
                v[i] = next_gaussian();
                norm2 += v[i] * v[i];
            }
        } while (norm2 == 0.0);
        double inv = 1.0 / std::sqrt(norm2);
        for (auto& c : v) c *= inv;
        return v;
    }

private:
    std::uint64_t key_;
    std::uint64_t ctr_ = 0;
};

}  // namespace narlab

#endif
