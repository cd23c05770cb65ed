#pragma once

#include <cstdint>
#include <random>

namespace ssg {

/// Seedable generator used by all model generators.
///
/// Engine: std::mt19937_64, whose output sequence is fixed by the C++
/// standard. Derived draws avoid the unspecified standard distributions:
///   uniform01()   = (x >> 11) * 2^-53, in [0, 1)
///   uniform_oc()  = 1 - uniform01(),   in (0, 1]
///   below(n)      = rejection sampling on the top bits, in [0, n)
///   split()       = new Rng seeded with the next raw draw
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    double uniform_oc() { return 1.0 - uniform01(); }

    std::uint64_t below(std::uint64_t n) {
        if (n <= 1) return 0;
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do {
            x = next();
        } while (x >= limit);
        return x % n;
    }

    /// Uniform integer in [lo, hi].
    std::uint64_t between(std::uint64_t lo, std::uint64_t hi) { return lo + below(hi - lo + 1); }

    bool bernoulli(double p) { return uniform01() < p; }

    Rng split() { return Rng(next()); }

private:
    std::mt19937_64 engine_;
};

}  // namespace ssg
