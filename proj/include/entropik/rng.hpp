#pragma once

#include <cstdint>

namespace entropik {

// splitmix64: small deterministic generator.  We avoid <random> distributions
// so that identical seeds give identical streams on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Uniform in [0, n) by rejection.
    std::uint64_t below(std::uint64_t n) {
        if (n == 0) return 0;
        std::uint64_t limit = ~0ull - ~0ull % n;
        std::uint64_t v;
        do { v = next(); } while (v >= limit);
        return v % n;
    }

    // Derive an independent stream (for per-trial RNGs).
    Rng split(std::uint64_t stream) const {
        Rng r(state_ ^ (0xa0761d6478bd642full * (stream + 1)));
        r.next();
        return r;
    }

private:
    std::uint64_t state_;
};

}  // namespace entropik
