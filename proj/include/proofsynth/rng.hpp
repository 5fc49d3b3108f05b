#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace proofsynth {

// Deterministic random source. mt19937_64 has a pinned algorithm in the
// standard, so raw draws are reproducible everywhere; the distributions on
// top (gaussian, shuffle, bounded ints) are hand-rolled here because the
// <random> distribution classes are allowed to differ between stdlibs and we
// need bit-identical corpora and checkpoints across rebuilds.
class DetRng {
public:
    explicit DetRng(uint64_t seed) : gen_(seed) {}

    uint64_t next_u64() { return gen_(); }

    // uniform in [0, n), n > 0; modulo bias is ~2^-64 per draw, irrelevant here
    uint64_t below(uint64_t n) { return gen_() % n; }

    // uniform double in [0, 1), 53 bits
    double uniform01() { return (gen_() >> 11) * 0x1.0p-53; }

    // standard normal via Box-Muller (no caching of the second value, so the
    // draw count per call is fixed)
    double gaussian() {
        double u1 = 1.0 - uniform01();  // (0, 1], safe for log
        double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }

private:
    std::mt19937_64 gen_;
};

// Fisher-Yates
template <class T>
void det_shuffle(std::vector<T>& v, DetRng& rng) {
    for (size_t i = v.size(); i > 1; --i) {
        size_t j = static_cast<size_t>(rng.below(i));
        std::swap(v[i - 1], v[j]);
    }
}

}  // namespace proofsynth
