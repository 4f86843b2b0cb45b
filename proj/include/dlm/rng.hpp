#pragma once

#include <cstdint>
#include <vector>

namespace dlm {

/// SplitMix64 generator. All randomness in the toolkit flows from one master
/// seed, fanned out per stream with derive_seed so module-level seeds are
/// derivable and can be logged. Shuffling and gaussian sampling are written
/// out explicitly so the same seed gives the same stream on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64();
    double next_double();   // uniform in [0,1)
    double next_gaussian(); // standard normal (Box-Muller)
    std::uint64_t next_below(std::uint64_t bound);

    template <typename T>
    void shuffle(std::vector<T>& v) {
        if (v.size() < 2) return;
        for (std::size_t i = v.size() - 1; i > 0; --i) {
            std::size_t j = static_cast<std::size_t>(next_below(i + 1));
            std::swap(v[i], v[j]);
        }
    }

private:
    std::uint64_t state_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

/// Derives the seed for a named sub-stream from the master seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

} // namespace dlm
