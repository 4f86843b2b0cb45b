#include "dlm/rng.hpp"

#include <cmath>

namespace dlm {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;

std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}
} // namespace

std::uint64_t Rng::next_u64() { return splitmix64(state_); }

double Rng::next_double() {
    // 53 random bits into [0,1)
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::next_gaussian() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    double u;
    do {
        u = next_double();
    } while (u <= 0.0);
    double v = next_double();
    double r = std::sqrt(-2.0 * std::log(u));
    spare_ = r * std::sin(kTwoPi * v);
    have_spare_ = true;
    return r * std::cos(kTwoPi * v);
}

std::uint64_t Rng::next_below(std::uint64_t bound) {
    if (bound == 0) return 0;
    // rejection sampling to avoid modulo bias
    std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    std::uint64_t x;
    do {
        x = next_u64();
    } while (x >= limit);
    return x % bound;
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    std::uint64_t state = master ^ (0xa0761d6478bd642fULL * (stream + 1));
    return splitmix64(state);
}

} // namespace dlm
