#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace proxdeep {

// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

// Independent sub-stream seed for a named component (init, split, ...).
std::uint64_t derive_seed(std::uint64_t seed, std::string_view tag);

// mt19937_64 with hand-rolled draws so results do not depend on the
// standard library's distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(mix64(seed)) {}

    std::uint64_t next() { return gen_(); }

    // uniform on [0, 1)
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // uniform integer in [0, n), n > 0
    std::size_t below(std::size_t n);

    // standard normal via Box-Muller
    double normal();

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::swap(v[i - 1], v[below(i)]);
        }
    }

private:
    std::mt19937_64 gen_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace proxdeep
