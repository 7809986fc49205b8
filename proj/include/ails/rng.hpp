#ifndef AILS_RNG_HPP
#define AILS_RNG_HPP

#include <cstdint>
#include <vector>

namespace ails {

// SplitMix64. Chosen over std::mt19937_64 because candidate programs must be
// able to reproduce the exact stream with a few lines of code in any language.
class Rng {
public:
    explicit Rng(uint64_t seed) : state_(seed) {}

    uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ull;
        uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1), 53-bit resolution.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform integer in [lo, hi). Requires lo < hi.
    int next_int(int lo, int hi) {
        return lo + static_cast<int>(next_u64() % static_cast<uint64_t>(hi - lo));
    }

    uint64_t state() const { return state_; }
    void set_state(uint64_t s) { state_ = s; }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (int i = static_cast<int>(v.size()) - 1; i > 0; --i) {
            int j = next_int(0, i + 1);
            std::swap(v[i], v[j]);
        }
    }

private:
    uint64_t state_;
};

}  // namespace ails

#endif
