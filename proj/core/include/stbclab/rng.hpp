#ifndef STBCLAB_RNG_HPP
#define STBCLAB_RNG_HPP

#include <cstdint>
#include <cmath>

#include "stbclab/types.hpp"

namespace stbclab {

// Counter-keyed random stream: the state is derived from
// (seed, stream, counter) alone, so trial i of SNR point s produces the same
// draws no matter which worker runs it. xoshiro256++ state seeded through
// splitmix64.
class TrialRng {
public:
    explicit TrialRng(uint64_t seed, uint64_t stream = 0, uint64_t counter = 0);

    uint64_t next_u64();

    // uniform in [0,1)
    double next_unit() { return double(next_u64() >> 11) * 0x1.0p-53; }
    // uniform in (0,1]
    double next_unit_open() { return 1.0 - next_unit(); }

    // uniform index in [0, size); size must be a power of two
    int next_index(int size) { return static_cast<int>(next_u64() & uint64_t(size - 1)); }

    // circularly-symmetric complex Gaussian, variance 1 (1/2 per part)
    Complex next_cgauss() {
        double r = std::sqrt(-std::log(next_unit_open()));
        double phi = 6.283185307179586476925286766559 * next_unit();
        return Complex(r * std::cos(phi), r * std::sin(phi));
    }

    CMatrix cgauss_matrix(int rows, int cols) {
        CMatrix M(rows, cols);
        for (int r = 0; r < rows; ++r)
            for (int c = 0; c < cols; ++c)
                M(r, c) = next_cgauss();
        return M;
    }

    CVector cgauss_vector(int len) {
        CVector v(len);
        for (int i = 0; i < len; ++i)
            v(i) = next_cgauss();
        return v;
    }

private:
    uint64_t s_[4];
};

inline uint64_t splitmix64_next(uint64_t& x) {
    x += 0x9E3779B97F4A7C15ull;
    uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

inline TrialRng::TrialRng(uint64_t seed, uint64_t stream, uint64_t counter) {
    uint64_t x = seed;
    (void)splitmix64_next(x);
    x ^= 0xA0761D6478BD642Full * (stream + 1);
    (void)splitmix64_next(x);
    x ^= 0xE7037ED1A0B428DBull * (counter + 1);
    s_[0] = splitmix64_next(x);
    s_[1] = splitmix64_next(x);
    s_[2] = splitmix64_next(x);
    s_[3] = splitmix64_next(x);
    if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0)
        s_[0] = 1;
}

inline uint64_t TrialRng::next_u64() {
    auto rotl = [](uint64_t v, int k) { return (v << k) | (v >> (64 - k)); };
    const uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

} // namespace stbclab

#endif
