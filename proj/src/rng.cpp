#include "qgstorm/rng.hpp"

#include <cmath>
#include <numbers>

namespace qgstorm::rng {

namespace {

constexpr uint32_t kMul0 = 0xD2511F53u;
constexpr uint32_t kMul1 = 0xCD9E8D57u;
constexpr uint32_t kWeyl0 = 0x9E3779B9u;
constexpr uint32_t kWeyl1 = 0xBB67AE85u;

inline void round_once(uint32_t x[4], uint32_t k0, uint32_t k1) {
    const uint64_t p0 = static_cast<uint64_t>(kMul0) * x[0];
    const uint64_t p1 = static_cast<uint64_t>(kMul1) * x[2];
    const uint32_t hi0 = static_cast<uint32_t>(p0 >> 32), lo0 = static_cast<uint32_t>(p0);
    const uint32_t hi1 = static_cast<uint32_t>(p1 >> 32), lo1 = static_cast<uint32_t>(p1);
    const uint32_t y0 = hi1 ^ x[1] ^ k0;
    const uint32_t y1 = lo1;
    const uint32_t y2 = hi0 ^ x[3] ^ k1;
    const uint32_t y3 = lo0;
    x[0] = y0;
    x[1] = y1;
    x[2] = y2;
    x[3] = y3;
}

// 53-bit uniform in (0,1), symmetric around 1/2, never 0 or 1.
inline double u53(uint32_t hi, uint32_t lo) {
    const uint64_t bits = (static_cast<uint64_t>(hi) << 32) | lo;
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace

Block block(uint64_t key, uint32_t c0, uint32_t c1, uint32_t c2, uint32_t c3) {
    uint32_t x[4] = {c0, c1, c2, c3};
    uint32_t k0 = static_cast<uint32_t>(key);
    uint32_t k1 = static_cast<uint32_t>(key >> 32);
    for (int r = 0; r < 10; ++r) {
        round_once(x, k0, k1);
        k0 += kWeyl0;
        k1 += kWeyl1;
    }
    return Block{{x[0], x[1], x[2], x[3]}};
}

uint64_t mix64(uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

uint64_t stream_key(uint64_t seed, uint64_t trajectory) {
    return mix64(mix64(seed) + 0x9E3779B97F4A7C15ull * (trajectory + 1));
}

static Block keyed_block(uint64_t stream, uint32_t a, uint32_t b, uint64_t step, Tag tag) {
    const uint32_t c2 = static_cast<uint32_t>(step);
    const uint32_t c3 = (static_cast<uint32_t>(tag) << 28) ^ static_cast<uint32_t>(step >> 32);
    return block(stream, a, b, c2, c3);
}

double normal(uint64_t stream, uint32_t a, uint32_t b, uint64_t step, Tag tag) {
    const Block blk = keyed_block(stream, a, b, step, tag);
    const double u = u53(blk.x[0], blk.x[1]);
    const double v = u53(blk.x[2], blk.x[3]);
    return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * std::numbers::pi * v);
}

void uniform2(uint64_t stream, uint32_t a, uint32_t b, uint64_t step, Tag tag,
              double& u0, double& u1) {
    const Block blk = keyed_block(stream, a, b, step, tag);
    u0 = u53(blk.x[0], blk.x[1]);
    u1 = u53(blk.x[2], blk.x[3]);
}

}  // namespace qgstorm::rng
