#pragma once

#include <cstdint>

namespace qgstorm::rng {

// Counter-based generator: every draw is a pure function of
// (stream key, 96-bit counter). Streams are derived from (seed, trajectory)
// so trajectories can run on any worker in any order and still produce
// bit-identical paths. The block function is a Philox-style 4x32 bijection
// with 10 rounds.
struct Block {
    uint32_t x[4];
};

Block block(uint64_t key, uint32_t c0, uint32_t c1, uint32_t c2, uint32_t c3);

// splitmix64 finalizer; used to derive stream keys.
uint64_t mix64(uint64_t z);

// Stream key for one trajectory of one run.
uint64_t stream_key(uint64_t seed, uint64_t trajectory);

// Draw roles share a stream but must never collide on counters.
enum class Tag : uint32_t {
    convolution = 1,  // stochastic-convolution increments
    wiener = 2,       // plain Wiener increments
    kappa = 3,        // domain-constant Monte Carlo
    generic = 4,      // test draws
};

// Standard normal, one value per (stream, a, b, step, tag) key.
double normal(uint64_t stream, uint32_t a, uint32_t b, uint64_t step, Tag tag);

// Two independent uniforms in (0,1).
void uniform2(uint64_t stream, uint32_t a, uint32_t b, uint64_t step, Tag tag,
              double& u0, double& u1);

}  // namespace qgstorm::rng
