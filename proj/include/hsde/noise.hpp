#pragma once

#include <cstdint>

#include "hsde/types.hpp"

namespace hsde {

// Counter-based normals. A draw is a pure function of
// (seed, path_id, step, slot); paths can be simulated in any order.
//
// Transform: word(k) = splitmix64-finalizer cascade over (seed, path, step, k);
// uniform = ((word >> 11) + 0.5) * 2^-53, which lies in (0, 1).
// Slots 2p and 2p+1 share the Box-Muller pair built from words 2p, 2p+1:
//   r = sqrt(-2 ln u0), z_even = r cos(2 pi u1), z_odd = r sin(2 pi u1).
struct StreamKey {
    std::uint64_t seed = 0;
    std::uint64_t path_id = 0;
    std::uint64_t step = 0;
};

enum class Component { x = 0, y = 1, z = 2 };

std::uint64_t counter_word(const StreamKey& key, std::uint64_t k);
double counter_uniform(const StreamKey& key, std::uint64_t k);
double counter_normal(const StreamKey& key, std::uint64_t slot);

// Fills out[0..n) with the normals of slots [slot0, slot0+n).
void counter_normals(const StreamKey& key, std::uint64_t slot0, int n, double* out);

struct NoiseDraw {
    VecR phi, xi, theta;
    double dt = 0.0;
};

// phi, xi, theta occupy slots [0,n), [n,2n), [2n,3n).
NoiseDraw draw_noise(const StreamKey& key, int n, double dt);
// Only one field; bit-identical to the matching member of draw_noise.
VecR draw_component(const StreamKey& key, int n, Component c);

VecR increment(const NoiseDraw& draw, Component which);
MatR brownian_increment(const NoiseDraw& draw, Component which);

}  // namespace hsde
