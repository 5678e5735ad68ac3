#include "hsde/noise.hpp"

#include <cmath>
#include <numbers>

namespace hsde {

namespace {

inline std::uint64_t splitmix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline double to_uniform(std::uint64_t w) {
    return (static_cast<double>(w >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace

std::uint64_t counter_word(const StreamKey& key, std::uint64_t k) {
    std::uint64_t h = splitmix(key.seed);
    h = splitmix(h ^ key.path_id);
    h = splitmix(h ^ (key.step * 0xd1b54a32d192ed03ULL));
    return splitmix(h ^ (k * 0x8cb92ba72f3d8dd7ULL));
}

double counter_uniform(const StreamKey& key, std::uint64_t k) {
    return to_uniform(counter_word(key, k));
}

double counter_normal(const StreamKey& key, std::uint64_t slot) {
    const std::uint64_t p = slot >> 1;
    const double u0 = counter_uniform(key, 2 * p);
    const double u1 = counter_uniform(key, 2 * p + 1);
    const double r = std::sqrt(-2.0 * std::log(u0));
    const double a = 2.0 * std::numbers::pi * u1;
    return (slot & 1) ? r * std::sin(a) : r * std::cos(a);
}

void counter_normals(const StreamKey& key, std::uint64_t slot0, int n, double* out) {
    // Precompute the per-(seed, path, step) prefix once.
    std::uint64_t h = splitmix(key.seed);
    h = splitmix(h ^ key.path_id);
    h = splitmix(h ^ (key.step * 0xd1b54a32d192ed03ULL));
    auto word = [h](std::uint64_t k) { return splitmix(h ^ (k * 0x8cb92ba72f3d8dd7ULL)); };
    std::uint64_t slot = slot0;
    const std::uint64_t end = slot0 + static_cast<std::uint64_t>(n);
    while (slot < end) {
        const std::uint64_t p = slot >> 1;
        const double r = std::sqrt(-2.0 * std::log(to_uniform(word(2 * p))));
        const double a = 2.0 * std::numbers::pi * to_uniform(word(2 * p + 1));
        if ((slot & 1) == 0) {
            *out++ = r * std::cos(a);
            ++slot;
            if (slot < end) {
                *out++ = r * std::sin(a);
                ++slot;
            }
        } else {
            *out++ = r * std::sin(a);
            ++slot;
        }
    }
}

NoiseDraw draw_noise(const StreamKey& key, int n, double dt) {
    NoiseDraw d;
    d.dt = dt;
    VecR all(3 * n);
    counter_normals(key, 0, 3 * n, all.data());
    d.phi = all.segment(0, n);
    d.xi = all.segment(n, n);
    d.theta = all.segment(2 * n, n);
    return d;
}

VecR draw_component(const StreamKey& key, int n, Component c) {
    VecR v(n);
    counter_normals(key, static_cast<std::uint64_t>(c) * n, n, v.data());
    return v;
}

VecR increment(const NoiseDraw& draw, Component which) {
    const double s = std::sqrt(draw.dt);
    switch (which) {
        case Component::x: return s * draw.phi;
        case Component::y: return s * draw.xi;
        default: return s * draw.theta;
    }
}

MatR brownian_increment(const NoiseDraw& draw, Component which) {
    return increment(draw, which).asDiagonal();
}

}  // namespace hsde
