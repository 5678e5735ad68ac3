#include <doctest.h>

#include <cmath>

#include "hsde/noise.hpp"

using namespace hsde;

TEST_CASE("draws are pure functions of the counter") {
    const StreamKey k{7, 3, 11};
    CHECK(counter_normal(k, 5) == counter_normal(k, 5));
    CHECK(counter_normal(k, 5) != counter_normal(k, 6));
    CHECK(counter_normal(k, 5) != counter_normal({7, 4, 11}, 5));
    CHECK(counter_normal(k, 5) != counter_normal({7, 3, 12}, 5));
    CHECK(counter_normal(k, 5) != counter_normal({8, 3, 11}, 5));
    double buf[9];
    counter_normals(k, 3, 9, buf);
    for (int i = 0; i < 9; ++i) CHECK(buf[i] == counter_normal(k, 3 + i));
}

TEST_CASE("component draws are bit-identical to the full draw") {
    const StreamKey k{1, 2, 3};
    const NoiseDraw d = draw_noise(k, 5, 0.01);
    CHECK((draw_component(k, 5, Component::x) - d.phi).norm() == 0.0);
    CHECK((draw_component(k, 5, Component::y) - d.xi).norm() == 0.0);
    CHECK((draw_component(k, 5, Component::z) - d.theta).norm() == 0.0);
    CHECK((increment(d, Component::y) - 0.1 * d.xi).norm() == doctest::Approx(0.0));
    CHECK(brownian_increment(d, Component::x)(2, 2) == doctest::Approx(0.1 * d.phi(2)));
}

TEST_CASE("uniforms lie in the open unit interval") {
    for (std::uint64_t i = 0; i < 20000; ++i) {
        const double u = counter_uniform({0, i, 0}, 0);
        CHECK(u > 0.0);
        CHECK(u < 1.0);
    }
}

TEST_CASE("normal moments") {
    const int n = 200000;
    double s1 = 0, s2 = 0, s4 = 0, c01 = 0;
    for (int i = 0; i < n; ++i) {
        const StreamKey k{42, static_cast<std::uint64_t>(i), 0};
        const double z0 = counter_normal(k, 0), z1 = counter_normal(k, 1);
        s1 += z0;
        s2 += z0 * z0;
        s4 += z0 * z0 * z0 * z0;
        c01 += z0 * z1;
    }
    const double sn = std::sqrt(static_cast<double>(n));
    CHECK(std::abs(s1 / n) < 5.0 / sn);
    CHECK(std::abs(s2 / n - 1.0) < 5.0 * std::sqrt(2.0) / sn);
    CHECK(std::abs(s4 / n - 3.0) < 5.0 * std::sqrt(96.0) / sn);
    CHECK(std::abs(c01 / n) < 5.0 / sn);  // the two members of a Box-Muller pair
}

TEST_CASE("consecutive steps are uncorrelated") {
    const int n = 100000;
    double c = 0;
    for (int i = 0; i < n; ++i) c += counter_normal({9, 0, static_cast<std::uint64_t>(i)}, 0) *
                                     counter_normal({9, 0, static_cast<std::uint64_t>(i + 1)}, 0);
    CHECK(std::abs(c / n) < 5.0 / std::sqrt(static_cast<double>(n)));
}
