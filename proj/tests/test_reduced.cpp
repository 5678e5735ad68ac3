#include <doctest.h>

#include "hsde/girsanov.hpp"
#include "hsde/reduced.hpp"
#include "util.hpp"

using namespace hsde;
using hsde::test::maxabs;
using hsde::test::random_matrix;
using hsde::test::random_skew;
using hsde::test::random_sym;

namespace {

double state_diff(const ReducedState2N& a, const ReducedState2N& b) {
    return std::max({maxabs(MatR(a.rho - b.rho)), maxabs(MatR(a.Fa - b.Fa)), maxabs(MatR(a.Fb - b.Fb))});
}

}  // namespace

TEST_CASE("real 2N stepper equals the full stepper on embedded states") {
    std::mt19937_64 rng(5);
    const LatticeSpec spec = build_lattice(2, 2, Boundary::open);
    const int n = 4;
    for (double u : {2.0, -2.0})
        for (int which : {1, 2}) {
            const ModelParams p = make_model(spec, -1.0, 0.3, 0.2, 0.1, u);
            const HsScheme sc = HsScheme::pure(which, p.eps_u());
            ReducedState2N st{random_matrix(rng, 2 * n, 0.3), random_skew(rng, 2 * n, 0.3),
                              random_skew(rng, 2 * n, 0.3)};
            MatC G = embed_full(st);
            const NoiseDraw d = draw_noise({1, 2, 3}, n, 0.01);
            REQUIRE(sde_step_full(G, assemble_h0(p), sc, mirror_for_full(d, p.eps_u()), 0.01, u));
            REQUIRE(sde_step_2N(st, d, p, sc, 0.01));
            CHECK(state_diff(reduce_full(G), st) < 1e-14);
            CHECK(max_violation(check_reality(G)) < 1e-14);
            CHECK(std::abs(energy_W(embed_full(st), p) - energy_2N(st, p)) < 1e-13);
        }
}

TEST_CASE("embed and reduce are inverse") {
    std::mt19937_64 rng(6);
    const ReducedState2N st{random_matrix(rng, 6), random_skew(rng, 6), random_skew(rng, 6)};
    CHECK(state_diff(reduce_full(embed_full(st)), st) == 0.0);
}

TEST_CASE("w1 system matches the 2N flow") {
    std::mt19937_64 rng(7);
    const LatticeSpec spec = build_lattice(2, 2, Boundary::open);
    const BipartiteMasks mk = bipartite_masks(spec);
    const int n = 4;
    for (double u : {2.0, -2.0}) {
        const ModelParams p = make_model(spec, -1.0, 0.0, 0.0, 0.0, u);
        const int eu = p.eps_u();
        ReducedStateW1 w{random_sym(rng, n, 0.3), random_skew(rng, n, 0.3)};
        ReducedState2N e = embed_w1(w, mk, eu);
        for (std::uint64_t k = 0; k < 20; ++k) {
            const NoiseDraw d = draw_noise({1, 5, k}, n, 0.01);
            REQUIRE(sde_step_2N(e, d, p, HsScheme::pure(1, eu), 0.01));
            REQUIRE(sde_step_w1(w, d, p, 0.01));
        }
        const ReducedState2N e2 = embed_w1(w, mk, eu);
        CHECK(state_diff(e, e2) < 1e-13);
        CHECK(energy_w1(w, p.eps, u) == doctest::Approx(energy_2N(e2, p)).epsilon(1e-12));
    }
}

TEST_CASE("w2 system matches the 2N flow") {
    std::mt19937_64 rng(8);
    const LatticeSpec spec = build_lattice(2, 2, Boundary::open);
    const int n = 4;
    for (double mu : {0.0, 0.4})
        for (double u : {2.0, -2.0}) {
            const ModelParams p = make_model(spec, -1.0, mu, 0.0, 0.0, u);
            const int eu = p.eps_u();
            // F_ud is skew for u > 0 and symmetric for u < 0, with a nonzero diagonal then
            const MatR f = random_matrix(rng, n, 0.3);
            const MatR fud = 0.5 * (f - eu * f.transpose());
            ReducedStateW2 w{random_sym(rng, n, 0.3), random_sym(rng, n, 0.3), random_skew(rng, n, 0.3), fud};
            ReducedState2N e = embed_w2(w, eu);
            for (std::uint64_t k = 0; k < 20; ++k) {
                const NoiseDraw d = draw_noise({1, 5, k}, n, 0.01);
                REQUIRE(sde_step_2N(e, d, p, HsScheme::pure(2, eu), 0.01));
                REQUIRE(sde_step_w2(w, d, p, 0.01));
            }
            const ReducedState2N e2 = embed_w2(w, eu);
            CHECK(state_diff(e, e2) < 1e-13);
            CHECK(energy_w2(w, p) == doctest::Approx(energy_2N(e2, p)).epsilon(1e-12));
        }
}

TEST_CASE("symmetry checks hold along a 2N flow from zero") {
    const LatticeSpec spec = build_lattice(4, 2, Boundary::periodic);
    const BipartiteMasks mk = bipartite_masks(spec);
    for (double u : {3.0, -3.0})
        for (int which : {1, 2}) {
            const ModelParams p = make_model(spec, -1.0, 0.0, 0.0, 0.0, u);
            ReducedState2N s = ReducedState2N::zero(16);
            for (std::uint64_t k = 0; k < 50; ++k)
                REQUIRE(sde_step_2N(s, draw_noise({2, 0, k}, 16, 0.01), p, HsScheme::pure(which, p.eps_u()), 0.01));
            const SymMode m = which == 1 ? SymMode::w1_half : SymMode::w2_half;
            CHECK(max_violation(check_symmetries(s, m, mk, p.eps_u())) < 1e-12);
            CHECK(max_violation(check_symmetries(s, which == 1 ? SymMode::w1 : SymMode::w2, mk, p.eps_u())) < 1e-12);
        }
}

TEST_CASE("mode hypotheses are enforced") {
    const LatticeSpec bip = build_lattice(2, 2, Boundary::open);
    const LatticeSpec odd = build_lattice(3, 2, Boundary::periodic);
    const ModelParams half = make_model(bip, -1.0, 0.0, 0.0, 0.0, 2.0);
    const ModelParams doped = make_model(bip, -1.0, 0.2, 0.0, 0.0, 2.0);
    const HsScheme s1 = HsScheme::pure(1, 1), s2 = HsScheme::pure(2, 1);
    CHECK_NOTHROW(validate_mode(SymMode::w1_half, half, s1, bip));
    CHECK_THROWS_AS(validate_mode(SymMode::w1_half, doped, s1, bip), ConfigError);
    CHECK_THROWS_AS(validate_mode(SymMode::w1_half, half, s2, bip), ConfigError);
    CHECK_THROWS_AS(validate_mode(SymMode::w2_half, make_model(odd, -1.0, 0, 0, 0, 2.0), s2, odd), ConfigError);
    CHECK_NOTHROW(validate_mode(SymMode::w2, doped, s2, bip));
    CHECK_THROWS_AS(validate_mode(SymMode::real, half, HsScheme::pure(3, 1), bip), ConfigError);
    CHECK_THROWS_AS(validate_mode(SymMode::real, half, HsScheme::pure(1, -1), bip), ConfigError);
    CHECK_THROWS_AS(parse_sym_mode("w4"), ConfigError);
    CHECK(parse_sym_mode(to_string(SymMode::w2_sparsity)) == SymMode::w2_sparsity);
}

TEST_CASE("mirrored draw") {
    const NoiseDraw d = draw_noise({3, 3, 3}, 2, 0.01);
    const NoiseDraw m = mirror_for_full(d, -1);
    CHECK((m.phi + d.phi).norm() == 0.0);
    CHECK((m.xi + d.xi).norm() == 0.0);
    CHECK((mirror_for_full(d, 1).phi - d.phi).norm() == 0.0);
}
