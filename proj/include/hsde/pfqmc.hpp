#pragma once

#include <cstdint>

#include "hsde/model.hpp"
#include "hsde/noise.hpp"
#include "hsde/stats.hpp"
#include "hsde/types.hpp"

namespace hsde {

// Pfaffian by skew-symmetric Parlett-Reid elimination with partial pivoting.
// The input is antisymmetrized first; throws ConfigError on odd dimension or
// when ||A + A^T|| exceeds 1e-10 relative to ||A||.
double pfaffian(const MatR& A);
cplx pfaffian(const MatC& A);

// Complex scalar kept as mantissa * 2^exponent.
struct ScaledComplex {
    cplx mantissa{1.0, 0.0};
    long exponent = 0;

    void normalize();
    void scale(cplx f) {
        mantissa *= f;
        normalize();
    }
    cplx log() const;  // principal log of the represented value
};

// Untilded convention: G = <a_x a_y> (zero diagonal), U = prod exp(-dh).
struct EvolutionState {
    MatC U, G;
    ScaledComplex Z;
    double min_re_z = 1.0;  // running minimum of Re Z / |Z| (sign diagnostic)
};

EvolutionState initial_evolution(int n_sites);

// dh = i dt h0 + i sqrt(u) dB.
MatC step_generator(const MatR& h0, const MatC& dB, double dt, double u);

// U <- U (1 - dh + dh^2 / 2).
bool evolve_U(EvolutionState& s, const MatC& dh);
// U <- U exp(-dh).
bool evolve_U_exact(EvolutionState& s, const MatC& dh);

// G = 2 (1 + U)^-1 - 1, antisymmetrized. Returns false when 1 + U is singular
// to working precision (reciprocal condition below rcond_min).
bool G_from_U(const MatC& U, MatC& G, double rcond_min = 1e-12);

// Multiplies Z by 1 + Tr[G dh]/4 + (Tr[G dh])^2/32 - Tr[G dh G dh]/16 + Tr[dh^2]/16
// using the pre-step G.
void z_step(EvolutionState& s, const MatC& dh);

// Exact per-step factor Pf[[G, -1], [1, tanh(dh/2)]] Pf[[sqrt2 sinh(dh/4), -1], [1, sqrt2 sinh(dh/4)]].
cplx z_recursion_factor(const MatC& G_prev, const MatC& dh);

// One untransformed step: Z update from the pre-step G, then U and G.
bool pf_step(EvolutionState& s, const MatC& dh);

// Untilded increment 1/2 (1 - G)[dh - dh G dh / 2](1 + G).
MatC untransformed_increment(const MatC& G, const MatC& dh);

struct PfConfig {
    ModelParams params;
    HsScheme scheme;
    double dt = 0.01;
    double beta = 1.0;
    long paths = 1000;
    std::uint64_t seed = 1;
    bool exact_exponential = false;
    // Also integrate every path at dt/2 on the same Brownian path; the energy
    // estimate becomes 2 E(dt/2) - E(dt).
    bool extrapolate = false;
};

struct PfEnsemble {
    std::vector<cplx> log_z;   // log Z_k per path (complex)
    std::vector<cplx> energy;  // W(i G_k) per path
    std::vector<cplx> coarse_log_z, coarse_energy;  // step dt when extrapolating; log_z, energy are then dt/2
    long n_failed = 0;
    double negative_fraction = 0.0;  // paths with Re Z < 0
    double beta = 0.0;
};

PfEnsemble run_pfqmc(const PfConfig& cfg);

// <H> = <W Z> / <Z> with jackknife stderr; imag_residual carries the complex part.
// Extrapolated when the ensemble holds coarse paths.
Estimate untransformed_energy(const PfEnsemble& ens);

// log of Tr e^{-beta H} estimated as E[Z] e^{-beta (u/4) w_eps N}, finest paths only.
LogMean untransformed_log_partition(const PfEnsemble& ens, const PfConfig& cfg);

}  // namespace hsde
