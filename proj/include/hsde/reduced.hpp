#pragma once

#include <string>
#include <vector>

#include "hsde/lattice.hpp"
#include "hsde/model.hpp"
#include "hsde/noise.hpp"
#include "hsde/types.hpp"

namespace hsde {

// Real form G = [[i Fa, rho], [-rho^T, i Fb]] (2N x 2N blocks, spin
// sub-blocks ordered up, down).
struct ReducedState2N {
    MatR rho, Fa, Fb;
    static ReducedState2N zero(int n_sites);
};

MatC embed_full(const ReducedState2N& s);
// Inverse of embed_full; imaginary parts of rho and real parts of Fa, Fb are
// discarded.
ReducedState2N reduce_full(const MatC& G);

// The reduced systems carry the field as -sqrt|u| dx. The full system's
// -sqrt(u) nu_1 dx equals e_u times that, so for u < 0 the full stepper
// reproduces a reduced path when fed the mirrored draw (x, y -> -x, -y).
NoiseDraw mirror_for_full(const NoiseDraw& draw, int eps_u);

// Requires w3 = 0 and e1 = e2 = sign(u).
void require_real_scheme(const HsScheme& scheme, double u);
bool sde_step_2N(ReducedState2N& s, const NoiseDraw& draw, const ModelParams& p, const HsScheme& scheme,
                 double dt);
double energy_2N(const ReducedState2N& s, const ModelParams& p);

// w1 = 1, half filling, r = s = 0: independent blocks rho_uu, F_uu.
struct ReducedStateW1 {
    MatR rho_uu, F_uu;
    static ReducedStateW1 zero(int n_sites);
};

bool sde_step_w1(ReducedStateW1& s, const NoiseDraw& draw, const ModelParams& p, double dt);
double energy_w1(const ReducedStateW1& s, const MatR& eps, double u);
ReducedState2N embed_w1(const ReducedStateW1& s, const BipartiteMasks& masks, int eps_u);

// w2 = 1, r = s = 0: independent blocks rho_uu, rho_ud, F_uu, F_ud.
struct ReducedStateW2 {
    MatR rho_uu, rho_ud, F_uu, F_ud;
    static ReducedStateW2 zero(int n_sites);
};

bool sde_step_w2(ReducedStateW2& s, const NoiseDraw& draw, const ModelParams& p, double dt);
double energy_w2(const ReducedStateW2& s, const ModelParams& p);
ReducedState2N embed_w2(const ReducedStateW2& s, int eps_u);

enum class SymMode { real, w1, w2, w2_sparsity, w1_half, w2_half };
SymMode parse_sym_mode(const std::string& s);
std::string to_string(SymMode m);

struct Violation {
    std::string identity;
    double value = 0.0;
};

// Throws ConfigError when the mode's hypotheses are not met by the run.
void validate_mode(SymMode mode, const ModelParams& p, const HsScheme& scheme, const LatticeSpec& spec);

std::vector<Violation> check_symmetries(const ReducedState2N& s, SymMode mode, const BipartiteMasks& masks,
                                        int eps_u);
// Real/imaginary block pattern of a full complex G under a real scheme.
std::vector<Violation> check_reality(const MatC& G);
double max_violation(const std::vector<Violation>& v);

}  // namespace hsde
