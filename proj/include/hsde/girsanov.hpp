#pragma once

#include "hsde/model.hpp"
#include "hsde/noise.hpp"
#include "hsde/types.hpp"

namespace hsde {

// Majorana block order of every 4N x 4N matrix.
enum Blk { AU = 0, AD = 1, BU = 2, BD = 3 };

MatR assemble_h0(const ModelParams& p);
MatC assemble_dB(const NoiseDraw& draw, const HsScheme& scheme);
MatC assemble_DG(const MatC& G);

struct SiteGenerators {
    MatC D, E, F;
};
SiteGenerators build_site_generators(int j, int n_sites, const HsScheme& scheme);

// Increment of dG = 1/2 (G - i)(-h0 dt + (u/2) DG dt - sqrt(u) dB)(G + i),
// coefficients evaluated at the pre-step state.
MatC sde_increment_full(const MatC& G, const MatR& h0, const HsScheme& scheme, const NoiseDraw& draw,
                        double dt, double u);

// G <- G + dG followed by G <- (G - G^T)/2. Returns false on non-finite entries.
bool sde_step_full(MatC& G, const MatR& h0, const HsScheme& scheme, const NoiseDraw& draw, double dt,
                   double u);

cplx energy_W(const MatC& G, const ModelParams& p);

struct SiteDensity {
    cplx occupation;  // <n_up> - 1/2
    cplx exchange;
    cplx pairing;
};
SiteDensity density_from_G(const MatC& G, int j);

}  // namespace hsde
