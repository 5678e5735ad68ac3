#pragma once

#include <array>

#include "hsde/lattice.hpp"
#include "hsde/types.hpp"

namespace hsde {

struct ModelParams {
    MatR eps;  // real symmetric hopping matrix
    double mu = 0.0;
    double r = 0.0;  // pairing field
    double s = 0.0;  // exchange field
    double u = 0.0;

    int n_sites() const { return static_cast<int>(eps.rows()); }
    int eps_u() const { return u < 0.0 ? -1 : +1; }
};

ModelParams make_model(const LatticeSpec& spec, double t, double mu, double r, double s, double u);
void validate_model(const ModelParams& p);

// Hubbard-Stratonovich weights and signs.
struct HsScheme {
    std::array<double, 3> w{1.0, 0.0, 0.0};
    std::array<int, 3> e{1, 1, 1};

    cplx nu(int i) const;
    double w_eps() const { return w[0] * e[0] + w[1] * e[1] + w[2] * e[2]; }
    // Single-channel scheme; which is 1, 2 or 3.
    static HsScheme pure(int which, int sign);
};

void validate_scheme(const HsScheme& s);

// sqrt(u) on the principal branch, imaginary for u < 0.
inline cplx sqrt_u(double u) { return std::sqrt(cplx(u, 0.0)); }

}  // namespace hsde
