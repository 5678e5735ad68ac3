#pragma once

#include <string>
#include <vector>

#include "hsde/lattice.hpp"
#include "hsde/model.hpp"
#include "hsde/observables.hpp"
#include "hsde/reduced.hpp"

namespace hsde {

// Constant scalar field: phi_j = (-1)^{parity(j)} a (staggered) or a (uniform).
enum class AnsatzKind { staggered, uniform };
AnsatzKind parse_ansatz(const std::string& s);
std::string to_string(AnsatzKind k);

struct FieldAnsatz {
    AnsatzKind kind = AnsatzKind::staggered;
    double amplitude = 0.0;
    // Throws ConfigError for a staggered field on a non-bipartite lattice.
    VecR realize(const LatticeSpec& spec) const;
};

// Deterministic Euler flow of the reduced systems with the noise increment
// replaced by field * dt. energy[k] = W(rho_{k dt}) for k = 0..K, not per site.
struct TrajectoryW1 {
    std::vector<double> energy;
    ReducedStateW1 final_state;
};
struct TrajectoryW2 {
    std::vector<double> energy;
    ReducedStateW2 final_state;
};

// w1 requires mu = r = s = 0; w2 requires r = s = 0. Throws NumericalError on
// a non-finite state.
TrajectoryW1 ode_trajectory_w1(const FieldAnsatz& field, const LatticeSpec& spec, const ModelParams& p, double T,
                               double dt);
TrajectoryW2 ode_trajectory_w2(const FieldAnsatz& field, const LatticeSpec& spec, const ModelParams& p, double T,
                               double dt);

struct ZeroTempConfig {
    LatticeSpec lattice;
    ModelParams params;
    Representation rep = Representation::w1;
    AnsatzKind kind = AnsatzKind::staggered;
    double T = 20.0;
    double dt = 0.005;
};

// V0/N = (1/(T N)) int_0^T [1/2 sum_j phi_j^2 + W(rho_t)] dt, left-point rule.
double v0_functional(const FieldAnsatz& field, const ZeroTempConfig& cfg);

struct V0Result {
    std::vector<double> amplitude_grid;
    std::vector<double> v0_values;  // per site
    double argmin = 0.0;
    double energy = 0.0;  // W(rho_T(argmin)) / N
};

// Grid points are evaluated concurrently; ties resolve to the first minimum.
V0Result minimize_scalar_ansatz(const ZeroTempConfig& cfg, const std::vector<double>& grid);

// Uniform grid lo, lo + step, ..., hi (inclusive up to rounding).
std::vector<double> amplitude_grid(double lo, double hi, double step);

}  // namespace hsde
