#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hsde/lattice.hpp"
#include "hsde/model.hpp"
#include "hsde/stats.hpp"
#include "hsde/types.hpp"

namespace hsde {

enum class Representation { full, w1, w2 };
Representation parse_representation(const std::string& s);
std::string to_string(Representation r);

struct SimConfig {
    LatticeSpec lattice;
    ModelParams params;
    HsScheme scheme;
    Representation rep = Representation::w1;
    double dt = 0.01;
    double beta = 1.0;
    long paths = 1000;
    std::uint64_t seed = 1;
    std::vector<double> checkpoints;  // empty means {beta}
    bool correlations = false;        // record C(ref, j) for every site j
    int corr_ref = 0;
    double max_fail_fraction = 0.01;
    // Also integrate every path at dt/2 on the same Brownian path; estimators
    // then return the weak extrapolation 2 E(dt/2) - E(dt).
    bool extrapolate = false;
};

// Throws ConfigError when the representation's hypotheses are not met.
void validate_sim(const SimConfig& cfg);

// Checkpoint betas rounded onto the time grid, sorted and deduplicated.
std::vector<long> checkpoint_steps(const SimConfig& cfg);

struct CheckpointData {
    double beta = 0.0;
    std::vector<cplx> action;      // S = sum_{l<k} W(G_l) dt
    std::vector<cplx> energy;      // W(G_k)
    std::vector<double> density;   // mean over sites of <n_up + n_dn>
    std::vector<double> spin;      // [path * N + j] = pathwise C_spin(ref, j)
    std::vector<double> pair;      // [path * N + j] = pathwise C_pair(ref, j)
};

// Only unfailed paths are stored; path_ids maps storage slots to path ids.
// With cfg.extrapolate, checkpoints hold the dt/2 paths and coarse the dt
// paths at the same betas.
struct PathEnsemble {
    SimConfig cfg;
    std::vector<CheckpointData> checkpoints;
    std::vector<CheckpointData> coarse;
    std::vector<long> path_ids;
    long n_failed = 0;

    long n_paths() const { return static_cast<long>(path_ids.size()); }
};

// Throws NumericalError if more than cfg.max_fail_fraction of paths fail.
PathEnsemble run_paths(const SimConfig& cfg);

// All estimates are per site where the observable is extensive.
Estimate girsanov_energy(const PathEnsemble& ens, std::size_t checkpoint);
// Uses the finest paths only.
LogMean partition_ratio(const PathEnsemble& ens, std::size_t checkpoint);
Estimate mean_density(const PathEnsemble& ens, std::size_t checkpoint);
Estimate spin_correlation(const PathEnsemble& ens, std::size_t checkpoint, int j);
Estimate pair_correlation(const PathEnsemble& ens, std::size_t checkpoint, int j);

// Pathwise correlation formulas of the reduced representations; i, j are
// sites, rho and F the spin-up blocks.
double spin_corr_w1(const MatR& rho, const MatR& F, int i, int j, int eps_u);
double pair_corr_w1(const MatR& rho, const MatR& F, int i, int j, int eps_u, bool same_sublattice);
double spin_corr_w2(const MatR& ruu, const MatR& rud, const MatR& fuu, const MatR& fud, int i, int j, int eps_u);
double pair_corr_w2(const MatR& ruu, const MatR& rud, const MatR& fuu, const MatR& fud, int i, int j, int eps_u);

// Scalar toy models: Z(x) = cosh(x) or sum_i exp(lambda_i x), G(x) = cos(mu x).
enum class ToyMode { raw, girsanov };
ToyMode parse_toy_mode(const std::string& s);

struct ToySpec {
    std::vector<double> lambdas;  // empty means the cosh model
    double mu = 2.0;
    double beta = 1.0;
    double dt = 0.01;
    long paths = 10000;
    std::uint64_t seed = 1;
    ToyMode mode = ToyMode::girsanov;
};

// Estimate of e^{mu^2/2} <G>.
Estimate toy_expectation(const ToySpec& spec);
double toy_exact(const ToySpec& spec);

}  // namespace hsde
