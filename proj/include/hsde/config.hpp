#pragma once

#include <array>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "hsde/lattice.hpp"
#include "hsde/model.hpp"
#include "hsde/observables.hpp"
#include "hsde/pfqmc.hpp"
#include "hsde/zerotemp.hpp"

namespace hsde {

// Key-value run configuration. One `key = value` per line, '#' starts a
// comment, lists are comma separated. Unknown keys are rejected.
//
// lattice:  L (e.g. 4 or 3x2), d, boundary = open|periodic
// model:    t = -1, mu = 0, r = 0, s = 0, u = 0
// hs:       w1, w2, w3 (default: weight 1 on the representation's field),
//           e1, e2, e3 (default: sign u)
// sim:      dt = 0.01, beta = 1, paths = 1000, seed = 1,
//           representation = w1 | w2 | full, checkpoints (default: beta),
//           extrapolate = false, corr_ref = 0, corr_site = -1,
//           max_fail_fraction = 0.01, exact_exponential = false
// toy:      toy_mode = girsanov | raw, toy_mu = 2, toy_lambdas (empty: cosh),
//           toy_steps = 2000 (dt = beta / toy_steps)
// zerotemp: ansatz = staggered | uniform, T = 20, zt_dt = 0.005,
//           amp_min = 0, amp_max = 1, amp_step = 0.01
// output:   path (empty: stdout), format = csv | json
struct RunConfig {
    std::vector<int> L{2};
    int d = 1;
    Boundary boundary = Boundary::open;

    double t = -1.0, mu = 0.0, r = 0.0, s = 0.0, u = 0.0;

    std::array<double, 3> w{1.0, 0.0, 0.0};
    std::array<int, 3> e{1, 1, 1};

    double dt = 0.01;
    double beta = 1.0;
    long paths = 1000;
    std::uint64_t seed = 1;
    Representation representation = Representation::w1;
    std::vector<double> checkpoints;
    bool extrapolate = false;
    int corr_ref = 0;
    int corr_site = -1;
    double max_fail_fraction = 0.01;
    bool exact_exponential = false;

    std::string toy_mode = "girsanov";
    double toy_mu = 2.0;
    std::vector<double> toy_lambdas;
    long toy_steps = 2000;

    std::string ansatz = "staggered";
    double T = 20.0;
    double zt_dt = 0.005;
    double amp_min = 0.0, amp_max = 1.0, amp_step = 0.01;

    std::string output_path;
    std::string format = "csv";

    // Keys given explicitly; the weight and sign defaults consult this set.
    std::set<std::string> explicit_keys;

    // Equality of the canonical serialized form (explicit_keys ignored).
    bool operator==(const RunConfig& o) const;

    LatticeSpec lattice() const;
    ModelParams model() const;
    HsScheme scheme() const;
    SimConfig sim() const;
    PfConfig pf() const;
    ToySpec toy(double beta) const;
    ZeroTempConfig zerotemp() const;
};

// Applies one `key = value` assignment; throws ConfigError naming the key.
void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value);

// Parses the text format, fills dependent defaults and validates.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

// Fills dependent defaults (weights, signs) and checks the invariants that
// do not depend on the subcommand. Throws ConfigError naming the key.
void finalize_config(RunConfig& cfg);

// Canonical text form; parse_config(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& cfg);

}  // namespace hsde
