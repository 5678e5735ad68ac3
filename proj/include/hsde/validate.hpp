#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hsde/observables.hpp"

namespace hsde {

struct InvariantRow {
    std::string mode;
    std::string identity;
    double max_violation = 0.0;
    bool pass = false;
};

struct InvariantSuite {
    std::vector<InvariantRow> rows;
    double tolerance = 1e-8;
    long steps = 0;
    long paths = 0;
    bool all_pass() const;
};

// Integrates cfg.paths paths of the real 2N system for round(beta/dt) steps
// and records, per identity, the largest violation seen at any step. The
// modes follow the representation: w1 checks the w1 block relations and,
// at half filling, the on/off relations plus |u|-only dependence of the
// reduced blocks and agreement of the reduced stepper with the 2N flow; w2
// likewise; full checks the real/imaginary pattern of G.
InvariantSuite run_invariant_suite(const SimConfig& cfg, double tolerance = 1e-8);

}  // namespace hsde
