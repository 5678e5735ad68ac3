#pragma once

#include <string>
#include <vector>

#include "hsde/types.hpp"

namespace hsde {

enum class Boundary { open, periodic };

Boundary parse_boundary(const std::string& s);
std::string to_string(Boundary b);

// Rectangular lattice with row-major flat indexing: the last coordinate
// varies fastest. Coordinates are zero-based internally.
struct LatticeSpec {
    std::vector<int> extent;
    Boundary boundary = Boundary::open;

    int dim() const { return static_cast<int>(extent.size()); }
    int n_sites() const;
    std::vector<int> coords(int site) const;
    int index(const std::vector<int>& c) const;
    std::vector<int> neighbors(int site) const;
    // Parity of the coordinate sum, 0 or 1.
    int parity(int site) const;
    bool bipartite() const;
    std::string label() const;  // e.g. "3x2"
};

LatticeSpec build_lattice(int L, int d, Boundary b);
LatticeSpec build_lattice(const std::vector<int>& extent, Boundary b);

MatR hopping_matrix(const LatticeSpec& spec, double t);

struct BipartiteMasks {
    MatR chi_on;
    MatR chi_off;
    bool bipartite = true;
};

enum class Part { on, off };

BipartiteMasks bipartite_masks(const LatticeSpec& spec);
MatR project_on_off(const MatR& m, const BipartiteMasks& masks, Part part);

}  // namespace hsde
