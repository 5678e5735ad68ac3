#include "hsde/lattice.hpp"

#include <algorithm>

namespace hsde {

Boundary parse_boundary(const std::string& s) {
    if (s == "open") return Boundary::open;
    if (s == "periodic") return Boundary::periodic;
    throw ConfigError("boundary must be open or periodic, got '" + s + "'");
}

std::string to_string(Boundary b) { return b == Boundary::open ? "open" : "periodic"; }

int LatticeSpec::n_sites() const {
    int n = 1;
    for (int e : extent) n *= e;
    return n;
}

std::vector<int> LatticeSpec::coords(int site) const {
    std::vector<int> c(extent.size());
    for (int k = dim() - 1; k >= 0; --k) {
        c[k] = site % extent[k];
        site /= extent[k];
    }
    return c;
}

int LatticeSpec::index(const std::vector<int>& c) const {
    int idx = 0;
    for (int k = 0; k < dim(); ++k) idx = idx * extent[k] + c[k];
    return idx;
}

std::vector<int> LatticeSpec::neighbors(int site) const {
    std::vector<int> out;
    auto c = coords(site);
    for (int k = 0; k < dim(); ++k) {
        for (int step : {-1, +1}) {
            auto n = c;
            n[k] += step;
            if (n[k] < 0 || n[k] >= extent[k]) {
                if (boundary == Boundary::open) continue;
                n[k] = (n[k] + extent[k]) % extent[k];
            }
            int j = index(n);
            if (j != site && std::find(out.begin(), out.end(), j) == out.end()) out.push_back(j);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

int LatticeSpec::parity(int site) const {
    int s = 0;
    for (int x : coords(site)) s += x;
    return s & 1;
}

bool LatticeSpec::bipartite() const {
    if (boundary == Boundary::open) return true;
    // A ring of odd length (>1) couples equal parities across the seam.
    for (int e : extent)
        if (e > 2 && (e & 1)) return false;
    return true;
}

std::string LatticeSpec::label() const {
    std::string s;
    for (int k = 0; k < dim(); ++k) {
        if (k) s += "x";
        s += std::to_string(extent[k]);
    }
    return s;
}

LatticeSpec build_lattice(const std::vector<int>& extent, Boundary b) {
    if (extent.empty() || extent.size() > 2)
        throw ConfigError("lattice dimension must be 1 or 2");
    for (int e : extent)
        if (e < 1) throw ConfigError("lattice extent must be positive");
    return LatticeSpec{extent, b};
}

LatticeSpec build_lattice(int L, int d, Boundary b) {
    if (d < 1 || d > 2) throw ConfigError("lattice dimension must be 1 or 2");
    if (L < 1) throw ConfigError("lattice size L must be positive");
    return build_lattice(std::vector<int>(d, L), b);
}

MatR hopping_matrix(const LatticeSpec& spec, double t) {
    const int n = spec.n_sites();
    MatR eps = MatR::Zero(n, n);
    if (t == 0.0) return eps;
    for (int i = 0; i < n; ++i)
        for (int j : spec.neighbors(i)) eps(i, j) = t;
    return eps;
}

BipartiteMasks bipartite_masks(const LatticeSpec& spec) {
    const int n = spec.n_sites();
    BipartiteMasks m;
    m.chi_on.resize(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m.chi_on(i, j) = spec.parity(i) == spec.parity(j) ? 1.0 : 0.0;
    m.chi_off = MatR::Ones(n, n) - m.chi_on;
    m.bipartite = spec.bipartite();
    return m;
}

MatR project_on_off(const MatR& m, const BipartiteMasks& masks, Part part) {
    if (m.rows() != masks.chi_on.rows() || m.cols() != masks.chi_on.cols())
        throw ConfigError("project_on_off: dimension mismatch");
    return m.cwiseProduct(part == Part::on ? masks.chi_on : masks.chi_off);
}

}  // namespace hsde
