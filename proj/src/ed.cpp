#include "hsde/ed.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include <unsupported/Eigen/MatrixFunctions>

namespace hsde {

namespace {

MatC dense(const SpMatC& m) { return MatC(m); }

int find_root(std::vector<int>& parent, int x) {
    while (parent[x] != x) {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    return x;
}

}  // namespace

FockSpace::FockSpace(int n_sites) : n_sites_(n_sites) {
    if (n_sites < 1) throw ConfigError("Fock space needs at least one site");
    if (n_sites > max_sites)
        throw ResourceError("Fock space limited to " + std::to_string(max_sites) + " sites");
    const int modes = 2 * n_sites;
    dim_ = Eigen::Index(1) << modes;
    c_.reserve(modes);
    for (int m = 0; m < modes; ++m) {
        std::vector<Eigen::Triplet<double>> trip;
        trip.reserve(dim_ / 2);
        const std::uint64_t bit = std::uint64_t(1) << m;
        for (Eigen::Index s = 0; s < dim_; ++s) {
            const auto us = static_cast<std::uint64_t>(s);
            if (!(us & bit)) continue;
            const int below = std::popcount(us & (bit - 1));
            trip.emplace_back(static_cast<Eigen::Index>(us ^ bit), s, (below & 1) ? -1.0 : 1.0);
        }
        SpMat cm(dim_, dim_);
        cm.setFromTriplets(trip.begin(), trip.end());
        c_.push_back(std::move(cm));
    }
}

SpMat FockSpace::number(int site, int spin) const {
    return SpMat(cdag(site, spin) * c(site, spin));
}

SpMat FockSpace::identity() const {
    SpMat id(dim_, dim_);
    id.setIdentity();
    return id;
}

SpMatC FockSpace::majorana(int k) const {
    const int n = n_sites_;
    const int blockk = k / n, site = k % n;
    const int spin = blockk % 2;
    const SpMatC cm = c(site, spin).cast<cplx>();
    const SpMatC cd = SpMatC(cm.adjoint());
    if (blockk < 2) return SpMatC(cm + cd);
    return SpMatC((cm - cd) * cplx(0.0, -1.0));
}

SpMat build_fock_hamiltonian(const FockSpace& fs, const ModelParams& p) {
    validate_model(p);
    const int n = fs.n_sites();
    if (p.n_sites() != n) throw ConfigError("model and Fock space sizes differ");
    SpMat H(fs.dim(), fs.dim());
    const SpMat id = fs.identity();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double h = p.eps(i, j) - (i == j ? p.mu : 0.0);
            if (h == 0.0) continue;
            for (int sp = 0; sp < 2; ++sp) H += h * SpMat(fs.cdag(i, sp) * fs.c(j, sp));
        }
    for (int j = 0; j < n; ++j) {
        if (p.s != 0.0)
            H += p.s * SpMat(fs.cdag(j, 0) * fs.c(j, 1) + fs.cdag(j, 1) * fs.c(j, 0));
        if (p.r != 0.0)
            H += p.r * SpMat(fs.cdag(j, 0) * fs.cdag(j, 1) + fs.c(j, 1) * fs.c(j, 0));
        if (p.u != 0.0) {
            const SpMat nu = fs.number(j, 0) - 0.5 * id;
            const SpMat nd = fs.number(j, 1) - 0.5 * id;
            H += p.u * SpMat(nu * nd);
        }
    }
    const double tr = p.eps.trace() - p.mu * n;
    H -= tr * id;
    H.prune(0.0);
    return H;
}

SpMatC build_fock_hamiltonian_majorana(const FockSpace& fs, const ModelParams& p) {
    const int n = fs.n_sites();
    std::vector<SpMatC> a(4 * n);
    for (int k = 0; k < 4 * n; ++k) a[k] = fs.majorana(k);
    auto A = [&](int spin, int site) -> const SpMatC& { return a[spin * n + site]; };
    auto B = [&](int spin, int site) -> const SpMatC& { return a[(2 + spin) * n + site]; };
    SpMatC H(fs.dim(), fs.dim());
    const cplx half_i(0.0, 0.5);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double h = p.eps(i, j) - (i == j ? p.mu : 0.0);
            if (h == 0.0) continue;
            for (int sp = 0; sp < 2; ++sp) H += (half_i * h) * SpMatC(A(sp, i) * B(sp, j));
        }
    for (int j = 0; j < n; ++j) {
        H += (half_i * (p.s - p.r)) * SpMatC(A(0, j) * B(1, j));
        H += (half_i * (p.s + p.r)) * SpMatC(A(1, j) * B(0, j));
        H += cplx(p.u / 4.0) * SpMatC(A(0, j) * A(1, j) * B(0, j) * B(1, j));
    }
    H.prune(cplx(0.0));
    return H;
}

EdSolver::EdSolver(const SpMat& H, Eigen::Index max_block) {
    const Eigen::Index dim = H.rows();
    std::vector<int> parent(dim);
    std::iota(parent.begin(), parent.end(), 0);
    for (int k = 0; k < H.outerSize(); ++k)
        for (SpMat::InnerIterator it(H, k); it; ++it) {
            if (it.value() == 0.0) continue;
            int a = find_root(parent, static_cast<int>(it.row()));
            int b = find_root(parent, static_cast<int>(it.col()));
            if (a != b) parent[std::max(a, b)] = std::min(a, b);
        }
    std::vector<int> root_block(dim, -1);
    block_of_.assign(dim, -1);
    local_of_.assign(dim, 0);
    for (Eigen::Index s = 0; s < dim; ++s) {
        const int root = find_root(parent, static_cast<int>(s));
        if (root_block[root] < 0) {
            root_block[root] = static_cast<int>(blocks_.size());
            blocks_.emplace_back();
        }
        Block& b = blocks_[root_block[root]];
        block_of_[s] = root_block[root];
        local_of_[s] = static_cast<Eigen::Index>(b.idx.size());
        b.idx.push_back(s);
    }
    for (const Block& b : blocks_)
        if (static_cast<Eigen::Index>(b.idx.size()) > max_block)
            throw ResourceError("ED block of size " + std::to_string(b.idx.size()) + " exceeds limit");
    std::vector<MatR> dense_blocks(blocks_.size());
    for (std::size_t bi = 0; bi < blocks_.size(); ++bi) {
        const auto m = static_cast<Eigen::Index>(blocks_[bi].idx.size());
        dense_blocks[bi] = MatR::Zero(m, m);
    }
    for (int k = 0; k < H.outerSize(); ++k)
        for (SpMat::InnerIterator it(H, k); it; ++it) {
            const int bi = block_of_[it.row()];
            dense_blocks[bi](local_of_[it.row()], local_of_[it.col()]) += it.value();
        }
    e_min_ = std::numeric_limits<double>::infinity();
    for (std::size_t bi = 0; bi < blocks_.size(); ++bi) {
        Eigen::SelfAdjointEigenSolver<MatR> es(dense_blocks[bi]);
        blocks_[bi].evals = es.eigenvalues();
        blocks_[bi].evecs = es.eigenvectors();
        e_min_ = std::min(e_min_, es.eigenvalues().minCoeff());
    }
}

std::vector<VecR> EdSolver::weights(double beta, double& z) const {
    std::vector<VecR> w(blocks_.size());
    z = 0.0;
    for (std::size_t bi = 0; bi < blocks_.size(); ++bi) {
        w[bi] = (-beta * (blocks_[bi].evals.array() - e_min_)).exp();
        z += w[bi].sum();
    }
    return w;
}

double EdSolver::energy(double beta) const {
    double z = 0.0, acc = 0.0;
    const auto w = weights(beta, z);
    for (std::size_t bi = 0; bi < blocks_.size(); ++bi) acc += w[bi].dot(blocks_[bi].evals);
    return acc / z;
}

double EdSolver::log_partition(double beta) const {
    double z = 0.0;
    weights(beta, z);
    return std::log(z) - beta * e_min_;
}

double EdSolver::thermal(const SpMat& op, double beta) const {
    std::vector<MatR> ob(blocks_.size());
    for (std::size_t bi = 0; bi < blocks_.size(); ++bi) {
        const auto m = static_cast<Eigen::Index>(blocks_[bi].idx.size());
        ob[bi] = MatR::Zero(m, m);
    }
    for (int k = 0; k < op.outerSize(); ++k)
        for (SpMat::InnerIterator it(op, k); it; ++it) {
            const int bi = block_of_[it.row()];
            if (bi != block_of_[it.col()]) continue;
            ob[bi](local_of_[it.row()], local_of_[it.col()]) += it.value();
        }
    double z = 0.0, acc = 0.0;
    const auto w = weights(beta, z);
    for (std::size_t bi = 0; bi < blocks_.size(); ++bi) {
        const MatR& v = blocks_[bi].evecs;
        const VecR diag = (v.transpose() * ob[bi] * v).diagonal();
        acc += w[bi].dot(diag);
    }
    return acc / z;
}

std::vector<double> EdSolver::spectrum() const {
    std::vector<double> out;
    for (const Block& b : blocks_)
        for (Eigen::Index k = 0; k < b.evals.size(); ++k) out.push_back(b.evals(k));
    std::sort(out.begin(), out.end());
    return out;
}

double ed_expectation(const EdSolver& solver, double beta) { return solver.energy(beta); }

SpMat spin_correlation_operator(const FockSpace& fs, int i, int j) {
    const SpMat mi = fs.number(i, 0) - fs.number(i, 1);
    const SpMat mj = fs.number(j, 0) - fs.number(j, 1);
    return SpMat(mi * mj);
}

SpMat pair_correlation_operator(const FockSpace& fs, int i, int j) {
    return SpMat(fs.cdag(i, 0) * fs.cdag(i, 1) * fs.c(j, 1) * fs.c(j, 0));
}

Correlations ed_correlations(const FockSpace& fs, const EdSolver& solver, double beta, int i, int j) {
    Correlations c;
    c.spin = solver.thermal(spin_correlation_operator(fs, i, j), beta);
    // The pair operator is not Hermitian for i != j; its thermal value is real
    // for real Hamiltonians and equals that of the Hermitian part.
    const SpMat p = pair_correlation_operator(fs, i, j);
    c.pair = solver.thermal(SpMat(0.5 * (p + SpMat(p.transpose()))), beta);
    return c;
}

namespace {

constexpr int max_trace_sites = 3;

MatC product_of_exponentials(const std::vector<MatC>& h_list, const FockSpace& fs,
                             const std::vector<MatC>& a) {
    const int m = 4 * fs.n_sites();
    MatC prod = MatC::Identity(fs.dim(), fs.dim());
    for (const MatC& h : h_list) {
        if (h.rows() != m || h.cols() != m) throw ConfigError("generator has wrong dimension");
        MatC H = MatC::Zero(fs.dim(), fs.dim());
        for (int x = 0; x < m; ++x)
            for (int y = 0; y < m; ++y)
                if (h(x, y) != cplx(0.0)) H += (0.25 * h(x, y)) * (a[x] * a[y]);
        const MatC e = (-H).exp();
        prod = prod * e;
    }
    return prod;
}

std::vector<MatC> dense_majoranas(const FockSpace& fs) {
    std::vector<MatC> a;
    for (int k = 0; k < 4 * fs.n_sites(); ++k) a.push_back(dense(fs.majorana(k)));
    return a;
}

}  // namespace

cplx ed_partition_trace(const std::vector<MatC>& h_list, int n_sites) {
    if (n_sites > max_trace_sites) throw ResourceError("partition trace oracle limited to 3 sites");
    FockSpace fs(n_sites);
    const auto a = dense_majoranas(fs);
    return product_of_exponentials(h_list, fs, a).trace();
}

MatC ed_majorana_correlation(const std::vector<MatC>& h_list, int n_sites) {
    if (n_sites > max_trace_sites) throw ResourceError("partition trace oracle limited to 3 sites");
    FockSpace fs(n_sites);
    const auto a = dense_majoranas(fs);
    const MatC prod = product_of_exponentials(h_list, fs, a);
    const cplx z = prod.trace();
    const int m = 4 * n_sites;
    MatC g = MatC::Zero(m, m);
    for (int x = 0; x < m; ++x)
        for (int y = 0; y < m; ++y)
            if (x != y) g(x, y) = (a[x] * a[y] * prod).trace() / z;
    return g;
}

}  // namespace hsde
