#pragma once

#include <utility>
#include <vector>

#include <Eigen/Sparse>

#include "hsde/model.hpp"
#include "hsde/types.hpp"

namespace hsde {

using SpMat = Eigen::SparseMatrix<double>;
using SpMatC = Eigen::SparseMatrix<cplx>;

// Occupation basis over modes m = 2*site + spin (spin 0 = up, 1 = down).
// Bit m of a basis index is n_m; c_m carries the Jordan-Wigner sign
// (-1)^(number of occupied modes below m).
class FockSpace {
public:
    static constexpr int max_sites = 8;

    explicit FockSpace(int n_sites);

    int n_sites() const { return n_sites_; }
    int n_modes() const { return 2 * n_sites_; }
    Eigen::Index dim() const { return dim_; }

    const SpMat& c(int site, int spin) const { return c_[2 * site + spin]; }
    SpMat cdag(int site, int spin) const { return SpMat(c(site, spin).transpose()); }
    SpMat number(int site, int spin) const;
    SpMat identity() const;

    // Majorana vector (a_up, a_dn, b_up, b_dn), each block indexed by site.
    // a = c + c^+, b = (c - c^+)/i.
    SpMatC majorana(int k) const;

private:
    int n_sites_;
    Eigen::Index dim_;
    std::vector<SpMat> c_;
};

// H = H_tot - Tr[eps - mu], with the symmetrized interaction
// u sum_j (n_up - 1/2)(n_dn - 1/2).
SpMat build_fock_hamiltonian(const FockSpace& fs, const ModelParams& p);

// The same operator assembled from Majorana bilinears and quartics.
SpMatC build_fock_hamiltonian_majorana(const FockSpace& fs, const ModelParams& p);

// Full eigendecomposition, block by block along the connected components of
// the Hamiltonian's sparsity graph.
class EdSolver {
public:
    explicit EdSolver(const SpMat& H, Eigen::Index max_block = 8192);

    double ground_energy() const { return e_min_; }
    double energy(double beta) const;
    // log Tr e^{-beta H}
    double log_partition(double beta) const;
    double thermal(const SpMat& op, double beta) const;
    std::vector<double> spectrum() const;

private:
    struct Block {
        std::vector<Eigen::Index> idx;
        VecR evals;
        MatR evecs;
    };
    std::vector<Block> blocks_;
    std::vector<int> block_of_;
    std::vector<Eigen::Index> local_of_;
    double e_min_ = 0.0;

    std::vector<VecR> weights(double beta, double& z) const;
};

double ed_expectation(const EdSolver& solver, double beta);

struct Correlations {
    double spin = 0.0;
    double pair = 0.0;
};

// C_spin = <(n_iu - n_id)(n_ju - n_jd)>, C_pair = <c+_iu c+_id c_jd c_ju>.
SpMat spin_correlation_operator(const FockSpace& fs, int i, int j);
SpMat pair_correlation_operator(const FockSpace& fs, int i, int j);
Correlations ed_correlations(const FockSpace& fs, const EdSolver& solver, double beta, int i, int j);

// Tr_F prod_l exp(-H_l) with H_l = (1/4) a h_l a over the Majorana vector a,
// factors ordered left to right as in the list.
cplx ed_partition_trace(const std::vector<MatC>& h_list, int n_sites);

// Tr_F[a_x a_y prod_l exp(-H_l)] / Tr_F[prod_l exp(-H_l)] for x != y, zero
// diagonal.
MatC ed_majorana_correlation(const std::vector<MatC>& h_list, int n_sites);

}  // namespace hsde
