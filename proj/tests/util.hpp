#pragma once

#include <random>

#include "hsde/types.hpp"

namespace hsde::test {

inline MatR random_matrix(std::mt19937_64& g, int n, double scale = 1.0) {
    std::normal_distribution<double> d(0.0, scale);
    MatR m(n, n);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = d(g);
    return m;
}

inline MatR random_skew(std::mt19937_64& g, int n, double scale = 1.0) {
    const MatR m = random_matrix(g, n, scale);
    return 0.5 * (m - m.transpose());
}

inline MatR random_sym(std::mt19937_64& g, int n, double scale = 1.0) {
    const MatR m = random_matrix(g, n, scale);
    return 0.5 * (m + m.transpose());
}

inline MatC random_skew_c(std::mt19937_64& g, int n, double scale = 1.0) {
    const MatC m = random_matrix(g, n, scale).cast<cplx>() + cplx(0.0, 1.0) * random_matrix(g, n, scale).cast<cplx>();
    return 0.5 * (m - m.transpose());
}

inline double maxabs(const MatR& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }
inline double maxabs(const MatC& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace hsde::test
