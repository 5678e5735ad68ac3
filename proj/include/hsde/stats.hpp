#pragma once

#include <cstddef>
#include <vector>

#include "hsde/types.hpp"

namespace hsde {

struct Estimate {
    double value = 0.0;
    double stderr_ = 0.0;
    double n_effective = 0.0;    // Kish effective sample size of the weights
    double imag_residual = 0.0;  // imaginary part of the complex ratio
};

// Fixed-order pairwise summation; the result does not depend on how the
// inputs were produced.
double pairwise_sum(const double* x, std::size_t n);
cplx pairwise_sum(const cplx* x, std::size_t n);

// Plain mean with stderr sqrt(var / n).
Estimate mean_estimate(const std::vector<double>& x);

// Ratio sum_i w_i v_i / sum_i w_i with w_i = exp(log_w_i). Weights are
// rescaled by the largest real log-weight before exponentiation. The stderr is
// the leave-one-out jackknife over paths.
Estimate ratio_estimate(const std::vector<cplx>& log_w, const std::vector<cplx>& values);
Estimate ratio_estimate(const std::vector<double>& log_w, const std::vector<double>& values);

// Two-level extrapolation 2 R_fine - R_coarse of paired ratio estimates (path
// i of both samples driven by the same Brownian path), jackknifed jointly.
// n_effective is the smaller of the two.
Estimate extrapolated_ratio(const std::vector<cplx>& log_w_fine, const std::vector<cplx>& values_fine,
                            const std::vector<cplx>& log_w_coarse, const std::vector<cplx>& values_coarse);

// Mean of exp(log_w); returned on the log scale:
// log_mean = log |mean|, rel_stderr = stderr / |mean|.
struct LogMean {
    double log_mean = 0.0;
    double rel_stderr = 0.0;
    double phase = 0.0;  // arg of the complex mean
};
LogMean log_mean_exp(const std::vector<cplx>& log_w);
LogMean log_mean_exp(const std::vector<double>& log_w);

}  // namespace hsde
