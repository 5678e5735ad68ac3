#include "hsde/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hsde {

namespace {

template <class T>
T psum(const T* x, std::size_t n) {
    if (n <= 8) {
        T s{};
        for (std::size_t i = 0; i < n; ++i) s += x[i];
        return s;
    }
    const std::size_t h = n / 2;
    return psum(x, h) + psum(x + h, n - h);
}

template <class T>
double max_real(const std::vector<T>& v) {
    double m = -std::numeric_limits<double>::infinity();
    for (const auto& x : v) m = std::max(m, std::real(x));
    return m;
}

}  // namespace

double pairwise_sum(const double* x, std::size_t n) { return psum(x, n); }
cplx pairwise_sum(const cplx* x, std::size_t n) { return psum(x, n); }

Estimate mean_estimate(const std::vector<double>& x) {
    Estimate e;
    const std::size_t n = x.size();
    if (n == 0) return e;
    e.value = pairwise_sum(x.data(), n) / static_cast<double>(n);
    std::vector<double> d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = (x[i] - e.value) * (x[i] - e.value);
    e.stderr_ = n > 1 ? std::sqrt(pairwise_sum(d.data(), n) / static_cast<double>(n - 1) / n) : 0.0;
    e.n_effective = static_cast<double>(n);
    return e;
}

namespace {

// Full-sample ratio and its leave-one-out replicas.
struct RatioParts {
    cplx value;
    double n_effective = 0.0;
    std::vector<double> loo;
};

RatioParts ratio_parts(const std::vector<cplx>& log_w, const std::vector<cplx>& values) {
    if (log_w.size() != values.size()) throw ConfigError("ratio_estimate: size mismatch");
    const std::size_t n = log_w.size();
    const double shift = max_real(log_w);
    std::vector<cplx> w(n), wv(n);
    std::vector<double> w2(n), wa(n);
    for (std::size_t i = 0; i < n; ++i) {
        w[i] = std::exp(log_w[i] - shift);
        wv[i] = w[i] * values[i];
        w2[i] = std::norm(w[i]);
        wa[i] = std::abs(w[i]);
    }
    const cplx A = pairwise_sum(wv.data(), n), B = pairwise_sum(w.data(), n);
    // phases cancelling to rounding level count as a vanishing sum
    if (!(std::abs(B) > 1e-12 * pairwise_sum(wa.data(), n)) || !std::isfinite(std::abs(B)))
        throw NumericalError("ratio_estimate: vanishing weight sum");
    RatioParts out;
    out.value = A / B;
    out.n_effective = std::norm(B) / pairwise_sum(w2.data(), n);
    if (n > 1) {
        out.loo.resize(n);
        for (std::size_t i = 0; i < n; ++i) out.loo[i] = ((A - wv[i]) / (B - w[i])).real();
    }
    return out;
}

double jackknife_stderr(std::vector<double> r) {
    const std::size_t n = r.size();
    if (n < 2) return 0.0;
    const double rbar = pairwise_sum(r.data(), n) / static_cast<double>(n);
    for (auto& x : r) x = (x - rbar) * (x - rbar);
    return std::sqrt(pairwise_sum(r.data(), n) * static_cast<double>(n - 1) / n);
}

}  // namespace

Estimate ratio_estimate(const std::vector<cplx>& log_w, const std::vector<cplx>& values) {
    Estimate e;
    if (log_w.empty()) return e;
    const RatioParts r = ratio_parts(log_w, values);
    e.value = r.value.real();
    e.imag_residual = r.value.imag();
    e.n_effective = r.n_effective;
    e.stderr_ = jackknife_stderr(r.loo);
    return e;
}

Estimate extrapolated_ratio(const std::vector<cplx>& log_w_fine, const std::vector<cplx>& values_fine,
                            const std::vector<cplx>& log_w_coarse, const std::vector<cplx>& values_coarse) {
    if (log_w_fine.size() != log_w_coarse.size()) throw ConfigError("extrapolated_ratio: size mismatch");
    Estimate e;
    if (log_w_fine.empty()) return e;
    const RatioParts f = ratio_parts(log_w_fine, values_fine);
    const RatioParts c = ratio_parts(log_w_coarse, values_coarse);
    const cplx v = 2.0 * f.value - c.value;
    e.value = v.real();
    e.imag_residual = v.imag();
    e.n_effective = std::min(f.n_effective, c.n_effective);
    std::vector<double> loo(f.loo.size());
    for (std::size_t i = 0; i < loo.size(); ++i) loo[i] = 2.0 * f.loo[i] - c.loo[i];
    e.stderr_ = jackknife_stderr(loo);
    return e;
}

Estimate ratio_estimate(const std::vector<double>& log_w, const std::vector<double>& values) {
    std::vector<cplx> lw(log_w.begin(), log_w.end()), v(values.begin(), values.end());
    return ratio_estimate(lw, v);
}

LogMean log_mean_exp(const std::vector<cplx>& log_w) {
    LogMean out;
    const std::size_t n = log_w.size();
    if (n == 0) return out;
    const double shift = max_real(log_w);
    std::vector<cplx> w(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = std::exp(log_w[i] - shift);
    const cplx m = pairwise_sum(w.data(), n) / static_cast<double>(n);
    std::vector<double> d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = std::norm(w[i] - m);
    const double se = n > 1 ? std::sqrt(pairwise_sum(d.data(), n) / static_cast<double>(n - 1) / n) : 0.0;
    out.log_mean = std::log(std::abs(m)) + shift;
    out.rel_stderr = se / std::abs(m);
    out.phase = std::arg(m);
    return out;
}

LogMean log_mean_exp(const std::vector<double>& log_w) {
    return log_mean_exp(std::vector<cplx>(log_w.begin(), log_w.end()));
}

}  // namespace hsde
