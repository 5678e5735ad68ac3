#include "hsde/model.hpp"

#include <cmath>

namespace hsde {

ModelParams make_model(const LatticeSpec& spec, double t, double mu, double r, double s, double u) {
    ModelParams p;
    p.eps = hopping_matrix(spec, t);
    p.mu = mu;
    p.r = r;
    p.s = s;
    p.u = u;
    return p;
}

void validate_model(const ModelParams& p) {
    if (p.eps.rows() != p.eps.cols() || p.eps.rows() == 0)
        throw ConfigError("hopping matrix must be square and nonempty");
    if ((p.eps - p.eps.transpose()).cwiseAbs().maxCoeff() > 0.0)
        throw ConfigError("hopping matrix must be symmetric");
    if (!std::isfinite(p.mu) || !std::isfinite(p.r) || !std::isfinite(p.s) || !std::isfinite(p.u))
        throw ConfigError("model parameters must be finite");
}

cplx HsScheme::nu(int i) const { return std::sqrt(cplx(w[i] * e[i], 0.0)); }

HsScheme HsScheme::pure(int which, int sign) {
    HsScheme s;
    s.w = {0.0, 0.0, 0.0};
    s.w[which - 1] = 1.0;
    s.e = {sign, sign, sign};
    return s;
}

void validate_scheme(const HsScheme& s) {
    for (int i = 0; i < 3; ++i) {
        if (!std::isfinite(s.w[i])) throw ConfigError("HS weights must be finite");
        if (s.e[i] != 1 && s.e[i] != -1) throw ConfigError("HS signs must be +1 or -1");
    }
    if (std::abs(s.w[0] + s.w[1] + s.w[2] - 1.0) > 1e-12) throw ConfigError("HS weights must sum to 1");
}

}  // namespace hsde
