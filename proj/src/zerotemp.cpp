#include "hsde/zerotemp.hpp"

#include <cmath>

#include "hsde/parallel.hpp"
#include "hsde/reduced_kernels.hpp"

namespace hsde {

AnsatzKind parse_ansatz(const std::string& s) {
    if (s == "staggered") return AnsatzKind::staggered;
    if (s == "uniform") return AnsatzKind::uniform;
    throw ConfigError("unknown ansatz '" + s + "'");
}

std::string to_string(AnsatzKind k) { return k == AnsatzKind::staggered ? "staggered" : "uniform"; }

VecR FieldAnsatz::realize(const LatticeSpec& spec) const {
    const int n = spec.n_sites();
    VecR v = VecR::Constant(n, amplitude);
    if (kind == AnsatzKind::uniform) return v;
    if (!spec.bipartite()) throw ConfigError("staggered ansatz requires a bipartite lattice");
    for (int j = 0; j < n; ++j)
        if (spec.parity(j)) v(j) = -amplitude;
    return v;
}

namespace {

void check_horizon(double T, double dt) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("dt must be positive");
    if (!(T >= 0.0) || !std::isfinite(T)) throw ConfigError("T must be non-negative");
}

}  // namespace

TrajectoryW1 ode_trajectory_w1(const FieldAnsatz& field, const LatticeSpec& spec, const ModelParams& p, double T,
                               double dt) {
    check_horizon(T, dt);
    if (p.mu != 0.0 || p.r != 0.0 || p.s != 0.0) throw ConfigError("w1 flow requires mu = r = s = 0");
    const int n = p.n_sites();
    const long K = std::lround(T / dt);
    const double au = std::abs(p.u);
    const VecR dx = field.realize(spec) * dt;
    TrajectoryW1 out;
    out.final_state = ReducedStateW1::zero(n);
    MatR& rho = out.final_state.rho_uu;
    MatR& F = out.final_state.F_uu;
    kernels::W1Work<MatR> w;
    w.resize(n);
    out.energy.reserve(K + 1);
    for (long k = 0; k <= K; ++k) {
        out.energy.push_back(kernels::w1_energy(rho, p.eps, au));
        if (k == K) break;
        kernels::w1_step(rho, F, p.eps, au, dx, dt, w);
        if (!rho.allFinite() || !F.allFinite()) throw NumericalError("w1 flow: non-finite state");
    }
    return out;
}

TrajectoryW2 ode_trajectory_w2(const FieldAnsatz& field, const LatticeSpec& spec, const ModelParams& p, double T,
                               double dt) {
    check_horizon(T, dt);
    if (p.r != 0.0 || p.s != 0.0) throw ConfigError("w2 flow requires r = s = 0");
    const int n = p.n_sites();
    const long K = std::lround(T / dt);
    const MatR em = p.eps - p.mu * MatR::Identity(n, n);
    const VecR dy = field.realize(spec) * dt;
    TrajectoryW2 out;
    out.final_state = ReducedStateW2::zero(n);
    auto& s = out.final_state;
    kernels::W2Work<MatR> w;
    w.resize(n);
    out.energy.reserve(K + 1);
    for (long k = 0; k <= K; ++k) {
        out.energy.push_back(kernels::w2_energy(s.rho_uu, s.rho_ud, s.F_ud, em, p.u));
        if (k == K) break;
        kernels::w2_step(s.rho_uu, s.rho_ud, s.F_uu, s.F_ud, em, p.u, dy, dt, w);
        if (!s.rho_uu.allFinite() || !s.rho_ud.allFinite() || !s.F_uu.allFinite() || !s.F_ud.allFinite())
            throw NumericalError("w2 flow: non-finite state");
    }
    return out;
}

namespace {

struct Eval {
    double v0 = 0.0;
    double final_energy = 0.0;
};

Eval evaluate(const FieldAnsatz& field, const ZeroTempConfig& cfg) {
    if (cfg.params.n_sites() != cfg.lattice.n_sites()) throw ConfigError("hopping matrix does not match lattice");
    std::vector<double> W;
    if (cfg.rep == Representation::w1)
        W = ode_trajectory_w1(field, cfg.lattice, cfg.params, cfg.T, cfg.dt).energy;
    else if (cfg.rep == Representation::w2)
        W = ode_trajectory_w2(field, cfg.lattice, cfg.params, cfg.T, cfg.dt).energy;
    else
        throw ConfigError("zero-temperature flow requires representation w1 or w2");
    const double n = cfg.params.n_sites();
    Eval e;
    e.final_energy = W.back() / n;
    if (W.size() < 2) {
        e.v0 = 0.5 * field.amplitude * field.amplitude + e.final_energy;
        return e;
    }
    W.pop_back();
    const double S = pairwise_sum(W.data(), W.size()) * cfg.dt;
    const double T = cfg.dt * static_cast<double>(W.size());
    e.v0 = 0.5 * field.amplitude * field.amplitude + S / (T * n);
    return e;
}

}  // namespace

double v0_functional(const FieldAnsatz& field, const ZeroTempConfig& cfg) { return evaluate(field, cfg).v0; }

V0Result minimize_scalar_ansatz(const ZeroTempConfig& cfg, const std::vector<double>& grid) {
    if (grid.empty()) throw ConfigError("amplitude grid is empty");
    if (cfg.kind == AnsatzKind::staggered && !cfg.lattice.bipartite())
        throw ConfigError("staggered ansatz requires a bipartite lattice");
    std::vector<Eval> ev(grid.size());
    parallel_ranges(grid.size(), [&](std::size_t b, std::size_t e, int) {
        for (std::size_t i = b; i < e; ++i) ev[i] = evaluate(FieldAnsatz{cfg.kind, grid[i]}, cfg);
    });
    V0Result r;
    r.amplitude_grid = grid;
    std::size_t best = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        r.v0_values.push_back(ev[i].v0);
        if (ev[i].v0 < ev[best].v0) best = i;
    }
    r.argmin = grid[best];
    r.energy = ev[best].final_energy;
    return r;
}

std::vector<double> amplitude_grid(double lo, double hi, double step) {
    if (!(step > 0.0) || hi < lo) throw ConfigError("invalid amplitude grid");
    const long m = std::lround(std::floor((hi - lo) / step + 1e-9));
    std::vector<double> g;
    for (long i = 0; i <= m; ++i) g.push_back(lo + static_cast<double>(i) * step);
    return g;
}

}  // namespace hsde
