#include "hsde/validate.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "hsde/girsanov.hpp"
#include "hsde/noise.hpp"
#include "hsde/reduced.hpp"

namespace hsde {

bool InvariantSuite::all_pass() const {
    return std::all_of(rows.begin(), rows.end(), [](const InvariantRow& r) { return r.pass; });
}

namespace {

double maxabs(const MatR& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

struct Recorder {
    std::vector<std::pair<std::string, std::string>> order;
    std::map<std::pair<std::string, std::string>, double> worst;
    void add(const std::string& mode, const std::string& id, double v) {
        const auto key = std::make_pair(mode, id);
        auto it = worst.find(key);
        if (it == worst.end()) {
            order.push_back(key);
            worst[key] = v;
        } else {
            it->second = std::max(it->second, std::isfinite(v) ? v : INFINITY);
        }
    }
    void add_all(const std::string& mode, const std::vector<Violation>& vs) {
        for (const auto& v : vs) add(mode, v.identity, v.value);
    }
};

bool half_filled(const ModelParams& p) { return p.mu == 0.0 && p.r == 0.0 && p.s == 0.0; }

}  // namespace

InvariantSuite run_invariant_suite(const SimConfig& cfg, double tolerance) {
    validate_model(cfg.params);
    validate_scheme(cfg.scheme);
    const auto& p = cfg.params;
    const auto& spec = cfg.lattice;
    const int n = p.n_sites();
    const int eu = p.eps_u();
    const long K = std::lround(cfg.beta / cfg.dt);
    const BipartiteMasks mk = bipartite_masks(spec);
    const bool bip = spec.bipartite();

    std::vector<SymMode> modes;
    switch (cfg.rep) {
        case Representation::w1:
            modes.push_back(SymMode::w1);
            if (half_filled(p) && bip) modes.push_back(SymMode::w1_half);
            break;
        case Representation::w2:
            modes.push_back(SymMode::w2);
            if (p.mu == 0.0 && bip) modes.push_back(SymMode::w2_sparsity);
            if (half_filled(p) && bip) modes.push_back(SymMode::w2_half);
            break;
        case Representation::full: break;
    }
    for (SymMode m : modes) validate_mode(m, p, cfg.scheme, spec);
    const bool reduce_w1 = cfg.rep == Representation::w1 && half_filled(p) && bip;
    const bool reduce_w2 = cfg.rep == Representation::w2 && p.r == 0.0 && p.s == 0.0;

    ModelParams mirrored = p;
    mirrored.u = -p.u;
    HsScheme mirrored_scheme = cfg.scheme;
    for (auto& e : mirrored_scheme.e) e = -e;

    Recorder rec;
    const MatR h0 = assemble_h0(p);
    for (long path = 0; path < cfg.paths; ++path) {
        ReducedState2N s = ReducedState2N::zero(n), sm = ReducedState2N::zero(n);
        ReducedStateW1 r1 = ReducedStateW1::zero(n);
        ReducedStateW2 r2 = ReducedStateW2::zero(n);
        MatC G = MatC::Zero(4 * n, 4 * n);
        for (long k = 0; k < K; ++k) {
            const NoiseDraw draw = draw_noise({cfg.seed, static_cast<std::uint64_t>(path), static_cast<std::uint64_t>(k)},
                                              n, cfg.dt);
            if (cfg.rep == Representation::full) {
                if (!sde_step_full(G, h0, cfg.scheme, draw, cfg.dt, p.u)) throw NumericalError("validate: non-finite G");
                rec.add_all("full", check_reality(G));
                continue;
            }
            if (!sde_step_2N(s, draw, p, cfg.scheme, cfg.dt)) throw NumericalError("validate: non-finite state");
            for (SymMode m : modes) rec.add_all(to_string(m), check_symmetries(s, m, mk, eu));
            if (reduce_w1) {
                sde_step_w1(r1, draw, p, cfg.dt);
                const ReducedState2N e = embed_w1(r1, mk, eu);
                rec.add("w1_half", "reduced stepper = 2N flow",
                        std::max({maxabs(e.rho - s.rho), maxabs(e.Fa - s.Fa), maxabs(e.Fb - s.Fb)}));
                if (p.u != 0.0) {
                    sde_step_2N(sm, draw, mirrored, mirrored_scheme, cfg.dt);
                    const auto blk = [n](const MatR& m) { return MatR(m.topLeftCorner(n, n)); };
                    rec.add("w1_half", "rho_uu, F_uu depend on |u| only",
                            std::max(maxabs(blk(sm.rho) - blk(s.rho)), maxabs(blk(sm.Fa) - blk(s.Fa))));
                }
            }
            if (reduce_w2) {
                sde_step_w2(r2, draw, p, cfg.dt);
                const ReducedState2N e = embed_w2(r2, eu);
                rec.add("w2", "reduced stepper = 2N flow",
                        std::max({maxabs(e.rho - s.rho), maxabs(e.Fa - s.Fa), maxabs(e.Fb - s.Fb)}));
            }
        }
    }
    InvariantSuite out;
    out.tolerance = tolerance;
    out.steps = K;
    out.paths = cfg.paths;
    for (const auto& key : rec.order) {
        const double v = rec.worst[key];
        out.rows.push_back({key.first, key.second, v, v < tolerance});
    }
    return out;
}

}  // namespace hsde
