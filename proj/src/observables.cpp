#include "hsde/observables.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "hsde/girsanov.hpp"
#include "hsde/noise.hpp"
#include "hsde/parallel.hpp"
#include "hsde/reduced.hpp"
#include "hsde/reduced_kernels.hpp"

namespace hsde {

Representation parse_representation(const std::string& s) {
    if (s == "full") return Representation::full;
    if (s == "w1") return Representation::w1;
    if (s == "w2") return Representation::w2;
    throw ConfigError("unknown representation '" + s + "'");
}

std::string to_string(Representation r) {
    switch (r) {
        case Representation::full: return "full";
        case Representation::w1: return "w1";
        default: return "w2";
    }
}

void validate_sim(const SimConfig& cfg) {
    validate_model(cfg.params);
    validate_scheme(cfg.scheme);
    if (cfg.params.n_sites() != cfg.lattice.n_sites()) throw ConfigError("hopping matrix does not match lattice");
    if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt)) throw ConfigError("dt must be positive");
    if (!(cfg.beta >= 0.0) || !std::isfinite(cfg.beta)) throw ConfigError("beta must be non-negative");
    if (cfg.paths < 1) throw ConfigError("paths must be positive");
    for (double b : cfg.checkpoints)
        if (!(b >= 0.0) || b > cfg.beta + 1e-12) throw ConfigError("checkpoints must lie in [0, beta]");
    const auto& p = cfg.params;
    const auto& sc = cfg.scheme;
    const int eu = p.eps_u();
    const bool half = p.mu == 0.0 && p.r == 0.0 && p.s == 0.0;
    switch (cfg.rep) {
        case Representation::full: break;
        case Representation::w1:
            if (sc.w[0] != 1.0 || sc.e[0] != eu) throw ConfigError("representation w1 requires w1 = 1 and e1 = sign(u)");
            if (!half) throw ConfigError("representation w1 requires mu = r = s = 0");
            if (!cfg.lattice.bipartite()) throw ConfigError("representation w1 requires a bipartite lattice");
            break;
        case Representation::w2:
            if (sc.w[1] != 1.0 || sc.e[1] != eu) throw ConfigError("representation w2 requires w2 = 1 and e2 = sign(u)");
            if (p.r != 0.0 || p.s != 0.0) throw ConfigError("representation w2 requires r = s = 0");
            break;
    }
    if (cfg.correlations) {
        if (cfg.rep == Representation::full) throw ConfigError("correlations require representation w1 or w2");
        if (!half || !cfg.lattice.bipartite())
            throw ConfigError("correlation estimators require half filling on a bipartite lattice");
        if (cfg.corr_ref < 0 || cfg.corr_ref >= p.n_sites()) throw ConfigError("corr_ref out of range");
    }
    if (cfg.max_fail_fraction < 0.0) throw ConfigError("max_fail_fraction must be non-negative");
}

std::vector<long> checkpoint_steps(const SimConfig& cfg) {
    std::vector<double> b = cfg.checkpoints;
    if (b.empty()) b.push_back(cfg.beta);
    std::vector<long> k;
    for (double x : b) k.push_back(std::lround(x / cfg.dt));
    std::sort(k.begin(), k.end());
    k.erase(std::unique(k.begin(), k.end()), k.end());
    return k;
}

double spin_corr_w1(const MatR& rho, const MatR& F, int i, int j, int eu) {
    if (i == j) return 0.5 * (1.0 + eu * rho(j, j) * rho(j, j));
    const double c = 1.0 + eu;
    return 0.5 * (F(i, j) * F(i, j) - rho(i, j) * rho(i, j) + 0.5 * c * c * rho(i, i) * rho(j, j));
}

double pair_corr_w1(const MatR& rho, const MatR& F, int i, int j, int eu, bool same) {
    if (i == j) return 0.25 * (1.0 + rho(j, j)) * (1.0 - eu * rho(j, j));
    const double chi = same ? 1.0 : -static_cast<double>(eu);
    return 0.25 * chi * (F(i, j) + rho(i, j)) * (F(i, j) - eu * rho(i, j));
}

double spin_corr_w2(const MatR& ruu, const MatR& rud, const MatR& fuu, const MatR& fud, int i, int j, int eu) {
    if (i == j) return 0.5 * (1.0 + eu * rud(j, j) * rud(j, j));
    return 0.5 * (fuu(i, j) * fuu(i, j) - ruu(i, j) * ruu(i, j) - eu * fud(i, j) * fud(i, j) +
                  eu * rud(i, j) * rud(i, j));
}

double pair_corr_w2(const MatR& ruu, const MatR& rud, const MatR& fuu, const MatR& fud, int i, int j, int eu) {
    if (i == j) return 0.25 * (1.0 - eu * rud(j, j) * rud(j, j));
    return 0.25 * (fuu(i, j) * fuu(i, j) + ruu(i, j) * ruu(i, j) -
                   0.5 * (1.0 + eu) * (fud(i, j) * fud(i, j) + rud(i, j) * rud(i, j)) +
                   0.5 * (1.0 - eu) * rud(i, i) * rud(j, j));
}

namespace {

// Per-path output slots, indexed by path id.
struct Slots {
    std::size_t np = 0;
    int n = 0;
    bool corr = false;
    std::vector<std::vector<cplx>> action, energy;
    std::vector<std::vector<double>> density, spin, pair;

    void init(std::size_t paths, int sites, std::size_t nck, bool c) {
        np = paths;
        n = sites;
        corr = c;
        action.assign(nck, std::vector<cplx>(paths));
        energy.assign(nck, std::vector<cplx>(paths));
        density.assign(nck, std::vector<double>(paths));
        if (corr) {
            spin.assign(nck, std::vector<double>(paths * sites));
            pair.assign(nck, std::vector<double>(paths * sites));
        }
    }
};

// Integrates one path over K steps of size dt, recording at the steps in ck.
// P provides reset(), energy(), step(z) with z standard normals for the
// P::slots() noise slots, density() and correlations(ref, j, spin, pair).
// noise(k, z) fills the normals of step k.
template <class P, class Noise>
bool run_one(P& path, const SimConfig& cfg, const std::vector<long>& ck, double dt, std::size_t p,
             const Noise& noise, std::vector<double>& z, Slots& out) {
    const long K = ck.back();
    path.reset();
    cplx S = 0.0;
    std::size_t c = 0;
    for (long k = 0; k <= K; ++k) {
        const cplx W = path.energy();
        if (!std::isfinite(W.real()) || !std::isfinite(W.imag())) return false;
        if (k == ck[c]) {
            out.action[c][p] = S;
            out.energy[c][p] = W;
            out.density[c][p] = path.density();
            if (out.corr) {
                for (int j = 0; j < out.n; ++j) {
                    double sp, pr;
                    path.correlations(cfg.corr_ref, j, sp, pr);
                    out.spin[c][p * out.n + j] = sp;
                    out.pair[c][p * out.n + j] = pr;
                }
            }
            ++c;
        }
        if (k == K) break;
        S += W * dt;
        noise(k, z.data());
        if (!path.step(z.data())) return false;
    }
    return true;
}

template <class P>
void run_range(const SimConfig& cfg, const std::vector<long>& ck, std::size_t b, std::size_t e, Slots& fine,
               Slots* coarse, std::vector<char>& failed) {
    const int slot0 = P::slot0(cfg.params.n_sites());
    const int ns = P::slots(cfg.params.n_sites());
    std::vector<double> z(ns), z2(ns);
    if (!coarse) {
        P path(cfg, cfg.dt);
        for (std::size_t p = b; p < e; ++p) {
            auto draw = [&](long k, double* out) {
                counter_normals(StreamKey{cfg.seed, p, static_cast<std::uint64_t>(k)}, slot0, ns, out);
            };
            failed[p] = run_one(path, cfg, ck, cfg.dt, p, draw, z, fine) ? 0 : 1;
        }
        return;
    }
    // Coupled pair: the fine path takes steps dt/2 with the normals of
    // counter steps 2k, 2k+1; the coarse path takes step k of size dt with
    // their normalized sum, i.e. the same Brownian increment.
    const double h = 0.5 * cfg.dt;
    std::vector<long> ckf(ck.size());
    for (std::size_t i = 0; i < ck.size(); ++i) ckf[i] = 2 * ck[i];
    P pf(cfg, h), pc(cfg, cfg.dt);
    const double r2 = 1.0 / std::sqrt(2.0);
    for (std::size_t p = b; p < e; ++p) {
        auto draw_f = [&](long k, double* out) {
            counter_normals(StreamKey{cfg.seed, p, static_cast<std::uint64_t>(k)}, slot0, ns, out);
        };
        auto draw_c = [&](long k, double* out) {
            draw_f(2 * k, out);
            draw_f(2 * k + 1, z2.data());
            for (int i = 0; i < ns; ++i) out[i] = r2 * (out[i] + z2[i]);
        };
        const bool ok = run_one(pf, cfg, ckf, h, p, draw_f, z, fine) && run_one(pc, cfg, ck, cfg.dt, p, draw_c, z, *coarse);
        failed[p] = ok ? 0 : 1;
    }
}

template <class M>
struct W1Path {
    static constexpr int NS = M::RowsAtCompileTime;
    using V = Eigen::Matrix<double, NS, 1>;
    const SimConfig& cfg;
    int n;
    int eu;
    double abs_u, dt, sdt;
    M eps, rho, F;
    V noise;
    kernels::W1Work<M> w;
    MatR mask;

    static int slot0(int) { return 0; }
    static int slots(int n) { return n; }

    W1Path(const SimConfig& c, double step)
        : cfg(c), n(c.params.n_sites()), eu(c.params.eps_u()), abs_u(std::abs(c.params.u)), dt(step),
          sdt(std::sqrt(step)) {
        eps = c.params.eps;
        rho.resize(n, n);
        F.resize(n, n);
        noise.resize(n);
        w.resize(n);
        mask = bipartite_masks(c.lattice).chi_on;
    }
    void reset() {
        rho.setZero();
        F.setZero();
    }
    cplx energy() const { return kernels::w1_energy(rho, eps, abs_u); }
    bool step(const double* z) {
        noise = sdt * Eigen::Map<const V>(z, n);
        kernels::w1_step(rho, F, eps, abs_u, noise, dt, w);
        return rho.allFinite() && F.allFinite();
    }
    double density() const { return 1.0 + 0.5 * (1.0 - eu) * rho.diagonal().mean(); }
    void correlations(int i, int j, double& sp, double& pr) const {
        const MatR r = rho, f = F;
        sp = spin_corr_w1(r, f, i, j, eu);
        pr = pair_corr_w1(r, f, i, j, eu, mask(i, j) != 0.0);
    }
};

template <class M>
struct W2Path {
    static constexpr int NS = M::RowsAtCompileTime;
    using V = Eigen::Matrix<double, NS, 1>;
    const SimConfig& cfg;
    int n;
    int eu;
    double u, dt, sdt;
    M em, ruu, rud, fuu, fud;
    V noise;
    kernels::W2Work<M> w;

    static int slot0(int n) { return n; }
    static int slots(int n) { return n; }

    W2Path(const SimConfig& c, double step)
        : cfg(c), n(c.params.n_sites()), eu(c.params.eps_u()), u(c.params.u), dt(step), sdt(std::sqrt(step)) {
        em = c.params.eps - c.params.mu * MatR::Identity(n, n);
        ruu.resize(n, n);
        rud.resize(n, n);
        fuu.resize(n, n);
        fud.resize(n, n);
        noise.resize(n);
        w.resize(n);
    }
    void reset() {
        ruu.setZero();
        rud.setZero();
        fuu.setZero();
        fud.setZero();
    }
    cplx energy() const { return kernels::w2_energy(ruu, rud, fud, em, u); }
    bool step(const double* z) {
        noise = sdt * Eigen::Map<const V>(z, n);
        kernels::w2_step(ruu, rud, fuu, fud, em, u, noise, dt, w);
        return ruu.allFinite() && rud.allFinite() && fuu.allFinite() && fud.allFinite();
    }
    double density() const { return 1.0 + ruu.diagonal().mean(); }
    void correlations(int i, int j, double& sp, double& pr) const {
        const MatR a = ruu, b = rud, c = fuu, d = fud;
        sp = spin_corr_w2(a, b, c, d, i, j, eu);
        pr = pair_corr_w2(a, b, c, d, i, j, eu);
    }
};

struct FullPath {
    const SimConfig& cfg;
    int n;
    double dt;
    MatR h0;
    MatC G;
    NoiseDraw draw;

    static int slot0(int) { return 0; }
    static int slots(int n) { return 3 * n; }

    FullPath(const SimConfig& c, double step) : cfg(c), n(c.params.n_sites()), dt(step), h0(assemble_h0(c.params)) {
        draw.dt = step;
    }
    void reset() { G = MatC::Zero(4 * n, 4 * n); }
    cplx energy() const { return energy_W(G, cfg.params); }
    bool step(const double* z) {
        draw.phi = Eigen::Map<const VecR>(z, n);
        draw.xi = Eigen::Map<const VecR>(z + n, n);
        draw.theta = Eigen::Map<const VecR>(z + 2 * n, n);
        return sde_step_full(G, h0, cfg.scheme, draw, dt, cfg.params.u);
    }
    double density() const {
        const auto ab = G.topRightCorner(2 * n, 2 * n);
        return 1.0 + 0.5 * (ab.topLeftCorner(n, n).diagonal() + ab.bottomRightCorner(n, n).diagonal()).real().mean();
    }
    void correlations(int, int, double& sp, double& pr) const { sp = pr = 0.0; }
};

template <class P>
void run_all(const SimConfig& cfg, const std::vector<long>& ck, Slots& fine, Slots* coarse, std::vector<char>& failed) {
    parallel_ranges(fine.np, [&](std::size_t b, std::size_t e, int) { run_range<P>(cfg, ck, b, e, fine, coarse, failed); });
}

template <int N>
void run_fixed(const SimConfig& cfg, const std::vector<long>& ck, Slots& fine, Slots* coarse, std::vector<char>& failed) {
    using M = Eigen::Matrix<double, N, N>;
    if (cfg.rep == Representation::w1)
        run_all<W1Path<M>>(cfg, ck, fine, coarse, failed);
    else
        run_all<W2Path<M>>(cfg, ck, fine, coarse, failed);
}

void dispatch(const SimConfig& cfg, const std::vector<long>& ck, Slots& fine, Slots* coarse, std::vector<char>& failed) {
    if (cfg.rep == Representation::full) return run_all<FullPath>(cfg, ck, fine, coarse, failed);
    switch (cfg.params.n_sites()) {
        case 1: return run_fixed<1>(cfg, ck, fine, coarse, failed);
        case 2: return run_fixed<2>(cfg, ck, fine, coarse, failed);
        case 4: return run_fixed<4>(cfg, ck, fine, coarse, failed);
        case 6: return run_fixed<6>(cfg, ck, fine, coarse, failed);
        default: break;
    }
    if (cfg.rep == Representation::w1)
        run_all<W1Path<MatR>>(cfg, ck, fine, coarse, failed);
    else
        run_all<W2Path<MatR>>(cfg, ck, fine, coarse, failed);
}

std::vector<CheckpointData> collect(const Slots& out, const std::vector<long>& ck, double dt,
                                    const std::vector<long>& ids, bool corr, int n) {
    std::vector<CheckpointData> res;
    for (std::size_t c = 0; c < ck.size(); ++c) {
        CheckpointData d;
        d.beta = ck[c] * dt;
        for (long p : ids) {
            d.action.push_back(out.action[c][p]);
            d.energy.push_back(out.energy[c][p]);
            d.density.push_back(out.density[c][p]);
            if (corr)
                for (int j = 0; j < n; ++j) {
                    d.spin.push_back(out.spin[c][p * n + j]);
                    d.pair.push_back(out.pair[c][p * n + j]);
                }
        }
        res.push_back(std::move(d));
    }
    return res;
}

}  // namespace

PathEnsemble run_paths(const SimConfig& cfg) {
    validate_sim(cfg);
    const std::vector<long> ck = checkpoint_steps(cfg);
    const int n = cfg.params.n_sites();
    const std::size_t np = static_cast<std::size_t>(cfg.paths);
    Slots fine, coarse;
    fine.init(np, n, ck.size(), cfg.correlations);
    if (cfg.extrapolate) coarse.init(np, n, ck.size(), cfg.correlations);
    std::vector<char> failed(np, 0);
    dispatch(cfg, ck, fine, cfg.extrapolate ? &coarse : nullptr, failed);

    PathEnsemble ens;
    ens.cfg = cfg;
    for (std::size_t p = 0; p < np; ++p) {
        if (failed[p])
            ++ens.n_failed;
        else
            ens.path_ids.push_back(static_cast<long>(p));
    }
    if (static_cast<double>(ens.n_failed) > cfg.max_fail_fraction * static_cast<double>(np))
        throw NumericalError("run_paths: " + std::to_string(ens.n_failed) + " of " + std::to_string(np) +
                             " paths failed (non-finite state)");
    if (cfg.extrapolate) {
        std::vector<long> ckf(ck.size());
        for (std::size_t c = 0; c < ck.size(); ++c) ckf[c] = 2 * ck[c];
        ens.checkpoints = collect(fine, ckf, 0.5 * cfg.dt, ens.path_ids, cfg.correlations, n);
        ens.coarse = collect(coarse, ck, cfg.dt, ens.path_ids, cfg.correlations, n);
    } else {
        ens.checkpoints = collect(fine, ck, cfg.dt, ens.path_ids, cfg.correlations, n);
    }
    return ens;
}

namespace {

const CheckpointData& at(const PathEnsemble& ens, std::size_t c) {
    if (c >= ens.checkpoints.size()) throw ConfigError("checkpoint index out of range");
    if (ens.path_ids.empty()) throw NumericalError("empty ensemble");
    return ens.checkpoints[c];
}

std::vector<cplx> neg(const std::vector<cplx>& s) {
    std::vector<cplx> o(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) o[i] = -s[i];
    return o;
}

// Weighted ratio of a pathwise value; with a coarse companion the
// extrapolation 2 R(dt/2) - R(dt) with a joint jackknife.
template <class F>
Estimate weighted(const PathEnsemble& ens, std::size_t c, F value) {
    const auto& d = at(ens, c);
    std::vector<cplx> v(d.action.size());
    for (std::size_t p = 0; p < v.size(); ++p) v[p] = value(d, p);
    if (ens.coarse.empty()) return ratio_estimate(neg(d.action), v);
    const auto& dc = ens.coarse[c];
    std::vector<cplx> vc(v.size());
    for (std::size_t p = 0; p < v.size(); ++p) vc[p] = value(dc, p);
    return extrapolated_ratio(neg(d.action), v, neg(dc.action), vc);
}

}  // namespace

Estimate girsanov_energy(const PathEnsemble& ens, std::size_t c) {
    const double n = ens.cfg.params.n_sites();
    return weighted(ens, c, [n](const CheckpointData& d, std::size_t p) { return d.energy[p] / n; });
}

LogMean partition_ratio(const PathEnsemble& ens, std::size_t c) { return log_mean_exp(neg(at(ens, c).action)); }

Estimate mean_density(const PathEnsemble& ens, std::size_t c) {
    return weighted(ens, c, [](const CheckpointData& d, std::size_t p) { return cplx(d.density[p]); });
}

namespace {

Estimate corr(const PathEnsemble& ens, std::size_t c, int j, const std::vector<double> CheckpointData::*field) {
    at(ens, c);
    if (!ens.cfg.correlations) throw ConfigError("ensemble was run without correlations");
    const int n = ens.cfg.params.n_sites();
    if (j < 0 || j >= n) throw ConfigError("site index out of range");
    return weighted(ens, c, [&](const CheckpointData& x, std::size_t p) { return cplx((x.*field)[p * n + j]); });
}

}  // namespace

Estimate spin_correlation(const PathEnsemble& ens, std::size_t c, int j) { return corr(ens, c, j, &CheckpointData::spin); }
Estimate pair_correlation(const PathEnsemble& ens, std::size_t c, int j) { return corr(ens, c, j, &CheckpointData::pair); }

ToyMode parse_toy_mode(const std::string& s) {
    if (s == "raw") return ToyMode::raw;
    if (s == "girsanov") return ToyMode::girsanov;
    throw ConfigError("unknown toy mode '" + s + "'");
}

namespace {

// log Z(x), Z'/Z and Z''/Z for the toy partition functions.
struct ToyZ {
    const std::vector<double>& lam;
    double log_z(double x) const {
        if (lam.empty()) return std::abs(x) + std::log1p(std::exp(-2.0 * std::abs(x))) - std::log(2.0);
        double m = -INFINITY;
        for (double l : lam) m = std::max(m, l * x);
        double s = 0.0;
        for (double l : lam) s += std::exp(l * x - m);
        return m + std::log(s);
    }
    void ratios(double x, double& d1, double& d2) const {
        if (lam.empty()) {
            d1 = std::tanh(x);
            d2 = 1.0;
            return;
        }
        double m = -INFINITY;
        for (double l : lam) m = std::max(m, l * x);
        double s0 = 0.0, s1 = 0.0, s2 = 0.0;
        for (double l : lam) {
            const double e = std::exp(l * x - m);
            s0 += e;
            s1 += l * e;
            s2 += l * l * e;
        }
        d1 = s1 / s0;
        d2 = s2 / s0;
    }
};

}  // namespace

double toy_exact(const ToySpec& spec) {
    std::vector<double> lam = spec.lambdas;
    if (lam.empty()) lam = {-1.0, 1.0};
    double m = -INFINITY;
    for (double l : lam) m = std::max(m, 0.5 * spec.beta * l * l);
    double num = 0.0, den = 0.0;
    for (double l : lam) {
        const double w = std::exp(0.5 * spec.beta * l * l - m);
        num += w * std::cos(spec.mu * l * std::sqrt(spec.beta));
        den += w;
    }
    return num / den;
}

Estimate toy_expectation(const ToySpec& spec) {
    if (spec.paths < 1) throw ConfigError("paths must be positive");
    if (!(spec.beta >= 0.0)) throw ConfigError("beta must be non-negative");
    if (!(spec.dt > 0.0)) throw ConfigError("dt must be positive");
    const ToyZ Z{spec.lambdas};
    const std::size_t np = static_cast<std::size_t>(spec.paths);
    std::vector<double> lw(np, 0.0), val(np, 0.0);
    const double sb = std::sqrt(spec.beta);
    const long K = std::lround(spec.beta / spec.dt);
    const bool raw = spec.mode == ToyMode::raw || K == 0;
    const double dt = raw ? 0.0 : spec.beta / K;
    parallel_ranges(np, [&](std::size_t b, std::size_t e, int) {
        for (std::size_t p = b; p < e; ++p) {
            if (raw) {
                const double x = counter_normal({spec.seed, p, 0}, 0);
                lw[p] = Z.log_z(sb * x);
                val[p] = std::cos(spec.mu * x);
                continue;
            }
            double x = 0.0, s = 0.0;
            const double sdt = std::sqrt(dt);
            for (long k = 0; k < K; ++k) {
                double d1, d2;
                Z.ratios(x, d1, d2);
                s += 0.5 * d2 * dt;
                x += d1 * dt + sdt * counter_normal({spec.seed, p, static_cast<std::uint64_t>(k)}, 0);
            }
            lw[p] = s;
            val[p] = std::cos(spec.mu * x / sb);
        }
    });
    Estimate est = ratio_estimate(lw, val);
    const double f = std::exp(0.5 * spec.mu * spec.mu);
    est.value *= f;
    est.stderr_ *= f;
    est.imag_residual *= f;
    return est;
}

}  // namespace hsde
