#include "hsde/pfqmc.hpp"

#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

#include "hsde/girsanov.hpp"
#include "hsde/parallel.hpp"

namespace hsde {

namespace {

template <class Mat>
typename Mat::Scalar pfaffian_impl(const Mat& in) {
    using T = typename Mat::Scalar;
    const Eigen::Index n = in.rows();
    if (in.cols() != n) throw ConfigError("pfaffian: matrix not square");
    if (n % 2 != 0) throw ConfigError("pfaffian: odd dimension");
    if (n == 0) return T(1);
    const double scale = in.cwiseAbs().maxCoeff();
    if ((in + in.transpose()).cwiseAbs().maxCoeff() > 1e-10 * std::max(scale, 1.0))
        throw ConfigError("pfaffian: matrix is not skew-symmetric");
    Mat A = 0.5 * (in - in.transpose());
    T pf(1);
    for (Eigen::Index k = 0; k + 1 < n; k += 2) {
        Eigen::Index kp;
        A.col(k).tail(n - k - 1).cwiseAbs().maxCoeff(&kp);
        kp += k + 1;
        if (kp != k + 1) {
            A.row(k + 1).swap(A.row(kp));
            A.col(k + 1).swap(A.col(kp));
            pf = -pf;
        }
        if (A(k + 1, k) == T(0)) return T(0);
        pf *= A(k, k + 1);
        const Eigen::Index m = n - k - 2;
        if (m > 0) {
            const auto tau = (A.row(k).tail(m) / A(k, k + 1)).eval();
            const auto col = A.col(k + 1).tail(m).eval();
            A.bottomRightCorner(m, m).noalias() += tau.transpose() * col.transpose();
            A.bottomRightCorner(m, m).noalias() -= col * tau;
        }
    }
    return pf;
}

MatC block_skew(const MatC& tl, const MatC& br) {
    const Eigen::Index m = tl.rows();
    MatC A(2 * m, 2 * m);
    A << tl, -MatC::Identity(m, m), MatC::Identity(m, m), br;
    return A;
}

}  // namespace

double pfaffian(const MatR& A) { return pfaffian_impl(A); }
cplx pfaffian(const MatC& A) { return pfaffian_impl(A); }

void ScaledComplex::normalize() {
    const double a = std::abs(mantissa);
    if (a == 0.0 || !std::isfinite(a)) return;
    int e = 0;
    std::frexp(a, &e);
    mantissa = cplx(std::ldexp(mantissa.real(), -e), std::ldexp(mantissa.imag(), -e));
    exponent += e;
}

cplx ScaledComplex::log() const {
    return std::log(mantissa) + cplx(static_cast<double>(exponent) * std::log(2.0), 0.0);
}

EvolutionState initial_evolution(int n) {
    EvolutionState s;
    s.U = MatC::Identity(4 * n, 4 * n);
    s.G = MatC::Zero(4 * n, 4 * n);
    s.Z.mantissa = 1.0;
    s.Z.exponent = 2 * n;  // Tr_F[Id] = 4^N
    s.Z.normalize();
    return s;
}

MatC step_generator(const MatR& h0, const MatC& dB, double dt, double u) {
    const cplx I(0.0, 1.0);
    return (I * dt) * h0.cast<cplx>() + (I * sqrt_u(u)) * dB;
}

bool evolve_U(EvolutionState& s, const MatC& dh) {
    MatC step = -dh + 0.5 * dh * dh;
    step.diagonal().array() += 1.0;
    s.U = s.U * step;
    return s.U.allFinite();
}

bool evolve_U_exact(EvolutionState& s, const MatC& dh) {
    const MatC e = (-dh).exp();
    s.U = s.U * e;
    return s.U.allFinite();
}

bool G_from_U(const MatC& U, MatC& G, double rcond_min) {
    MatC A = U;
    A.diagonal().array() += 1.0;
    Eigen::PartialPivLU<MatC> lu(A);
    if (!(lu.rcond() >= rcond_min)) return false;
    MatC g = 2.0 * lu.inverse();
    g.diagonal().array() -= 1.0;
    G = 0.5 * (g - g.transpose());
    return G.allFinite();
}

void z_step(EvolutionState& s, const MatC& dh) {
    const MatC Gdh = s.G * dh;
    const cplx t1 = Gdh.trace();
    const cplx t2 = (Gdh * Gdh).trace();
    const cplx t3 = dh.cwiseProduct(dh.transpose()).sum();
    const cplx f = 1.0 + 0.25 * t1 + t1 * t1 / 32.0 - t2 / 16.0 + t3 / 16.0;
    s.Z.scale(f);
    const double a = std::abs(s.Z.mantissa);
    if (a > 0.0) s.min_re_z = std::min(s.min_re_z, s.Z.mantissa.real() / a);
}

cplx z_recursion_factor(const MatC& G_prev, const MatC& dh) {
    const Eigen::Index m = dh.rows();
    const MatC I = MatC::Identity(m, m);
    const MatC e = (-dh).exp();
    MatC g = (I - e) * (I + e).inverse();
    g = 0.5 * (g - g.transpose()).eval();
    MatC sh = (0.25 * dh).sinh() * std::sqrt(2.0);
    sh = 0.5 * (sh - sh.transpose()).eval();
    return pfaffian(block_skew(G_prev, g)) * pfaffian(block_skew(sh, sh));
}

bool pf_step(EvolutionState& s, const MatC& dh) {
    z_step(s, dh);
    if (!evolve_U(s, dh)) return false;
    return G_from_U(s.U, s.G);
}

MatC untransformed_increment(const MatC& G, const MatC& dh) {
    const Eigen::Index m = G.rows();
    const MatC I = MatC::Identity(m, m);
    return 0.5 * (I - G) * (dh - 0.5 * dh * G * dh) * (I + G);
}

PfEnsemble run_pfqmc(const PfConfig& cfg) {
    validate_model(cfg.params);
    validate_scheme(cfg.scheme);
    const int n = cfg.params.n_sites();
    if (n > 8) throw ResourceError("pfqmc: at most 8 sites");
    if (cfg.paths < 1) throw ConfigError("paths must be positive");
    const long steps = std::lround(cfg.beta / cfg.dt);
    const MatR h0 = assemble_h0(cfg.params);
    PfEnsemble ens;
    ens.beta = steps * cfg.dt;
    const std::size_t np = static_cast<std::size_t>(cfg.paths);
    const bool two = cfg.extrapolate;
    std::vector<cplx> lz_f(np), en_f(np), lz_c(two ? np : 0), en_c(two ? np : 0);
    std::vector<char> failed(np, 0);
    // One path of k steps of size h; draw(k) returns the step's noise.
    auto integrate = [&](auto&& draw, long k_steps, double h, cplx& log_z, cplx& energy) {
        EvolutionState s = initial_evolution(n);
        for (long k = 0; k < k_steps; ++k) {
            const MatC dh = step_generator(h0, assemble_dB(draw(k), cfg.scheme), h, cfg.params.u);
            bool ok;
            if (cfg.exact_exponential) {
                s.Z.scale(z_recursion_factor(s.G, dh));
                ok = evolve_U_exact(s, dh) && G_from_U(s.U, s.G);
            } else {
                ok = pf_step(s, dh);
            }
            if (!ok || !std::isfinite(std::abs(s.Z.mantissa)) || std::abs(s.Z.mantissa) == 0.0) return false;
        }
        log_z = s.Z.log();
        energy = energy_W(cplx(0.0, 1.0) * s.G, cfg.params);
        return true;
    };
    parallel_ranges(np, [&](std::size_t b, std::size_t e, int) {
        for (std::size_t p = b; p < e; ++p) {
            auto key = [&](long k) { return StreamKey{cfg.seed, p, static_cast<std::uint64_t>(k)}; };
            if (!two) {
                auto draw = [&](long k) { return draw_noise(key(k), n, cfg.dt); };
                failed[p] = integrate(draw, steps, cfg.dt, lz_f[p], en_f[p]) ? 0 : 1;
                continue;
            }
            // Coupled pair as in the Girsanov driver: fine steps dt/2 use
            // counter steps 2k, 2k+1, the coarse step k their normalized sum.
            const double h = 0.5 * cfg.dt;
            auto draw_f = [&](long k) { return draw_noise(key(k), n, h); };
            auto draw_c = [&](long k) {
                NoiseDraw a = draw_noise(key(2 * k), n, cfg.dt);
                const NoiseDraw c = draw_noise(key(2 * k + 1), n, cfg.dt);
                a.phi = M_SQRT1_2 * (a.phi + c.phi);
                a.xi = M_SQRT1_2 * (a.xi + c.xi);
                a.theta = M_SQRT1_2 * (a.theta + c.theta);
                return a;
            };
            const bool ok = integrate(draw_f, 2 * steps, h, lz_f[p], en_f[p]) &&
                            integrate(draw_c, steps, cfg.dt, lz_c[p], en_c[p]);
            failed[p] = ok ? 0 : 1;
        }
    });
    long neg = 0;
    for (std::size_t p = 0; p < np; ++p) {
        if (failed[p]) {
            ++ens.n_failed;
            continue;
        }
        ens.log_z.push_back(lz_f[p]);
        ens.energy.push_back(en_f[p]);
        if (two) {
            ens.coarse_log_z.push_back(lz_c[p]);
            ens.coarse_energy.push_back(en_c[p]);
        }
        if (std::cos(lz_f[p].imag()) < 0.0) ++neg;
    }
    ens.negative_fraction = ens.log_z.empty() ? 0.0 : static_cast<double>(neg) / ens.log_z.size();
    return ens;
}

Estimate untransformed_energy(const PfEnsemble& ens) {
    if (!ens.coarse_log_z.empty()) return extrapolated_ratio(ens.log_z, ens.energy, ens.coarse_log_z, ens.coarse_energy);
    return ratio_estimate(ens.log_z, ens.energy);
}

LogMean untransformed_log_partition(const PfEnsemble& ens, const PfConfig& cfg) {
    LogMean m = log_mean_exp(ens.log_z);
    m.log_mean -= ens.beta * 0.25 * cfg.params.u * cfg.scheme.w_eps() * cfg.params.n_sites();
    return m;
}

}  // namespace hsde
