#include "hsde/reduced.hpp"

#include <algorithm>
#include <cmath>

#include "hsde/reduced_kernels.hpp"

namespace hsde {

namespace {

MatR spin_swap(const MatR& m) {
    const Eigen::Index n = m.rows() / 2;
    MatR out(2 * n, 2 * n);
    out << m.bottomRightCorner(n, n), m.bottomLeftCorner(n, n), m.topRightCorner(n, n),
        m.topLeftCorner(n, n);
    return out;
}

double maxabs(const MatR& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

// [[-(d a_dd), d a_du], [d a_ud, -(d a_uu)]] and [[0, d f_ud], [-d f_ud, 0]]
MatR d_rho(const MatR& rho) {
    const Eigen::Index n = rho.rows() / 2;
    MatR D = MatR::Zero(2 * n, 2 * n);
    D.topLeftCorner(n, n).diagonal() = -rho.bottomRightCorner(n, n).diagonal();
    D.topRightCorner(n, n).diagonal() = rho.bottomLeftCorner(n, n).diagonal();
    D.bottomLeftCorner(n, n).diagonal() = rho.topRightCorner(n, n).diagonal();
    D.bottomRightCorner(n, n).diagonal() = -rho.topLeftCorner(n, n).diagonal();
    return D;
}

MatR d_f(const MatR& F) {
    const Eigen::Index n = F.rows() / 2;
    MatR D = MatR::Zero(2 * n, 2 * n);
    D.topRightCorner(n, n).diagonal() = F.topRightCorner(n, n).diagonal();
    D.bottomLeftCorner(n, n).diagonal() = -F.topRightCorner(n, n).diagonal();
    return D;
}

MatR kinetic_2N(const ModelParams& p) {
    const Eigen::Index n = p.n_sites();
    const MatR id = MatR::Identity(n, n);
    const MatR em = p.eps - p.mu * id;
    MatR A(2 * n, 2 * n);
    A << em, (p.s - p.r) * id, (p.s + p.r) * id, em;
    return A;
}

double trace_prod(const MatR& a, const MatR& b) { return a.cwiseProduct(b.transpose()).sum(); }

}  // namespace

ReducedState2N ReducedState2N::zero(int n) {
    return {MatR::Zero(2 * n, 2 * n), MatR::Zero(2 * n, 2 * n), MatR::Zero(2 * n, 2 * n)};
}

MatC embed_full(const ReducedState2N& s) {
    const Eigen::Index m = s.rho.rows();
    const cplx I(0.0, 1.0);
    MatC G(2 * m, 2 * m);
    G.topLeftCorner(m, m) = I * s.Fa.cast<cplx>();
    G.topRightCorner(m, m) = s.rho.cast<cplx>();
    G.bottomLeftCorner(m, m) = -s.rho.transpose().cast<cplx>();
    G.bottomRightCorner(m, m) = I * s.Fb.cast<cplx>();
    return G;
}

ReducedState2N reduce_full(const MatC& G) {
    const Eigen::Index m = G.rows() / 2;
    return {G.topRightCorner(m, m).real(), G.topLeftCorner(m, m).imag(), G.bottomRightCorner(m, m).imag()};
}

NoiseDraw mirror_for_full(const NoiseDraw& draw, int eu) {
    NoiseDraw out = draw;
    if (eu < 0) {
        out.phi = -draw.phi;
        out.xi = -draw.xi;
    }
    return out;
}

void require_real_scheme(const HsScheme& sc, double u) {
    const int eu = u < 0.0 ? -1 : 1;
    if (sc.w[2] != 0.0) throw ConfigError("real reduction requires w3 = 0");
    if ((sc.w[0] != 0.0 && sc.e[0] != eu) || (sc.w[1] != 0.0 && sc.e[1] != eu))
        throw ConfigError("real reduction requires e1 = e2 = sign(u)");
}

bool sde_step_2N(ReducedState2N& s, const NoiseDraw& draw, const ModelParams& p, const HsScheme& sc,
                 double dt) {
    const Eigen::Index n = p.n_sites();
    const Eigen::Index m = 2 * n;
    const int eu = p.eps_u();
    const double su = std::sqrt(std::abs(p.u));
    const MatR I = MatR::Identity(m, m);

    MatR dh = -dt * kinetic_2N(p);
    if (p.u != 0.0) {
        dh += (0.5 * p.u * dt) * d_rho(s.rho);
        const VecR dx = std::sqrt(sc.w[0]) * increment(draw, Component::x);
        const VecR dy = std::sqrt(sc.w[1]) * increment(draw, Component::y);
        dh.topLeftCorner(n, n).diagonal() -= su * dx;
        dh.topRightCorner(n, n).diagonal() -= su * dy;
        dh.bottomLeftCorner(n, n).diagonal() -= (su * eu) * dy;
        dh.bottomRightCorner(n, n).diagonal() += (su * eu) * dx;
    }
    const MatR ImFa = I - s.Fa, IpFa = I + s.Fa, ImFb = I - s.Fb, IpFb = I + s.Fb;
    const MatR dht = dh.transpose();
    MatR drho = 0.5 * (ImFa * dh * IpFb - s.rho * dht * s.rho);
    MatR dFa = 0.5 * (ImFa * dh * s.rho.transpose() - s.rho * dht * IpFa);
    MatR dFb = 0.5 * (ImFb * dht * s.rho - s.rho.transpose() * dh * IpFb);
    if (p.u != 0.0) {
        const double c = 0.25 * p.u * dt;
        const MatR DFa = d_f(s.Fa), DFb = d_f(s.Fb);
        drho += c * (ImFa * DFb * s.rho - s.rho * DFa * IpFb);
        dFa += c * (ImFa * DFb * IpFa - s.rho * DFa * s.rho.transpose());
        dFb += c * (ImFb * DFa * IpFb - s.rho.transpose() * DFb * s.rho);
    }
    s.rho += drho;
    s.Fa += dFa;
    s.Fb += dFb;
    MatR t = 0.5 * (s.Fa - s.Fa.transpose());
    s.Fa = t;
    t = 0.5 * (s.Fb - s.Fb.transpose());
    s.Fb = t;
    return s.rho.allFinite() && s.Fa.allFinite() && s.Fb.allFinite();
}

double energy_2N(const ReducedState2N& s, const ModelParams& p) {
    const Eigen::Index n = p.n_sites();
    const MatR em = p.eps - p.mu * MatR::Identity(n, n);
    const auto uu = s.rho.topLeftCorner(n, n), dd = s.rho.bottomRightCorner(n, n);
    const auto ud = s.rho.topRightCorner(n, n), du = s.rho.bottomLeftCorner(n, n);
    double w = 0.5 * (trace_prod(em, uu) + trace_prod(em, dd) + (p.s + p.r) * du.trace() +
                      (p.s - p.r) * ud.trace());
    const VecR fa = s.Fa.topRightCorner(n, n).diagonal(), fb = s.Fb.topRightCorner(n, n).diagonal();
    w += 0.25 * p.u *
         (uu.diagonal().cwiseProduct(dd.diagonal()) - ud.diagonal().cwiseProduct(du.diagonal()) +
          fa.cwiseProduct(fb))
             .sum();
    return w;
}

ReducedStateW1 ReducedStateW1::zero(int n) { return {MatR::Zero(n, n), MatR::Zero(n, n)}; }

bool sde_step_w1(ReducedStateW1& s, const NoiseDraw& draw, const ModelParams& p, double dt) {
    if (p.mu != 0.0 || p.r != 0.0 || p.s != 0.0)
        throw ConfigError("w1 reduced stepper requires mu = r = s = 0");
    kernels::W1Work<MatR> w;
    w.resize(p.n_sites());
    const VecR dx = increment(draw, Component::x);
    kernels::w1_step(s.rho_uu, s.F_uu, p.eps, std::abs(p.u), dx, dt, w);
    return s.rho_uu.allFinite() && s.F_uu.allFinite();
}

double energy_w1(const ReducedStateW1& s, const MatR& eps, double u) {
    return kernels::w1_energy(s.rho_uu, eps, std::abs(u));
}

ReducedState2N embed_w1(const ReducedStateW1& s, const BipartiteMasks& masks, int eu) {
    const Eigen::Index n = s.rho_uu.rows();
    const MatR on_r = s.rho_uu.cwiseProduct(masks.chi_on), off_r = s.rho_uu.cwiseProduct(masks.chi_off);
    const MatR on_f = s.F_uu.cwiseProduct(masks.chi_on), off_f = s.F_uu.cwiseProduct(masks.chi_off);
    ReducedState2N out = ReducedState2N::zero(static_cast<int>(n));
    out.rho.topLeftCorner(n, n) = s.rho_uu;
    out.rho.bottomRightCorner(n, n) = -eu * on_r + off_r;
    out.Fa.topLeftCorner(n, n) = s.F_uu;
    out.Fa.bottomRightCorner(n, n) = on_f - eu * off_f;
    out.Fb = out.Fa;
    return out;
}

ReducedStateW2 ReducedStateW2::zero(int n) {
    return {MatR::Zero(n, n), MatR::Zero(n, n), MatR::Zero(n, n), MatR::Zero(n, n)};
}

bool sde_step_w2(ReducedStateW2& s, const NoiseDraw& draw, const ModelParams& p, double dt) {
    if (p.r != 0.0 || p.s != 0.0) throw ConfigError("w2 reduced stepper requires r = s = 0");
    const Eigen::Index n = p.n_sites();
    kernels::W2Work<MatR> w;
    w.resize(n);
    const MatR em = p.eps - p.mu * MatR::Identity(n, n);
    const VecR dy = increment(draw, Component::y);
    kernels::w2_step(s.rho_uu, s.rho_ud, s.F_uu, s.F_ud, em, p.u, dy, dt, w);
    return s.rho_uu.allFinite() && s.rho_ud.allFinite() && s.F_uu.allFinite() && s.F_ud.allFinite();
}

double energy_w2(const ReducedStateW2& s, const ModelParams& p) {
    const MatR em = p.eps - p.mu * MatR::Identity(p.n_sites(), p.n_sites());
    return kernels::w2_energy(s.rho_uu, s.rho_ud, s.F_ud, em, p.u);
}

ReducedState2N embed_w2(const ReducedStateW2& s, int eu) {
    const Eigen::Index n = s.rho_uu.rows();
    ReducedState2N out = ReducedState2N::zero(static_cast<int>(n));
    out.rho << s.rho_uu, s.rho_ud, eu * s.rho_ud, s.rho_uu;
    out.Fa << s.F_uu, s.F_ud, eu * s.F_ud, s.F_uu;
    out.Fb = spin_swap(out.Fa);
    return out;
}

SymMode parse_sym_mode(const std::string& s) {
    if (s == "real") return SymMode::real;
    if (s == "w1") return SymMode::w1;
    if (s == "w2") return SymMode::w2;
    if (s == "w2_sparsity") return SymMode::w2_sparsity;
    if (s == "w1_half") return SymMode::w1_half;
    if (s == "w2_half") return SymMode::w2_half;
    throw ConfigError("unknown symmetry mode '" + s + "'");
}

std::string to_string(SymMode m) {
    switch (m) {
        case SymMode::real: return "real";
        case SymMode::w1: return "w1";
        case SymMode::w2: return "w2";
        case SymMode::w2_sparsity: return "w2_sparsity";
        case SymMode::w1_half: return "w1_half";
        default: return "w2_half";
    }
}

void validate_mode(SymMode mode, const ModelParams& p, const HsScheme& sc, const LatticeSpec& spec) {
    require_real_scheme(sc, p.u);
    const bool w1 = sc.w[0] == 1.0, w2 = sc.w[1] == 1.0;
    auto need = [&](bool ok, const char* what) {
        if (!ok) throw ConfigError(std::string(to_string(mode)) + " requires " + what);
    };
    switch (mode) {
        case SymMode::real: break;
        case SymMode::w1: need(w1 && p.r == 0.0, "w1 = 1 and r = 0"); break;
        case SymMode::w2: need(w2, "w2 = 1"); break;
        case SymMode::w2_sparsity:
            need(w2 && p.mu == 0.0, "w2 = 1 and mu = 0");
            need(spec.bipartite(), "a bipartite lattice");
            break;
        case SymMode::w1_half:
            need(w1 && p.mu == 0.0 && p.r == 0.0 && p.s == 0.0, "w1 = 1 and mu = r = s = 0");
            need(spec.bipartite(), "a bipartite lattice");
            break;
        case SymMode::w2_half:
            need(w2 && p.mu == 0.0 && p.r == 0.0 && p.s == 0.0, "w2 = 1 and mu = r = s = 0");
            need(spec.bipartite(), "a bipartite lattice");
            break;
    }
}

std::vector<Violation> check_symmetries(const ReducedState2N& s, SymMode mode, const BipartiteMasks& mk,
                                        int eu) {
    const Eigen::Index n = s.rho.rows() / 2;
    auto b = [n](const MatR& m, int i, int j) { return MatR(m.block(i * n, j * n, n, n)); };
    auto on = [&](const MatR& m) { return m.cwiseProduct(mk.chi_on); };
    auto off = [&](const MatR& m) { return m.cwiseProduct(mk.chi_off); };
    const MatR ruu = b(s.rho, 0, 0), rud = b(s.rho, 0, 1), rdu = b(s.rho, 1, 0), rdd = b(s.rho, 1, 1);
    const MatR fuu = b(s.Fa, 0, 0), fud = b(s.Fa, 0, 1), fdu = b(s.Fa, 1, 0), fdd = b(s.Fa, 1, 1);
    std::vector<Violation> v;
    v.push_back({"Fa skew", maxabs(s.Fa + s.Fa.transpose())});
    v.push_back({"Fb skew", maxabs(s.Fb + s.Fb.transpose())});
    switch (mode) {
        case SymMode::real: break;
        case SymMode::w1:
            v.push_back({"Fb = Fa", maxabs(s.Fb - s.Fa)});
            v.push_back({"rho^T = rho", maxabs(s.rho.transpose() - s.rho)});
            break;
        case SymMode::w2:
            v.push_back({"Fb = P Fa P", maxabs(s.Fb - spin_swap(s.Fa))});
            v.push_back({"rho^T = P rho P", maxabs(s.rho.transpose() - spin_swap(s.rho))});
            break;
        case SymMode::w2_sparsity:
            v.push_back({"rho_uu^on = 0", maxabs(on(ruu))});
            v.push_back({"rho_dd^on = 0", maxabs(on(rdd))});
            v.push_back({"rho_ud^off = 0", maxabs(off(rud))});
            v.push_back({"rho_du^off = 0", maxabs(off(rdu))});
            v.push_back({"F_uu^off = 0", maxabs(off(fuu))});
            v.push_back({"F_dd^off = 0", maxabs(off(fdd))});
            v.push_back({"F_ud^on = 0", maxabs(on(fud))});
            v.push_back({"F_du^on = 0", maxabs(on(fdu))});
            v.push_back({"diag rho_ss = 0",
                         std::max(ruu.diagonal().cwiseAbs().maxCoeff(), rdd.diagonal().cwiseAbs().maxCoeff())});
            break;
        case SymMode::w1_half:
            v.push_back({"Fb = Fa", maxabs(s.Fb - s.Fa)});
            v.push_back({"rho^T = rho", maxabs(s.rho.transpose() - s.rho)});
            v.push_back({"rho_ud = rho_du = 0", std::max(maxabs(rud), maxabs(rdu))});
            v.push_back({"F_ud = F_du = 0", std::max(maxabs(fud), maxabs(fdu))});
            v.push_back({"rho_uu^on = -e_u rho_dd^on", maxabs(on(ruu) + eu * on(rdd))});
            v.push_back({"rho_uu^off = rho_dd^off", maxabs(off(ruu) - off(rdd))});
            v.push_back({"F_uu^off = -e_u F_dd^off", maxabs(off(fuu) + eu * off(fdd))});
            v.push_back({"F_uu^on = F_dd^on", maxabs(on(fuu) - on(fdd))});
            break;
        case SymMode::w2_half:
            v.push_back({"Fb = P Fa P", maxabs(s.Fb - spin_swap(s.Fa))});
            v.push_back({"rho^T = P rho P", maxabs(s.rho.transpose() - spin_swap(s.rho))});
            v.push_back({"rho_dd = rho_uu", maxabs(rdd - ruu)});
            v.push_back({"F_dd = F_uu", maxabs(fdd - fuu)});
            v.push_back({"rho_du = e_u rho_ud", maxabs(rdu - eu * rud)});
            v.push_back({"F_du = e_u F_ud", maxabs(fdu - eu * fud)});
            break;
    }
    return v;
}

std::vector<Violation> check_reality(const MatC& G) {
    const Eigen::Index m = G.rows() / 2;
    std::vector<Violation> v;
    v.push_back({"G skew", (G + G.transpose()).cwiseAbs().maxCoeff()});
    v.push_back({"Re G^aa = 0", G.topLeftCorner(m, m).real().cwiseAbs().maxCoeff()});
    v.push_back({"Re G^bb = 0", G.bottomRightCorner(m, m).real().cwiseAbs().maxCoeff()});
    v.push_back({"Im G^ab = 0", G.topRightCorner(m, m).imag().cwiseAbs().maxCoeff()});
    return v;
}

double max_violation(const std::vector<Violation>& v) {
    double m = 0.0;
    for (const auto& x : v) m = std::max(m, x.value);
    return m;
}

}  // namespace hsde
