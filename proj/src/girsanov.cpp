#include "hsde/girsanov.hpp"

namespace hsde {

namespace {

VecC dgl(const MatC& g, int bi, int bj, Eigen::Index n) {
    return g.block(bi * n, bj * n, n, n).diagonal();
}

}  // namespace

MatR assemble_h0(const ModelParams& p) {
    const Eigen::Index n = p.n_sites();
    const MatR id = MatR::Identity(n, n);
    const MatR em = p.eps - p.mu * id;
    MatR A(2 * n, 2 * n);
    A << em, (p.s - p.r) * id, (p.s + p.r) * id, em;
    MatR h0 = MatR::Zero(4 * n, 4 * n);
    h0.topRightCorner(2 * n, 2 * n) = A;
    h0.bottomLeftCorner(2 * n, 2 * n) = -A.transpose();
    return h0;
}

MatC assemble_dB(const NoiseDraw& draw, const HsScheme& sc) {
    const Eigen::Index n = draw.phi.size();
    const VecC dx = increment(draw, Component::x).cast<cplx>();
    const VecC dy = increment(draw, Component::y).cast<cplx>();
    const VecC dz = increment(draw, Component::z).cast<cplx>();
    const cplx n1 = sc.nu(0), n2 = sc.nu(1), n3 = sc.nu(2);
    const double e1 = sc.e[0], e2 = sc.e[1], e3 = sc.e[2];
    MatC dB = MatC::Zero(4 * n, 4 * n);
    auto put = [&](int bi, int bj, const VecC& v) {
        dB.block(bi * n, bj * n, n, n).diagonal() = v;
        dB.block(bj * n, bi * n, n, n).diagonal() = -v;
    };
    put(AU, AD, n3 * dz);
    put(AU, BU, n1 * dx);
    put(AU, BD, n2 * dy);
    put(AD, BU, n2 * e2 * dy);
    put(AD, BD, -n1 * e1 * dx);
    put(BU, BD, n3 * e3 * dz);
    return dB;
}

MatC assemble_DG(const MatC& G) {
    const Eigen::Index n = G.rows() / 4;
    const VecC bb_ud = dgl(G, BU, BD, n);
    const VecC ab_dd = dgl(G, AD, BD, n);
    const VecC ab_du = dgl(G, AD, BU, n);
    const VecC ab_ud = dgl(G, AU, BD, n);
    const VecC ab_uu = dgl(G, AU, BU, n);
    const VecC aa_ud = dgl(G, AU, AD, n);
    MatC D = MatC::Zero(4 * n, 4 * n);
    auto put = [&](int bi, int bj, const VecC& v) {
        D.block(bi * n, bj * n, n, n).diagonal() = v;
        D.block(bj * n, bi * n, n, n).diagonal() = -v;
    };
    put(AU, AD, bb_ud);
    put(AU, BU, -ab_dd);
    put(AU, BD, ab_du);
    put(AD, BU, ab_ud);
    put(AD, BD, -ab_uu);
    put(BU, BD, aa_ud);
    return D;
}

SiteGenerators build_site_generators(int j, int n, const HsScheme& sc) {
    SiteGenerators g;
    const Eigen::Index m = 4 * n;
    g.D = g.E = g.F = MatC::Zero(m, m);
    auto put = [&](MatC& M, int bi, int bj, cplx v) {
        M(bi * n + j, bj * n + j) = v;
        M(bj * n + j, bi * n + j) = -v;
    };
    const cplx n1 = sc.nu(0), n2 = sc.nu(1), n3 = sc.nu(2);
    put(g.D, AU, BU, n1);
    put(g.D, AD, BD, -n1 * double(sc.e[0]));
    put(g.E, AU, BD, n2);
    put(g.E, AD, BU, n2 * double(sc.e[1]));
    put(g.F, AU, AD, n3);
    put(g.F, BU, BD, n3 * double(sc.e[2]));
    return g;
}

MatC sde_increment_full(const MatC& G, const MatR& h0, const HsScheme& scheme, const NoiseDraw& draw,
                        double dt, double u) {
    const cplx I(0.0, 1.0);
    MatC X = (-dt) * h0.cast<cplx>();
    if (u != 0.0) {
        X += (0.5 * u * dt) * assemble_DG(G);
        X -= sqrt_u(u) * assemble_dB(draw, scheme);
    }
    MatC left = G;
    left.diagonal().array() -= I;
    MatC right = G;
    right.diagonal().array() += I;
    return 0.5 * (left * X * right);
}

bool sde_step_full(MatC& G, const MatR& h0, const HsScheme& scheme, const NoiseDraw& draw, double dt,
                   double u) {
    G += sde_increment_full(G, h0, scheme, draw, dt, u);
    MatC skew = 0.5 * (G - G.transpose());
    G = std::move(skew);
    return G.allFinite();
}

cplx energy_W(const MatC& G, const ModelParams& p) {
    const Eigen::Index n = p.n_sites();
    const MatR em = p.eps - p.mu * MatR::Identity(n, n);
    auto B = [&](int bi, int bj) { return G.block(bi * n, bj * n, n, n); };
    cplx w = 0.0;
    // Tr[em X] = sum_ij em_ij X_ji
    w += (em.cast<cplx>().cwiseProduct(MatC(B(AU, BU) + B(AD, BD)).transpose())).sum();
    w += (p.s + p.r) * B(AD, BU).trace() + (p.s - p.r) * B(AU, BD).trace();
    w *= 0.5;
    if (p.u != 0.0) {
        const VecC uu = dgl(G, AU, BU, n), dd = dgl(G, AD, BD, n);
        const VecC ud = dgl(G, AU, BD, n), du = dgl(G, AD, BU, n);
        const VecC aa = dgl(G, AU, AD, n), bb = dgl(G, BU, BD, n);
        w += (p.u / 4.0) *
             (uu.cwiseProduct(dd) - ud.cwiseProduct(du) - aa.cwiseProduct(bb)).sum();
    }
    return w;
}

SiteDensity density_from_G(const MatC& G, int j) {
    const Eigen::Index n = G.rows() / 4;
    const cplx uu = G(AU * n + j, BU * n + j);
    const cplx ud = G(AU * n + j, BD * n + j);
    const cplx du = G(AD * n + j, BU * n + j);
    return {0.5 * uu, 0.5 * (ud + du), -0.5 * (ud - du)};
}

}  // namespace hsde
