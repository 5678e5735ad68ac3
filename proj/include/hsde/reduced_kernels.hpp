#pragma once

// Allocation-free step kernels shared by the public reduced steppers and the
// ensemble drivers. M is a square real Eigen matrix type (fixed or dynamic).

#include <cmath>

#include <Eigen/Dense>

namespace hsde::kernels {

template <class M>
struct W1Work {
    M dh, A, B, X;
    void resize(Eigen::Index n) {
        dh.resize(n, n);
        A.resize(n, n);
        B.resize(n, n);
        X.resize(n, n);
    }
};

// drho = 1/2[(1-F) h (1+F) - rho h rho], dF = 1/2[X - X^T], X = (1-F) h rho,
// with h = -eps dt + (|u| dt/2) diag(rho) - sqrt(|u|) diag(dx). The field
// vector dx already carries its sqrt(dt) factor.
template <class M, class V>
void w1_step(M& rho, M& F, const M& eps, double abs_u, const V& dx, double dt, W1Work<M>& w) {
    w.dh.noalias() = -dt * eps;
    w.dh.diagonal() += (0.5 * abs_u * dt) * rho.diagonal() - std::sqrt(abs_u) * dx;
    w.A = w.dh;
    w.A.noalias() -= F * w.dh;
    w.B = w.A;
    w.B.noalias() += w.A * F;
    w.X.noalias() = rho * w.dh;
    w.B.noalias() -= w.X * rho;
    w.X.noalias() = w.A * rho;
    rho.noalias() += 0.5 * w.B;
    F.noalias() += 0.5 * (w.X - w.X.transpose());
    w.B = 0.5 * (rho + rho.transpose());
    rho = w.B;
}

template <class M>
double w1_energy(const M& rho, const M& eps, double abs_u) {
    return eps.cwiseProduct(rho).sum() - 0.25 * abs_u * rho.diagonal().squaredNorm();
}

// Block-reduced w2 state: rho = [[R, Q], [e Q, R]], F = [[P, S], [e S, P]]
// with R = rho_uu, Q = rho_ud, P = F_uu, S = F_ud (the relations rho_dd =
// rho_uu, rho_du = e_u rho_ud, F likewise). Only the top block row of each
// 2N x 2N product is formed, as N x N block products.
template <class M>
struct W2Work {
    M a, A1, A2, B1, B2, X1, X2, Y1, Y2, T1, T2, U1, U2, IP, tmp;
    void resize(Eigen::Index n) {
        for (M* m : {&a, &A1, &A2, &B1, &B2, &X1, &X2, &Y1, &Y2, &T1, &T2, &U1, &U2, &IP, &tmp})
            m->resize(n, n);
    }
};

// One step of the w2 system for r = s = 0 at chemical potential mu:
//   drho = 1/2[(1-F) dh (1+Ft) - rho dh^T rho] - (u dt/4)[(1-F) DF rho + rho DF (1+Ft)]
//   dF   = 1/2[Y - Y^T] - (u dt/4)[(1-F) DF (1+F) + rho DF rho^T],  Y = (1-F) dh rho^T
//   dh   = -dt (eps-mu) (+) (eps-mu) + (u dt/2) Drho - sqrt|u| [[0, dy], [e_u dy, 0]]
// em = eps - mu must be symmetric. DF = [[0, diag F_ud], [-diag F_ud, 0]]
// vanishes for u > 0 (F_ud skew) and is skipped when zero.
template <class M, class V>
void w2_step(M& R, M& Q, M& P, M& S, const M& em, double u, const V& dy, double dt, W2Work<M>& w) {
    const double e = u < 0.0 ? -1.0 : 1.0;
    const double su = std::sqrt(std::abs(u));
    const bool df_terms = e < 0 && S.diagonal().cwiseAbs().maxCoeff() > 0.0;
    // dh = [[a, d1], [d2, a]] with diagonal d1, d2 = e d1.
    w.a.noalias() = -dt * em;
    w.a.diagonal() -= (0.5 * u * dt) * R.diagonal();
    const V d1 = (0.5 * u * dt * e) * Q.diagonal() - su * dy;
    const V d2 = e * d1;

    // A = (1-F)_top dh
    w.A1 = w.a;
    w.A1.noalias() -= P * w.a;
    w.A1.noalias() -= S * d2.asDiagonal();
    w.A2.noalias() = -S * w.a;
    w.A2.noalias() -= P * d1.asDiagonal();
    w.A2.diagonal() += d1;
    // B = A (1+Ft) - X rho with X = rho_top dh^T
    w.B1 = w.A1;
    w.B1.noalias() += w.A1 * P;
    w.B1.noalias() += w.A2 * S;
    w.B2 = w.A2;
    w.B2.noalias() += e * (w.A1 * S);
    w.B2.noalias() += w.A2 * P;
    w.X1.noalias() = R * w.a;
    w.X1.noalias() += Q * d1.asDiagonal();
    w.X2.noalias() = Q * w.a;
    w.X2.noalias() += R * d2.asDiagonal();
    w.B1.noalias() -= w.X1 * R;
    w.B1.noalias() -= e * (w.X2 * Q);
    w.B2.noalias() -= w.X1 * Q;
    w.B2.noalias() -= w.X2 * R;
    // dF = 1/2[A rho^T - X (1+F)]
    w.Y1.noalias() = w.A1 * R;
    w.Y1.noalias() += w.A2 * Q;
    w.Y2.noalias() = e * (w.A1 * Q);
    w.Y2.noalias() += w.A2 * R;
    w.Y1 -= w.X1;
    w.Y1.noalias() -= w.X1 * P;
    w.Y1.noalias() -= e * (w.X2 * S);
    w.Y2 -= w.X2;
    w.Y2.noalias() -= w.X1 * S;
    w.Y2.noalias() -= w.X2 * P;
    w.B1 *= 0.5;
    w.B2 *= 0.5;
    w.Y1 *= 0.5;
    w.Y2 *= 0.5;
    if (df_terms) {
        // T = [(1-F) DF]_top = [S D, (1-P) D], U = [rho DF]_top = [-Q D, R D].
        const double c = 0.25 * u * dt;
        const V df = S.diagonal();
        w.IP = P;
        w.IP.diagonal().array() += 1.0;
        w.T1.noalias() = S * df.asDiagonal();
        w.T2.noalias() = -P * df.asDiagonal();
        w.T2.diagonal() += df;
        w.U1.noalias() = -Q * df.asDiagonal();
        w.U2.noalias() = R * df.asDiagonal();
        // drho -= c [T rho + U (1+Ft)]
        w.tmp.noalias() = w.T1 * R;
        w.tmp.noalias() += e * (w.T2 * Q);
        w.tmp.noalias() += w.U1 * w.IP;
        w.tmp.noalias() += w.U2 * S;
        w.B1.noalias() -= c * w.tmp;
        w.tmp.noalias() = w.T1 * Q;
        w.tmp.noalias() += w.T2 * R;
        w.tmp.noalias() += e * (w.U1 * S);
        w.tmp.noalias() += w.U2 * w.IP;
        w.B2.noalias() -= c * w.tmp;
        // dF -= c [T (1+F) + U rho^T]
        w.tmp.noalias() = w.T1 * w.IP;
        w.tmp.noalias() += e * (w.T2 * S);
        w.tmp.noalias() += w.U1 * R;
        w.tmp.noalias() += w.U2 * Q;
        w.Y1.noalias() -= c * w.tmp;
        w.tmp.noalias() = w.T1 * S;
        w.tmp.noalias() += w.T2 * w.IP;
        w.tmp.noalias() += e * (w.U1 * Q);
        w.tmp.noalias() += w.U2 * R;
        w.Y2.noalias() -= c * w.tmp;
    }
    R += w.B1;
    Q += w.B2;
    P += w.Y1;
    S += w.Y2;
    w.tmp = 0.5 * (R + R.transpose());
    R = w.tmp;
    w.tmp = 0.5 * (Q + Q.transpose());
    Q = w.tmp;
    w.tmp = 0.5 * (P - P.transpose());
    P = w.tmp;
    w.tmp = 0.5 * (S - e * S.transpose());
    S = w.tmp;
}

template <class M>
double w2_energy(const M& ruu, const M& rud, const M& fud, const M& em, double u) {
    return em.cwiseProduct(ruu).sum() + 0.25 * u * ruu.diagonal().squaredNorm() -
           0.25 * std::abs(u) * (rud.diagonal().squaredNorm() - fud.diagonal().squaredNorm());
}

}  // namespace hsde::kernels
