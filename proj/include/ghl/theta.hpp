#pragma once

// Riemann theta function on the period lattice of the surface, plus the
// one-parameter line of arguments whose theta zeros locate the predicted
// log-eigenvalues kappa_tilde.
//
// theta(v) = sum_{n in Z^g} exp(i pi n.tau.n + 2 pi i n.v).  The sum is
// truncated to a cube |n - n0| <= radius centered at the rounded stationary
// point n0 = -Y^{-1} Im v (Y = Im tau), so moderate imaginary shifts of the
// argument cost nothing in accuracy.

#include <algorithm>
#include <functional>

#include "surface.hpp"

namespace ghl {

class ThetaContext {
  public:
    explicit ThetaContext(const CMat& tau, real tail_eps = real(1e-20)) : tau_(tau), g_(int(tau.rows())) {
        Mat Y(g_, g_);
        for (int i = 0; i < g_; ++i)
            for (int j = 0; j < g_; ++j) Y(i, j) = tau_(i, j).imag();
        Yinv_ = Y.inverse();
        Eigen::SelfAdjointEigenSolver<Mat> es(Y);
        const real ymin = es.eigenvalues()(0);
        if (!(ymin > 0)) throw numeric_error("theta: Im tau is not positive definite");
        radius_ = int(std::ceil(std::sqrt(-std::log(tail_eps) / (PI * ymin)))) + 6;
    }

    int radius() const { return radius_; }

    cplx theta(const CVec& v) const {
        cplx acc = 0;
        lattice_sum(v, [&](const cplx& term, const Eigen::VectorXi&) { acc += term; });
        return acc;
    }

    CVec grad_theta(const CVec& v) const {
        CVec acc = CVec::Zero(g_);
        lattice_sum(v, [&](const cplx& term, const Eigen::VectorXi& n) {
            for (int m = 0; m < g_; ++m) acc[m] += cplx(0, 2) * PI * real(n[m]) * term;
        });
        return acc;
    }

  private:
    template <class F>
    void lattice_sum(const CVec& v, F&& emit) const {
        Eigen::VectorXi n0(g_);
        {
            Vec iv(g_);
            for (int m = 0; m < g_; ++m) iv[m] = v[m].imag();
            Vec c = -(Yinv_ * iv);
            for (int m = 0; m < g_; ++m) n0[m] = int(std::llround((double)c[m]));
        }
        Eigen::VectorXi n(g_);
        std::function<void(int)> rec = [&](int k) {
            if (k == g_) {
                cplx ph = 0;
                for (int i = 0; i < g_; ++i) {
                    for (int j = 0; j < g_; ++j) ph += cplx(0, 1) * PI * real(n[i]) * tau_(i, j) * real(n[j]);
                    ph += cplx(0, 2) * PI * real(n[i]) * v[i];
                }
                emit(std::exp(ph), n);
                return;
            }
            for (int d = -radius_; d <= radius_; ++d) {
                n[k] = n0[k] + d;
                rec(k + 1);
            }
        };
        rec(0);
    }

    CMat tau_;
    int g_;
    Mat Yinv_;
    int radius_;
};

// real printed form of the divisor line: W(kappa) = (kappa/pi) Im tau_1
// + 2 u(inf) + e_1/2.  Its increment over one period P = pi / Im tau_11 is
// exactly e_1 in the first component.
inline Vec line_W(const SurfaceData& S, real kappa) {
    const int g = S.genus();
    Vec W(g);
    for (int m = 0; m < g; ++m)
        W[m] = kappa / PI * S.tau()(m, 0).imag() + 2 * S.u_infinity()[m] + (m == 0 ? real(0.5) : real(0));
    return W;
}

inline Vec constant_W0_printed(const SurfaceData& S) { return line_W(S, 0); }

// complex argument actually scanned for zeros:
// v(kappa) = (kappa/pi) Im tau_1 + u(inf) - e_g/4 - tau_1/2
inline CVec spectral_line_v(const SurfaceData& S, real kappa) {
    const int g = S.genus();
    CVec v(g);
    for (int m = 0; m < g; ++m)
        v[m] = kappa / PI * S.tau()(m, 0).imag() + S.u_infinity()[m] -
               (m == g - 1 ? real(0.25) : real(0)) - S.tau()(m, 0) / real(2);
    return v;
}

// divisor constant used by the eigenfunction recipe:
// W0 = tau_1/2 - (e_1 + e_g)/2
inline CVec constant_W0(const SurfaceData& S) {
    const int g = S.genus();
    CVec W0(g);
    for (int m = 0; m < g; ++m)
        W0[m] = S.tau()(m, 0) / real(2) - ((m == 0 ? real(0.5) : real(0)) + (m == g - 1 ? real(0.5) : real(0)));
    return W0;
}

struct DivisorScan {
    std::vector<real> kappa_grid;
    std::vector<real> theta_abs;
    std::vector<char> is_root;     // grid point nearest an accepted root
    std::vector<real> roots;       // kappa_tilde_n, ascending
    std::vector<real> lambda_tilde;
};

// scan |theta(v(kappa))| on a uniform grid, polish each local minimum by
// golden-section to 1e-10, accept when the polished value is below
// eps_div * median grid value
inline DivisorScan find_kappa_tilde(const SurfaceData& S, const ThetaContext& T, real kappa_max,
                                    real grid_step = real(5e-3), real eps_div = real(1e-6)) {
    DivisorScan out;
    auto F = [&](real k) { return std::abs(T.theta(spectral_line_v(S, k))); };
    const int npts = int(std::ceil(kappa_max / grid_step)) + 1;
    out.kappa_grid.resize(npts);
    out.theta_abs.resize(npts);
    out.is_root.assign(npts, 0);
    for (int i = 0; i < npts; ++i) {
        out.kappa_grid[i] = i * grid_step;
        out.theta_abs[i] = F(out.kappa_grid[i]);
    }
    std::vector<real> sorted = out.theta_abs;
    std::sort(sorted.begin(), sorted.end());
    const real med = sorted[sorted.size() / 2];

    const real gr = (std::sqrt(real(5)) - 1) / 2;
    for (int i = 1; i + 1 < npts; ++i) {
        if (!(out.theta_abs[i] < out.theta_abs[i - 1] && out.theta_abs[i] <= out.theta_abs[i + 1])) continue;
        real a = out.kappa_grid[i - 1], b = out.kappa_grid[i + 1];
        real c = b - gr * (b - a), d = a + gr * (b - a);
        real fc = F(c), fd = F(d);
        while (b - a > real(1e-10)) {
            if (fc < fd) {
                b = d; d = c; fd = fc;
                c = b - gr * (b - a); fc = F(c);
            } else {
                a = c; c = d; fc = fd;
                d = a + gr * (b - a); fd = F(d);
            }
        }
        const real root = (a + b) / 2, fr = F(root);
        if (fr < eps_div * med) {
            out.roots.push_back(root);
            out.is_root[i] = 1;
        }
    }
    std::sort(out.roots.begin(), out.roots.end());
    out.lambda_tilde.resize(out.roots.size());
    for (size_t n = 0; n < out.roots.size(); ++n) out.lambda_tilde[n] = std::exp(-out.roots[n]);
    return out;
}

}  // namespace ghl
