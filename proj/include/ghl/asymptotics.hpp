#pragma once

// Closed-form eigenfunction asymptotics.  For each divisor root kappa_tilde
// the recipe assembles a theta-quotient wave on the axis,
//
//   term_s(x) = 2i sqrt( Theta(W0+2su) D1 / (Theta(f_n+2su) D2) )
//               * Theta(u_+(x)+su+f_n) r_+(x) / Theta(u_+(x)+su+W0)
//               * exp( i s kappa_tilde Im g_+(x) - i Im d_+(x) ),
//
// with f_n = v(kappa_tilde) + tau e_1, W0 = tau_1/2 - (e_1+e_g)/2,
// D1 = [A^{-1} grad Theta(W0)]_g, D2 = i tau_1 . grad Theta(f_n), u = u(inf).
// The predicted interior eigenfunction is Im term_s on the interior cuts and
// the exterior one is Re term_s on the exterior cuts.  The two branches
// s = +-1 are the two half-waves of the underlying standing wave; the
// dominant one is selected by comparing interior L2 masses, with a margin so
// near-ties (symmetric geometries) resolve deterministically to s = -1.

#include <algorithm>

#include "spectral.hpp"
#include "theta.hpp"

namespace ghl {

struct AxisSamples {
    Vec x;
    std::vector<CVec> u;  // u_+ per point
    Vec im_g, im_d;
    CVec r;
};

inline AxisSamples sample_axis(const SurfaceData& S, const Vec& pts) {
    AxisSamples a;
    a.x = pts;
    const int n = int(pts.size());
    a.u.resize(n);
    a.im_g.resize(n);
    a.im_d.resize(n);
    a.r.resize(n);
    for (int i = 0; i < n; ++i) {
        a.u[i] = S.abel_plus(pts[i]);
        a.im_g[i] = S.g_plus(pts[i]).imag();
        a.im_d[i] = S.d_plus(pts[i]).imag();
        a.r[i] = S.r_plus(pts[i]);
    }
    return a;
}

struct AsymptoticTriple {
    real kappa_tilde = 0;
    real lambda_tilde = 0;
    int branch = -1;
    Vec f_tilde;  // Im term on the interior grid
    Vec h_tilde;  // Re term on the exterior grid
    real norm_f = 0;
};

class AsymptoticEvaluator {
  public:
    AsymptoticEvaluator(const SurfaceData& S, const ThetaContext& T) : S_(&S), T_(&T) {
        W0_ = constant_W0(S);
        D1_ = (S.A_inv().cast<cplx>() * T.grad_theta(W0_))(S.genus() - 1);
    }

    // the complex wave at one cached axis point
    cplx upsilon(real kappa_tilde, const AxisSamples& ax, int i, int s) const {
        const NConstants nc = n_constants(kappa_tilde, s);
        return point_term(nc, kappa_tilde, ax, i, s);
    }

    AsymptoticTriple build(real kappa_tilde, const AxisSamples& interior, const Vec& wi,
                           const AxisSamples& exterior) const {
        const int ni = int(interior.x.size());
        AsymptoticTriple tr;
        tr.kappa_tilde = kappa_tilde;
        tr.lambda_tilde = std::exp(-kappa_tilde);

        std::vector<cplx> wave_p(ni), wave_m(ni);
        real mass_p = 0, mass_m = 0;
        {
            const NConstants cp = n_constants(kappa_tilde, +1);
            const NConstants cm = n_constants(kappa_tilde, -1);
            for (int i = 0; i < ni; ++i) {
                wave_p[i] = point_term(cp, kappa_tilde, interior, i, +1);
                wave_m[i] = point_term(cm, kappa_tilde, interior, i, -1);
                mass_p += wi[i] * std::norm(wave_p[i]);
                mass_m += wi[i] * std::norm(wave_m[i]);
            }
        }
        tr.branch = (mass_p > real(1.44) * mass_m) ? +1 : -1;
        const auto& wave = (tr.branch == 1) ? wave_p : wave_m;

        tr.f_tilde.resize(ni);
        real nrm = 0;
        for (int i = 0; i < ni; ++i) {
            tr.f_tilde[i] = wave[i].imag();
            nrm += wi[i] * tr.f_tilde[i] * tr.f_tilde[i];
        }
        tr.norm_f = std::sqrt(nrm);

        const NConstants nc = n_constants(kappa_tilde, tr.branch);
        const int ne = int(exterior.x.size());
        tr.h_tilde.resize(ne);
        for (int i = 0; i < ne; ++i)
            tr.h_tilde[i] = point_term(nc, kappa_tilde, exterior, i, tr.branch).real();
        return tr;
    }

  private:
    struct NConstants {
        CVec fn, fn_pt, W0_pt;  // f_n and the su-shifted point-term arguments
        cplx prefactor;
    };

    NConstants n_constants(real kappa_tilde, int s) const {
        NConstants nc;
        const int g = S_->genus();
        nc.fn = spectral_line_v(*S_, kappa_tilde) + S_->tau().col(0);
        CVec sh(g);
        for (int m = 0; m < g; ++m) sh[m] = real(s) * S_->u_infinity()[m];
        nc.fn_pt = nc.fn + sh;
        nc.W0_pt = W0_ + sh;
        const cplx th_W0 = T_->theta(W0_ + 2 * sh);
        const cplx th_fn = T_->theta(nc.fn + 2 * sh);
        cplx D2 = 0;
        const CVec gr = T_->grad_theta(nc.fn);
        for (int m = 0; m < g; ++m) D2 += S_->tau()(m, 0) * gr[m];
        D2 *= cplx(0, 1);
        if (std::abs(D2) == 0 || std::abs(th_fn) == 0)
            throw numeric_error("eigenfunction recipe hit a theta zero in a denominator");
        nc.prefactor = cplx(0, 2) * std::sqrt(th_W0 / th_fn * D1_ / D2);
        return nc;
    }

    cplx point_term(const NConstants& nc, real kappa_tilde, const AxisSamples& ax, int i, int s) const {
        const CVec arg_num = ax.u[i] + nc.fn_pt;
        const CVec arg_den = ax.u[i] + nc.W0_pt;
        const real ph = real(s) * kappa_tilde * ax.im_g[i] - ax.im_d[i];
        return nc.prefactor * T_->theta(arg_num) * ax.r[i] / T_->theta(arg_den) *
               cplx(std::cos(ph), std::sin(ph));
    }

    const SurfaceData* S_;
    const ThetaContext* T_;
    CVec W0_;
    cplx D1_;
};

// L2 distance on the interior grid between the unit-normalized asymptotic
// eigenfunction and the unit-normalized Nystrom one, sign-aligned
inline real l2_gap_to_nystrom(const AsymptoticTriple& tr, const SpectralData& sp, int n) {
    Vec fw = sp.f_w(n);
    real nw = 0, dot = 0;
    for (int i = 0; i < fw.size(); ++i) nw += sp.wi[i] * fw[i] * fw[i];
    nw = std::sqrt(nw);
    real best = 0;
    for (int i = 0; i < fw.size(); ++i) dot += sp.wi[i] * (tr.f_tilde[i] / tr.norm_f) * (fw[i] / nw);
    const real sgn = (dot >= 0) ? 1 : -1;
    for (int i = 0; i < fw.size(); ++i) {
        const real d = tr.f_tilde[i] / tr.norm_f - sgn * fw[i] / nw;
        best += sp.wi[i] * d * d;
    }
    return std::sqrt(best);
}

// sup distance over the central 80 percent of each interior cut
inline real sup_gap_central(const AsymptoticTriple& tr, const SpectralData& sp,
                            const GapGeometry& geom, int n) {
    Vec fw = sp.f_w(n);
    real nw = 0, dot = 0;
    for (int i = 0; i < fw.size(); ++i) nw += sp.wi[i] * fw[i] * fw[i];
    nw = std::sqrt(nw);
    for (int i = 0; i < fw.size(); ++i) dot += sp.wi[i] * (tr.f_tilde[i] / tr.norm_f) * (fw[i] / nw);
    const real sgn = (dot >= 0) ? 1 : -1;
    real sup = 0;
    for (int i = 0; i < fw.size(); ++i) {
        const real x = sp.xi[i];
        bool central = false;
        for (const auto& s : geom.interior())
            if (x >= s.lo + real(0.1) * (s.hi - s.lo) && x <= s.hi - real(0.1) * (s.hi - s.lo))
                central = true;
        if (!central) continue;
        sup = std::max(sup, std::fabs(tr.f_tilde[i] / tr.norm_f - sgn * fw[i] / nw));
    }
    return sup;
}

// least-squares slope of kappa_n = -ln lambda_n over n in [n0, n1], together
// with the surface prediction pi / Im tau_11
struct SlopeFit {
    real fitted = 0;
    real predicted = 0;
};

inline SlopeFit lambda_asymptotic_slope(const SpectralData& sp, const SurfaceData& S, int n0, int n1) {
    n1 = std::min(n1, sp.n_usable - 1);
    if (n1 - n0 < 2) throw numeric_error("slope fit needs at least three usable eigenvalues");
    real sx = 0, sy = 0, sxx = 0, sxy = 0;
    const int m = n1 - n0 + 1;
    for (int n = n0; n <= n1; ++n) {
        sx += n; sy += sp.kappa(n);
        sxx += real(n) * n; sxy += n * sp.kappa(n);
    }
    SlopeFit out;
    out.fitted = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    out.predicted = PI / S.tau()(0, 0).imag();
    return out;
}

}  // namespace ghl
