#pragma once

// Analytic continuation through the eigenbasis.  An exterior trace phi
// decomposes against the h_n; the matching interior object is the lambda-
// weighted f_n series, evaluated off the interior cuts by the Nystrom
// continuation formula.  The same machinery solves the truncated-data
// recovery problem for polynomial-times-weight phantoms, whose full-band
// finite Hilbert transform is itself a polynomial (the negative polynomial
// part of z^k W(z), W = sqrt((z-a_1)(z-a_{2g+2}))), so the region-of-
// interest data is available in closed form.

#include <algorithm>
#include <functional>

#include "spectral.hpp"
#include "surface.hpp"

namespace ghl {

// coefficients of the polynomial part of z^k W(z), constant term last
inline std::vector<real> poly_part_zkW(const GapGeometry& geom, int k) {
    const real a = geom.endpoints().front(), b = geom.endpoints().back();
    std::vector<real> sa(k + 2), sb(k + 2);
    real bin = 1;
    for (int m = 0; m <= k + 1; ++m) {
        sa[m] = bin * std::pow(-a, real(m));
        sb[m] = bin * std::pow(-b, real(m));
        bin *= (real(0.5) - m) / real(m + 1);
    }
    std::vector<real> c(k + 2, 0);
    for (int m = 0; m <= k + 1; ++m)
        for (int l = 0; l <= m; ++l) c[m] += sa[l] * sb[m - l];
    // z^k W(z) = sum_m c_m z^{k+1-m}; keep powers 0..k+1
    return c;
}

// phi_k(x) = (1/pi) PV int w(t) t^k / (t - x) dt over the band, in closed form
inline real phantom_data(const GapGeometry& geom, int k, real x) {
    const std::vector<real> c = poly_part_zkW(geom, k);
    real v = 0;
    for (size_t m = 0; m < c.size(); ++m) v = v * x + c[m];  // Horner, degree k+1 downward
    return -v;
}

inline Vec decompose(const SpectralData& sp, const std::function<real(real)>& phi, int nmax) {
    nmax = std::min<int>(nmax, sp.n_usable);
    Vec c(nmax);
    for (int n = 0; n < nmax; ++n) {
        real s = 0;
        for (int i = 0; i < sp.xe.size(); ++i)
            s += sp.we[i] * phi(sp.xe[i]) * sp.sqrt_w_xe[i] * sp.hhat(i, n) / sp.w_xe[i];
        c[n] = s;
    }
    return c;
}

inline real continue_psi(const SpectralData& sp, const GapGeometry& geom, const Vec& coeffs,
                         real y, int nmax) {
    nmax = std::min<int>(nmax, int(coeffs.size()));
    real s = 0;
    for (int n = 0; n < nmax; ++n)
        s += 2 * sp.lambda[n] * coeffs[n] * evaluate_f_off_interval(sp, geom, n, y);
    return s;
}

// growth constant of the continued eigenfunctions at y, fitted over the
// usable range: |f_n(y)| <= C_omega exp(kappa_n (Re g(y) + 1/2))
inline real fit_c_omega(const SpectralData& sp, const GapGeometry& geom, const SurfaceData& S,
                        real y) {
    const real reg = S.g_plus(y).real();
    real c = 0;
    for (int n = 0; n < sp.n_usable; ++n) {
        const real fg = std::fabs(evaluate_f_off_interval(sp, geom, n, y));
        c = std::max(c, fg * std::exp(-sp.kappa(n) * (reg + real(0.5))));
    }
    return c;
}

// 2 C_omega phi_star sum_{n >= nmax} exp(kappa_n (Re g(y) - 1/2)), with the
// kappa ladder extended past the usable range at the asymptotic spacing
inline real tail_bound(const SpectralData& sp, const SurfaceData& S, real c_omega, real phi_star,
                       real y, int nmax) {
    const real reg = S.g_plus(y).real();
    if (!(reg < real(0.5))) throw numeric_error("tail bound requested outside the convergence region");
    const real step = PI / S.tau()(0, 0).imag() / 2;
    real s = 0;
    for (int n = nmax; n < nmax + 200; ++n) {
        const real kap = (n < sp.n_usable) ? sp.kappa(n)
                                           : sp.kappa(sp.n_usable - 1) + step * (n - sp.n_usable + 1);
        const real t = std::exp(kap * (reg - real(0.5)));
        s += t;
        if (t < real(1e-22) * s) break;
    }
    return 2 * c_omega * phi_star * s;
}

// principal value of int_ROI (phi(t)/w(t)) / (t - y) dt by singularity
// subtraction on a dense Gauss grid; y must lie strictly inside the ROI
inline real pv_roi(const GapGeometry& geom, const std::function<real(real)>& phi, real lo, real hi,
                   real y, int nodes = 3000) {
    const std::vector<real>*t, *v;
    detail::gl_cached(nodes, t, v);
    const real len = hi - lo;
    for (size_t i = 0; i < t->size(); ++i) {
        const real xr = lo + len * ((*t)[i] + 1) / 2;
        if (std::fabs(xr - y) < real(1e-12) * len) { y += real(3e-9) * len; break; }
    }
    const real gy = phi(y) / geom.weight_w(y);
    real s = 0;
    for (size_t i = 0; i < t->size(); ++i) {
        const real xr = lo + len * ((*t)[i] + 1) / 2;
        const real wt = len / 2 * (*v)[i];
        s += wt * (phi(xr) / geom.weight_w(xr) - gy) / (xr - y);
    }
    return s + gy * std::log(std::fabs((hi - y) / (y - lo)));
}

struct RoiRecovery {
    Vec psi_coeffs;
    std::vector<real> y, recovered, truth, abs_err, tail;
};

// truncated-data recovery of the phantom w(x) x^k from region-of-interest
// data: the closed-form data phi_k on the ROI [a_2, a_{2g+1}] plus the
// eigen-series correction reproduce the phantom on the gaps
inline RoiRecovery recover_roi(const SpectralData& sp, const GapGeometry& geom,
                               const SurfaceData& S, int degree, const std::vector<real>& eval_pts,
                               int nmax, int pv_nodes = 3000) {
    const auto& a = geom.endpoints();
    const real lo = a[1], hi = a[a.size() - 2];
    auto phi = [&](real x) { return phantom_data(geom, degree, x); };

    RoiRecovery out;
    Vec psi(sp.xi.size());
    for (int j = 0; j < sp.xi.size(); ++j) {
        const real x = sp.xi[j];
        psi[j] = geom.weight_w(x) * std::pow(x, real(degree)) +
                 geom.weight_w(x) / PI * pv_roi(geom, phi, lo, hi, x, pv_nodes);
    }
    nmax = std::min<int>(nmax, sp.n_usable);
    out.psi_coeffs.resize(nmax);
    for (int n = 0; n < nmax; ++n) {
        real s = 0;
        for (int j = 0; j < sp.xi.size(); ++j)
            s += sp.wi[j] * psi[j] * sp.sqrt_w_xi[j] * sp.fhat(j, n) / sp.w_xi[j];
        out.psi_coeffs[n] = s;
    }

    real phi_star = 0;
    for (int n = 0; n < nmax; ++n) phi_star = std::max(phi_star, std::fabs(out.psi_coeffs[n]));

    for (real y : eval_pts) {
        if (!(y > lo && y < hi)) throw config_error("recovery point outside the region of interest");
        real series = 0;
        for (int n = 0; n < nmax; ++n)
            series += out.psi_coeffs[n] * evaluate_f_off_interval(sp, geom, n, y);
        const real rec = series - geom.weight_w(y) / PI * pv_roi(geom, phi, lo, hi, y, pv_nodes);
        const real tru = geom.weight_w(y) * std::pow(y, real(degree));
        out.y.push_back(y);
        out.recovered.push_back(rec);
        out.truth.push_back(tru);
        out.abs_err.push_back(std::fabs(rec - tru));
        const real com = fit_c_omega(sp, geom, S, y);
        out.tail.push_back(tail_bound(sp, S, com, phi_star, y, nmax));
    }
    return out;
}

}  // namespace ghl
