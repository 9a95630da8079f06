#pragma once

// Sobolev bookkeeping for the instability/stability experiments.  Positive
// norms on the interior cuts come from Chebyshev fits of the Nystrom
// samples; the H^{-1} size over an observation window J is bounded from
// below by testing against a dictionary of fixed-width mollifier bumps; the
// stability experiment draws random coefficient vectors in the analytically
// weighted ball and measures the resulting L2(J) mass against the a priori
// constant.

#include <algorithm>
#include <random>

#include "continuation.hpp"
#include "spectral.hpp"
#include "surface.hpp"

namespace ghl {

struct ChebSeries {
    real lo = -1, hi = 1;
    std::vector<real> c;
};

inline ChebSeries cheb_fit(const Vec& x, const Vec& y, real lo, real hi, int deg) {
    const int m = int(x.size());
    deg = std::min(deg, m - 1);
    Mat T(m, deg + 1);
    for (int i = 0; i < m; ++i) {
        const real u = (2 * x[i] - lo - hi) / (hi - lo);
        real t0 = 1, t1 = u;
        T(i, 0) = 1;
        if (deg >= 1) T(i, 1) = u;
        for (int k = 2; k <= deg; ++k) {
            const real t2 = 2 * u * t1 - t0;
            T(i, k) = t2;
            t0 = t1;
            t1 = t2;
        }
    }
    Vec sol = T.colPivHouseholderQr().solve(y);
    ChebSeries s;
    s.lo = lo;
    s.hi = hi;
    s.c.assign(sol.data(), sol.data() + deg + 1);
    return s;
}

inline ChebSeries cheb_der(const ChebSeries& s) {
    std::vector<real> c = s.c;
    const int n = int(c.size()) - 1;
    ChebSeries d;
    d.lo = s.lo;
    d.hi = s.hi;
    if (n <= 0) {
        d.c = {0};
        return d;
    }
    d.c.assign(n, 0);
    for (int j = n; j > 2; --j) {
        d.c[j - 1] = 2 * real(j) * c[j];
        c[j - 2] += real(j) * c[j] / real(j - 2);
    }
    if (n > 1) d.c[1] = 4 * c[2];
    d.c[0] = c[1];
    const real scale = 2 / (s.hi - s.lo);
    for (auto& v : d.c) v *= scale;
    return d;
}

inline real cheb_eval(const ChebSeries& s, real x) {
    const real u = (2 * x - s.lo - s.hi) / (s.hi - s.lo);
    real b1 = 0, b2 = 0;
    for (int k = int(s.c.size()) - 1; k >= 1; --k) {
        const real b0 = 2 * u * b1 - b2 + s.c[k];
        b2 = b1;
        b1 = b0;
    }
    return u * b1 - b2 + s.c[0];
}

// H^{s1} norm of f_n over the interior cuts, s1 <= 4
inline real sobolev_pos_norm(const SpectralData& sp, const GapGeometry& geom, int n, int s1,
                             int deg = 80) {
    if (s1 < 0 || s1 > 4) throw config_error("positive Sobolev order must lie in [0, 4]");
    const Vec fw = sp.f_w(n);
    real total = 0;
    for (const auto& seg : geom.interior()) {
        std::vector<real> xs, ys;
        for (int j = 0; j < sp.xi.size(); ++j)
            if (sp.xi[j] >= seg.lo && sp.xi[j] <= seg.hi) {
                xs.push_back(sp.xi[j]);
                ys.push_back(fw[j]);
            }
        Vec xv = Eigen::Map<Vec>(xs.data(), xs.size());
        Vec yv = Eigen::Map<Vec>(ys.data(), ys.size());
        ChebSeries fit = cheb_fit(xv, yv, seg.lo, seg.hi, deg);
        const std::vector<real>*t, *v;
        detail::gl_cached(200, t, v);
        ChebSeries cur = fit;
        for (int k = 0; k <= s1; ++k) {
            real acc = 0;
            for (size_t i = 0; i < t->size(); ++i) {
                const real x = seg.lo + (seg.hi - seg.lo) * ((*t)[i] + 1) / 2;
                const real val = cheb_eval(cur, x);
                acc += (seg.hi - seg.lo) / 2 * (*v)[i] * val * val;
            }
            total += acc;
            if (k < s1) cur = cheb_der(cur);
        }
    }
    return std::sqrt(total);
}

struct BumpDictionary {
    real width = real(0.1);
    std::vector<real> centers;
    real norm_h1 = 0;
};

inline real bump_profile(real u) {
    if (std::fabs(u) >= 1) return 0;
    return std::exp(-1 / (1 - u * u));
}

inline BumpDictionary make_bumps(const GapGeometry& geom, real j_lo, real j_hi, real width,
                                 real step) {
    const auto& a = geom.endpoints();
    const real lo = std::max(j_lo + width, a[1] + width + real(0.02));
    const real hi = std::min(j_hi - width, a[a.size() - 2] - width - real(0.02));
    if (!(hi > lo)) throw config_error("observation window too narrow for the bump dictionary");
    BumpDictionary bd;
    bd.width = width;
    for (real c = lo; c <= hi + real(1e-12); c += step) bd.centers.push_back(c);
    const std::vector<real>*t, *v;
    detail::gl_cached(400, t, v);
    real i0 = 0, i1 = 0;
    for (size_t i = 0; i < t->size(); ++i) {
        const real u = (*t)[i];
        const real p = bump_profile(u);
        const real dp = (std::fabs(u) < 1) ? p * (-2 * u / ((1 - u * u) * (1 - u * u))) : 0;
        i0 += (*v)[i] * p * p;
        i1 += (*v)[i] * dp * dp;
    }
    bd.norm_h1 = std::sqrt(width * i0 + i1 / width);
    return bd;
}

struct NegNormBound {
    real value = 0;
    real best_center = 0;
};

// lower bound for the H^{-1}(J) norm of f_n: best pairing against the
// dictionary, |<f_n, bump>| / |bump|_{H^1}
inline NegNormBound sobolev_neg_norm_lb(const SpectralData& sp, const GapGeometry& geom, int n,
                                        const BumpDictionary& bd) {
    const std::vector<real>*t, *v;
    detail::gl_cached(80, t, v);
    NegNormBound out;
    for (real c : bd.centers) {
        real ip = 0;
        for (size_t i = 0; i < t->size(); ++i) {
            const real u = (*t)[i];
            ip += (*v)[i] * bd.width * bump_profile(u) *
                  evaluate_f_off_interval(sp, geom, n, c + bd.width * u);
        }
        const real val = std::fabs(ip) / bd.norm_h1;
        if (val > out.value) {
            out.value = val;
            out.best_center = c;
        }
    }
    return out;
}

struct InstabilityRow {
    int n = 0;
    real pos_norm = 0, neg_norm_lb = 0, ratio = 0, kappa = 0, best_center = 0;
};

struct InstabilityResult {
    std::vector<InstabilityRow> rows;
    int n_lo = 0, n_hi = 0;
    real ratio_growth = 0;    // r_{n_hi} / r_{n_lo}
    real measured_rate = 0;   // ln r_{n_hi} / kappa_{n_hi}
    real predicted_rate = 0;  // min_{supp best bump} Re g - max_{rectangle} Re g
};

inline InstabilityResult instability_experiment(const SpectralData& sp, const GapGeometry& geom,
                                                const SurfaceData& S, real j_lo, real j_hi,
                                                real bump_width, real bump_step, real d_gamma,
                                                int n_lo, int n_hi) {
    n_hi = std::min(n_hi, sp.n_usable - 1);
    if (n_hi <= n_lo) throw config_error("instability experiment needs n_hi > n_lo");
    BumpDictionary bd = make_bumps(geom, j_lo, j_hi, bump_width, bump_step);
    InstabilityResult out;
    out.n_lo = n_lo;
    out.n_hi = n_hi;
    for (int n = 0; n <= n_hi; ++n) {
        InstabilityRow row;
        row.n = n;
        row.kappa = sp.kappa(n);
        row.pos_norm = sobolev_pos_norm(sp, geom, n, 1);
        NegNormBound nb = sobolev_neg_norm_lb(sp, geom, n, bd);
        row.neg_norm_lb = nb.value;
        row.best_center = nb.best_center;
        row.ratio = nb.value / row.pos_norm;
        out.rows.push_back(row);
    }
    const InstabilityRow& top = out.rows[n_hi];
    out.ratio_growth = top.ratio / out.rows[n_lo].ratio;
    out.measured_rate = std::log(top.ratio) / top.kappa;
    real min_supp = std::numeric_limits<real>::infinity();
    for (int i = 0; i <= 20; ++i) {
        const real x = top.best_center + bump_width * (real(i) / 10 - 1);
        min_supp = std::min(min_supp, S.g_plus(x).real());
    }
    out.predicted_rate = min_supp - S.max_re_g_rectangle(d_gamma);
    return out;
}

struct StabilityResult {
    int nmax = 0;
    real g_edge = 0;       // Re g at the window edge
    real c_j = 0;          // sup_J |f_n| / e^{kappa_n (g_edge + 1/2)} over n
    real c_star = 0;       // analytic one-sided constant
    real empirical = 0;    // max L2(J) mass over the random draws
    real ratio = 0;        // empirical / c_star
};

// draws live on the unit sphere in coefficient space; each coefficient is
// then damped by w_n = max(n,1) e^{kappa_n (g_edge + 1/2)}.  Box-Muller on a
// fixed 64-bit engine keeps the draw sequence identical across platforms.
inline StabilityResult stability_experiment(const SpectralData& sp, const GapGeometry& geom,
                                            const SurfaceData& S, real j_lo, real j_hi,
                                            std::uint64_t seed, int ndraws, int nmax) {
    nmax = std::min(nmax, sp.n_usable);
    const auto& a = geom.endpoints();
    const auto inte = geom.interior();
    if (!(j_lo < inte.front().lo && j_hi > inte.back().hi))
        throw config_error("stability window must contain the interior cuts");
    if (!(j_lo > a[1] && j_hi < a[a.size() - 2]))
        throw config_error("stability window must stay inside the outer gaps");

    StabilityResult out;
    out.nmax = nmax;
    out.g_edge = S.g_plus(j_hi).real();
    const real expo = out.g_edge + real(0.5);

    // gap pieces of J and a sampling grid over all of J for the sup
    std::vector<std::pair<real, real>> pieces;
    pieces.emplace_back(j_lo, inte.front().lo);
    for (size_t i = 0; i + 1 < inte.size(); ++i) pieces.emplace_back(inte[i].hi, inte[i + 1].lo);
    pieces.emplace_back(inte.back().hi, j_hi);

    out.c_j = 0;
    for (int n = 0; n < nmax; ++n) {
        const Vec fwn = sp.f_w(n);
        real sup = 0;
        for (int j = 0; j < sp.xi.size(); ++j) sup = std::max(sup, std::fabs(fwn[j]));
        for (const auto& p : pieces)
            for (int i = 0; i <= 40; ++i) {
                const real y = p.first + (p.second - p.first) * real(i) / 40;
                sup = std::max(sup, std::fabs(evaluate_f_off_interval(sp, geom, n, y)));
            }
        out.c_j = std::max(out.c_j, sup / std::exp(sp.kappa(n) * expo));
    }
    real ssum = 0;
    for (int n = 0; n < nmax; ++n) ssum += 1 / real(std::max(n, 1) * std::max(n, 1));
    out.c_star = std::sqrt(real(3)) * out.c_j * std::sqrt(ssum);

    const std::vector<real>*t, *v;
    detail::gl_cached(80, t, v);
    // precompute eigenfunction samples on the whole J grid
    Mat Fi(sp.xi.size(), nmax);
    for (int n = 0; n < nmax; ++n) Fi.col(n) = sp.f_w(n);
    std::vector<Mat> Fp;
    std::vector<Vec> wp;
    for (const auto& p : pieces) {
        Mat M(t->size(), nmax);
        Vec w(t->size());
        for (size_t i = 0; i < t->size(); ++i) {
            const real y = (p.first + p.second) / 2 + (p.second - p.first) / 2 * (*t)[i];
            w[i] = (p.second - p.first) / 2 * (*v)[i];
            for (int n = 0; n < nmax; ++n) M(int(i), n) = evaluate_f_off_interval(sp, geom, n, y);
        }
        Fp.push_back(std::move(M));
        wp.push_back(std::move(w));
    }

    std::mt19937_64 eng(seed);
    auto unif = [&]() { return (real(eng() >> 11) + real(0.5)) / real(1ull << 53); };
    out.empirical = 0;
    for (int d = 0; d < ndraws; ++d) {
        Vec draw(nmax);
        for (int n = 0; n < nmax; n += 2) {
            const real u1 = unif(), u2 = unif();
            const real rr = std::sqrt(-2 * std::log(u1));
            draw[n] = rr * std::cos(2 * PI * u2);
            if (n + 1 < nmax) draw[n + 1] = rr * std::sin(2 * PI * u2);
        }
        draw /= draw.norm();
        Vec psi(nmax);
        for (int n = 0; n < nmax; ++n)
            psi[n] = draw[n] / (real(std::max(n, 1)) * std::exp(sp.kappa(n) * expo));

        real mass = 0;
        Vec vi = Fi * psi;
        for (int j = 0; j < vi.size(); ++j) mass += sp.wi[j] * vi[j] * vi[j];
        for (size_t pi = 0; pi < Fp.size(); ++pi) {
            Vec vg = Fp[pi] * psi;
            for (int i = 0; i < vg.size(); ++i) mass += wp[pi][i] * vg[i] * vg[i];
        }
        out.empirical = std::max(out.empirical, std::sqrt(mass));
    }
    out.ratio = out.empirical / out.c_star;
    return out;
}

}  // namespace ghl
