#pragma once

// Hyperelliptic-surface package for the band [a_1, a_{2g+2}] cut along the
// exterior/interior intervals: normalization matrix A for the holomorphic
// differentials, period matrix tau, Abel map and its value at infinity, the
// real jump constants delta/Omega, boundary values of the scalar fields g and
// d along the axis, and the quarter-root spinor r.
//
// Conventions (fixed by their testable consequences, not by any figure):
//   R(z) = prod_j sqrt(z - a_j) with principal branches, R ~ z^{g+1} at +inf;
//   R_+(x) = i^q prod sqrt|x - a_j|, q = #{a_j > x};
//   omega^t = [1, z, ..., z^{g-1}] A^{-1} / R with
//     A rows 1..g-1 : 2 * integral over gap_k of z^{j-1}/R,
//     A row g       : 2 * integral over the whole band of z^{j-1}/R_+
//   so that integral of omega_m over gap_k equals delta_{km}/2.  With these
//   choices tau comes out symmetric and purely imaginary with Im tau > 0, and
//   -ln lambda_n grows with slope pi/Im tau_11 (checked against the spectral
//   module).  The cut contributions to row g cancel exactly: the residue of
//   z^{j-1}/R at infinity vanishes for j <= g, hence the row is real.

#include <map>
#include <mutex>

#include "geometry.hpp"

namespace ghl {

namespace detail {
// cached Gauss-Legendre base rules keyed by order
inline void gl_cached(int n, const std::vector<real>*& t, const std::vector<real>*& v) {
    static std::map<int, std::pair<std::vector<real>, std::vector<real>>> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lk(mu);
    auto it = cache.find(n);
    if (it == cache.end()) {
        std::vector<real> x, w;
        gauss_legendre(n, x, w);
        it = cache.emplace(n, std::make_pair(std::move(x), std::move(w))).first;
    }
    t = &it->second.first;
    v = &it->second.second;
}

inline QuadratureRule cos_rule_cached(real lo, real hi, int n) {
    const std::vector<real>*t, *v;
    gl_cached(n, t, v);
    QuadratureRule q;
    q.order = n;
    q.x.resize(n);
    q.w.resize(n);
    const real c = (lo + hi) / 2, r = (hi - lo) / 2;
    for (int i = 0; i < n; ++i) {
        const real th = PI * ((*t)[i] + 1) / 2;
        q.x[n - 1 - i] = c + r * std::cos(th);
        q.w[n - 1 - i] = PI / 2 * (*v)[i] * r * std::sin(th);
    }
    return q;
}
}  // namespace detail

class SurfaceData {
  public:
    explicit SurfaceData(GapGeometry geom, int nq = 320)
        : geom_(std::move(geom)), nq_(nq), g_(geom_.genus()) {
        compute_A();
        compute_tau();
        compute_u_infinity();
        compute_delta_omega();
        build_axis_cumulative();
        validate();
    }

    const GapGeometry& geometry() const { return geom_; }
    int genus() const { return g_; }
    int quadrature_order() const { return nq_; }

    const Mat& A() const { return A_; }
    const Mat& A_inv() const { return Ainv_; }
    const CMat& tau() const { return tau_; }
    CVec tau1() const { return tau_.col(0); }
    cplx tau11() const { return tau_(0, 0); }
    const Vec& u_infinity() const { return uinf_; }

    // jump constants, both stored gap-by-gap: index j (0-based) serves the
    // j-th gap, i.e. storage order [c_1, ..., c_{g-1}, c_0]
    const Vec& delta() const { return delta_; }
    const Vec& Omega() const { return Omega_; }
    const Eigen::MatrixXi& L() const { return L_; }

    // independent route to Omega: partial sums of cut integrals of omega_1
    // with lower boundary values, (4/i) sum_{k<=j} int_{cut_k} omega_1
    Vec omega_from_sums() const {
        Vec out(g_);
        cplx acc = 0;
        for (int k = 0; k < g_; ++k) {
            acc += -cut_omega_(k, 0);  // minus boundary value
            const cplx v = cplx(0, -4) * acc;
            if (k < g_ - 1)
                out[k] = v.real();  // Omega_{k+1}
            else
                out[g_ - 1] = v.real();  // Omega_0 uses all g leading cuts
        }
        return out;
    }

    // ---- differentials -------------------------------------------------

    CVec omega_plus(real x) const {
        CVec mono(g_);
        real p = 1;
        for (int j = 0; j < g_; ++j) { mono[j] = p; p *= x; }
        CVec out(g_);
        const cplx R = geom_.radical_R_plus(x);
        for (int m = 0; m < g_; ++m) {
            cplx s = 0;
            for (int j = 0; j < g_; ++j) s += mono[j] * Ainv_(j, m);
            out[m] = s / R;
        }
        return out;
    }

    CVec omega_at(cplx z) const {
        CVec out(g_);
        const cplx R = geom_.radical_R(z);
        cplx p = 1;
        CVec mono(g_);
        for (int j = 0; j < g_; ++j) { mono[j] = p; p *= z; }
        for (int m = 0; m < g_; ++m) {
            cplx s = 0;
            for (int j = 0; j < g_; ++j) s += mono[j] * Ainv_(j, m);
            out[m] = s / R;
        }
        return out;
    }

    // ---- Abel map -------------------------------------------------------

    // boundary value from above of int_{a_1}^{x} omega
    CVec abel_plus(real x) const {
        const auto& segs = geom_.segments();
        int i = seg_index_(x);
        const real lo = segs[i].lo;
        if (x - lo < real(1e-14) * (geom_.endpoints().back() - geom_.endpoints().front()))
            return cum_[i];
        QuadratureRule q = detail::cos_rule_cached(lo, x, nq_);
        CVec val = CVec::Zero(g_);
        for (size_t k = 0; k < q.x.size(); ++k) val += omega_plus(q.x[k]) * q.w[k];
        return cum_[i] + val;
    }

    // path a_1 -> (Re z on the upper axis boundary) -> z; requires Im z >= 0
    // and Re z inside the open band
    CVec abel_map(cplx z) const {
        if (z.imag() < 0) {
            CVec c = abel_map(std::conj(z));
            for (int m = 0; m < g_; ++m) c[m] = std::conj(c[m]);
            return c;
        }
        CVec u = abel_plus(z.real());
        if (z.imag() > 0) {
            const std::vector<real>*t, *v;
            detail::gl_cached(96, t, v);
            const real h = z.imag() / 2;
            for (size_t k = 0; k < t->size(); ++k) {
                const cplx zz(z.real(), h * ((*t)[k] + 1));
                u += omega_at(zz) * (cplx(0, 1) * cplx(h * (*v)[k]));
            }
        }
        return u;
    }

    // ---- scalar fields --------------------------------------------------

    cplx g_plus(real x) const { return real(0.5) - real(2) * abel_plus(x)[0]; }

    cplx g_eval(cplx z) const {
        if (z.imag() == 0) return g_plus(z.real());
        return real(0.5) - real(2) * abel_map(z)[0];
    }

    real g_infinity() const { return real(0.5) - real(2) * uinf_[0]; }

    // d boundary value from above; x must lie strictly inside a cut.  The
    // density is ln w / R_+ on cuts plus the i*delta corrections on gaps; the
    // principal value on the host cut is handled by singularity subtraction.
    cplx d_plus(real x) const {
        const auto& segs = geom_.segments();
        int xi = seg_index_(x);
        if (segs[xi].kind == SegKind::gap)
            throw numeric_error("d_plus: boundary value requested inside a gap");
        // snap off internal nodes: the subtraction quotient degenerates there
        {
            const QuadratureRule& host = axis_rules_[xi];
            const real len = segs[xi].hi - segs[xi].lo;
            for (real xn : host.x)
                if (std::fabs(xn - x) < real(1e-12) * len) {
                    x += real(3e-9) * len;
                    break;
                }
        }
        cplx br = 0;
        int gap_idx = 0;
        const cplx fx = lnw_over_R_(x);
        for (size_t i = 0; i < segs.size(); ++i) {
            const QuadratureRule& q = axis_rules_[i];
            if (segs[i].kind != SegKind::gap) {
                if (int(i) == xi) {
                    cplx s = 0;
                    for (size_t k = 0; k < q.x.size(); ++k)
                        s += (lnw_over_R_(q.x[k]) - fx) / (q.x[k] - x) * q.w[k];
                    br -= s;
                    br -= fx * std::log(std::fabs((segs[i].hi - x) / (x - segs[i].lo)));
                } else {
                    cplx s = 0;
                    for (size_t k = 0; k < q.x.size(); ++k)
                        s += lnw_over_R_(q.x[k]) / (q.x[k] - x) * q.w[k];
                    br -= s;
                }
            } else {
                const real dmu = delta_[gap_idx++];
                cplx s = 0;
                for (size_t k = 0; k < q.x.size(); ++k)
                    s += cplx(0, dmu) / ((q.x[k] - x) * geom_.radical_R_plus(q.x[k])) * q.w[k];
                br += s;
            }
        }
        return geom_.radical_R_plus(x) / (cplx(0, 2) * PI) * br -
               std::log(geom_.weight_w(x)) / real(2);
    }

    // d off the band (no principal value needed)
    cplx d_eval(cplx z) const {
        const auto& segs = geom_.segments();
        cplx br = 0;
        int gap_idx = 0;
        for (size_t i = 0; i < segs.size(); ++i) {
            const QuadratureRule& q = axis_rules_[i];
            if (segs[i].kind != SegKind::gap) {
                for (size_t k = 0; k < q.x.size(); ++k)
                    br -= lnw_over_R_(q.x[k]) / (q.x[k] - z) * q.w[k];
            } else {
                const real dmu = delta_[gap_idx++];
                for (size_t k = 0; k < q.x.size(); ++k)
                    br += cplx(0, dmu) / ((q.x[k] - z) * geom_.radical_R_plus(q.x[k])) * q.w[k];
            }
        }
        return geom_.radical_R(z) / (cplx(0, 2) * PI) * br;
    }

    // quarter-root spinor: index set J = {a_1} plus every second interior
    // branch point {a_5, a_7, ...} (|J| = g-1), J' its complement; normalized
    // so z * r(z) -> 1 at infinity
    cplx r_plus(real x) const {
        const auto& a = geom_.endpoints();
        real num = 1, den = 1;
        int nJ = 0, nJc = 0;
        for (size_t j = 0; j < a.size(); ++j) {
            const bool inJ = (j == 0) || (j >= 4 && j % 2 == 0 && j + 1 < a.size() - 1);
            if (inJ) {
                num *= std::fabs(x - a[j]);
                if (a[j] > x) ++nJ;
            } else {
                den *= std::fabs(x - a[j]);
                if (a[j] > x) ++nJc;
            }
        }
        const real mag = std::pow(num / den, real(0.25));
        const real ph = PI * real(nJ - nJc) / 4;
        return mag * cplx(std::cos(ph), std::sin(ph));
    }

    // max of Re g over a rectangle contour enclosing the interior cuts at
    // distance d (the hull [a_3, a_{2g}] widened by d, height d)
    real max_re_g_rectangle(real d, int nsamp = 60) const {
        const auto& a = geom_.endpoints();
        const real lo = a[2] - d, hi = a[a.size() - 3] + d;
        real mx = -1;
        for (int i = 0; i < nsamp; ++i) {
            const real x = lo + (hi - lo) * real(i) / real(nsamp - 1);
            mx = std::max(mx, g_eval(cplx(x, d)).real());
        }
        for (int i = 1; i + 1 <= nsamp / 3; ++i) {
            const real y = d * real(i) / real(nsamp / 3);
            mx = std::max(mx, g_eval(cplx(lo, y)).real());
            mx = std::max(mx, g_eval(cplx(hi, y)).real());
        }
        mx = std::max(mx, g_plus(lo).real());
        mx = std::max(mx, g_plus(hi).real());
        return mx;
    }

  private:
    int seg_index_(real x) const {
        const auto& segs = geom_.segments();
        for (size_t i = 0; i < segs.size(); ++i)
            if (segs[i].lo <= x && x <= segs[i].hi) return int(i);
        throw numeric_error("axis evaluation outside the band");
    }

    cplx lnw_over_R_(real x) const {
        return std::log(geom_.weight_w(x)) / geom_.radical_R_plus(x);
    }

    cplx seg_integral_(real lo, real hi, int j) const {
        QuadratureRule q = detail::cos_rule_cached(lo, hi, nq_);
        cplx s = 0;
        for (size_t k = 0; k < q.x.size(); ++k) {
            real p = 1;
            for (int e = 0; e < j; ++e) p *= q.x[k];
            s += p / geom_.radical_R_plus(q.x[k]) * q.w[k];
        }
        return s;
    }

    void compute_A() {
        A_.resize(g_, g_);
        const auto gaps = geom_.gaps();
        for (int k = 0; k + 1 < g_; ++k)
            for (int j = 0; j < g_; ++j) {
                const cplx v = real(2) * seg_integral_(gaps[k].lo, gaps[k].hi, j);
                A_(k, j) = v.real();
            }
        for (int j = 0; j < g_; ++j) {
            cplx tot = 0;
            for (const auto& s : geom_.segments()) tot += seg_integral_(s.lo, s.hi, j);
            tot *= 2;
            if (std::abs(tot.imag()) > real(1e-9) * (real(1) + std::abs(tot.real())))
                throw numeric_error("matrix A: band-row cut contributions failed to cancel");
            A_(g_ - 1, j) = tot.real();
        }
        Eigen::JacobiSVD<Mat> svd(A_);
        const real cond = svd.singularValues()(0) / svd.singularValues()(g_ - 1);
        if (!(cond < real(1e12)))
            throw numeric_error("matrix A is numerically singular (cond >= 1e12)");
        Ainv_ = A_.inverse();
    }

    cplx cut_omega_(int k, int m) const {
        const auto cuts = geom_.cuts();
        QuadratureRule q = detail::cos_rule_cached(cuts[k].lo, cuts[k].hi, nq_);
        cplx s = 0;
        for (size_t i = 0; i < q.x.size(); ++i) s += omega_plus(q.x[i])[m] * q.w[i];
        return s;
    }

    void compute_tau() {
        CKM_.resize(g_ + 1, g_);
        for (int k = 0; k <= g_; ++k)
            for (int m = 0; m < g_; ++m) CKM_(k, m) = cut_omega_(k, m);
        tau_.resize(g_, g_);
        for (int m = 0; m < g_; ++m) {
            for (int j = 0; j + 1 < g_; ++j) {
                cplx s = 0;
                for (int k = j + 1; k < g_; ++k) s += CKM_(k, m);
                tau_(j, m) = real(2) * s;
            }
            cplx s = 0;
            for (int k = 0; k < g_; ++k) s += CKM_(k, m);
            tau_(g_ - 1, m) = real(-2) * s;
        }
    }

    // substitute t = a_1 - s^2 along the ray to -infinity; there
    // R(t) = (-1)^{g+1} s sqrt(prod_{j>=2} |t - a_j|), so the integrand of
    // u(inf) is smooth at s = 0 and decays like s^{-3}
    void compute_u_infinity() {
        const auto& a = geom_.endpoints();
        const real sgn = (g_ % 2 == 0) ? real(-1) : real(1);
        auto f = [&](real s, int m) -> real {
            const real t = a.front() - s * s;
            real M = 1;
            for (size_t j = 1; j < a.size(); ++j) M *= std::sqrt(std::fabs(t - a[j]));
            real mono = 0, p = 1;
            for (int j = 0; j < g_; ++j) { mono += p * Ainv_(j, m); p *= t; }
            return real(2) * mono / (sgn * M) * real(-1);
        };
        const std::vector<real>*t, *v;
        detail::gl_cached(480, t, v);
        uinf_.resize(g_);
        const real S1 = 3 * std::sqrt(a.back() - a.front());
        for (int m = 0; m < g_; ++m) {
            real acc = 0;
            for (size_t i = 0; i < t->size(); ++i) {
                const real s = S1 / 2 * ((*t)[i] + 1);
                acc += f(s, m) * (S1 / 2 * (*v)[i]);
            }
            for (size_t i = 0; i < t->size(); ++i) {
                const real u = ((*t)[i] + 1) / 2;   // s = S1/u on [S1, inf)
                if (u < real(1e-14)) continue;
                acc += f(S1 / u, m) * (real(0.5) * (*v)[i] * S1 / (u * u));
            }
            uinf_[m] = acc;
        }
    }

    void compute_delta_omega() {
        L_ = Eigen::MatrixXi::Identity(g_, g_);
        L_(0, g_ - 1) = -1;
        Mat Linv = Mat::Identity(g_, g_);
        Linv(0, g_ - 1) = 1;
        Vec rhs(g_);
        for (int m = 0; m < g_; ++m) rhs[m] = 2 * uinf_[m] - (m == g_ - 1 ? real(0.5) : real(0));
        delta_ = PI * (Linv * rhs);
        CVec om = cplx(0, -2) * (Linv.cast<cplx>() * tau_.col(0));
        Omega_.resize(g_);
        for (int m = 0; m < g_; ++m) Omega_[m] = om[m].real();
    }

    void build_axis_cumulative() {
        const auto& segs = geom_.segments();
        cum_.clear();
        cum_.push_back(CVec::Zero(g_));
        axis_rules_.clear();
        for (const auto& s : segs) {
            QuadratureRule q = detail::cos_rule_cached(s.lo, s.hi, nq_);
            CVec val = CVec::Zero(g_);
            for (size_t k = 0; k < q.x.size(); ++k) val += omega_plus(q.x[k]) * q.w[k];
            cum_.push_back(cum_.back() + val);
            axis_rules_.push_back(std::move(q));
        }
    }

    void validate() const {
        for (int i = 0; i < g_; ++i)
            for (int j = 0; j < g_; ++j) {
                if (std::abs(tau_(i, j) - tau_(j, i)) > real(1e-10))
                    throw numeric_error("period matrix failed symmetry at 1e-10");
                if (std::abs(tau_(i, j).real()) > real(1e-10))
                    throw numeric_error("period matrix has a nonvanishing real part");
            }
        Mat Y(g_, g_);
        for (int i = 0; i < g_; ++i)
            for (int j = 0; j < g_; ++j) Y(i, j) = tau_(i, j).imag();
        Eigen::SelfAdjointEigenSolver<Mat> es(Y);
        if (!(es.eigenvalues()(0) > 0))
            throw numeric_error("Im tau is not positive definite");
        if (!(tau_(0, 0).imag() > 0)) throw numeric_error("Im tau_11 must be positive");
    }

    GapGeometry geom_;
    int nq_;
    int g_;
    Mat A_, Ainv_;
    CMat tau_, CKM_;
    Vec uinf_, delta_, Omega_;
    Eigen::MatrixXi L_;
    std::vector<CVec> cum_;
    std::vector<QuadratureRule> axis_rules_;
};

}  // namespace ghl
