#pragma once

// Multi-interval configuration: ordered endpoints a_1 < ... < a_{2g+2}, the
// classification of the 2g+1 segments between them, the weight w, the radical
// R with its branch bookkeeping, and cosine-substituted quadrature rules that
// absorb inverse-square-root endpoint singularities.

#include <algorithm>
#include <sstream>

#include "common.hpp"

namespace ghl {

enum class SegKind { exterior_cut, interior_cut, gap };

struct Segment {
    real lo = 0, hi = 0;
    SegKind kind = SegKind::gap;
};

struct QuadratureRule {
    int segment = -1;            // index into GapGeometry::segments()
    std::vector<real> x;         // nodes, ascending, strictly interior
    std::vector<real> w;         // positive weights
    int order = 0;

    template <class F>
    real integrate(F&& f) const {
        real s = 0;
        for (size_t i = 0; i < x.size(); ++i) s += f(x[i]) * w[i];
        return s;
    }
    template <class F>
    cplx integrate_c(F&& f) const {
        cplx s = 0;
        for (size_t i = 0; i < x.size(); ++i) s += f(x[i]) * w[i];
        return s;
    }
};

// substitution x = c + r cos(theta) with Gauss-Legendre in theta; the Jacobian
// r sin(theta) cancels (x - a)^{-1/2} blow-up at both ends with spectral accuracy
inline QuadratureRule cos_rule(real lo, real hi, int n) {
    if (n < 8) throw config_error("cos_rule: quadrature order below minimum (8)");
    std::vector<real> t, v;
    gauss_legendre(n, t, v);
    QuadratureRule q;
    q.order = n;
    q.x.resize(n);
    q.w.resize(n);
    const real c = (lo + hi) / 2, r = (hi - lo) / 2;
    for (int i = 0; i < n; ++i) {
        const real th = PI * (t[i] + 1) / 2;
        // theta ascending maps cos descending; store reversed so x ascends
        q.x[n - 1 - i] = c + r * std::cos(th);
        q.w[n - 1 - i] = PI / 2 * v[i] * r * std::sin(th);
    }
    return q;
}

class GapGeometry {
  public:
    explicit GapGeometry(std::vector<real> endpoints) : a_(std::move(endpoints)) {
        if (a_.size() < 6 || a_.size() % 2 != 0) {
            std::ostringstream os;
            os << "endpoints: need an even count >= 6 (got " << a_.size() << ")";
            throw config_error(os.str());
        }
        for (size_t i = 0; i + 1 < a_.size(); ++i) {
            if (!(a_[i] < a_[i + 1])) {
                std::ostringstream os;
                os << "endpoints: not strictly increasing at pair (a[" << i + 1
                   << "] = " << double(a_[i]) << ", a[" << i + 2 << "] = "
                   << double(a_[i + 1]) << ")";
                throw config_error(os.str());
            }
        }
        g_ = int(a_.size() / 2) - 1;
        for (size_t i = 0; i + 1 < a_.size(); ++i) {
            Segment s;
            s.lo = a_[i];
            s.hi = a_[i + 1];
            if (i % 2 == 0)
                s.kind = (i == 0 || i + 2 == a_.size()) ? SegKind::exterior_cut
                                                        : SegKind::interior_cut;
            else
                s.kind = SegKind::gap;
            segs_.push_back(s);
        }
    }

    int genus() const { return g_; }
    const std::vector<real>& endpoints() const { return a_; }
    const std::vector<Segment>& segments() const { return segs_; }

    std::vector<Segment> cuts() const { return pick({SegKind::exterior_cut, SegKind::interior_cut}); }
    std::vector<Segment> exterior() const { return pick({SegKind::exterior_cut}); }
    std::vector<Segment> interior() const { return pick({SegKind::interior_cut}); }
    std::vector<Segment> gaps() const { return pick({SegKind::gap}); }

    // w(x) = sqrt((a_last - x)(x - a_first)), positive on the open band
    real weight_w(real x) const {
        const real p = (a_.back() - x) * (x - a_.front());
        return p <= 0 ? real(0) : std::sqrt(p);
    }
    cplx weight_w(cplx z) const {
        return std::sqrt((cplx(a_.back()) - z) * (z - cplx(a_.front())));
    }

    // R(z) as the product of principal square roots; analytic off the cuts
    // (the sign flips across the axis cancel pairwise over the gaps), and
    // R(z)/z^{g+1} -> 1 along the positive real axis
    cplx radical_R(cplx z) const {
        cplx p = 1;
        for (real aj : a_) p *= std::sqrt(z - cplx(aj));
        return p;
    }

    // boundary value from above at real x: i^q prod sqrt|x - a_j|,
    // q = #{a_j > x}; zero exactly at branch points
    cplx radical_R_plus(real x) const {
        int q = 0;
        real mag = 1;
        for (real aj : a_) {
            if (aj > x) ++q;
            mag *= std::sqrt(std::fabs(x - aj));
        }
        switch (q & 3) {
            case 0: return cplx(mag, 0);
            case 1: return cplx(0, mag);
            case 2: return cplx(-mag, 0);
            default: return cplx(0, -mag);
        }
    }
    cplx radical_R_minus(real x) const { return -radical_R_plus(x); }

    bool at_branch_point(real x, real tol = 0) const {
        for (real aj : a_)
            if (std::fabs(x - aj) <= tol) return true;
        return false;
    }

    std::vector<QuadratureRule> build_rules(int nq) const {
        if (nq < 8) throw config_error("build_rules: N_q below minimum (8)");
        std::vector<QuadratureRule> out;
        for (size_t i = 0; i < segs_.size(); ++i) {
            QuadratureRule q = cos_rule(segs_[i].lo, segs_[i].hi, nq);
            q.segment = int(i);
            out.push_back(std::move(q));
        }
        return out;
    }

  private:
    std::vector<Segment> pick(std::initializer_list<SegKind> kinds) const {
        std::vector<Segment> out;
        for (const auto& s : segs_)
            for (SegKind k : kinds)
                if (s.kind == k) out.push_back(s);
        return out;
    }

    std::vector<real> a_;
    int g_ = 0;
    std::vector<Segment> segs_;
};

}  // namespace ghl
