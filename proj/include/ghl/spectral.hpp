#pragma once

// Discretization of the exterior-trace operator and its singular value
// decomposition.  The operator takes a density on the interior cuts to its
// Cauchy average on the exterior cuts; conjugating by sqrt(w) and absorbing
// square roots of the quadrature weights gives the symmetrizable matrix
//
//   C[i][j] = sqrt(we_i)/sqrt(w(xe_i)) * sqrt(w(xi_j)) sqrt(wi_j)
//             / (2 pi (xi_j - xe_i)),
//
// whose singular values are the lambda_n and whose singular vectors sample
// the eigenfunction pair (f_n on the interior cuts, h_n on the exterior
// ones).  Cosine-mapped Gauss rules keep the endpoint behaviour of w benign.

#include <algorithm>
#include <limits>

#include "geometry.hpp"

namespace ghl {

struct KernelMatrix {
    Mat C;
    Vec xe, we, xi, wi;  // exterior and interior nodes/weights, ascending
};

inline KernelMatrix build_khat(const GapGeometry& geom, int N = 128) {
    if (N < 8) throw config_error("kernel discretization needs at least 8 nodes per cut");
    KernelMatrix K;
    std::vector<real> xe, we, xi, wi;
    const auto ext = geom.exterior();
    const auto inte = geom.interior();
    for (const auto& s : ext) {
        QuadratureRule q = cos_rule(s.lo, s.hi, N);
        xe.insert(xe.end(), q.x.begin(), q.x.end());
        we.insert(we.end(), q.w.begin(), q.w.end());
    }
    const int Mi = std::max<int>(8, int(std::llround(real(2 * N) / real(inte.size()))));
    for (const auto& s : inte) {
        QuadratureRule q = cos_rule(s.lo, s.hi, Mi);
        xi.insert(xi.end(), q.x.begin(), q.x.end());
        wi.insert(wi.end(), q.w.begin(), q.w.end());
    }
    const int nr = int(xe.size()), nc = int(xi.size());
    K.xe = Eigen::Map<Vec>(xe.data(), nr);
    K.we = Eigen::Map<Vec>(we.data(), nr);
    K.xi = Eigen::Map<Vec>(xi.data(), nc);
    K.wi = Eigen::Map<Vec>(wi.data(), nc);
    K.C.resize(nr, nc);
    for (int i = 0; i < nr; ++i) {
        const real rowf = std::sqrt(we[i]) / std::sqrt(geom.weight_w(xe[i]));
        for (int j = 0; j < nc; ++j)
            K.C(i, j) = rowf * std::sqrt(geom.weight_w(xi[j])) * std::sqrt(wi[j]) /
                        (2 * PI * (xi[j] - xe[i]));
    }
    return K;
}

struct SpectralData {
    Vec xe, we, xi, wi;
    Vec lambda;    // singular values, descending
    Mat fhat;      // column n: f_n / sqrt(w) at xi, unit l2 against wi
    Mat hhat;      // column n: h_n / sqrt(w) at xe
    Vec sqrt_w_xi, sqrt_w_xe, w_xi, w_xe;
    int n_usable = 0;

    real kappa(int n) const { return -std::log(lambda[n]); }
    Vec f_w(int n) const { return sqrt_w_xi.cwiseProduct(fhat.col(n)); }
    Vec h_w(int n) const { return sqrt_w_xe.cwiseProduct(hhat.col(n)); }

    int sign_changes(int n) const {
        int c = 0;
        real prev = 0;
        for (int j = 0; j < fhat.rows(); ++j) {
            const real v = fhat(j, n);
            if (v == 0) continue;
            if (prev != 0 && v * prev < 0) ++c;
            prev = v;
        }
        return c;
    }
};

// singular value floor below which long double Nystrom output is roundoff
inline real noise_floor(const Vec& lambda) {
    return 50 * (std::numeric_limits<real>::epsilon() / 2) * lambda[0];
}

inline SpectralData eigen_svd(const KernelMatrix& K, const GapGeometry& geom) {
    SpectralData S;
    S.xe = K.xe; S.we = K.we; S.xi = K.xi; S.wi = K.wi;
    Eigen::JacobiSVD<Mat> svd(K.C, Eigen::ComputeThinU | Eigen::ComputeThinV);
    S.lambda = svd.singularValues();
    const int nn = int(S.lambda.size());
    S.sqrt_w_xi.resize(S.xi.size());
    S.w_xi.resize(S.xi.size());
    for (int j = 0; j < S.xi.size(); ++j) {
        S.w_xi[j] = geom.weight_w(S.xi[j]);
        S.sqrt_w_xi[j] = std::sqrt(S.w_xi[j]);
    }
    S.sqrt_w_xe.resize(S.xe.size());
    S.w_xe.resize(S.xe.size());
    for (int i = 0; i < S.xe.size(); ++i) {
        S.w_xe[i] = geom.weight_w(S.xe[i]);
        S.sqrt_w_xe[i] = std::sqrt(S.w_xe[i]);
    }
    S.fhat.resize(S.xi.size(), nn);
    S.hhat.resize(S.xe.size(), nn);
    for (int n = 0; n < nn; ++n) {
        Vec fc = svd.matrixV().col(n).cwiseQuotient(S.wi.cwiseSqrt());
        Vec hc = svd.matrixU().col(n).cwiseQuotient(S.we.cwiseSqrt());
        if (fc[0] < 0) { fc = -fc; hc = -hc; }
        S.fhat.col(n) = fc;
        S.hhat.col(n) = hc;
    }
    const real floor_v = noise_floor(S.lambda);
    S.n_usable = 0;
    while (S.n_usable < nn && S.lambda[S.n_usable] > floor_v) ++S.n_usable;
    return S;
}

inline SpectralData build_spectral(const GapGeometry& geom, int N = 128) {
    return eigen_svd(build_khat(geom, N), geom);
}

// Nystrom continuation of f_n off the interior cuts through the kernel
// relation lambda f = K* h; valid anywhere in the open band minus the
// exterior cuts, and reproduces the interior samples on I_i itself.
inline real evaluate_f_off_interval(const SpectralData& S, const GapGeometry& geom, int n, real y) {
    const real wy = geom.weight_w(y);
    real s = 0;
    for (int i = 0; i < S.xe.size(); ++i)
        s += S.we[i] * S.sqrt_w_xe[i] * S.hhat(i, n) / (S.w_xe[i] * (S.xe[i] - y));
    return -wy / (2 * PI * S.lambda[n]) * s;
}

}  // namespace ghl
