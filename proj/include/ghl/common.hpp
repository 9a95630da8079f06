#pragma once

// Shared scalar types, error taxonomy, and Gauss-Legendre machinery used by
// every module.  All numerics run in extended precision (long double): the
// singular values of the coupling operator decay like exp(-c n), so the extra
// mantissa bits buy ~5 more resolvable spectral indices over plain double.

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace ghl {

using real = long double;
using cplx = std::complex<real>;

using Mat = Eigen::Matrix<real, Eigen::Dynamic, Eigen::Dynamic>;
using Vec = Eigen::Matrix<real, Eigen::Dynamic, 1>;
using CMat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic>;
using CVec = Eigen::Matrix<cplx, Eigen::Dynamic, 1>;

inline constexpr real PI = 3.14159265358979323846264338327950288L;

// exit code 2 territory: the run configuration itself is invalid
struct config_error : std::runtime_error {
    explicit config_error(const std::string& m) : std::runtime_error(m) {}
};

// exit code 1 territory: a numerical invariant failed mid-run
struct numeric_error : std::runtime_error {
    explicit numeric_error(const std::string& m) : std::runtime_error(m) {}
};

inline std::vector<real> linspace(real lo, real hi, int n) {
    std::vector<real> out(n);
    if (n == 1) { out[0] = lo; return out; }
    const real h = (hi - lo) / real(n - 1);
    for (int i = 0; i < n; ++i) out[i] = lo + h * real(i);
    out[n - 1] = hi;
    return out;
}

// Gauss-Legendre nodes/weights on [-1,1].  Golub-Welsch seed polished by two
// Newton steps on the recurrence so the nodes are accurate at long double.
inline void gauss_legendre(int n, std::vector<real>& x, std::vector<real>& w) {
    if (n < 1) throw config_error("gauss_legendre: order must be >= 1");
    Mat J = Mat::Zero(n, n);
    for (int k = 1; k < n; ++k) {
        const real b = real(k) / std::sqrt(real(4) * k * k - real(1));
        J(k, k - 1) = b;
        J(k - 1, k) = b;
    }
    Eigen::SelfAdjointEigenSolver<Mat> es(J);
    x.resize(n);
    w.resize(n);
    for (int i = 0; i < n; ++i) {
        real xi = es.eigenvalues()(i);
        real pn = 0, dpn = 0;
        for (int it = 0; it < 2; ++it) {
            real p0 = 1, p1 = xi;
            for (int k = 2; k <= n; ++k) {
                const real p2 = ((2 * k - 1) * xi * p1 - (k - 1) * p0) / real(k);
                p0 = p1;
                p1 = p2;
            }
            pn = p1;
            dpn = real(n) * (xi * p1 - p0) / (xi * xi - 1);
            xi -= pn / dpn;
        }
        x[i] = xi;
        w[i] = real(2) / ((real(1) - xi * xi) * dpn * dpn);
    }
}

}  // namespace ghl
