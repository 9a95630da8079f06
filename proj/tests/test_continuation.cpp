#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "test_util.hpp"

#include "ghl/continuation.hpp"

using namespace ghl;

// sample lookup for densities only ever evaluated at quadrature nodes
static std::function<real(real)> node_samples(const Vec& xs, Vec vals) {
    return [&xs, vals](real x) {
        int best = 0;
        real bd = std::numeric_limits<real>::max();
        for (int i = 0; i < xs.size(); ++i) {
            const real d = std::fabs(xs[i] - x);
            if (d < bd) { bd = d; best = i; }
        }
        return vals[best];
    };
}

TEST_CASE("closed-form full-band transforms of weighted monomials") {
    const auto& g = tu::ref_geom();
    for (real x : {real(-1.7L), real(0.3L), real(2.9L)}) {
        CHECK(std::fabs(phantom_data(g, 0, x) + x) < 1e-12L);
        CHECK(std::fabs(phantom_data(g, 1, x) - (4.5L - x * x)) < 1e-12L);
        CHECK(std::fabs(phantom_data(g, 2, x) - (4.5L * x - x * x * x)) < 1e-12L);
    }
}

TEST_CASE("closed forms agree with a principal value quadrature") {
    const auto& g = tu::ref_geom();
    const QuadratureRule q = cos_rule(real(-3), real(3), 800);
    for (int k = 0; k <= 2; ++k) {
        for (real x : {real(-1.7L), real(0.3L), real(1.9L)}) {
            auto F = [&](real t) { return g.weight_w(t) * std::pow(t, real(k)); };
            const real Fx = F(x);
            const real sub = q.integrate([&](real t) { return (F(t) - Fx) / (t - x); });
            const real pv = sub + Fx * std::log(std::fabs((3 - x) / (x + 3)));
            CHECK(std::fabs(phantom_data(g, k, x) - pv / PI) < 1e-9L);
        }
    }
}

TEST_CASE("principal value on the region of interest") {
    const auto& g = tu::ref_geom();
    auto w = [&](real t) { return g.weight_w(t); };
    auto wt = [&](real t) { return g.weight_w(t) * t; };
    for (real y : {real(0.7L), real(-1.3L)}) {
        const real lg = std::log(std::fabs((2 - y) / (y + 2)));
        CHECK(std::fabs(pv_roi(g, w, real(-2), real(2), y) - lg) < 1e-12L);
        CHECK(std::fabs(pv_roi(g, wt, real(-2), real(2), y) - (4 + y * lg)) < 1e-12L);
    }
}

TEST_CASE("decomposition picks out a single mode") {
    const auto& sp = tu::ref_spectral();
    const Vec c = decompose(sp, node_samples(sp.xe, sp.h_w(3)), 10);
    REQUIRE(c.size() == 10);
    for (int n = 0; n < 10; ++n)
        CHECK(std::fabs(c[n] - (n == 3 ? 1 : 0)) < 1e-12L);
    // truncation clamps at the usable range
    CHECK(decompose(sp, node_samples(sp.xe, sp.h_w(0)), 1000).size() == sp.n_usable);
}

TEST_CASE("a finite expansion is recovered exactly") {
    const auto& sp = tu::ref_spectral();
    Vec samples = Vec::Zero(sp.xe.size());
    Vec gamma(8);
    for (int n = 0; n < 8; ++n) {
        gamma[n] = std::pow(real(-0.5L), real(n));
        samples += gamma[n] * sp.h_w(n);
    }
    const Vec c = decompose(sp, node_samples(sp.xe, samples), 12);
    for (int n = 0; n < 8; ++n) CHECK(std::fabs(c[n] - gamma[n]) < 1e-12L);
    for (int n = 8; n < 12; ++n) CHECK(std::fabs(c[n]) < 1e-12L);
}

TEST_CASE("zero data stays zero") {
    const auto& sp = tu::ref_spectral();
    auto zero = [](real) { return real(0); };
    const Vec c = decompose(sp, zero, 10);
    CHECK(c.cwiseAbs().maxCoeff() == real(0));
    CHECK(continue_psi(sp, tu::ref_geom(), c, real(1.5L), 10) == real(0));
}

TEST_CASE("full-column series collapses to the direct Cauchy sum") {
    const auto& sp = tu::ref_spectral();
    const auto& g = tu::ref_geom();
    auto phi = [](real x) { return std::exp(x / 3); };
    const int cols = int(sp.lambda.size());

    Vec c(cols);
    real norm2 = 0;
    for (int i = 0; i < sp.xe.size(); ++i)
        norm2 += sp.we[i] * phi(sp.xe[i]) * phi(sp.xe[i]) / sp.w_xe[i];
    for (int n = 0; n < cols; ++n) {
        real s = 0;
        for (int i = 0; i < sp.xe.size(); ++i)
            s += sp.we[i] * phi(sp.xe[i]) * sp.hhat(i, n) / sp.sqrt_w_xe[i];
        c[n] = s;
    }
    // discrete Parseval across the complete column set
    CHECK(std::fabs(c.squaredNorm() - norm2) < 1e-12L * norm2);

    for (real y : {real(-1.5L), real(0.25L), real(1.5L)}) {
        real series = 0;
        for (int n = 0; n < cols; ++n)
            series += 2 * sp.lambda[n] * c[n] * evaluate_f_off_interval(sp, g, n, y);
        real direct = 0;
        for (int i = 0; i < sp.xe.size(); ++i)
            direct += sp.we[i] * phi(sp.xe[i]) / (sp.w_xe[i] * (sp.xe[i] - y));
        direct *= -g.weight_w(y) / PI;
        CHECK(std::fabs(series - direct) < 1e-10L * std::fabs(direct));
    }
}

TEST_CASE("tail bound behaviour") {
    const auto& sp = tu::ref_spectral();
    const auto& S = tu::ref_surface();
    const real com = fit_c_omega(sp, tu::ref_geom(), S, real(1.5L));
    CHECK(com > 0);
    const real t8 = tail_bound(sp, S, com, real(1), real(1.5L), 8);
    const real t12 = tail_bound(sp, S, com, real(1), real(1.5L), 12);
    CHECK(t8 > t12);
    CHECK(t12 > 0);
    CHECK_THROWS_AS(tail_bound(sp, S, com, real(1), real(2.5L), 8), numeric_error);
}

TEST_CASE("truncated-data recovery of the pure weight phantom") {
    const auto& sp = tu::ref_spectral();
    const auto& g = tu::ref_geom();
    const auto& S = tu::ref_surface();
    const int nmax = std::min(10, sp.n_usable);
    const std::vector<real> pts = {real(-1.5L), real(1.5L)};
    const RoiRecovery rec = recover_roi(sp, g, S, 0, pts, nmax);

    REQUIRE(rec.psi_coeffs.size() == nmax);
    CHECK(std::fabs(rec.psi_coeffs[0] - 1.370419L) < 1e-4L);
    CHECK(std::fabs(rec.psi_coeffs[1]) < 1e-8L);
    CHECK(std::fabs(rec.psi_coeffs[2] + 0.005191L) < 1e-4L);

    for (size_t i = 0; i < rec.y.size(); ++i) {
        CHECK(rec.truth[i] == g.weight_w(rec.y[i]));
        CHECK(rec.abs_err[i] < 1e-6L * rec.truth[i]);
        CHECK(rec.tail[i] > 0);
        CHECK(rec.abs_err[i] < rec.tail[i]);
    }

    CHECK_THROWS_AS(recover_roi(sp, g, S, 0, {real(2.5L)}, nmax), config_error);
}
