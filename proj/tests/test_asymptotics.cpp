#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "test_util.hpp"

#include "ghl/criteria.hpp"

using namespace ghl;

static const AsymptoticSweep& sweep() {
    static AsymptoticSweep s = asymptotic_sweep(tu::ref_surface(), tu::ref_theta(),
                                                tu::ref_scan(), tu::ref_spectral(),
                                                tu::ref_geom());
    return s;
}

TEST_CASE("sweep depth tracks both ladders") {
    const auto& sw = sweep();
    const int expect = std::min<int>(tu::ref_spectral().n_usable - 1,
                                     int(tu::ref_scan().roots.size()) - 1);
    CHECK(sw.n_hi == expect);
    REQUIRE(sw.n_hi >= 16);
    CHECK(int(sw.triples.size()) == sw.n_hi + 1);
    CHECK(int(sw.l2_gaps.size()) == sw.n_hi + 1);
}

TEST_CASE("the two wave branches carry equal modulus on the interior cut") {
    const auto& S = tu::ref_surface();
    AsymptoticEvaluator ev(S, tu::ref_theta());
    Vec pts(20);
    for (int i = 0; i < 20; ++i) pts[i] = real(-0.95L) + real(1.9L) * i / 19;
    const AxisSamples ax = sample_axis(S, pts);
    const real kt = tu::ref_scan().roots[2];
    for (int i = 0; i < 20; ++i) {
        const real ap = std::abs(ev.upsilon(kt, ax, i, +1));
        const real am = std::abs(ev.upsilon(kt, ax, i, -1));
        CHECK(std::fabs(ap - am) < 1e-8L * std::max(ap, am));
    }
}

TEST_CASE("branch selection settles on the lower sign") {
    for (int n = 0; n <= 5; ++n) CHECK(sweep().triples[n].branch == -1);
}

TEST_CASE("quarter-root envelope near an interior endpoint") {
    const auto& S = tu::ref_surface();
    AsymptoticEvaluator ev(S, tu::ref_theta());
    Vec pts(3);
    pts << real(-1) + real(1e-2L), real(-1) + real(1e-3L), real(-1) + real(1e-4L);
    const AxisSamples ax = sample_axis(S, pts);
    const real kt = tu::ref_scan().roots[1];
    real lo = std::numeric_limits<real>::max(), hi = 0;
    for (int i = 0; i < 3; ++i) {
        const real q = std::abs(ev.upsilon(kt, ax, i, -1)) *
                       std::pow(pts[i] + real(1), real(0.25L));
        lo = std::min(lo, q);
        hi = std::max(hi, q);
    }
    CHECK(hi < 2 * lo);
}

TEST_CASE("interior norms approach one from above") {
    const auto& sw = sweep();
    CHECK(std::fabs(sw.triples[0].norm_f - 1.2793L) < 3e-3L);
    CHECK(std::fabs(sw.triples[12].norm_f - 1) < 0.02L);
    CHECK(std::fabs(sw.triples[12].lambda_tilde -
                    std::exp(-tu::ref_scan().roots[12])) < 1e-18L);
}

TEST_CASE("l2 and central sup gaps against frozen references") {
    const auto& sw = sweep();
    CHECK(std::fabs(sw.l2_gaps[0] - 0.2030L) < 5e-3L);
    CHECK(std::fabs(sw.l2_gaps[12] - 0.0718L) < 5e-3L);
    if (sw.n_hi >= 17) CHECK(std::fabs(sw.l2_gaps[17] - 0.0613L) < 6e-3L);

    CHECK(std::fabs(sw.sup_gaps[0] - 0.0809L) < 3e-3L);
    CHECK(std::fabs(sw.sup_gaps[3] - 0.0413L) < 3e-3L);
    CHECK(std::fabs(sw.sup_gaps[8] - 0.0188L) < 3e-3L);
    CHECK(std::fabs(sw.sup_gaps[12] - 0.0134L) < 3e-3L);
}

TEST_CASE("root ladder envelope for the eigenvalue positions") {
    const auto& sp = tu::ref_spectral();
    const auto& scan = tu::ref_scan();
    const real frozen[] = {0.2423L, 0.1779L, 0.1690L, 0.1479L, 0.1417L,
                           0.1293L, 0.1250L, 0.1163L, 0.1132L, 0.1066L};
    for (int n = 3; n <= 12; ++n) {
        const real e = std::fabs(sp.kappa(n) - scan.roots[n]) * std::sqrt(scan.roots[n]);
        CHECK(std::fabs(e - frozen[n - 3]) < 3e-3L);
    }
}

TEST_CASE("log-eigenvalue slope matches the period prediction") {
    const SlopeFit fit = lambda_asymptotic_slope(tu::ref_spectral(), tu::ref_surface(), 5, 15);
    CHECK(fit.predicted > 0);
    CHECK(std::fabs(fit.fitted / fit.predicted - 1) < 0.02L);
    CHECK_THROWS_AS(lambda_asymptotic_slope(tu::ref_spectral(), tu::ref_surface(), 250, 255),
                    numeric_error);
}

TEST_CASE("exterior traces correlate with the decomposition vectors") {
    const auto& sw = sweep();
    const auto& sp = tu::ref_spectral();
    for (int n = 0; n <= 8; ++n) {
        const Vec hw = sp.h_w(n);
        const Vec& ht = sw.triples[n].h_tilde;
        real dot = 0, na = 0, nb = 0;
        for (int i = 0; i < hw.size(); ++i) {
            dot += sp.we[i] * hw[i] * ht[i];
            na += sp.we[i] * hw[i] * hw[i];
            nb += sp.we[i] * ht[i] * ht[i];
        }
        CHECK(std::fabs(dot) / std::sqrt(na * nb) > 0.9L);
    }
}
