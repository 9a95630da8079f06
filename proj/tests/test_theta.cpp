#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "test_util.hpp"

using namespace ghl;

static CVec cv2(cplx a, cplx b) {
    CVec v(2);
    v << a, b;
    return v;
}

TEST_CASE("theta value at the identity period matrix") {
    CMat id2 = CMat::Zero(2, 2);
    id2(0, 0) = id2(1, 1) = cplx(0, 1);
    ThetaContext T(id2);
    const cplx th = T.theta(CVec::Zero(2));
    // square of the genus-1 value sum exp(-pi n^2)
    CHECK(std::fabs(th.real() - 1.180340599016096226L) < 1e-15L);
    CHECK(std::fabs(th.imag()) < 1e-15L);
}

TEST_CASE("theta symmetries on the reference period matrix") {
    const auto& T = tu::ref_theta();
    const CVec v = cv2(cplx(0.17L, 0.29L), cplx(-0.35L, 0.11L));
    const cplx tv = T.theta(v);

    CHECK(std::abs(T.theta(-v) - tv) < 1e-12L * std::abs(tv));
    CHECK(std::abs(std::conj(T.theta(v.conjugate())) - tv) < 1e-12L * std::abs(tv));

    // shift by an integer vector
    const CVec mu = cv2(cplx(1), cplx(-2));
    CHECK(std::abs(T.theta(v + mu) - tv) < 1e-12L * std::abs(tv));

    // shift by a period-matrix column combination
    const CMat& tau = tu::ref_surface().tau();
    for (auto lam : {std::pair<int, int>{0, 1}, {1, -1}}) {
        CVec lv = cv2(cplx(real(lam.first)), cplx(real(lam.second)));
        cplx ph = 0;
        for (int i = 0; i < 2; ++i) {
            ph += cplx(0, -2) * PI * lv[i] * v[i];
            for (int j = 0; j < 2; ++j) ph += cplx(0, -1) * PI * lv[i] * tau(i, j) * lv[j];
        }
        const cplx lhs = T.theta(v + tau * lv);
        const cplx rhs = std::exp(ph) * tv;
        CHECK(std::abs(lhs - rhs) < 1e-9L * std::max(std::abs(lhs), std::abs(rhs)));
    }
}

TEST_CASE("gradient matches a central difference") {
    const auto& T = tu::ref_theta();
    const CVec v = cv2(cplx(0.23L, -0.41L), cplx(-0.08L, 0.37L));
    const CVec gr = T.grad_theta(v);
    const real h = 1e-6L;
    for (int m = 0; m < 2; ++m) {
        CVec e = CVec::Zero(2);
        e[m] = h;
        const cplx fd = (T.theta(v + e) - T.theta(v - e)) / (2 * h);
        CHECK(std::abs(gr[m] - fd) < 1e-6L * std::max(real(1), std::abs(gr[m])));
    }
}

TEST_CASE("truncation radius on the reference matrix") {
    CHECK(tu::ref_theta().radius() == 12);
}

TEST_CASE("divisor line values") {
    const auto& S = tu::ref_surface();
    const Vec W0 = line_W(S, 0);
    CHECK(std::fabs(W0[0] - real(5) / 6) < 1e-10L);
    CHECK(std::fabs(W0[1] - real(1) / 3) < 1e-10L);

    for (real k : {real(1), real(10), real(100)}) {
        const Vec d = line_W(S, k + tu::kPeriod) - line_W(S, k);
        CHECK(std::fabs(d[0] - 1) < 1e-10L);
        CHECK(std::fabs(d[1] + 0.5L) < 1e-10L);
    }

    // the scanned line keeps a constant imaginary part
    for (real k : {real(0.3L), real(7.9L)}) {
        const CVec v = spectral_line_v(S, k);
        for (int m = 0; m < 2; ++m)
            CHECK(std::fabs(v[m].imag() + S.tau()(m, 0).imag() / 2) < 1e-14L);
    }
}

TEST_CASE("root ladder of the divisor scan") {
    const auto& scan = tu::ref_scan();
    const auto& kt = tu::ref_kappa_tilde();
    REQUIRE(scan.roots.size() == kt.size());
    for (size_t n = 0; n < kt.size(); ++n)
        CHECK(std::fabs(scan.roots[n] - kt[n]) < 2e-9L);

    // spacings stay within the half-to-three-halves period band
    const real P = tu::kPeriod;
    CHECK(std::fabs(scan.roots[0] - P / 2) < 1e-9L);
    for (size_t n = 0; n + 1 < scan.roots.size(); ++n) {
        const real s = scan.roots[n + 1] - scan.roots[n];
        CHECK(s > 0.5L * P);
        CHECK(s < 1.5L * P);
    }
    // exactly one root per period window
    for (int k = 0; k < 10; ++k) {
        int c = 0;
        for (real r : scan.roots)
            if (r >= k * P && r < (k + 1) * P) ++c;
        CHECK(c == 1);
    }

    size_t marked = 0;
    for (char f : scan.is_root) marked += (f != 0);
    CHECK(marked == scan.roots.size());

    // polished roots sit far below the off-root magnitude
    const auto& S = tu::ref_surface();
    const auto& T = tu::ref_theta();
    const real at_root = std::abs(T.theta(spectral_line_v(S, scan.roots[2])));
    const real nearby = std::abs(T.theta(spectral_line_v(S, scan.roots[2] + 0.5L)));
    CHECK(at_root < 1e-6L * nearby);

    REQUIRE(scan.lambda_tilde.size() == scan.roots.size());
    for (size_t n = 0; n + 1 < scan.lambda_tilde.size(); ++n) {
        CHECK(scan.lambda_tilde[n] > 0);
        CHECK(scan.lambda_tilde[n + 1] < scan.lambda_tilde[n]);
    }
}
