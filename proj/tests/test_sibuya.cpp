#include <cmath>

#include "doctest.h"
#include "operlab/errors.hpp"
#include "operlab/sibuya.hpp"

using namespace operlab;

namespace {

template <class F>
ErrorKind kind_of(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("no error thrown");
    return ErrorKind::InvalidArgument;
}

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(1e-300, std::abs(b)); }

CoverPoint P(cplx z) { return CoverPoint::principal(z); }

cplx ratio(const SolutionSample& a, const SolutionSample& b) {
    return a.value / b.value * std::exp(a.log_scale - b.log_scale);
}

SchroedingerSpec ground(double k, double l) { return build_LG(k, l, 0.0L, 0, {}); }

SchroedingerSpec depth1(double k, double l) {
    auto s = depth1_exact(k, l)[1];
    return build_LG(k, l, 0.0L, 0, {cldouble(s.real(), s.imag())});
}

}  // namespace

TEST_CASE("truncated action") {
    for (cplx z : {cplx(2.7), cplx(-1.3, 4.0)}) {
        CoverPoint x = P(z);
        cplx lx = x.log();
        CHECK(rel(truncated_action(-1.0, x), z - 0.5 * lx) < 1e-14);
        CHECK(rel(truncated_action(0.0, x), 2.0 / 3 * x.pow(1.5) - x.pow(0.5)) < 1e-14);
        CHECK(rel(truncated_action(1.0, x), z * z / 2.0 - z / 2.0 - lx / 8.0) < 1e-14);
    }
    // R' − x^{a−1}√(1−1/x) = O(x^{a−⌊a⌋−2}).
    for (double k : {-1.2, -0.5, 0.0, 1.0, 2.3}) {
        auto n = make_normalizer(ground(k, 0.3), P(1.0));
        const double a = (k + 3) / 2;
        double prev = 0.0;
        for (double X : {1e2, 1e3, 1e4}) {
            CoverPoint x(X, 0.0);
            double d = std::abs(n.action_derivative(x) - x.pow(a - 1) * std::sqrt(1.0 - 1.0 / X));
            double bound = std::pow(X, a - std::floor(a) - 2);
            CHECK(d < 2 * bound);
            if (prev > 0) CHECK(d < prev);
            prev = d;
        }
    }
}

TEST_CASE("normalizer kinds") {
    auto lg = make_normalizer(ground(-1.2, 1.0), P(cplx(0.0, 2.0)));
    CHECK(std::abs(lg.b - (-0.1)) < 1e-15);
    CHECK(std::abs(lg.ray_arg() - (-2 * (M_PI / 2) / 1.8)) < 1e-14);
    auto blz = make_normalizer(build_BLZ(0.75, 0.2L, {}), P(2.0));
    CHECK(std::abs(blz.b + 0.5) < 1e-15);
    CHECK(std::abs(blz.delta - 0.25) < 1e-15);
    CHECK(rel(blz.mu, 2.0) < 1e-15);
    CHECK(blz.ray_arg() == 0.0);
    // F for the BLZ kind: 2√z − 2λ̄ z^{1/4} − (λ̄²/8) log z at k̄ = 3/4.
    CoverPoint z(50.0, 0.3);
    cplx expect = 2.0 * z.pow(0.5) - 2.0 * 2.0 * z.pow(0.25) - 4.0 / 8 * z.log();
    CHECK(rel(blz.action(z), expect) < 1e-14);
    // Twisted L^G with k < −1 has a non-integrable remainder.
    CHECK(kind_of([&] { make_normalizer(build_LG(-1.2, 1.0L, 0.3L, 0, {}), P(1.0)); }) ==
          ErrorKind::DegenerateParameters);
}

TEST_CASE("Sibuya Wronskians") {
    AnchorConfig cfg;
    for (const auto& spec : {ground(-1.2, 1.0), depth1(-1.2, 1.0), ground(1.0, 1.0 / 3)}) {
        for (cplx lam : {cplx(1.0), cplx(0.5, 0.8), cplx(3.0, -0.4)}) {
            CoverPoint L = P(lam);
            CoverPoint xm = default_match_point(spec, L, cfg);
            auto m1 = psi_rotated(spec, L, -1, xm, cfg);
            auto p0 = psi_rotated(spec, L, 0, xm, cfg);
            auto p1 = psi_rotated(spec, L, 1, xm, cfg);
            CHECK(rel(wronskian(p0, p1), 2.0 * lam) < 1e-9);
            CHECK(rel(wronskian(m1, p0), -2.0 * lam) < 1e-9);
            CHECK(rel(p0.true_value(), psi0_eval(spec, L, xm, cfg).true_value()) < 1e-14);
        }
    }
}

TEST_CASE("anchor doubling and match-radius independence") {
    auto spec = depth1(-1.2, 1.0);
    CoverPoint L = P(cplx(1.2, 0.3));
    AnchorConfig cfg;
    cfg.verify_anchor = true;
    cfg.anchor_tol = 1e-7;
    CoverPoint xm = default_match_point(spec, L, cfg);
    CHECK_NOTHROW(psi0_eval(spec, L, xm, cfg));
    // Explicit drift measurement with the anchor doubled.
    AnchorConfig a1, a2;
    a1.anchor = 5e4;
    a2.anchor = 1e5;
    auto s1 = psi0_eval(spec, L, xm, a1), s2 = psi0_eval(spec, L, xm, a2);
    CHECK(std::abs(ratio(s2, s1) - 1.0) < 1e-9);

    cplx sigma = stokes_sigma0(spec, L, xm, cfg);
    for (double f : {0.8, 1.2}) {
        CoverPoint other(xm.mod * f, xm.arg + 0.2);
        CHECK(rel(stokes_sigma0(spec, L, other, cfg), sigma) < 1e-8);
    }
    // σ₀ is invariant under λ → e^{iπ(k+3)} λ.
    CoverPoint L2 = L.rotated(M_PI * 1.8);
    cplx sigma2 = stokes_sigma0(spec, L2, default_match_point(spec, L2, cfg), cfg);
    CHECK(rel(sigma2, sigma) < 1e-8);
}

TEST_CASE("subdominance along the own ray") {
    auto spec = ground(-1.2, 1.0);
    CoverPoint L = P(cplx(0.9, 0.2));
    for (int j : {-1, 0, 1}) {
        auto n = make_normalizer(spec, L.rotated(-j * M_PI));
        double prev = INFINITY;
        for (double r : {3.0, 6.0, 12.0}) {
            auto s = psi_rotated(spec, L, j, CoverPoint(r, n.ray_arg()));
            double mag = std::log(std::abs(s.value)) + s.log_scale;
            CHECK(mag < prev);
            prev = mag;
        }
    }
}

TEST_CASE("L^G ground state agrees with the BLZ coordinate solution") {
    // z = (λ/(k+3))² x^{k+3}, ψ_G(x) = λ^{1/2} e^{κ} φ'(x)^{−1/2} ψ_BLZ(z) with κ = F_BLZ(z) − λR(x).
    const double k = 1.0, l = 1.0 / 3;
    auto pm = param_map(k, l, 0);
    auto g = ground(k, l);
    auto b = build_BLZ(pm.kbar, cldouble(pm.lbar.real(), pm.lbar.imag()), {});
    CoverPoint L = P(1.0);
    CoverPoint Lbar = pm.lambda_bar(L);
    CoverPoint x(2.0, 0.0);
    auto phi = [&](const CoverPoint& p) { return CoverPoint(std::pow(L.mod / (k + 3), 2) * std::pow(p.mod, k + 3), 2 * L.arg + (k + 3) * p.arg); };
    auto sg = psi0_eval(g, L, x);
    auto sb = psi0_eval(b, Lbar, phi(x));
    auto nb = make_normalizer(b, Lbar);
    CoverPoint X(1e3, 0.0);
    cplx kappa = nb.action(phi(X)) - truncated_action(k, X);
    cplx dphi = std::pow(1.0 / (k + 3), 2) * (k + 3) * std::pow(x.mod, k + 2);
    cplx predicted = std::sqrt(1.0) * std::exp(kappa) / std::sqrt(dphi) * sb.true_value();
    CHECK(rel(sg.true_value(), predicted) < 1e-9);
}

TEST_CASE("Sibuya errors") {
    auto spec = depth1(-1.2, 1.0);
    CHECK(kind_of([&] { psi0_eval(spec, P(1.0), CoverPoint(0.1, 0.0)); }) == ErrorKind::InvalidArgument);
    AnchorConfig tiny;
    tiny.min_action = 3.0;
    tiny.wkb_order = 1;
    tiny.verify_anchor = true;
    tiny.anchor_tol = 1e-12;
    CHECK(kind_of([&] { psi0_eval(spec, P(1.0), CoverPoint(2.0, 0.0), tiny); }) == ErrorKind::AnchorTooSmall);
}
