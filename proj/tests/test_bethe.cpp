#include <cmath>

#include "doctest.h"
#include "operlab/bethe.hpp"
#include "operlab/errors.hpp"

using namespace operlab;

namespace {

BetheRoots make(const GaudinProblem& p, std::vector<cldouble> s, std::vector<cldouble> t) {
    BetheRoots r;
    r.problem = p;
    r.s = std::move(s);
    r.t = std::move(t);
    return r;
}

double fit_exponent(const std::vector<double>& ell, const std::vector<double>& err) {
    double mx = 0, my = 0;
    for (size_t i = 0; i < ell.size(); ++i) {
        mx += std::log(ell[i]);
        my += std::log(err[i]);
    }
    mx /= ell.size();
    my /= ell.size();
    double sxy = 0, sxx = 0;
    for (size_t i = 0; i < ell.size(); ++i) {
        sxy += (std::log(ell[i]) - mx) * (std::log(err[i]) - my);
        sxx += (std::log(ell[i]) - mx) * (std::log(ell[i]) - mx);
    }
    return -sxy / sxx;
}

}  // namespace

TEST_CASE("residuals at explicit solutions") {
    const long double k = 1, l = 1.0L / 3;
    CHECK(bae_residual(make(GaudinProblem::blz_case(k, l, 0, 0), {}, {})).empty());
    auto r11 = bae_residual(make(GaudinProblem::blz_case(k, l, 1, 1), {0.75L}, {0.1875L}));
    CHECK(sup_norm(r11) < 1e-14);
    auto r10 = bae_residual(make(GaudinProblem::blz_case(k, l, 1, 0), {0.25L}, {}));
    CHECK(sup_norm(r10) < 1e-14);
    CHECK_THROWS_AS(bae_residual(make(GaudinProblem::blz_case(k, l, 2, 0), {0.5L, 0.5L}, {})), Error);
}

TEST_CASE("jacobian: analytic vs central differences") {
    const long double k = 1, l = 1.0L / 3;
    auto roots = make(GaudinProblem::blz_case(k, l, 1, 0), {0.4L}, {});
    auto J = bae_jacobian(roots);
    const long double m = k / 2 - l;
    CHECK(std::abs(J(0, 0) - (-m / (0.4L * 0.4L) - 0.5L / (0.6L * 0.6L))) < 1e-14);

    auto p = make(GaudinProblem::blz_case(k, l, 2, 1), {cldouble(0.3L, 0.1L), 0.7L}, {0.55L});
    auto Jp = bae_jacobian(p);
    const long double h = 1e-7L;
    for (int c = 0; c < 3; ++c) {
        auto plus = p, minus = p;
        if (c < 2) {
            plus.s[c] += h;
            minus.s[c] -= h;
        } else {
            plus.t[0] += h;
            minus.t[0] -= h;
        }
        auto rp = bae_residual(plus), rm = bae_residual(minus);
        for (int row = 0; row < 3; ++row) CHECK(std::abs((rp[row] - rm[row]) / (2 * h) - Jp(row, c)) < 1e-6);
    }
    CHECK(bae_jacobian(make(GaudinProblem::blz_case(k, l, 0, 0), {}, {})).size() == 0);
}

TEST_CASE("sum rule") {
    const long double k = 1, l = 1.0L / 3;
    CHECK(std::abs(sum_rule(make(GaudinProblem::blz_case(k, l, 0, 0), {}, {}))) == 0);
    CHECK(std::abs(sum_rule(make(GaudinProblem::blz_case(k, l, 1, 1), {0.75L}, {0.1875L}))) < 1e-15);
    CHECK(std::abs(sum_rule(make(GaudinProblem::blz_case(k, l, 1, 0), {0.25L}, {}))) < 1e-15);
}

TEST_CASE("exponential BAE at W/U roots") {
    CHECK(exp_bae_residual({}, {}).empty());
    CHECK(std::abs(exp_bae_residual({0.5L}, {})[0]) < 1e-18);
    auto [W, U] = wu_recursion(-1);
    std::vector<cldouble> w, u;
    for (auto v : flat_roots(poly_roots(W))) w.emplace_back(v.real(), v.imag());
    for (auto v : flat_roots(poly_roots(U))) u.emplace_back(v.real(), v.imag());
    CHECK(sup_norm(exp_bae_residual(w, u)) < 1e-10);
    for (int r = -3; r <= 3; ++r) {
        auto [Wr, Ur] = wu_recursion(r);
        std::vector<cldouble> wr, ur;
        if (Wr.degree() > 0)
            for (auto v : flat_roots(poly_roots(Wr))) wr.emplace_back(v.real(), v.imag());
        if (Ur.degree() > 0)
            for (auto v : flat_roots(poly_roots(Ur))) ur.emplace_back(v.real(), v.imag());
        CHECK(sup_norm(exp_bae_residual(wr, ur)) < 1e-8);
    }
}

TEST_CASE("seeds") {
    CHECK(seed_from_partition(Partition(), 0, 10, 1).s.empty());
    auto s1 = seed_from_partition(Partition({1}), 0, 10, 1);
    REQUIRE(s1.s.size() == 1);
    CHECK(std::abs(s1.s[0] - 0.75L) < 1e-15);
    CHECK(std::abs(s1.t[0] - 0.75L * 0.99L) < 1e-15);
    auto sr = seed_from_partition(Partition(), 1, 10, 1);
    REQUIRE(sr.s.size() == 1);
    CHECK(sr.t.empty());
    CHECK(std::abs(sr.s[0] - 1.005L) < 1e-15);  // W_1 root 1/2
    CHECK_THROWS_AS(seed_from_partition(Partition({2, 1}), 0, 10, 1), Error);
}

TEST_CASE("seeds solve the rescaled oscillator system at leading order") {
    // v_j = (s_j - x*) ell are roots of V_mu scaled by 1/c; they solve the order-0 system.
    const long double k = -1.2L, ell = 10;
    for (auto mu : {Partition({1}), Partition({2}), Partition({1, 1}), Partition({3}), Partition({2, 2})}) {
        auto seed = seed_from_partition(mu, 0, ell, k);
        const long double xstar = (k + 2) / (k + 3);
        std::vector<cldouble> v;
        for (auto s : seed.s) v.push_back((s - xstar) * ell);
        for (size_t i = 0; i < v.size(); ++i) {
            cldouble lhs = 0.5L * std::pow(k + 3, 3) / (k + 2) * v[i];
            long double scale = std::abs(lhs);
            for (size_t j = 0; j < v.size(); ++j) {
                if (j == i) continue;
                cldouble t = 2 * (k + 2) * (k + 2) / ((k + 3) * (k + 3) * std::pow(v[i] - v[j], 3));
                lhs -= t;
                scale = std::max(scale, std::abs(t));
            }
            CHECK(static_cast<double>(std::abs(lhs)) < 1e-8 * std::max(1.0, static_cast<double>(scale)));
        }
    }
}

TEST_CASE("newton at explicit low-depth solutions") {
    const long double k = 1, l = 1.0L / 3;
    auto p11 = GaudinProblem::blz_case(k, l, 1, 1);
    auto exact = make(p11, {0.75L}, {0.1875L});
    auto sol = newton_solve(p11, exact);
    CHECK(sol.iterations <= 1);
    CHECK(sol.residual_norm < 1e-14);

    // d = (2,1), k = 1, m = 1 (l = -1/2): t = 15/28, y0 = x^2 - 95/84 x + 25/98.
    auto p21 = GaudinProblem::blz_case(1, -0.5L, 2, 1);
    const long double b = -95.0L / 84, c = 25.0L / 98;
    const cldouble disc = std::sqrt(cldouble(b * b - 4 * c));
    const cldouble sa = (-b - disc) / 2.0L, sb = (-b + disc) / 2.0L;
    auto guess = make(p21, {sa * 1.01L, sb * 0.99L}, {15.0L / 28 * 1.01L});
    auto s21 = newton_solve(p21, guess);
    CHECK(std::abs(s21.t[0] - 15.0L / 28) < 1e-13);
    CHECK(std::abs(s21.s[0] + s21.s[1] + b) < 1e-13);
    CHECK(std::abs(s21.s[0] * s21.s[1] - c) < 1e-13);

    // d = (1,2), k = 1, l = 1/3: s = (k+2l+2)/(k+2l+3) = 11/14.
    auto p12 = GaudinProblem::blz_case(k, l, 1, 2);
    const long double s2 = 11.0L / 14;
    const long double e1 = (2 * l - 1) / l * s2, e0 = (2 * l - 1) / (2 * l + 1) * s2 * s2;
    const cldouble dt = std::sqrt(cldouble(e1 * e1 - 4 * e0));
    auto s12 = newton_solve(p12, make(p12, {s2 + 0.01L}, {(e1 - dt) / 2.0L * 1.02L, (e1 + dt) / 2.0L * 0.98L}));
    CHECK(std::abs(s12.s[0] - s2) < 1e-13);
}

TEST_CASE("newton fails loudly") {
    auto p = GaudinProblem::blz_case(1, 1.0L / 3, 1, 0);
    NewtonOptions opts;
    opts.max_iter = 1;
    CHECK_THROWS_AS(newton_solve(p, make(p, {cldouble(5, 5)}, {}), opts), Error);
}

TEST_CASE("continuation in ell with double and extended precision") {
    const long double k = -1.2L;
    std::vector<ContinuationStage> stages;
    auto sol = continue_in_ell(Partition({1}), 0, {20, 10, 5}, k, {}, &stages);
    REQUIRE(stages.size() == 3);
    for (const auto& st : stages) CHECK(st.residual < 1e-12);
    CHECK(std::abs(sum_rule(sol)) < 1e-10);
    auto empty = continue_in_ell(Partition(), 0, {20, 10}, k);
    CHECK(empty.s.empty());
    CHECK(empty.residual_norm == 0);

    NewtonOptions dbl;
    dbl.precision = Precision::Double;
    dbl.tol = 1e-11;
    auto sd = continue_in_ell(Partition({2}), 0, geometric_ell_path(8, 4), k, dbl);
    CHECK(sd.residual_norm < 1e-11);
    auto se = continue_in_ell(Partition({2}), 0, geometric_ell_path(8, 4), k);
    CHECK(root_distance(sd, se) < 1e-9);
}

TEST_CASE("homotopy endpoints approach seeds at rate ell^-2 and partitions stay distinct") {
    const long double k = -1.2L;
    for (int r : {-1, 0, 1}) {
        for (auto mu : {Partition(), Partition({1}), Partition({2}), Partition({1, 1})}) {
            if (mu.weight() + r * r > 3) continue;
            if (mu.empty() && r == 0) continue;
            std::vector<double> ells{10, 15, 20}, errs;
            for (double ell : ells) {
                auto sol = continue_in_ell(mu, r, geometric_ell_path(40, ell), k);
                CHECK(sol.residual_norm < 1e-12);
                CHECK(std::abs(sum_rule(sol)) < 1e-10);
                errs.push_back(root_distance(sol, seed_from_partition(mu, r, ell, k)));
            }
            CHECK(fit_exponent(ells, errs) >= 1.5);
        }
    }
    auto a = continue_in_ell(Partition({2}), 0, geometric_ell_path(40, 10), k);
    auto b = continue_in_ell(Partition({1, 1}), 0, geometric_ell_path(40, 10), k);
    CHECK(root_distance(a, b) > 1e-6);
}
