#include <cmath>
#include <sstream>

#include "doctest.h"
#include "operlab/compare.hpp"
#include "operlab/errors.hpp"

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

double sup_residual(const std::vector<cplx>& z, double kbar, cplx lbar) {
    double m = 0.0;
    for (auto r : blz_system_residual(z, kbar, lbar)) m = std::max(m, std::abs(r));
    return m / (1.0 + std::abs(lbar * (lbar + 1.0)) / kbar);
}

}  // namespace

TEST_CASE("BLZ system from partition seeds") {
    CHECK(solve_blz_system(0, 0.4, 2.0, Partition()).empty());
    CHECK(kind_of([] { solve_blz_system(2, 0.4, 2.0, Partition({1})); }) == ErrorKind::InvalidArgument);
    for (double kbar : {0.25, 0.4444, 0.7}) {
        for (cplx lbar : {cplx(0.3, 0.0), cplx(3.0, 0.0), cplx(25.0, 0.0)}) {
            auto z = solve_blz_system(1, kbar, lbar, Partition({1}));
            REQUIRE(z.size() == 1);
            const cplx exact = blz_depth1_root(kbar, lbar);
            CHECK(std::abs(z[0] - exact) < 1e-12 * std::abs(exact));
        }
    }
    // Two partitions of 2 at large l̄: two distinct solutions, each close to its own seed.
    const double kbar = 0.4444;
    const cplx lbar = 40.0;
    auto a = solve_blz_system(2, kbar, lbar, Partition({2}));
    auto b = solve_blz_system(2, kbar, lbar, Partition({1, 1}));
    CHECK(sup_residual(a, kbar, lbar) < 1e-13);
    CHECK(sup_residual(b, kbar, lbar) < 1e-13);
    double gap = 0.0;
    for (size_t i = 0; i < 2; ++i) gap = std::max(gap, std::abs(a[i] - b[i]));
    CHECK(gap > 1.0);
    auto sa = blz_seed(kbar, lbar, Partition({2}));
    const double p = 40.5;
    for (size_t i = 0; i < 2; ++i) {
        double best = 1e300;
        for (auto s : sa) best = std::min(best, std::abs(a[i] - s));
        CHECK(best < 5.0 * p);  // O(l̄ + ½)
    }
    // The seed's p^{3/2} term: centred spread of the converged roots against the roots ±1/√2 of V_(2).
    const double big = 20000.5;
    BlzSolveOptions o;
    o.start_p = big;
    auto z = solve_blz_system(2, kbar, big - 0.5, Partition({2}), o);
    const double spread = std::abs(z[1] - z[0]) / std::sqrt(2.0) / std::pow(big, 1.5);
    CHECK(spread == doctest::Approx(std::pow(2.0, 0.25) * std::pow(kbar, 0.75) / (1.0 - kbar)).epsilon(1e-3));
    CHECK(std::abs((z[0] + z[1]).real() / 2.0 / (big * big) - kbar / (1.0 - kbar)) < 1e-4);
    CHECK(kind_of([&] { blz_seed(kbar, lbar, Partition({2, 1})); }) == ErrorKind::DegeneratePartition);
}

TEST_CASE("compare_zero_sets") {
    auto same = compare_zero_sets({3.0, 1.0, 2.0}, {2.0, 1.0, 3.0}, 1.0, 1e-12);
    CHECK(same.pass);
    CHECK(same.shift == 0);
    CHECK(same.max_rel_diff == 0.0);
    CHECK(same.rel_diff.size() == 3);
    CHECK(same.gaudin == std::vector<double>{1.0, 2.0, 3.0});
    auto scaled = compare_zero_sets({2.0, 4.0}, {1.0, 2.0 * (1 + 1e-9)}, 2.0, 1e-6);
    CHECK(scaled.pass);
    CHECK(scaled.max_rel_diff == doctest::Approx(1e-9).epsilon(1e-6));
    auto shifted = compare_zero_sets({1.0, 2.0, 3.0, 4.0}, {2.0, 3.0, 4.0, 5.0}, 1.0, 1e-6);
    CHECK(shifted.shift == 1);
    CHECK(shifted.rel_diff.size() == 3);
    CHECK(shifted.pass);
    auto back = compare_zero_sets({2.0, 3.0, 4.0, 5.0}, {1.0, 2.0, 3.0, 4.0}, 1.0, 1e-6);
    CHECK(back.shift == -1);
    CHECK(back.pass);
    CHECK(kind_of([] { compare_zero_sets({1.0}, {1.0, 2.0}, 1.0, 1e-6); }) == ErrorKind::LengthMismatch);
    auto bad = compare_zero_sets({1.0, 2.0}, {1.0, 2.1}, 1.0, 1e-6);
    CHECK_FALSE(bad.pass);

    std::ostringstream csv;
    write_pairs_csv(csv, shifted);
    CHECK(csv.str().rfind("j,gaudin,blz_scaled,rel_diff\n1,2,2,0\n", 0) == 0);
    auto j = to_json(shifted);
    CHECK(j["verdict"] == "pass");
    CHECK(j["index_shift"] == 1);
}

TEST_CASE("d0 = 0: BLZ zeros coincide with the rescaled Gaudin zeros") {
    ComparisonSetup setup;
    setup.k = -1.2;
    setup.l = 1.0;
    setup.count = 5;
    auto run = run_comparison(setup);
    CHECK_FALSE(run.report.meta.conjecture_probe);
    REQUIRE(run.report.gaudin.size() == 5);
    CHECK(run.report.shift == 0);
    CHECK(run.report.max_rel_diff < 1e-6);
    CHECK(run.report.pass);
    for (size_t j = 0; j < run.blz_zeros.size(); ++j) {
        const auto& z = run.blz_zeros[j];
        CHECK_FALSE(z.off_axis);
        CHECK(z.lambda_bar > 0.0);
        CHECK(z.bethe_residual < 1e-5);
        CHECK(std::abs(z.counting - 0.5 - static_cast<double>(j)) < 1e-3);
    }
}

TEST_CASE("BLZ kind is required") {
    auto lg = build_LG(-1.2, 1.0L, 0.0L, 0, {});
    CHECK(kind_of([&] { qbar_plus(lg, CoverPoint(1.0, 0.0)); }) == ErrorKind::InvalidArgument);
    auto pm = param_map(-1.2, 1.0, 0);
    auto blz = build_BLZ(pm.kbar, cldouble(pm.lbar.real(), pm.lbar.imag()), {});
    CHECK(kind_of([&] { qbar_plus(blz, CoverPoint(0.0, 0.0)); }) == ErrorKind::InvalidArgument);
    CHECK(kind_of([&] { run_comparison(ComparisonSetup{-1.2, 1.0, 0, 0, Partition({1}), 12, 1e-6, {}, true}); }) ==
          ErrorKind::InvalidArgument);
}
