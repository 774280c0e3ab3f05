#include "operlab/compare.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>

#include <Eigen/Dense>

#include "operlab/errors.hpp"
#include "operlab/wkb.hpp"

namespace operlab {

namespace {

constexpr cplx I{0.0, 1.0};

std::string fmt_sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

cplx to_c(const cldouble& z) { return {static_cast<double>(z.real()), static_cast<double>(z.imag())}; }

void require_blz(const SchroedingerSpec& spec) {
    if (spec.kind != OperKind::BLZ) fail(ErrorKind::InvalidArgument, "operator is not of BLZ kind");
}

// k + 3 of the L^G side, 1/(1−k̄).
double k_plus_3(double kbar) { return 1.0 / (1.0 - kbar); }

CoverPoint lambda_bar_of(double kbar, cplx t) {
    const double a = k_plus_3(kbar);
    return CoverPoint::principal(t).scaled(1.0 / a).power(2.0 / a);
}

double residual_scale(double kbar, cplx lbar) { return 1.0 + std::abs(lbar * (lbar + 1.0)) / kbar; }

std::vector<cplx> newton_blz(std::vector<cplx> z, double kbar, cplx lbar, const BlzSolveOptions& opts) {
    const int n = static_cast<int>(z.size());
    const double scale = residual_scale(kbar, lbar);
    auto norm = [](const std::vector<cplx>& v) {
        double m = 0.0;
        for (auto x : v) m = std::max(m, std::abs(x));
        return m;
    };
    auto F = blz_system_residual(z, kbar, lbar);
    for (int it = 0; it < opts.max_iter; ++it) {
        if (norm(F) <= opts.tol * scale) return z;
        // Central differences along the real direction: the system is holomorphic.
        Eigen::MatrixXcd J(n, n);
        for (int j = 0; j < n; ++j) {
            const double h = 1e-5 * std::max(1.0, std::abs(z[j]));
            auto zp = z, zm = z;
            zp[j] += h;
            zm[j] -= h;
            const auto fp = blz_system_residual(zp, kbar, lbar), fm = blz_system_residual(zm, kbar, lbar);
            for (int i = 0; i < n; ++i) J(i, j) = (fp[i] - fm[i]) / (2.0 * h);
        }
        Eigen::VectorXcd rhs(n);
        for (int i = 0; i < n; ++i) rhs(i) = -F[i];
        const Eigen::VectorXcd dz = J.fullPivLu().solve(rhs);
        double step = 1.0;
        const double f0 = norm(F);
        for (int h = 0; h < 30; ++h, step *= 0.5) {
            std::vector<cplx> trial = z;
            for (int i = 0; i < n; ++i) trial[i] += step * dz(i);
            try {
                auto Ft = blz_system_residual(trial, kbar, lbar);
                if (norm(Ft) < f0 || h == 29) {
                    z = trial;
                    F = Ft;
                    break;
                }
            } catch (const Error&) {
            }
        }
    }
    if (norm(F) <= opts.tol * scale) return z;
    fail(ErrorKind::NonConvergence, "BLZ Newton residual " + fmt_sci(norm(F) / scale));
}

ScaledValue rotated_qbar(const SchroedingerSpec& blz, double lambda_bar, int n, const SpectralConfig& cfg) {
    return qbar_plus(blz, CoverPoint(lambda_bar, 2.0 * n * M_PI * blz.k), cfg);
}

cplx ratio_of(const ScaledValue& a, const ScaledValue& b) {
    return a.mantissa / b.mantissa * std::exp(a.log_scale - b.log_scale);
}

}  // namespace

std::vector<cplx> blz_seed(double kbar, cplx lbar, const Partition& mu) {
    if (!(kbar > 0.0 && kbar < 1.0)) fail(ErrorKind::InvalidArgument, "k̄ must lie in (0, 1)");
    std::vector<cplx> out;
    if (mu.weight() == 0) return out;
    const RootList v = poly_roots(v_mu(mu), 1e-9);
    for (int m : v.multiplicity)
        if (m != 1) fail(ErrorKind::DegeneratePartition, "V_mu has a multiple root");
    const cplx p = lbar + 0.5;
    const cplx a = kbar / (1.0 - kbar) * p * p;
    const cplx b = std::pow(2.0, 0.25) * std::pow(kbar, 0.75) / (1.0 - kbar) * std::pow(p, 1.5);
    for (auto r : v.roots) out.push_back(a + b * r);
    return out;
}

std::vector<cplx> solve_blz_system(int d, double kbar, cplx lbar, const Partition& mu, const BlzSolveOptions& opts) {
    if (mu.weight() != d) fail(ErrorKind::InvalidArgument, "partition weight differs from d");
    if (!(kbar > 0.0 && kbar < 1.0)) fail(ErrorKind::InvalidArgument, "k̄ must lie in (0, 1)");
    if (d == 0) return {};
    const cplx p_target = lbar + 0.5;
    std::vector<double> path{std::max(opts.start_p, std::abs(p_target))};
    while (path.back() * opts.ratio > std::abs(p_target)) path.push_back(path.back() * opts.ratio);
    if (path.back() != std::abs(p_target)) path.push_back(std::abs(p_target));
    // Continue along p = |p_target| e^{i arg p_target}·(scale) so complex l̄ is reached radially.
    const cplx dir = p_target / std::abs(p_target);
    std::vector<cplx> cur, prev_seed;
    for (size_t i = 0; i < path.size(); ++i) {
        const cplx lb = path[i] * dir - 0.5;
        auto seed = blz_seed(kbar, lb, mu);
        std::vector<cplx> guess = seed;
        if (i > 0)
            for (size_t j = 0; j < guess.size(); ++j) guess[j] = cur[j] + (seed[j] - prev_seed[j]);
        try {
            cur = newton_blz(guess, kbar, lb, opts);
        } catch (const Error& e) {
            fail(e.kind(), e.message() + " (at l̄ + 1/2 = " + fmt_sci(path[i]) + ")");
        }
        prev_seed = seed;
    }
    std::sort(cur.begin(), cur.end(),
              [](cplx a, cplx b) { return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag()); });
    return cur;
}

ScaledValue qbar_plus(const SchroedingerSpec& blz, const CoverPoint& lambda_bar, const SpectralConfig& cfg) {
    require_blz(blz);
    if (lambda_bar.mod == 0.0) fail(ErrorKind::InvalidArgument, "λ̄ = 0");
    const CoverPoint xm = default_match_point(blz, lambda_bar, cfg.anchor);
    auto psi = psi0_eval(blz, lambda_bar, xm, cfg.anchor);
    psi.x = xm;
    return wronskian_scaled(psi, chi_at(blz, +1, xm, lambda_bar, cfg));
}

std::vector<double> blz_counting_function(const SchroedingerSpec& blz, const std::vector<double>& lambda_bars,
                                          const SpectralConfig& cfg) {
    require_blz(blz);
    const double z0 = -2.0 * (static_cast<double>(blz.l.real()) + 0.5);
    std::vector<double> out;
    cplx prev = 0.0;
    double phase = 0.0;
    for (size_t i = 0; i < lambda_bars.size(); ++i) {
        if (!(lambda_bars[i] > 0.0) || (i > 0 && !(lambda_bars[i] > lambda_bars[i - 1])))
            fail(ErrorKind::InvalidArgument, "counting grid must be positive and increasing");
        const cplx ratio =
            ratio_of(rotated_qbar(blz, lambda_bars[i], -1, cfg), rotated_qbar(blz, lambda_bars[i], 1, cfg));
        const double step = i == 0 ? std::arg(ratio) : std::arg(ratio / prev);
        if (std::abs(step) >= M_PI / 2)
            fail(ErrorKind::PhaseJump, "phase step " + fmt_sci(step) + " at λ̄ = " + fmt_sci(lambda_bars[i]));
        phase += step;
        prev = ratio;
        out.push_back(z0 + phase / (2.0 * M_PI));
    }
    return out;
}

std::vector<BlzZero> qbar_plus_zeros(const SchroedingerSpec& blz, const ZeroSearch& search, const SpectralConfig& cfg,
                                     bool check_counting, bool with_bethe) {
    require_blz(blz);
    const double kbar = blz.k;
    auto f = [&](cplx t) { return qbar_plus(blz, lambda_bar_of(kbar, t), cfg); };
    const auto raw = find_real_zeros_scaled(f, search);
    const cplx gamma = std::exp(2.0 * M_PI * I * (to_c(blz.l) + 0.5));
    std::vector<BlzZero> out;
    for (const auto& z : raw) {
        BlzZero b;
        b.t = z.root.real();
        b.imag_t = z.root.imag();
        b.off_axis = z.off_axis;
        b.lambda_bar = lambda_bar_of(kbar, std::abs(z.root)).mod;
        if (with_bethe) {
            const double lb = lambda_bar_of(kbar, z.root).mod;
            b.bethe_residual =
                std::abs(ratio_of(rotated_qbar(blz, lb, -1, cfg), rotated_qbar(blz, lb, 1, cfg)) / (gamma * gamma) + 1.0);
        }
        out.push_back(b);
    }
    if (check_counting) {
        // Grid uniform in t (the zeros are asymptotically evenly spaced there), 16 points per spacing.
        const double a = k_plus_3(kbar);
        const double h = star_zero_spacing(a - 3.0) / 16.0;
        std::vector<double> ts;
        for (double t = std::min(0.02, 0.5 * search.lo); t < search.hi; t += std::min(h, std::max(0.1 * t, 1e-3)))
            ts.push_back(t);
        ts.push_back(search.hi);
        for (const auto& b : out) ts.push_back(b.t);
        ts.push_back(search.lo);
        std::sort(ts.begin(), ts.end());
        ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
        std::vector<double> grid;
        for (double t : ts) grid.push_back(lambda_bar_of(kbar, t).mod);
        const auto z = blz_counting_function(blz, grid, cfg);
        auto z_at = [&](double t) { return z[std::find(ts.begin(), ts.end(), t) - ts.begin()]; };
        for (auto& b : out) b.counting = z_at(b.t);
        const double top = std::floor(z.back() - 0.5);
        const double first = out.empty() ? std::max(0.0, std::floor(z_at(search.lo) - 0.5) + 1.0)
                                         : std::round(out[0].counting - 0.5);
        const long expected = std::max(0L, static_cast<long>(top - first + 1.0));
        if (expected > static_cast<long>(out.size()))
            fail(ErrorKind::MissedZeroSuspected, "BLZ counting function predicts " + std::to_string(expected) +
                                                     " zeros, found " + std::to_string(out.size()));
    }
    return out;
}

ComparisonReport compare_zero_sets(std::vector<double> gaudin, std::vector<double> blz, double scale, double tol) {
    if (gaudin.size() != blz.size())
        fail(ErrorKind::LengthMismatch,
             "zero lists of length " + std::to_string(gaudin.size()) + " and " + std::to_string(blz.size()));
    std::sort(gaudin.begin(), gaudin.end());
    std::sort(blz.begin(), blz.end());
    ComparisonReport rep;
    rep.tol = tol;
    rep.gaudin = gaudin;
    for (double b : blz) rep.blz_scaled.push_back(scale * b);
    const int n = static_cast<int>(gaudin.size());
    if (n > 0) {
        // Lowest scaled BLZ zero against its nearest Gaudin zero, or the other way round.
        auto nearest = [](const std::vector<double>& v, double x) {
            int best = 0;
            for (int i = 1; i < static_cast<int>(v.size()); ++i)
                if (std::abs(v[i] - x) < std::abs(v[best] - x)) best = i;
            return best;
        };
        const int a = nearest(rep.gaudin, rep.blz_scaled[0]), b = nearest(rep.blz_scaled, rep.gaudin[0]);
        rep.shift = a > 0 ? a : -b;
    }
    for (int j = std::max(0, -rep.shift); j < n && j + rep.shift < n; ++j) {
        const double g = rep.gaudin[j + rep.shift], s = rep.blz_scaled[j];
        const double d = std::abs(g - s) / std::abs(g);
        rep.rel_diff.push_back(d);
        rep.max_rel_diff = std::max(rep.max_rel_diff, d);
    }
    rep.pass = !rep.rel_diff.empty() && rep.max_rel_diff < tol;
    return rep;
}

ComparisonRun run_comparison(const ComparisonSetup& s) {
    const int d = s.mu.weight();
    const int d0 = d + s.r * s.r;
    const double l = s.ell > 0 ? static_cast<double>(s.ell * s.ell) : s.l;
    if (d0 > 0 && !(s.ell > 0)) fail(ErrorKind::InvalidArgument, "d0 > 0 needs ell for the Gaudin continuation");
    if (s.count < 1) fail(ErrorKind::InvalidArgument, "count must be positive");
    const auto pm = param_map(s.k, l, s.r);

    ComparisonRun run;
    // Window in λ*: from below the first predicted zero to midway between predictions count−1 and count.
    const double ell_hat = l + 0.5;
    const double h = star_zero_spacing(s.k);
    const double lo_pred = predicted_lambda_j(0, ell_hat, s.k);
    run.search.lo = std::max(0.2, std::min(lo_pred - 2.0 * h, 0.9 * lo_pred));
    run.search.hi = 0.5 * (predicted_lambda_j(s.count - 1, ell_hat, s.k) + predicted_lambda_j(s.count, ell_hat, s.k));
    run.search.max_step = h / 40.0;
    // Excited states have holes in their root numbers, so the counting check only applies to d0 = 0.
    const bool counting = d0 == 0;

    auto gaudin_side = [&]() {
        SchroedingerSpec spec;
        if (d0 == 0) {
            spec = build_LG(s.k, l, 0.0L, s.r, {});
        } else {
            const long double start = std::max<long double>(40.0L, 2.0L * s.ell);
            auto roots = continue_in_ell(s.mu, s.r, geometric_ell_path(start, s.ell), s.k);
            spec = build_LG(s.k, l, 0.0L, roots);
        }
        return zeros_of_qplus(spec, run.search, s.cfg, counting, true);
    };
    auto blz_side = [&]() {
        run.zbar = solve_blz_system(d, pm.kbar, pm.lbar, s.mu);
        std::vector<cldouble> zl;
        for (auto z : run.zbar) zl.emplace_back(z.real(), z.imag());
        auto blz = build_BLZ(pm.kbar, cldouble(pm.lbar.real(), pm.lbar.imag()), zl);
        return qbar_plus_zeros(blz, run.search, s.cfg, counting, true);
    };
    if (s.concurrent) {
        auto fg = std::async(std::launch::async, gaudin_side);
        run.blz_zeros = blz_side();
        run.gaudin_zeros = fg.get();
    } else {
        run.gaudin_zeros = gaudin_side();
        run.blz_zeros = blz_side();
    }
    std::vector<double> g, b;
    for (const auto& z : run.gaudin_zeros) g.push_back(z.lambda);
    for (const auto& z : run.blz_zeros) b.push_back(z.lambda_bar);
    run.report = compare_zero_sets(g, b, pm.zero_factor(), s.tol);
    run.report.meta = {s.k, l, s.r, s.mu.to_string(), d0, d, d0 != 0 || d != 0};
    return run;
}

nlohmann::json to_json(const ComparisonReport& r) {
    nlohmann::json j;
    j["meta"] = {{"k", r.meta.k},   {"l", r.meta.l},   {"r", r.meta.r},
                 {"mu", r.meta.mu}, {"d0", r.meta.d0}, {"d", r.meta.d},
                 {"conjecture_probe", r.meta.conjecture_probe}};
    j["gaudin_zeros"] = r.gaudin;
    j["blz_zeros_scaled"] = r.blz_scaled;
    j["index_shift"] = r.shift;
    j["relative_differences"] = r.rel_diff;
    j["max_relative_difference"] = r.max_rel_diff;
    j["tolerance"] = r.tol;
    j["verdict"] = r.pass ? "pass" : "fail";
    return j;
}

void write_pairs_csv(std::ostream& out, const ComparisonReport& r) {
    out << "j,gaudin,blz_scaled,rel_diff\n";
    char buf[160];
    for (size_t i = 0; i < r.rel_diff.size(); ++i) {
        const int jb = static_cast<int>(i) + std::max(0, -r.shift);
        std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g\n", jb + r.shift, r.gaudin[jb + r.shift],
                      r.blz_scaled[jb], r.rel_diff[i]);
        out << buf;
    }
}

}  // namespace operlab
