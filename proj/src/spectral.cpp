#include "operlab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <limits>
#include <numeric>

#include <Eigen/Dense>

#include "operlab/errors.hpp"

namespace operlab {

namespace {

const cplx I(0.0, 1.0);

cplx to_c(const cldouble& z) { return {static_cast<double>(z.real()), static_cast<double>(z.imag())}; }

std::string fmt_sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

double min_pole_gap(const SchroedingerSpec& spec) {
    double d = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < spec.poles.size(); ++i) {
        cplx a = to_c(spec.poles[i].location);
        d = std::min(d, std::abs(a));
        for (size_t j = i + 1; j < spec.poles.size(); ++j) d = std::min(d, std::abs(a - to_c(spec.poles[j].location)));
    }
    return d;
}

// Polyline from a to b that keeps a distance ≥ rho from every pole: poles near the segment are
// bypassed by a rectangular detour on the side away from them. Apparent singularities have trivial
// monodromy, so the side does not change the result.
std::vector<cplx> detour_path(const SchroedingerSpec& spec, cplx a, cplx b, double rho) {
    const cplx d = b - a;
    const double len = std::abs(d);
    const cplx u = d / len, n = I * u;
    struct Hit {
        double t;
        double side;
    };
    std::vector<Hit> hits;
    for (const auto& p : spec.poles) {
        cplx rel = (to_c(p.location) - a) / u;  // along, across
        if (rel.real() > -rho && rel.real() < len + rho && std::abs(rel.imag()) < rho)
            hits.push_back({rel.real(), rel.imag() >= 0.0 ? -1.0 : 1.0});
    }
    std::sort(hits.begin(), hits.end(), [](const Hit& x, const Hit& y) { return x.t < y.t; });
    std::vector<cplx> path;
    for (const auto& h : hits) {
        cplx off = h.side * 2.0 * rho * n;
        cplx c0 = a + std::max(0.0, h.t - rho) * u, c1 = a + std::min(len, h.t + rho) * u;
        path.push_back(c0 + off);
        path.push_back(c1 + off);
        if (h.t + rho < len) path.push_back(c1);
    }
    path.push_back(b);
    return path;
}

double ell_of(const SchroedingerSpec& spec) { return static_cast<double>(spec.l.real()); }

void require_gaudin(const SchroedingerSpec& spec) {
    if (spec.kind != OperKind::GaudinL1 && spec.kind != OperKind::GaudinL0)
        fail(ErrorKind::InvalidArgument, "Q-functions are defined for L^G and L0 operators");
}

std::vector<double> log_linear_grid(double lo, double hi, double rel_step, double max_step) {
    if (!(lo > 0.0) || !(hi > lo)) fail(ErrorKind::InvalidArgument, "search interval must satisfy 0 < lo < hi");
    std::vector<double> g{lo};
    while (g.back() < hi) g.push_back(std::min(hi, g.back() + std::min(rel_step * g.back(), max_step)));
    return g;
}

template <class T, class F>
std::vector<T> parallel_map(size_t count, int jobs, F&& f) {
    std::vector<T> out(count);
    if (jobs <= 1 || count < 2) {
        for (size_t i = 0; i < count; ++i) out[i] = f(i);
        return out;
    }
    std::vector<std::future<void>> workers;
    const size_t n = std::min<size_t>(jobs, count);
    for (size_t w = 0; w < n; ++w)
        workers.push_back(std::async(std::launch::async, [&, w] {
            for (size_t i = w; i < count; i += n) out[i] = f(i);
        }));
    for (auto& w : workers) w.get();
    return out;
}

}  // namespace

CoverPoint star_of(const SchroedingerSpec& spec, const CoverPoint& lambda) { return lambda.power((spec.k + 3.0) / 2.0); }

SolutionSample chi_at(const SchroedingerSpec& spec, int sign, const CoverPoint& x, const CoverPoint& lambda,
                      const SpectralConfig& cfg) {
    const auto& cp = spec.coupling;
    const double K = cp.alpha + 2.0;
    const double gap = min_pole_gap(spec);
    const double lam_scale = std::abs(cp.coeff) * std::pow(lambda.mod, cp.lambda_power);
    // Hand over as far out as the series allows: continuing the recessive χ− outward picks up χ+
    // at a relative rate (x/r0)^{2l+1}.
    double r0 = std::min(0.5 * gap, std::pow(cfg.series_xi / std::max(lam_scale, 1e-300), 1.0 / K));
    if (x.mod <= r0) return chi_eval_auto(spec, sign, x, lambda, cfg.tail_tol);
    auto start = chi_eval_auto(spec, sign, CoverPoint(r0, x.arg), lambda, cfg.tail_tol);
    // Off the real axis the oscillatory pair separates like e^{±w·offset}; keep w·rho of order one so the
    // detour does not amplify the integration error.
    double rho = std::isfinite(gap) ? 0.2 * gap : 1.0;
    for (const auto& p : spec.poles) {
        const double r = std::abs(to_c(p.location));
        const double w2 = lam_scale * std::pow(r, cp.alpha) + std::abs(to_c(spec.angular)) / (r * r);
        rho = std::min(rho, 1.0 / std::sqrt(w2));
    }
    auto path = detour_path(spec, start.x.value(), x.value(), rho);
    auto out = continue_solution(spec, start, path, cfg.integration);
    out.x = x;
    return out;
}

WronskianPair psi_chi_wronskians(const SchroedingerSpec& spec, const CoverPoint& lambda, const SpectralConfig& cfg,
                                 const CoverPoint* x_match) {
    const CoverPoint xm = x_match ? *x_match : default_match_point(spec, lambda, cfg.anchor);
    auto psi = psi0_eval(spec, lambda, xm, cfg.anchor);
    psi.x = xm;
    auto cp = chi_at(spec, +1, xm, lambda, cfg), cm = chi_at(spec, -1, xm, lambda, cfg);
    return {wronskian_scaled(psi, cp), wronskian_scaled(psi, cm)};
}

namespace {

ScaledValue qstar_prefactor(const SchroedingerSpec& spec, const CoverPoint& lambda_star, const ScaledValue& wr,
                            int sign) {
    const cplx l = to_c(spec.l);
    const cplx nu = (2.0 * l + 1.0) / (spec.k + 3.0);
    const cplx pref = 0.5 * std::exp(-I * M_PI / 4.0) / std::sqrt(l + 0.5);
    const cplx e = (-0.5 + static_cast<double>(sign) * nu) * lambda_star.log();
    return {pref * wr.mantissa * std::exp(I * e.imag()), wr.log_scale + e.real()};
}

cplx ratio_of(const ScaledValue& a, const ScaledValue& b) {
    return a.mantissa / b.mantissa * std::exp(a.log_scale - b.log_scale);
}

}  // namespace

QPair qstar_pair(const SchroedingerSpec& spec, const CoverPoint& lambda_star, const SpectralConfig& cfg,
                 const CoverPoint* x_match) {
    require_gaudin(spec);
    if (lambda_star.mod == 0.0) fail(ErrorKind::InvalidArgument, "λ = 0");
    const auto w = psi_chi_wronskians(spec, lambda_star, cfg, x_match);
    return {qstar_prefactor(spec, lambda_star, w.plus, +1).value(),
            qstar_prefactor(spec, lambda_star, w.minus, -1).value()};
}

ScaledValue qstar_scaled(const SchroedingerSpec& spec, const CoverPoint& lambda_star, int sign,
                         const SpectralConfig& cfg) {
    require_gaudin(spec);
    if (lambda_star.mod == 0.0) fail(ErrorKind::InvalidArgument, "λ = 0");
    if (sign != 1 && sign != -1) fail(ErrorKind::InvalidArgument, "sign must be +1 or -1");
    // Only the requested χ: χ− may be unavailable at resonant l where χ+ is fine.
    const CoverPoint xm = default_match_point(spec, lambda_star, cfg.anchor);
    auto psi = psi0_eval(spec, lambda_star, xm, cfg.anchor);
    psi.x = xm;
    return qstar_prefactor(spec, lambda_star, wronskian_scaled(psi, chi_at(spec, sign, xm, lambda_star, cfg)), sign);
}

cplx qstar(const SchroedingerSpec& spec, const CoverPoint& lambda_star, int sign, const SpectralConfig& cfg) {
    return qstar_scaled(spec, lambda_star, sign, cfg).value();
}

QPair q_pair(const SchroedingerSpec& spec, const CoverPoint& lambda, const SpectralConfig& cfg) {
    return qstar_pair(spec, star_of(spec, lambda), cfg);
}

cplx q_pm(const SchroedingerSpec& spec, const CoverPoint& lambda, int sign, const SpectralConfig& cfg) {
    return qstar(spec, star_of(spec, lambda), sign, cfg);
}

cplx q_of(const SchroedingerSpec& spec) { return std::exp(I * M_PI * (spec.k + 2.0) / (spec.k + 3.0)); }

cplx gamma_of(const SchroedingerSpec& spec) {
    return std::exp(I * M_PI * (2.0 * to_c(spec.l) + 1.0) / (spec.k + 3.0));
}

CoverPoint q_shift(const SchroedingerSpec& spec, const CoverPoint& lambda, int n) {
    return lambda.rotated(n * M_PI * (spec.k + 2.0) / (spec.k + 3.0));
}

cplx t1(const SchroedingerSpec& spec, const CoverPoint& lambda, const SpectralConfig& cfg) {
    require_gaudin(spec);
    const CoverPoint ls = star_of(spec, lambda);
    return I * stokes_sigma0(spec, ls, default_match_point(spec, ls, cfg.anchor), cfg.anchor);
}

cplx t_j(const SchroedingerSpec& spec, const CoverPoint& lambda, int j, const SpectralConfig& cfg) {
    if (j < 0) fail(ErrorKind::InvalidArgument, "T_j needs j ≥ 0");
    if (j == 0) return 1.0;
    if (j == 1) return t1(spec, lambda, cfg);
    // T_j(μ) = T₁(q^{1−j}μ) T_{j−1}(qμ) − T_{j−2}(q²μ).
    return t1(spec, q_shift(spec, lambda, 1 - j), cfg) * t_j(spec, q_shift(spec, lambda, 1), j - 1, cfg) -
           t_j(spec, q_shift(spec, lambda, 2), j - 2, cfg);
}

cplx t_from_q(const SchroedingerSpec& spec, const CoverPoint& lambda, int j, const SpectralConfig& cfg) {
    if (j < 0) fail(ErrorKind::InvalidArgument, "T_j needs j ≥ 0");
    const int m = j + 1;
    const cplx g = std::pow(gamma_of(spec), m);
    auto up = q_pair(spec, q_shift(spec, lambda, m), cfg), dn = q_pair(spec, q_shift(spec, lambda, -m), cfg);
    return g * up.plus * dn.minus - up.minus * dn.plus / g;
}

double qq_residual(const SchroedingerSpec& spec, const CoverPoint& lambda, const SpectralConfig& cfg) {
    return std::abs(t_from_q(spec, lambda, 0, cfg) - 1.0);
}

double tq_residual(const SchroedingerSpec& spec, const CoverPoint& lambda, const SpectralConfig& cfg) {
    const cplx g = gamma_of(spec);
    const cplx t = t1(spec, lambda, cfg);
    auto q0 = q_pair(spec, lambda, cfg), qu = q_pair(spec, q_shift(spec, lambda, 2), cfg),
         qd = q_pair(spec, q_shift(spec, lambda, -2), cfg);
    double rp = std::abs(t * q0.plus - g * qu.plus - qd.plus / g);
    double rm = std::abs(t * q0.minus - qu.minus / g - g * qd.minus);
    return std::max(rp, rm);
}

double fusion_residual(const SchroedingerSpec& spec, const CoverPoint& lambda, const SpectralConfig& cfg, int jmax) {
    const cplx t = t1(spec, lambda, cfg);
    double worst = 0.0;
    for (int j = 1; j <= jmax; ++j) {
        cplx lhs = t * t_from_q(spec, q_shift(spec, lambda, j + 1), j, cfg);
        cplx rhs = t_from_q(spec, q_shift(spec, lambda, j + 2), j - 1, cfg) +
                   t_from_q(spec, q_shift(spec, lambda, j), j + 1, cfg);
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    return worst;
}

double qq_r_residual(const SchroedingerSpec& spec, const CoverPoint& lambda, int r, const SpectralConfig& cfg) {
    const cplx gr = gamma_of(spec) * std::pow(q_of(spec), -2 * r);
    const CoverPoint lu = q_shift(spec, lambda, 1), ld = q_shift(spec, lambda, -1);
    auto up = q_pair(spec, lu, cfg), dn = q_pair(spec, ld, cfg);
    auto qr = [&](const CoverPoint& l, cplx q, int s) { return l.pow(static_cast<double>(s * r)) * q; };
    cplx lhs = gr * qr(lu, up.plus, 1) * qr(ld, dn.minus, -1) - qr(ld, dn.plus, 1) * qr(lu, up.minus, -1) / gr;
    return std::abs(lhs - 1.0);
}

cplx bethe_ratio(const SchroedingerSpec& spec, const CoverPoint& lambda, const SpectralConfig& cfg) {
    const cplx g = gamma_of(spec);
    return ratio_of(qstar_scaled(spec, star_of(spec, q_shift(spec, lambda, -2)), +1, cfg),
                    qstar_scaled(spec, star_of(spec, q_shift(spec, lambda, 2)), +1, cfg)) /
           (g * g);
}

ZeroInfo refine_zero(const std::function<cplx(cplx)>& f, cplx root, const ZeroSearch& search) {
    cplx z0 = root * (1.0 - 1e-7), z1 = root;
    cplx f0 = f(z0), f1 = f(z1);
    ZeroInfo info;
    for (int it = 1; it <= search.max_iter; ++it) {
        if (f1 == 0.0) {
            info.last_step = 0.0;
            info.iterations = it;
            break;
        }
        if (f1 == f0) fail(ErrorKind::NonConvergence, "secant iteration stalled");
        cplx z2 = z1 - f1 * (z1 - z0) / (f1 - f0);
        z0 = z1;
        f0 = f1;
        z1 = z2;
        f1 = f(z1);
        info.iterations = it;
        info.last_step = std::abs(z1 - z0);
        if (info.last_step <= search.tol * std::abs(z1)) break;
        if (it == search.max_iter)
            fail(ErrorKind::NonConvergence, "secant iteration did not converge near " + fmt_sci(std::abs(root)));
    }
    info.root = z1;
    info.modulus_at_root = std::abs(f1);
    info.off_axis = std::abs(z1.imag()) > 1e-6 * std::abs(z1);
    return info;
}

std::vector<ZeroInfo> find_real_zeros_scaled(const std::function<ScaledValue(cplx)>& f, const ZeroSearch& search) {
    // Multiply by the entire, zero-free factor e^{−c₀−c₁λ} that levels log|f| between the interval ends.
    auto log_abs = [](const ScaledValue& v) { return std::log(std::abs(v.mantissa)) + v.log_scale; };
    const double a = log_abs(f(search.lo)), b = log_abs(f(search.hi));
    double c1 = 0.0, c0 = 0.0;
    if (std::isfinite(a) && std::isfinite(b)) {
        c1 = (b - a) / (search.hi - search.lo);
        c0 = a - c1 * search.lo;
    }
    auto g = [&](cplx z) {
        const auto v = f(z);
        return v.mantissa * std::exp(v.log_scale - c0 - c1 * z);
    };
    return find_real_zeros(g, search);
}

std::vector<ZeroInfo> find_real_zeros(const std::function<cplx(cplx)>& f, const ZeroSearch& search) {
    const auto grid = log_linear_grid(search.lo, search.hi, search.rel_step, search.max_step);
    std::vector<double> mag(grid.size()), lg(grid.size());
    for (size_t i = 0; i < grid.size(); ++i) {
        mag[i] = std::abs(f(grid[i]));
        lg[i] = std::log(mag[i]);
    }
    // A simple zero within half a grid step of a node puts a dip of at least log 3 into the second
    // difference of log|f|; this catches zeros hidden by a steep background, where |f| has no minimum.
    auto dip = [&](size_t i) { return lg[i - 1] + lg[i + 1] - 2.0 * lg[i]; };
    std::vector<ZeroInfo> out;
    for (size_t i = 1; i + 1 < grid.size(); ++i) {
        const bool minimum = mag[i] < mag[i - 1] && mag[i] <= mag[i + 1];
        const double d = dip(i);
        const bool dipped = d > 1.0 && (i < 2 || d >= dip(i - 1)) && (i + 2 >= grid.size() || d > dip(i + 1));
        if (!minimum && !dipped) continue;
        // Secant start from the two grid points bracketing the minimum most tightly.
        const size_t o = mag[i - 1] < mag[i + 1] ? i - 1 : i + 1;
        cplx z0 = grid[o], z1 = grid[i];
        cplx f0 = f(z0), f1 = f(z1);
        ZeroInfo info;
        bool done = false;
        for (int it = 1; it <= search.max_iter && !done; ++it) {
            if (f1 == f0) break;
            cplx z2 = z1 - f1 * (z1 - z0) / (f1 - f0);
            z0 = z1;
            f0 = f1;
            z1 = z2;
            f1 = f(z1);
            info.iterations = it;
            info.last_step = std::abs(z1 - z0);
            done = info.last_step <= search.tol * std::abs(z1) || f1 == 0.0;
        }
        if (!done) {
            if (!minimum) continue;  // a dip without a zero nearby
            fail(ErrorKind::NonConvergence, "secant iteration did not converge near " + fmt_sci(grid[i]));
        }
        info.root = z1;
        info.modulus_at_root = std::abs(f1);
        info.off_axis = std::abs(z1.imag()) > 1e-6 * std::abs(z1);
        // A shallow minimum that is not a zero sends the iteration elsewhere; keep roots near their bracket.
        if (z1.real() < grid[i - 1] || z1.real() > grid[i + 1]) continue;
        bool dup = false;
        for (const auto& z : out) dup |= std::abs(z.root - z1) < 1e-8 * std::abs(z1);
        if (!dup) out.push_back(info);
    }
    std::sort(out.begin(), out.end(), [](const ZeroInfo& a, const ZeroInfo& b) { return std::abs(a.root) < std::abs(b.root); });
    return out;
}

double star_zero_spacing(double k) {
    return (k + 2.0) * std::sqrt(M_PI) * std::tgamma((k + 5.0) / 2.0) / std::tgamma((k + 4.0) / 2.0);
}

std::vector<QZero> zeros_of_qplus(const SchroedingerSpec& spec, const ZeroSearch& search, const SpectralConfig& cfg,
                                  bool check_counting, bool with_bethe) {
    require_gaudin(spec);
    auto f = [&](cplx ls) { return qstar_scaled(spec, CoverPoint::principal(ls), +1, cfg); };
    const auto raw = find_real_zeros_scaled(f, search);
    const double p = 2.0 / (spec.k + 3.0);
    std::vector<QZero> out;
    for (const auto& z : raw) {
        QZero q;
        q.lambda_star = z.root.real();
        q.imag_star = z.root.imag();
        q.lambda = std::pow(std::abs(z.root), p);
        q.iterations = z.iterations;
        q.last_step = z.last_step;
        q.off_axis = z.off_axis;
        if (with_bethe) {
            CoverPoint lam = CoverPoint::principal(z.root).power(p);
            q.bethe_residual = std::abs(bethe_ratio(spec, lam, cfg) + 1.0);
        }
        out.push_back(q);
    }
    if (check_counting) {
        // Half-integer crossings of z above the first zero must all be zeros; below it the counting
        // function may cross hole numbers, so without zeros only crossings with n ≥ 0 are counted.
        const double lo = std::pow(search.lo, p), hi = std::pow(search.hi, p);
        std::vector<double> pts{lo};
        for (const auto& q : out) pts.push_back(q.lambda);
        const auto grid = counting_grid(spec, hi, pts);
        const auto z = counting_function(spec, grid, cfg);
        auto z_at = [&](double x) { return z[std::find(grid.begin(), grid.end(), x) - grid.begin()]; };
        for (auto& q : out) q.counting = z_at(q.lambda);
        const double top = std::floor(z.back() - 0.5);
        const double first = out.empty() ? std::max(0.0, std::floor(z_at(lo) - 0.5) + 1.0) : std::round(out[0].counting - 0.5);
        const long expected = std::max(0L, static_cast<long>(top - first + 1.0));
        if (expected > static_cast<long>(out.size()))
            fail(ErrorKind::MissedZeroSuspected, "counting function predicts " + std::to_string(expected) +
                                                     " zeros, found " + std::to_string(out.size()));
    }
    return out;
}

std::vector<double> counting_grid(const SchroedingerSpec& spec, double lambda_max, const std::vector<double>& include) {
    // Uniform in log λ* near 0, capped at 1/16 of the large-j zero spacing; z gains ~1 per spacing.
    const double e = (spec.k + 3.0) / 2.0;
    const double smax = std::pow(lambda_max, e);
    const double s0 = std::min(0.02, 0.5 * smax);
    auto g = log_linear_grid(s0, std::max(smax, s0 * 1.0001), 0.1, star_zero_spacing(spec.k) / 16.0);
    std::vector<double> out;
    for (double s : g) out.push_back(std::pow(s, 1.0 / e));
    out.back() = lambda_max;
    for (double x : include)
        if (x > 0.0 && x <= lambda_max) out.push_back(x);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<double> counting_function(const SchroedingerSpec& spec, const std::vector<double>& lambdas,
                                      const SpectralConfig& cfg) {
    require_gaudin(spec);
    if (lambdas.empty()) return {};
    const double z0 = -(2.0 * ell_of(spec) + 1.0) / (spec.k + 3.0);
    std::vector<double> out;
    cplx prev = 0.0;
    double phase = 0.0;
    for (size_t i = 0; i < lambdas.size(); ++i) {
        if (!(lambdas[i] > 0.0) || (i > 0 && !(lambdas[i] > lambdas[i - 1])))
            fail(ErrorKind::InvalidArgument, "counting grid must be positive and increasing");
        const CoverPoint lam(lambdas[i], 0.0);
        const cplx ratio = ratio_of(qstar_scaled(spec, star_of(spec, q_shift(spec, lam, -2)), +1, cfg),
                                    qstar_scaled(spec, star_of(spec, q_shift(spec, lam, 2)), +1, cfg));
        const double step = i == 0 ? std::arg(ratio) : std::arg(ratio / prev);
        if (std::abs(step) >= M_PI / 2)
            fail(ErrorKind::PhaseJump, "phase step " + fmt_sci(step) + " at λ = " + fmt_sci(lambdas[i]));
        phase += step;
        prev = ratio;
        out.push_back(z0 + phase / (2.0 * M_PI));
    }
    return out;
}

double counting_function(const SchroedingerSpec& spec, double lambda, const SpectralConfig& cfg) {
    if (lambda == 0.0) return -(2.0 * ell_of(spec) + 1.0) / (spec.k + 3.0);
    return counting_function(spec, counting_grid(spec, lambda), cfg).back();
}

std::vector<int> root_numbers(const SchroedingerSpec& spec, const std::vector<QZero>& zeros, const SpectralConfig& cfg,
                              double max_dev, std::vector<double>* deviations) {
    if (zeros.empty()) return {};
    std::vector<double> pts;
    double top = 0.0;
    for (const auto& z : zeros) {
        pts.push_back(z.lambda);
        top = std::max(top, z.lambda);
    }
    const auto grid = counting_grid(spec, top, pts);
    const auto z = counting_function(spec, grid, cfg);
    std::vector<int> out;
    if (deviations) deviations->clear();
    for (const auto& q : zeros) {
        const double v = z[std::find(grid.begin(), grid.end(), q.lambda) - grid.begin()] - 0.5;
        const double n = std::round(v);
        if (deviations) deviations->push_back(v - n);
        if (std::abs(v - n) > max_dev)
            fail(ErrorKind::NonIntegerRootNumber,
                 "z(λ) − 1/2 = " + std::to_string(v) + " at λ = " + fmt_sci(q.lambda));
        out.push_back(static_cast<int>(n));
    }
    return out;
}

OrderFit small_lambda_probe(const SchroedingerSpec& spec, int r, const std::vector<double>& lambdas,
                            const SpectralConfig& cfg, double max_resid) {
    if (lambdas.size() < 4) fail(ErrorKind::InvalidArgument, "order fit needs at least four λ values");
    std::vector<double> x, yp, ym;
    for (double l : lambdas) {
        if (!(l > 0.0)) fail(ErrorKind::InvalidArgument, "order fit needs positive λ");
        auto q = q_pair(spec, CoverPoint(l, 0.0), cfg);
        x.push_back(std::log(l));
        yp.push_back(std::log(std::abs(q.plus)));
        ym.push_back(std::log(std::abs(q.minus)));
    }
    // log|Q| = c + ord·log λ + b·λ: the holomorphic part bends the log-log line at moderate λ.
    Eigen::MatrixXd A(x.size(), 3);
    for (size_t i = 0; i < x.size(); ++i) A.row(i) << 1.0, x[i], std::exp(x[i]);
    auto fit = [&](const std::vector<double>& y, double& slope, double& resid) {
        Eigen::VectorXd b = Eigen::Map<const Eigen::VectorXd>(y.data(), y.size());
        Eigen::VectorXd c = A.colPivHouseholderQr().solve(b);
        slope = c(1);
        resid = (A * c - b).cwiseAbs().maxCoeff();
    };
    OrderFit out;
    fit(yp, out.ord_plus, out.resid_plus);
    fit(ym, out.ord_minus, out.resid_minus);
    out.expected_plus = -r;
    out.expected_minus = r;
    if (out.resid_plus > max_resid || out.resid_minus > max_resid)
        fail(ErrorKind::FitUnstable, "log-log residual " + fmt_sci(std::max(out.resid_plus, out.resid_minus)) +
                                         " exceeds " + fmt_sci(max_resid));
    return out;
}

std::vector<CoverPoint> ring_samples(const std::vector<double>& radii, int count) {
    std::vector<CoverPoint> out;
    for (size_t ring = 0; ring < radii.size(); ++ring)
        for (int i = 0; i < count; ++i)
            out.emplace_back(radii[ring], -M_PI + 2.0 * M_PI * (i + 0.5 + 0.25 * ring) / count);
    return out;
}

SpectralTable spectral_sweep(const SchroedingerSpec& spec, const std::vector<CoverPoint>& lambdas, bool tq,
                             bool fusion, const SpectralConfig& cfg, int jobs) {
    SpectralTable t;
    t.samples = parallel_map<SpectralSample>(lambdas.size(), jobs, [&](size_t i) {
        SpectralSample s;
        s.lambda = lambdas[i];
        auto q = q_pair(spec, s.lambda, cfg);
        s.qp = q.plus;
        s.qm = q.minus;
        s.t1 = t1(spec, s.lambda, cfg);
        s.qq = qq_residual(spec, s.lambda, cfg);
        if (tq) s.tq = tq_residual(spec, s.lambda, cfg);
        if (fusion) s.fusion = fusion_residual(spec, s.lambda, cfg);
        return s;
    });
    return t;
}

void write_csv(std::ostream& out, const SpectralTable& table) {
    out << "lambda_re,lambda_im,Qp_re,Qp_im,Qm_re,Qm_im,T1_re,T1_im,qq_resid,tq_resid";
    bool fusion = std::any_of(table.samples.begin(), table.samples.end(), [](auto& s) { return s.fusion >= 0.0; });
    if (fusion) out << ",fusion_resid";
    out << '\n';
    char buf[64];
    auto put = [&](double v, bool last = false) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        out << buf << (last ? "" : ",");
    };
    for (const auto& s : table.samples) {
        cplx l = s.lambda.value();
        put(l.real());
        put(l.imag());
        put(s.qp.real());
        put(s.qp.imag());
        put(s.qm.real());
        put(s.qm.imag());
        put(s.t1.real());
        put(s.t1.imag());
        put(s.qq);
        put(s.tq, !fusion);
        if (fusion) put(s.fusion, true);
        out << '\n';
    }
}

nlohmann::json to_json(const std::vector<QZero>& zeros) {
    auto arr = nlohmann::json::array();
    for (const auto& z : zeros)
        arr.push_back({{"lambda", z.lambda},
                       {"lambda_star", z.lambda_star},
                       {"imag_star", z.imag_star},
                       {"iterations", z.iterations},
                       {"last_step", z.last_step},
                       {"off_axis", z.off_axis},
                       {"bethe_residual", z.bethe_residual},
                       {"counting", std::isnan(z.counting) ? nlohmann::json() : nlohmann::json(z.counting)}});
    return arr;
}

}  // namespace operlab
