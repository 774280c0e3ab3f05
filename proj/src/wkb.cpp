#include "operlab/wkb.hpp"

#include <cmath>
#include <cstdio>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

#include "operlab/errors.hpp"

namespace operlab {

namespace {

void check_params(double lambda, double ell_hat, double k) {
    if (!(k > -2.0)) fail(ErrorKind::InvalidArgument, "k must exceed -2");
    if (!(lambda > 0.0) || !(ell_hat > 0.0)) fail(ErrorKind::InvalidArgument, "λ and ℓ̂ must be positive");
}

std::string fmt_sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

}  // namespace

double u_star(double k) { return std::pow(k + 3.0, (k + 3.0) / 2.0) / std::pow(k + 2.0, (k + 2.0) / 2.0); }

namespace {

// x²U(x) = λ² x^{k+2}(x−1) + ℓ̂². Near x_* it is evaluated as its value there plus an increment that
// vanishes to second order, so that the near-double regime keeps full relative accuracy.
struct ReducedPotential {
    double lambda, ell, p, xs, base, scale;
    ReducedPotential(double lambda_, double ell_, double k)
        : lambda(lambda_), ell(ell_), p(k + 2.0), xs((k + 2.0) / (k + 3.0)) {
        const double r = lambda / u_star(k);
        base = (ell - r) * (ell + r);
        scale = lambda * lambda * std::pow(xs, p) / (p + 1.0);
    }
    double operator()(double x) const {
        const double t = x / xs - 1.0;
        if (std::abs(t) > 0.1) return lambda * lambda * std::pow(x, p) * (x - 1.0) + ell * ell;
        // (1+t)^p (pt − 1) + 1 = Σ_{n≥2} (p C(p, n−1) − C(p, n)) tⁿ.
        double binom = p, sum = 0.0, tn = t;  // binom = C(p, n−1) at step n
        for (int n = 2; n < 60; ++n) {
            tn *= t;
            const double next = binom * (p - n + 1) / n;
            const double term = (p * binom - next) * tn;
            sum += term;
            binom = next;
            if (std::abs(term) <= 1e-18 * std::abs(sum)) break;
        }
        return base + scale * sum;
    }
};

}  // namespace

double x_star(double k) { return (k + 2.0) / (k + 3.0); }

double j2_slope(double k) { return std::sqrt(8.0 * std::pow(k + 2.0, k + 1.0) / std::pow(k + 3.0, k + 4.0)); }

double j1_zero(double k) {
    return 2.0 / (k + 2.0) * std::tgamma((k + 4.0) / 2.0) / (std::sqrt(M_PI) * std::tgamma((k + 5.0) / 2.0));
}

TurningData turning_points(double lambda, double ell_hat, double k) {
    check_params(lambda, ell_hat, k);
    TurningData t;
    const double us = u_star(k) * ell_hat;
    if (std::abs(lambda - us) <= 1e-14 * us) {
        t.regime = TurningRegime::Double;
        t.x_minus = t.x_plus = x_star(k);
        return t;
    }
    if (lambda < us) return t;
    t.regime = TurningRegime::TwoTurning;
    // x²U is positive at 0 and 1 and negative at x_*.
    const ReducedPotential f(lambda, ell_hat, k);
    boost::math::tools::eps_tolerance<double> tol(50);
    const double xs = x_star(k);
    auto lo = boost::math::tools::bisect(f, 0.0, xs, tol);
    auto hi = boost::math::tools::bisect(f, xs, 1.0, tol);
    t.x_minus = 0.5 * (lo.first + lo.second);
    t.x_plus = 0.5 * (hi.first + hi.second);
    return t;
}

double wkb_integral(double lambda, double ell_hat, double k, double tol) {
    const auto t = turning_points(lambda, ell_hat, k);
    if (t.regime != TurningRegime::TwoTurning) return 0.0;
    const double a = t.x_minus, b = t.x_plus, d = b - a;
    const ReducedPotential f(lambda, ell_hat, k);
    // x = a + d sin²θ: dx = 2d sc dθ cancels the square-root zeros of x²U at both ends.
    auto h = [&](double th) {
        const double s = std::sin(th), c = std::cos(th);
        const double x = a + d * s * s;
        return 2.0 * d * s * c * std::sqrt(std::max(-f(x), 0.0)) / x;
    };
    // When x₋ ≪ x₊ the 1/x factor varies on the scale x − x₋ ~ x₋; break the θ range geometrically there.
    std::vector<double> cuts{0.0};
    for (double w = a; w < 0.25 * d; w *= 4.0) cuts.push_back(std::asin(std::sqrt(w / d)));
    cuts.push_back(M_PI / 2);
    // Kronrod error estimates bottom out near 1e−12 relative, well above the actual error.
    const double rtol = std::max(tol, 1e-11);
    double v = 0.0, err = 0.0;
    for (size_t i = 1; i < cuts.size(); ++i) {
        double e = 0.0;
        v += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(h, cuts[i - 1], cuts[i], 15, rtol, &e);
        err += e;
    }
    if (!std::isfinite(v) || err > 1e2 * rtol * std::abs(v) + 1e-13 * (lambda + ell_hat))
        fail(ErrorKind::QuadratureFailure, "WKB quadrature error " + fmt_sci(err));
    return 2.0 / M_PI * v;
}

double wkb_j1(double u, double k) { return u == 0.0 ? j1_zero(k) : wkb_integral(1.0, u, k); }

double wkb_j2(double u, double k) { return wkb_integral(u, 1.0, k); }

double large_j_prefactor(double k) {
    return (k + 2.0) / 2.0 * std::sqrt(M_PI) * std::tgamma((k + 5.0) / 2.0) / std::tgamma((k + 4.0) / 2.0);
}

double large_j_line(int j, double ell_hat, double k, LargeJOffset offset) {
    const double off = (offset == LargeJOffset::TwoEllOverKPlus2 ? 2.0 : 1.0) * ell_hat / (k + 2.0);
    return large_j_prefactor(k) * (2.0 * j + 1.0 + off);
}

double large_ell_line(int n, double ell_hat, double k) { return u_star(k) * ell_hat + (2.0 * n + 1.0) / j2_slope(k); }

double predicted_lambda_j(int j, double ell_hat, double k) {
    if (j < 0) fail(ErrorKind::InvalidArgument, "j must be non-negative");
    check_params(1.0, ell_hat, k);
    const double target = 2.0 * j + 1.0;
    auto g = [&](double lam) { return wkb_integral(lam, ell_hat, k) - target; };
    const double lo = u_star(k) * ell_hat * (1.0 + 1e-12);
    double hi = std::max(large_j_line(j, ell_hat, k), large_ell_line(j, ell_hat, k)) * 1.5 + 1.0;
    for (int it = 0; g(hi) <= 0.0; ++it) {
        if (it > 60) fail(ErrorKind::NonConvergence, "no upper bracket for the WKB quantization condition");
        hi *= 2.0;
    }
    boost::uintmax_t max_iter = 200;
    auto r = boost::math::tools::toms748_solve(g, lo, hi, boost::math::tools::eps_tolerance<double>(50), max_iter);
    if (max_iter >= 200) fail(ErrorKind::NonConvergence, "WKB quantization root not bracketed to tolerance");
    return 0.5 * (r.first + r.second);
}

double mu_zero_prediction(int j, double ell_hat, double k, const Partition& mu) {
    if (j < 0) fail(ErrorKind::InvalidArgument, "j must be non-negative");
    return large_ell_line(n_mu_sequence(mu, j + 1)[j], ell_hat, k);
}

void write_prediction_csv(std::ostream& out, const std::vector<PredictionRow>& rows) {
    out << "j,predicted,computed,difference\n";
    char buf[128];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g\n", r.j, r.predicted, r.computed, r.computed - r.predicted);
        out << buf;
    }
}

}  // namespace operlab
