#include "operlab/sibuya.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include <boost/math/quadrature/exp_sinh.hpp>

#include "operlab/errors.hpp"

namespace operlab {

namespace {

cplx to_c(const cldouble& z) { return {static_cast<double>(z.real()), static_cast<double>(z.imag())}; }

std::string fmt_sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

// Truncated Taylor series in h = x − x0.
using Jet = std::vector<cplx>;

Jet jet_mul(const Jet& a, const Jet& b) {
    const size_t n = std::min(a.size(), b.size());
    Jet c(n, 0.0);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; i + j < n; ++j) c[i + j] += a[i] * b[j];
    return c;
}

Jet jet_div(const Jet& a, const Jet& b) {
    const size_t n = std::min(a.size(), b.size());
    Jet c(n, 0.0);
    for (size_t i = 0; i < n; ++i) {
        cplx s = a[i];
        for (size_t j = 1; j <= i; ++j) s -= b[j] * c[i - j];
        c[i] = s / b[0];
    }
    return c;
}

// Square root whose constant term is root0.
Jet jet_sqrt(const Jet& a, cplx root0) {
    Jet s(a.size(), 0.0);
    s[0] = root0;
    for (size_t n = 1; n < a.size(); ++n) {
        cplx t = a[n];
        for (size_t i = 1; i < n; ++i) t -= s[i] * s[n - i];
        s[n] = t / (2.0 * root0);
    }
    return s;
}

Jet jet_deriv(const Jet& a) {
    Jet d(a.size() - 1);
    for (size_t n = 0; n + 1 < a.size(); ++n) d[n] = static_cast<double>(n + 1) * a[n + 1];
    return d;
}

// x^p about x0 (on the cover) and (x − a)^{−m} about x0.
Jet jet_power(const CoverPoint& x0, double p, size_t n) {
    Jet j(n);
    cplx base = x0.pow(p), inv = 1.0 / x0.value();
    double binom = 1.0;
    for (size_t i = 0; i < n; ++i) {
        j[i] = binom * base;
        base *= inv;
        binom *= (p - static_cast<double>(i)) / static_cast<double>(i + 1);
    }
    return j;
}

Jet jet_pole(cplx x0, cplx a, int m, size_t n) {
    Jet j(n);
    cplx inv = 1.0 / (x0 - a), base = std::pow(inv, m);
    double binom = 1.0;
    for (size_t i = 0; i < n; ++i) {
        j[i] = binom * base;
        base *= inv;
        binom *= (-m - static_cast<double>(i)) / static_cast<double>(i + 1);
    }
    return j;
}

void axpy(Jet& y, cplx a, const Jet& x) {
    for (size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

struct Remainder {
    cplx constant, w1;  // after removing the parts absorbed into V_c
};

Remainder remainder_of(const SchroedingerSpec& spec, const ActionNormalizer& n) {
    cplx sres = 0.0;
    for (const auto& p : spec.poles) sres += to_c(p.residue);
    return {to_c(spec.constant) - n.const_absorbed, to_c(spec.inv_x) + sres - n.inv_absorbed};
}

// W = V − V_c in a form free of cancellation at large x.
cplx remainder_value(const SchroedingerSpec& spec, const Remainder& r, cplx x) {
    cplx w = r.constant + to_c(spec.angular) / (x * x) + r.w1 / x;
    for (const auto& p : spec.poles) {
        cplx a = to_c(p.location);
        w += to_c(p.quadratic) / ((x - a) * (x - a)) + to_c(p.residue) * a / (x * (x - a));
    }
    return w;
}

cplx vc_value(const ActionNormalizer& n, const CoverPoint& x) {
    cplx lam = n.sqrt_lam * n.sqrt_lam;
    return lam * x.pow(2 * n.b) * (1.0 - n.mu * x.pow(-n.delta));
}

Jet potential_jet(const SchroedingerSpec& spec, const ActionNormalizer& n, const Remainder& r, const CoverPoint& x,
                  size_t order) {
    const size_t m = order + 1;
    const cplx lam = n.sqrt_lam * n.sqrt_lam, z = x.value();
    Jet v(m, 0.0);
    axpy(v, lam, jet_power(x, 2 * n.b, m));
    axpy(v, -lam * n.mu, jet_power(x, 2 * n.b - n.delta, m));
    v[0] += r.constant;
    axpy(v, to_c(spec.angular), jet_power(x, -2.0, m));
    axpy(v, r.w1, jet_power(x, -1.0, m));
    for (const auto& p : spec.poles) {
        cplx a = to_c(p.location);
        axpy(v, to_c(p.quadratic), jet_pole(z, a, 2, m));
        axpy(v, to_c(p.residue), jet_pole(z, a, 1, m));
        axpy(v, -to_c(p.residue), jet_pole(z, 0.0, 1, m));
    }
    return v;
}

struct WkbTerms {
    cplx sqrt_v;                // √V on the branch of √V_c
    std::vector<cplx> y;        // y_0 … y_order of the log-derivative expansion
};

WkbTerms wkb_terms(const SchroedingerSpec& spec, const ActionNormalizer& n, const Remainder& r, const CoverPoint& x,
                   int order) {
    Jet v = potential_jet(spec, n, r, x, order);
    cplx ratio = v[0] / vc_value(n, x);
    cplx s0 = n.leading_sqrt(x) * std::sqrt(ratio);
    Jet s = jet_sqrt(v, s0);
    std::vector<Jet> y(order + 1);
    y[0] = s;
    for (auto& c : y[0]) c = -c;
    Jet two_y0 = y[0];
    for (auto& c : two_y0) c *= 2.0;
    for (int k = 1; k <= order; ++k) {
        Jet num = jet_deriv(y[k - 1]);
        for (int i = 1; i < k; ++i) {
            Jet p = jet_mul(y[i], y[k - i]);
            for (size_t t = 0; t < num.size() && t < p.size(); ++t) num[t] += p[t];
        }
        y[k] = jet_div(num, two_y0);
        for (auto& c : y[k]) c = -c;
    }
    WkbTerms out;
    out.sqrt_v = s0;
    for (const auto& j : y) out.y.push_back(j[0]);
    return out;
}

std::vector<cplx> arc_path(const CoverPoint& from, const CoverPoint& to) {
    // Radial leg to |to| at the argument of `from`, then an arc to `to`.
    std::vector<cplx> path;
    path.push_back(std::polar(to.mod, from.arg));
    const double dphi = to.arg - from.arg;
    const int pieces = std::max(1, static_cast<int>(std::ceil(std::abs(dphi) / 0.05)));
    for (int i = 1; i <= pieces; ++i) path.push_back(std::polar(to.mod, from.arg + dphi * i / pieces));
    return path;
}

double max_pole_modulus(const SchroedingerSpec& spec) {
    double m = 0.0;
    for (const auto& p : spec.poles) m = std::max(m, static_cast<double>(std::abs(p.location)));
    return m;
}

}  // namespace

cplx ActionNormalizer::leading_sqrt(const CoverPoint& x) const {
    return sqrt_lam * x.pow(b) * std::sqrt(1.0 - mu * x.pow(-delta));
}

cplx ActionNormalizer::action(const CoverPoint& x) const {
    cplx f = 0.0, mj = 1.0;
    for (int j = 0; j <= jmax; ++j, mj *= mu) {
        double e = b - j * delta + 1.0;
        if (j == jmax && log_term)
            f += c[j] * mj * x.log();
        else
            f += c[j] * mj * x.pow(e) / e;
    }
    return sqrt_lam * f;
}

cplx ActionNormalizer::action_derivative(const CoverPoint& x) const {
    cplx f = 0.0, mj = 1.0;
    for (int j = 0; j <= jmax; ++j, mj *= mu) f += c[j] * mj * x.pow(b - j * delta);
    return sqrt_lam * f;
}

cplx ActionNormalizer::tail_integral(const CoverPoint& A) const {
    // ∫_A^∞ Λ^{1/2} Σ_{j > jmax} c_j μ^j x^{b − jδ} dx, each exponent below −1.
    cplx sum = 0.0, mj = std::pow(mu, jmax + 1);
    double cj = c[jmax + 1];
    for (int j = jmax + 1; j < jmax + 400; ++j) {
        double e = b - j * delta + 1.0;
        cplx term = -cj * mj * A.pow(e) / e;
        sum += term;
        if (std::abs(term) < 1e-18 * std::max(1e-300, std::abs(sum)) && j > jmax + 3) break;
        mj *= mu;
        cj *= (j - 0.5) / (j + 1.0);
    }
    return sqrt_lam * sum;
}

double ActionNormalizer::ray_arg() const { return -sqrt_lam_arg / (b + 1.0); }

ActionNormalizer make_normalizer(const SchroedingerSpec& spec, const CoverPoint& lambda) {
    ActionNormalizer n;
    const auto& cp = spec.coupling;
    // Λ^{1/2} of the coupling, with λ^{p/2} on the tracked branch.
    const cplx coupling_sqrt = std::sqrt(cp.coeff) * lambda.pow(0.5 * cp.lambda_power);
    const cplx coupling_lam = cp.coeff * std::pow(lambda.value(), cp.lambda_power);
    const double coupling_arg = 0.5 * std::arg(cp.coeff) + 0.5 * cp.lambda_power * lambda.arg;
    if (cp.beta == 1) {
        n.sqrt_lam = coupling_sqrt;
        n.sqrt_lam_arg = coupling_arg;
        n.b = 0.5 * (cp.alpha + 1.0);
        n.mu = 1.0;
        n.delta = 1.0;
    } else if (cp.alpha > 0.0) {
        n.sqrt_lam = coupling_sqrt;
        n.sqrt_lam_arg = coupling_arg;
        n.b = 0.5 * cp.alpha;
        n.mu = -to_c(spec.constant) / coupling_lam;
        n.delta = cp.alpha;
        n.const_absorbed = to_c(spec.constant);
    } else if (cp.alpha < -1.0) {
        cplx c1 = to_c(spec.inv_x);
        for (const auto& p : spec.poles) c1 += to_c(p.residue);
        if (std::abs(c1) < 1e-12) fail(ErrorKind::DegenerateParameters, "no dominant term at infinity");
        n.sqrt_lam = std::sqrt(c1);
        n.sqrt_lam_arg = std::arg(n.sqrt_lam);
        n.b = -0.5;
        n.mu = -coupling_lam / c1;
        n.delta = -1.0 - cp.alpha;
        n.inv_absorbed = c1;
    } else {
        fail(ErrorKind::DegenerateParameters, "unsupported behaviour of the potential at infinity");
    }
    if (lambda.mod == 0.0 || n.sqrt_lam == 0.0) fail(ErrorKind::DegenerateParameters, "vanishing leading term");
    const double top = (n.b + 1.0) / n.delta;
    n.jmax = static_cast<int>(std::floor(top + 1e-12));
    n.log_term = std::abs(top - std::round(top)) < 1e-12;
    n.c.assign(n.jmax + 2, 0.0);
    n.c[0] = 1.0;
    for (int j = 1; j <= n.jmax + 1; ++j) n.c[j] = n.c[j - 1] * (j - 1.5) / j;

    // The remainder must be integrable against 1/√V_c.
    Remainder r = remainder_of(spec, n);
    double scale = 1.0 + std::abs(to_c(spec.constant)) + std::abs(to_c(spec.inv_x));
    double lead = std::abs(r.constant) > 1e-12 * scale ? 0.0 : (std::abs(r.w1) > 1e-12 * scale ? -1.0 : -2.0);
    if (lead - n.b >= -1.0)
        fail(ErrorKind::DegenerateParameters, "potential remainder is not integrable at infinity (twisted operator?)");
    return n;
}

cplx truncated_action(double k, const CoverPoint& x) {
    if (x.mod == 0.0) fail(ErrorKind::InvalidArgument, "x = 0");
    ActionNormalizer n;
    n.b = 0.5 * (k + 1.0);
    n.mu = 1.0;
    n.delta = 1.0;
    const double a = n.b + 1.0;
    n.jmax = static_cast<int>(std::floor(a + 1e-12));
    n.log_term = std::abs(a - std::round(a)) < 1e-12;
    n.c.assign(n.jmax + 2, 0.0);
    n.c[0] = 1.0;
    for (int j = 1; j <= n.jmax + 1; ++j) n.c[j] = n.c[j - 1] * (j - 1.5) / j;
    return n.action(x);
}

CoverPoint default_match_point(const SchroedingerSpec& spec, const CoverPoint& lambda, const AnchorConfig& cfg) {
    auto n = make_normalizer(spec, lambda);
    // Beyond the poles and out to the turning-point scale |Λ|^{−1/(2b+2)}, where the two Frobenius
    // components of ψ are comparable (matching deep inside it loses the recessive one).
    const double turn = std::pow(std::abs(n.sqrt_lam), -1.0 / (n.b + 1.0));
    double rho = cfg.match > 0.0 ? cfg.match : 1.5 * std::max({1.0, max_pole_modulus(spec), turn});
    return {rho, n.ray_arg()};
}

SolutionSample sibuya_anchor(const SchroedingerSpec& spec, const CoverPoint& lambda, double A, int wkb_order) {
    auto n = make_normalizer(spec, lambda);
    const Remainder r = remainder_of(spec, n);
    const CoverPoint xa(A, n.ray_arg());
    auto terms = wkb_terms(spec, n, r, xa, wkb_order);

    // ∫_A^∞ [W/(√V + √V_c) − Σ_{n≥2} y_n] dx with x = A e^{i ray} e^u.
    auto integrand = [&](double u) -> cplx {
        if (u > 200.0) return 0.0;
        CoverPoint x(A * std::exp(u), xa.arg);
        auto t = wkb_terms(spec, n, r, x, wkb_order);
        cplx xv = x.value();
        cplx f = remainder_value(spec, r, xv) / (t.sqrt_v + n.leading_sqrt(x));
        for (int k = 2; k <= wkb_order; ++k) f -= t.y[k];
        return f * xv;
    };
    boost::math::quadrature::exp_sinh<double> integrator;
    double err = 0.0, l1 = 0.0;
    cplx tail = 0.0;
    try {
        tail = integrator.integrate(integrand, 1e-14, &err, &l1);
    } catch (const std::exception& e) {
        fail(ErrorKind::QuadratureFailure, std::string("anchor tail integral: ") + e.what());
    }
    if (!std::isfinite(std::abs(tail)) || err > 1e-8 * std::max(1.0, l1))
        fail(ErrorKind::QuadratureFailure, "anchor tail integral error " + fmt_sci(err));

    cplx rho = potential_jet(spec, n, r, xa, 0)[0] / (n.sqrt_lam * n.sqrt_lam * xa.pow(2 * n.b));
    cplx logpsi = -n.action(xa) - 0.5 * n.b * xa.log() - 0.25 * std::log(rho) + n.tail_integral(xa) + tail;
    cplx g = 0.0;
    for (cplx y : terms.y) g += y;

    SolutionSample s;
    s.x = xa;
    s.lambda = lambda;
    s.log_scale = logpsi.real();
    s.value = std::exp(cplx(0.0, logpsi.imag()));
    s.derivative = s.value * g;
    return s.normalized();
}

namespace {

double choose_anchor(const SchroedingerSpec& spec, const ActionNormalizer& n, const CoverPoint& x_match,
                     const AnchorConfig& cfg) {
    double A = std::max({cfg.anchor, 4.0 * x_match.mod, 4.0 * max_pole_modulus(spec), 1.0});
    const double a = n.b + 1.0;
    A = std::max(A, std::pow(cfg.min_action * a / std::abs(n.sqrt_lam), 1.0 / a));
    A = std::max(A, std::pow(4.0 * std::abs(n.mu), 1.0 / n.delta));
    // Keep the remainder small relative to the leading term.
    const Remainder r = remainder_of(spec, n);
    for (int it = 0; it < 200; ++it) {
        CoverPoint x(A, n.ray_arg());
        if (std::abs(remainder_value(spec, r, x.value()) / vc_value(n, x)) < 0.05) break;
        A *= 2.0;
    }
    return A;
}

SolutionSample psi0_from_anchor(const SchroedingerSpec& spec, const CoverPoint& lambda, const CoverPoint& x_match,
                                double A, const AnchorConfig& cfg) {
    auto start = sibuya_anchor(spec, lambda, A, cfg.wkb_order);
    auto path = arc_path(start.x, x_match);
    auto out = continue_solution(spec, start, path, cfg.integration);
    if (std::abs(out.x.arg - x_match.arg) > 1e-9) fail(ErrorKind::InvalidArgument, "match point reached on another sheet");
    out.x = x_match;
    return out;
}

}  // namespace

SolutionSample psi0_eval(const SchroedingerSpec& spec, const CoverPoint& lambda, const CoverPoint& x_match,
                         const AnchorConfig& cfg) {
    auto n = make_normalizer(spec, lambda);
    if (x_match.mod <= max_pole_modulus(spec))
        fail(ErrorKind::InvalidArgument, "match point must lie beyond all poles");
    const double A = choose_anchor(spec, n, x_match, cfg);
    auto out = psi0_from_anchor(spec, lambda, x_match, A, cfg);
    if (cfg.verify_anchor) {
        auto twice = psi0_from_anchor(spec, lambda, x_match, 2.0 * A, cfg);
        cplx ratio = twice.value / out.value * std::exp(twice.log_scale - out.log_scale);
        if (std::abs(ratio - 1.0) > cfg.anchor_tol)
            fail(ErrorKind::AnchorTooSmall, "doubling the anchor changes ψ by " + fmt_sci(std::abs(ratio - 1.0)));
    }
    return out;
}

SolutionSample psi_rotated(const SchroedingerSpec& spec, const CoverPoint& lambda, int j, const CoverPoint& x_match,
                           const AnchorConfig& cfg) {
    auto s = psi0_eval(spec, lambda.rotated(-j * M_PI), x_match, cfg);
    s.lambda = lambda;
    return s;
}

cplx stokes_sigma0(const SchroedingerSpec& spec, const CoverPoint& lambda, const CoverPoint& x_match,
                   const AnchorConfig& cfg) {
    auto m1 = psi_rotated(spec, lambda, -1, x_match, cfg);
    auto p0 = psi_rotated(spec, lambda, 0, x_match, cfg);
    auto p1 = psi_rotated(spec, lambda, 1, x_match, cfg);
    auto num = wronskian_scaled(m1, p1), den = wronskian_scaled(m1, p0);
    const double ref = std::max(std::abs(m1.value) * std::abs(p0.derivative), std::abs(m1.derivative) * std::abs(p0.value));
    if (std::abs(den.mantissa) < 1e-12 * ref) fail(ErrorKind::DegenerateBasis, "ψ⁽⁻¹⁾ and ψ⁽⁰⁾ are nearly dependent");
    return num.mantissa / den.mantissa * std::exp(num.log_scale - den.log_scale);
}

}  // namespace operlab
