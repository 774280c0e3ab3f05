#include "operlab/frobenius.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <cmath>
#include <limits>

#include <boost/numeric/odeint.hpp>

#include "operlab/errors.hpp"

namespace operlab {

namespace {

cplx to_c(const cldouble& z) { return {static_cast<double>(z.real()), static_cast<double>(z.imag())}; }

// Taylor coefficients at 0 of the non-coupling part of V beyond angular/x²: Σ_{n ≥ -1} f_n x^n.
std::vector<cplx> f_coefficients(const SchroedingerSpec& spec, int count) {
    std::vector<cplx> f(count + 1, 0.0);  // f[n+1] = f_n
    f[0] = to_c(spec.inv_x);
    if (count >= 1) f[1] += to_c(spec.constant);
    for (const auto& p : spec.poles) {
        const cldouble a = p.location;
        cldouble inv = 1.0L / a, pw = inv;  // a^{-(n+1)}
        for (int n = 0; n < count; ++n) {
            f[n + 1] += to_c(p.quadratic * static_cast<long double>(n + 1) * pw * inv - p.residue * pw);
            pw *= inv;
        }
    }
    return f;
}

double pole_radius(const SchroedingerSpec& spec) {
    double r = std::numeric_limits<double>::infinity();
    for (const auto& p : spec.poles) r = std::min(r, static_cast<double>(std::abs(p.location)));
    return r;
}

using State = std::array<cplx, 2>;

std::string fmt_sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

double distance_to_segment(cplx p, cplx a, cplx b) {
    cplx d = b - a;
    double len2 = std::norm(d);
    if (len2 == 0.0) return std::abs(p - a);
    double t = std::clamp(((p - a) * std::conj(d)).real() / len2, 0.0, 1.0);
    return std::abs(p - (a + t * d));
}

}  // namespace

cplx SolutionSample::true_value() const { return value * std::exp(log_scale); }
cplx SolutionSample::true_derivative() const { return derivative * std::exp(log_scale); }

SolutionSample SolutionSample::normalized() const {
    SolutionSample s = *this;
    double m = std::max(std::abs(value), std::abs(derivative));
    if (m > 0.0 && std::isfinite(m)) {
        s.value /= m;
        s.derivative /= m;
        s.log_scale += std::log(m);
    }
    return s;
}

cplx ScaledValue::value() const { return mantissa * std::exp(log_scale); }

ScaledValue wronskian_scaled(const SolutionSample& a, const SolutionSample& b) {
    if (std::abs(a.x.mod - b.x.mod) > 1e-12 * a.x.mod || std::abs(a.x.arg - b.x.arg) > 1e-12)
        fail(ErrorKind::InvalidArgument, "Wronskian of samples at different points");
    return {a.value * b.derivative - a.derivative * b.value, a.log_scale + b.log_scale};
}

cplx wronskian(const SolutionSample& a, const SolutionSample& b) { return wronskian_scaled(a, b).value(); }

FrobeniusSeries frobenius_build(const SchroedingerSpec& spec, int sign, int J, int H) {
    if (sign != 1 && sign != -1) fail(ErrorKind::InvalidArgument, "sign must be +1 or -1");
    if (J < 0 || H < 0) fail(ErrorKind::InvalidArgument, "negative truncation order");
    const cplx l = to_c(spec.l);
    if (l.real() <= -0.5) fail(ErrorKind::InvalidArgument, "Re l must exceed -1/2");
    if (std::abs(to_c(spec.angular) - l * (l + 1.0)) > 1e-10 * (1.0 + std::abs(l * l)))
        fail(ErrorKind::InvalidArgument, "angular coefficient differs from l(l+1)");
    const auto& cp = spec.coupling;
    FrobeniusSeries s;
    s.sign = sign;
    s.l = l;
    s.alpha = sign > 0 ? l + 1.0 : -l;
    s.K = cp.alpha + 2.0;
    if (!(s.K > 0.0)) fail(ErrorKind::InvalidArgument, "coupling exponent must exceed -2");
    s.xi_coeff = cp.coeff;
    s.lambda_power = cp.lambda_power;
    s.J = J;
    s.H = H;
    s.radius = pole_radius(spec);
    // V coupling = c1 ξ/x + c2 ξ/x².
    const double c1 = cp.beta == 1 ? 1.0 : 0.0, c2 = cp.beta == 1 ? -1.0 : 1.0;
    const auto f = f_coefficients(spec, J);
    s.g.assign(J + 1, std::vector<cplx>(H + 1, 0.0));
    for (int j = 0; j <= J; ++j) {
        for (int h = 0; h <= H; ++h) {
            if (j == 0 && h == 0) {
                s.g[0][0] = 1.0;
                continue;
            }
            cplx rhs = 0.0;
            double size = 0.0;  // scale of the terms entering rhs
            auto add = [&](cplx t) {
                rhs += t;
                size += std::abs(t);
            };
            if (j >= 1 && h >= 1) add(c1 * s.g[j - 1][h - 1]);
            if (h >= 1) add(c2 * s.g[j][h - 1]);
            for (int jp = 0; jp < j; ++jp) add(f[j - 1 - jp] * s.g[jp][h]);
            const cplx e = s.alpha + static_cast<double>(j) + s.K * h;
            const cplx R = (e - l - 1.0) * (e + l);
            if (std::abs(R) < 1e-8 * (1.0 + static_cast<double>(h) * h)) {
                // Resonant but log-free: the coefficient is free and set to zero (no admixture of χ+).
                if (std::abs(rhs) <= 1e-10 * size || size == 0.0) {
                    s.g[j][h] = 0.0;
                    continue;
                }
                fail(ErrorKind::ResonantParameters,
                     "indicial factor vanishes at j = " + std::to_string(j) + ", h = " + std::to_string(h));
            }
            s.g[j][h] = rhs / R;
        }
    }
    return s;
}

SolutionSample chi_eval(const FrobeniusSeries& series, const CoverPoint& x, const CoverPoint& lambda, double tail_tol) {
    if (x.mod == 0.0) fail(ErrorKind::InvalidArgument, "x = 0");
    if (x.mod >= 0.8 * series.radius) fail(ErrorKind::InvalidArgument, "x outside the convergence disc of the series");
    const cplx xv = x.value();
    const cplx xi = series.xi_coeff * lambda.pow(static_cast<double>(series.lambda_power)) * x.pow(series.K);
    cplx S = 0.0, dS = 0.0;
    double scale = 0.0, tail = 0.0;
    cplx xj = 1.0;
    for (int j = 0; j <= series.J; ++j) {
        cplx row = 0.0, drow = 0.0, xih = 1.0;
        double last_h = 0.0;
        for (int h = 0; h <= series.H; ++h) {
            cplx t = series.g[j][h] * xih;
            row += t;
            drow += (series.alpha + static_cast<double>(j) + series.K * h) * t;
            if (h == series.H) last_h = std::abs(t);
            xih *= xi;
        }
        S += row * xj;
        dS += drow * xj;
        scale = std::max(scale, std::abs(row * xj));
        tail = std::max(tail, last_h * std::abs(xj));
        if (j == series.J) tail = std::max(tail, std::abs(row * xj));
        xj *= xv;
    }
    if (tail > tail_tol * scale)
        fail(ErrorKind::TruncationInsufficient, "Frobenius tail " + fmt_sci(tail / scale) + " above tolerance");
    const cplx la = series.alpha * x.log();
    const cplx phase = std::exp(cplx(0.0, la.imag()));
    SolutionSample out;
    out.value = phase * S;
    out.derivative = phase * dS / xv;
    out.x = x;
    out.lambda = lambda;
    out.log_scale = la.real();
    return out.normalized();
}

SolutionSample chi_eval_auto(const SchroedingerSpec& spec, int sign, const CoverPoint& x, const CoverPoint& lambda,
                             double tail_tol) {
    int J = 60, H = 40;
    for (int attempt = 0; attempt < 4; ++attempt, J *= 2, H *= 2) {
        try {
            return chi_eval(frobenius_build(spec, sign, J, H), x, lambda, tail_tol);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::TruncationInsufficient) throw;
        }
    }
    fail(ErrorKind::TruncationInsufficient, "Frobenius series did not reach the tail tolerance");
}

SolutionSample continue_solution(const SchroedingerSpec& spec, const SolutionSample& start,
                                 const std::vector<cplx>& path, const IntegrationOptions& opts) {
    namespace odeint = boost::numeric::odeint;
    SolutionSample cur = start.normalized();
    const cplx lam = cur.lambda.value();
    for (const cplx xb : path) {
        const cplx xa = cur.x.value();
        if (xb == xa) continue;
        if (distance_to_segment(0.0, xa, xb) < 1e-300) fail(ErrorKind::PoleProximity, "path through x = 0");
        for (const auto& p : spec.poles)
            if (distance_to_segment(to_c(p.location), xa, xb) < spec.exclusion_radius)
                fail(ErrorKind::PoleProximity, "path passes within the exclusion radius of a pole");
        const cplx dx = xb - xa;
        const double arg_a = cur.x.arg;
        auto at = [&](double t) {
            cplx x = xa + t * dx;
            return CoverPoint(std::abs(x), arg_a + std::arg(x / xa));
        };
        auto rhs = [&](const State& y, State& dydt, double t) {
            cplx v = potential_eval(spec, at(t), lam);
            dydt[0] = dx * y[1];
            dydt[1] = dx * v * y[0];
        };
        auto stepper = odeint::make_controlled(opts.abs_tol, opts.rel_tol, odeint::runge_kutta_fehlberg78<State>());
        State y{cur.value, cur.derivative};
        double t = 0.0, dt = 1e-2;
        long steps = 0;
        while (t < 1.0) {
            if (++steps > opts.max_steps) fail(ErrorKind::StepFailure, "step budget exhausted");
            dt = std::min(dt, 1.0 - t);
            if (stepper.try_step(rhs, y, t, dt) == odeint::fail) {
                if (dt < opts.min_step) fail(ErrorKind::StepFailure, "step size underflow");
                continue;
            }
            double m = std::max(std::abs(y[0]), std::abs(y[1]));
            if (!std::isfinite(m)) fail(ErrorKind::StepFailure, "non-finite solution");
            if (m > 1e50 || (m < 1e-50 && m > 0.0)) {
                y[0] /= m;
                y[1] /= m;
                cur.log_scale += std::log(m);
            }
        }
        cur.value = y[0];
        cur.derivative = y[1];
        cur.x = at(1.0);
        cur = cur.normalized();
    }
    return cur;
}

}  // namespace operlab
