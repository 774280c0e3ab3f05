#include "operlab/oper.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "operlab/errors.hpp"

namespace operlab {

namespace {

template <class T>
struct PoleT {
    T loc, quad, res;
};

// Laurent data of a(x) = −V(x) at an apparent pole: a = −quad/(x−a)² + am1/(x−a) + a0 + a1 (x−a) + …
template <class T>
struct Local {
    T am1, a0, a1;
};

template <class T>
Local<T> local_coeffs(const T& constant, const T& angular, const T& inv_x, const std::vector<PoleT<T>>& poles,
                      size_t i) {
    const T& a = poles[i].loc;
    T val = constant + angular / (a * a) + inv_x / a;
    T der = T(-2) * angular / (a * a * a) - inv_x / (a * a);
    for (size_t j = 0; j < poles.size(); ++j) {
        if (j == i) continue;
        T d = a - poles[j].loc;
        val += poles[j].quad / (d * d) + poles[j].res / d;
        der += T(-2) * poles[j].quad / (d * d * d) - poles[j].res / (d * d);
    }
    return {-poles[i].res, -val, -der};
}

template <class T>
T cubic_criterion(const Local<T>& c) {
    return c.am1 * c.am1 * c.am1 + T(4) * c.a0 * c.am1 + T(4) * c.a1;
}

template <class T>
T quadratic_criterion(const Local<T>& c) {
    return c.am1 * c.am1 + c.a0;
}

cplx to_c(const cldouble& z) { return {static_cast<double>(z.real()), static_cast<double>(z.imag())}; }

double exclusion_radius(const std::vector<OperPole>& poles) {
    if (poles.empty()) return 0.0;
    double d = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < poles.size(); ++i) {
        d = std::min(d, static_cast<double>(std::abs(poles[i].location)));
        for (size_t j = i + 1; j < poles.size(); ++j)
            d = std::min(d, static_cast<double>(std::abs(poles[i].location - poles[j].location)));
    }
    if (d == 0.0) fail(ErrorKind::DegenerateConfiguration, "coinciding poles or a pole at 0");
    return 1e-3 * d;
}

bool is_close(cldouble a, cldouble b) { return std::abs(a - b) <= 1e-12L * (1.0L + std::abs(b)); }

nlohmann::json cjson(cldouble z) {
    return nlohmann::json::array({static_cast<double>(z.real()), static_cast<double>(z.imag())});
}

cldouble ln_deriv_P(long double k, cldouble s) { return k / s + 1.0L / (s - 1.0L); }

}  // namespace

const char* to_string(OperKind kind) {
    switch (kind) {
        case OperKind::GaudinL1: return "GaudinL1";
        case OperKind::GaudinL0: return "GaudinL0";
        case OperKind::BLZ: return "BLZ";
        case OperKind::OscillatorExt: return "OscillatorExt";
    }
    return "?";
}

OperKind parse_oper_kind(const std::string& text) {
    for (auto k : {OperKind::GaudinL1, OperKind::GaudinL0, OperKind::BLZ, OperKind::OscillatorExt})
        if (text == to_string(k)) return k;
    fail(ErrorKind::InvalidArgument, "unknown operator kind '" + text + "'");
}

std::vector<cplx> SchroedingerSpec::apparent_poles() const {
    std::vector<cplx> out;
    for (const auto& p : poles)
        if (is_close(p.quadratic, 2.0L)) out.push_back(to_c(p.location));
    return out;
}

nlohmann::json to_json(const SchroedingerSpec& spec) {
    nlohmann::json poles = nlohmann::json::array();
    for (const auto& p : spec.poles)
        poles.push_back({{"location", cjson(p.location)}, {"quadratic", cjson(p.quadratic)}, {"residue", cjson(p.residue)}});
    return {
        {"kind", to_string(spec.kind)},
        {"k", spec.k},
        {"l", cjson(spec.l)},
        {"r", spec.r},
        {"n1", cjson(spec.n1)},
        {"constant", cjson(spec.constant)},
        {"angular", cjson(spec.angular)},
        {"inv_x", cjson(spec.inv_x)},
        {"poles", poles},
        {"coupling",
         {{"coeff", cjson(spec.coupling.coeff)},
          {"lambda_power", spec.coupling.lambda_power},
          {"alpha", spec.coupling.alpha},
          {"beta", spec.coupling.beta}}},
    };
}

SchroedingerSpec build_LG(double k, cldouble l, cldouble n1, int r, const std::vector<cldouble>& s,
                          const std::optional<std::vector<cldouble>>& residues, double tol) {
    if (residues && residues->size() != s.size()) fail(ErrorKind::LengthMismatch, "one residue per pole expected");
    SchroedingerSpec spec;
    spec.kind = OperKind::GaudinL1;
    spec.k = k;
    spec.l = l;
    spec.r = r;
    spec.n1 = n1;
    spec.constant = n1 * n1;
    spec.angular = l * (l + 1.0L);
    spec.inv_x = 2.0L * n1 * (l + static_cast<long double>(r));
    for (size_t i = 0; i < s.size(); ++i) {
        if (s[i] == 0.0L || s[i] == 1.0L) fail(ErrorKind::DegenerateConfiguration, "pole at 0 or 1");
        cldouble p = ln_deriv_P(k, s[i]);
        if (residues && std::abs((*residues)[i] - p) > tol * (1.0L + std::abs(p)))
            fail(ErrorKind::InvalidResidue, "residue at pole " + std::to_string(i) + " differs from (ln P)'(s)");
        // s p / (x (x − s)) = p/(x − s) − p/x
        spec.poles.push_back({s[i], 2.0L, p});
        spec.inv_x -= p;
    }
    spec.coupling = {1.0, 2, k, 1};
    spec.exclusion_radius = exclusion_radius(spec.poles);
    return spec;
}

SchroedingerSpec build_LG(double k, cldouble l, cldouble n1, const BetheRoots& roots) {
    return build_LG(k, l, n1, roots.problem.r(), roots.s);
}

SchroedingerSpec build_L0(double k, cldouble m, const BetheRoots& roots, double tol) {
    cldouble b0 = -m, b1 = m;
    for (auto s : roots.s) {
        b0 += 2.0L * m / s;
        b1 += 1.0L / (s - 1.0L);
    }
    SchroedingerSpec spec;
    spec.kind = OperKind::GaudinL0;
    spec.k = k;
    spec.l = m;
    spec.r = roots.problem.r();
    spec.angular = m * (m + 1.0L);
    std::vector<OperPole> tpoles;
    cldouble qsum = 0;
    long double scale = 0;
    for (auto t : roots.t) {
        if (t == 0.0L || t == 1.0L) fail(ErrorKind::DegenerateConfiguration, "t root at 0 or 1");
        b0 -= 2.0L * m / t;
        b1 -= 1.0L / (t - 1.0L);
        cldouble q = ln_deriv_P(k, t);
        qsum += q;
        scale += std::abs(q);
        tpoles.push_back({t, 2.0L, q});
    }
    scale += std::abs(b0) + std::abs(b1);
    if (std::abs(b0 + b1 + qsum) > tol * (1.0L + scale))
        fail(ErrorKind::SumRuleViolation,
             "b0 + b1 + sum q = " + std::to_string(static_cast<double>(std::abs(b0 + b1 + qsum))));
    spec.inv_x = b0;
    spec.poles.push_back({1.0L, 0.75L, b1});
    for (auto& p : tpoles) spec.poles.push_back(p);
    spec.coupling = {1.0, 2, k, 1};
    spec.exclusion_radius = exclusion_radius(spec.poles);
    return spec;
}

SchroedingerSpec build_BLZ(double kbar, cldouble lbar, const std::vector<cldouble>& zbar) {
    SchroedingerSpec spec;
    spec.kind = OperKind::BLZ;
    spec.k = kbar;
    spec.l = lbar;
    spec.angular = lbar * (lbar + 1.0L);
    spec.inv_x = 1.0L;
    for (auto z : zbar) {
        if (z == 0.0L) fail(ErrorKind::DegenerateConfiguration, "apparent singularity at 0");
        cldouble res = (static_cast<long double>(kbar) - 2.0L) / z;
        spec.poles.push_back({z, 2.0L, res});
        spec.inv_x -= res;
    }
    spec.coupling = {-1.0, 1, kbar - 2.0, 0};
    spec.exclusion_radius = exclusion_radius(spec.poles);
    return spec;
}

SchroedingerSpec build_oscillator(const std::vector<cldouble>& w) {
    SchroedingerSpec spec;
    spec.kind = OperKind::OscillatorExt;
    spec.k = 1.0;
    spec.n1 = 1.0L;
    spec.constant = 1.0L;
    for (auto z : w) {
        if (z == 0.0L) fail(ErrorKind::DegenerateConfiguration, "pole at 0");
        spec.poles.push_back({z, 2.0L, 1.0L / z});
    }
    spec.coupling = {1.0, 2, 1.0, 0};
    spec.exclusion_radius = exclusion_radius(spec.poles);
    return spec;
}

std::pair<cplx, cplx> potential_and_derivative(const SchroedingerSpec& spec, const CoverPoint& x, cplx lambda) {
    if (x.mod == 0.0) fail(ErrorKind::PoleHit, "x = 0");
    const cplx z = x.value();
    const cplx A = to_c(spec.angular), B = to_c(spec.inv_x);
    cplx v = to_c(spec.constant) + A / (z * z) + B / z;
    cplx dv = -2.0 * A / (z * z * z) - B / (z * z);
    for (const auto& p : spec.poles) {
        cplx d = z - to_c(p.location);
        if (std::abs(d) < spec.exclusion_radius || d == 0.0)
            fail(ErrorKind::PoleHit, "x within the exclusion radius of a pole");
        cplx q = to_c(p.quadratic), res = to_c(p.residue);
        v += q / (d * d) + res / d;
        dv += -2.0 * q / (d * d * d) - res / (d * d);
    }
    const auto& c = spec.coupling;
    if (lambda != 0.0) {
        cplx lp = std::pow(lambda, c.lambda_power);
        cplx xa = x.pow(c.alpha);
        cplx xm1 = c.beta == 0 ? cplx(1.0) : z - 1.0;
        v += c.coeff * lp * xa * xm1;
        dv += c.coeff * lp * (c.alpha * xa / z * xm1 + (c.beta == 0 ? cplx(0.0) : xa));
    }
    return {v, dv};
}

cplx potential_eval(const SchroedingerSpec& spec, const CoverPoint& x, cplx lambda) {
    return potential_and_derivative(spec, x, lambda).first;
}

std::vector<double> monodromy_residual(const SchroedingerSpec& spec) {
    std::vector<PoleT<cldouble>> poles;
    for (const auto& p : spec.poles) poles.push_back({p.location, p.quadratic, p.residue});
    std::vector<double> out;
    const auto& c = spec.coupling;
    const long double alpha = c.alpha;
    for (size_t i = 0; i < poles.size(); ++i) {
        auto loc = local_coeffs(spec.constant, spec.angular, spec.inv_x, poles, i);
        const cldouble a = poles[i].loc;
        // |C(a)| of the coupling at the pole; the criterion is affine in λ^power.
        long double cmag = std::abs(c.coeff) * std::pow(std::abs(a), alpha) * (c.beta == 0 ? 1.0L : std::abs(a - 1.0L));
        long double value;
        if (is_close(poles[i].quad, 2.0L)) {
            cldouble lnd = alpha / a + (c.beta == 0 ? cldouble(0.0L) : 1.0L / (a - 1.0L));
            value = std::max(std::abs(cubic_criterion(loc)), 4.0L * cmag * std::abs(loc.am1 + lnd));
        } else if (is_close(poles[i].quad, 0.75L)) {
            value = std::max(std::abs(quadratic_criterion(loc)), cmag);
        } else {
            fail(ErrorKind::UnsupportedPoleType, "quadratic pole coefficient must be 2 or 3/4");
        }
        out.push_back(static_cast<double>(value));
    }
    return out;
}

std::vector<mpq_class> monodromy_residual_exact(const mpq_class& k, const mpq_class& l,
                                                const std::vector<mpq_class>& s) {
    std::vector<PoleT<mpq_class>> poles;
    mpq_class inv_x = 0;
    for (const auto& v : s) {
        if (v == 0 || v == 1) fail(ErrorKind::DegenerateConfiguration, "pole at 0 or 1");
        mpq_class p = k / v + 1 / (v - 1);
        poles.push_back({v, 2, p});
        inv_x -= p;
    }
    for (size_t i = 0; i < s.size(); ++i)
        for (size_t j = i + 1; j < s.size(); ++j)
            if (s[i] == s[j]) fail(ErrorKind::DegenerateConfiguration, "coinciding poles");
    std::vector<mpq_class> out;
    for (size_t i = 0; i < poles.size(); ++i) {
        mpq_class c = cubic_criterion(local_coeffs<mpq_class>(0, l * (l + 1), inv_x, poles, i));
        c.canonicalize();
        out.push_back(c);
    }
    return out;
}

std::array<cplx, 3> depth1_exact(double k, cplx l) {
    cplx d1 = k - 2.0 * l + 1.0, d0 = k + 3.0, dm1 = k + 2.0 * l + 3.0;
    if (d1 == 0.0 || d0 == 0.0 || dm1 == 0.0) fail(ErrorKind::DegenerateParameters, "vanishing denominator");
    return {(k - 2.0 * l) / d1, (k + 2.0) / d0, (k + 2.0 * l + 2.0) / dm1};
}

std::array<mpq_class, 3> depth1_exact(const mpq_class& k, const mpq_class& l) {
    mpq_class d1 = k - 2 * l + 1, d0 = k + 3, dm1 = k + 2 * l + 3;
    if (d1 == 0 || d0 == 0 || dm1 == 0) fail(ErrorKind::DegenerateParameters, "vanishing denominator");
    return {mpq_class((k - 2 * l) / d1), mpq_class((k + 2) / d0), mpq_class((k + 2 * l + 2) / dm1)};
}

std::vector<cplx> blz_system_residual(const std::vector<cplx>& zbar, double kbar, cplx lbar) {
    const double kb = kbar;
    const cplx L = lbar * (lbar + 1.0);
    std::vector<cplx> out;
    for (size_t i = 0; i < zbar.size(); ++i) {
        const cplx z = zbar[i];
        if (z == 0.0) fail(ErrorKind::DegenerateConfiguration, "z = 0");
        cplx v = L / kb + (2.0 - kb) / 4.0 - z * (1.0 - kb) / (kb * kb);
        for (size_t j = 0; j < zbar.size(); ++j) {
            if (j == i) continue;
            const cplx w = zbar[j];
            if (z == w) fail(ErrorKind::DegenerateConfiguration, "coinciding z");
            cplx d = z - w;
            v += z * (kb * kb * z * z + (2.0 - kb) * (2.0 * kb + 1.0) * z * w + (1.0 - kb) * (2.0 - kb) * w * w) /
                 (kb * kb * d * d * d);
        }
        out.push_back(v);
    }
    return out;
}

cplx blz_depth1_root(double kbar, cplx lbar) {
    if (kbar == 1.0) fail(ErrorKind::DegenerateParameters, "kbar = 1");
    cplx p = lbar + 0.5;
    return kbar * p * p / (1.0 - kbar) - kbar * (1.0 - kbar) / 4.0;
}

CoverPoint ParamBundle::lambda_bar(const CoverPoint& lambda) const {
    return lambda.scaled(1.0 / (k + 3.0)).power(2.0 / (k + 3.0));
}

double ParamBundle::zero_factor() const { return std::pow(k + 3.0, 2.0 / (k + 3.0)); }

ParamBundle param_map(double k, cplx l, int r) {
    if (!(k > -2.0)) fail(ErrorKind::InvalidArgument, "k must exceed -2");
    ParamBundle b;
    b.k = k;
    b.l = l;
    b.r = r;
    b.kbar = (k + 2.0) / (k + 3.0);
    b.lbar = (l - (k + 2.0) * r + 0.5) / (k + 3.0) - 0.5;
    b.c = 1.0 - 6.0 / ((k + 2.0) * (k + 3.0));
    cplx sh = l - (k + 2.0) * r;
    b.delta_r = sh * (sh + 1.0) / ((k + 2.0) * (k + 3.0));
    const cplx i(0.0, 1.0);
    b.q = std::exp(i * M_PI * (k + 2.0) / (k + 3.0));
    b.gamma = std::exp(i * M_PI * (2.0 * l + 1.0) / (k + 3.0));
    b.gamma_r = b.gamma * std::pow(b.q, -2.0 * r);
    return b;
}

cplx l_from_lbar(double k, cplx lbar, int r) { return (lbar + 0.5) * (k + 3.0) + (k + 2.0) * r - 0.5; }

std::vector<cplx> osc_monodromy_residual(const std::vector<cplx>& w) {
    std::vector<cplx> out;
    for (size_t i = 0; i < w.size(); ++i) {
        const cplx a = w[i];
        if (a == 0.0) fail(ErrorKind::DegenerateConfiguration, "w = 0");
        cplx v = (1.0 - 4.0 * a * a) / (4.0 * a * a * a);
        for (size_t j = 0; j < w.size(); ++j) {
            if (j == i) continue;
            cplx d = a - w[j];
            if (d == 0.0) fail(ErrorKind::DegenerateConfiguration, "coinciding w");
            v -= (4.0 / d + 1.0 / a + 2.0 / w[j]) / (d * d);
        }
        out.push_back(v);
    }
    return out;
}

}  // namespace operlab
