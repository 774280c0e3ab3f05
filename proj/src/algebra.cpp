#include "operlab/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

#include "operlab/errors.hpp"

namespace operlab {

// ---------------------------------------------------------------- Partition

Partition::Partition(std::vector<int> parts) {
    for (int p : parts) {
        if (p < 0) fail(ErrorKind::InvalidArgument, "partition parts must be non-negative");
        if (p > 0) parts_.push_back(p);
    }
    for (size_t i = 1; i < parts_.size(); ++i)
        if (parts_[i] > parts_[i - 1]) fail(ErrorKind::InvalidArgument, "partition parts must be weakly decreasing");
}

Partition Partition::parse(const std::string& text) {
    std::vector<int> parts;
    std::string token;
    auto flush = [&]() {
        if (!token.empty()) {
            try {
                parts.push_back(std::stoi(token));
            } catch (const std::exception&) {
                fail(ErrorKind::InvalidArgument, "bad partition text '" + text + "'");
            }
            token.clear();
        }
    };
    for (char ch : text) {
        if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '-') token += ch;
        else flush();
    }
    flush();
    return Partition(parts);
}

int Partition::weight() const { return std::accumulate(parts_.begin(), parts_.end(), 0); }

Partition Partition::transpose() const {
    std::vector<int> t;
    if (parts_.empty()) return Partition();
    for (int i = 1; i <= parts_.front(); ++i) {
        int cnt = 0;
        for (int p : parts_) if (p >= i) ++cnt;
        t.push_back(cnt);
    }
    return Partition(t);
}

std::string Partition::to_string() const {
    std::string s = "(";
    for (size_t i = 0; i < parts_.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(parts_[i]);
    }
    return s + ")";
}

static void partitions_rec(int n, int max_part, std::vector<int>& cur, std::vector<Partition>& out) {
    if (n == 0) {
        out.emplace_back(cur);
        return;
    }
    for (int p = std::min(n, max_part); p >= 1; --p) {
        cur.push_back(p);
        partitions_rec(n - p, p, cur, out);
        cur.pop_back();
    }
}

std::vector<Partition> partitions_of(int n) {
    std::vector<Partition> out;
    if (n < 0) return out;
    std::vector<int> cur;
    partitions_rec(n, n, cur, out);
    return out;
}

long long partitions_count(int n) {
    if (n < 0) return 0;
    // Euler's pentagonal recurrence.
    std::vector<long long> p(n + 1, 0);
    p[0] = 1;
    for (int m = 1; m <= n; ++m) {
        long long acc = 0;
        for (int k = 1;; ++k) {
            int g1 = k * (3 * k - 1) / 2, g2 = k * (3 * k + 1) / 2;
            if (g1 > m) break;
            long long sign = (k % 2) ? 1 : -1;
            acc += sign * p[m - g1];
            if (g2 <= m) acc += sign * p[m - g2];
        }
        p[m] = acc;
    }
    return p[n];
}

// ---------------------------------------------------------------- RatPoly

RatPoly::RatPoly(std::vector<mpq_class> coeffs) : c_(std::move(coeffs)) {
    for (auto& q : c_) q.canonicalize();
    trim();
}

RatPoly::RatPoly(const mpq_class& constant) {
    if (constant != 0) c_.push_back(constant);
}

RatPoly RatPoly::x() { return RatPoly(std::vector<mpq_class>{0, 1}); }

RatPoly RatPoly::monomial(const mpq_class& c, int degree) {
    std::vector<mpq_class> v(degree + 1, mpq_class(0));
    v[degree] = c;
    return RatPoly(v);
}

RatPoly RatPoly::from_roots(const std::vector<mpq_class>& roots) {
    RatPoly p(1);
    for (const auto& r : roots) p *= RatPoly(std::vector<mpq_class>{-r, 1});
    return p;
}

void RatPoly::trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

mpq_class RatPoly::coeff(int i) const {
    if (i < 0 || i >= static_cast<int>(c_.size())) return 0;
    return c_[i];
}

mpq_class RatPoly::leading() const { return c_.empty() ? mpq_class(0) : c_.back(); }

RatPoly RatPoly::derivative() const {
    std::vector<mpq_class> d;
    for (size_t i = 1; i < c_.size(); ++i) d.push_back(c_[i] * mpq_class(static_cast<long>(i)));
    return RatPoly(d);
}

RatPoly RatPoly::monic() const {
    if (c_.empty()) return *this;
    return *this * mpq_class(1 / leading());
}

RatPoly RatPoly::scale_arg(const mpq_class& a) const {
    std::vector<mpq_class> v(c_);
    mpq_class pw = 1;
    for (auto& q : v) {
        q *= pw;
        pw *= a;
    }
    return RatPoly(v);
}

mpq_class RatPoly::operator()(const mpq_class& x) const {
    mpq_class acc = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
}

std::complex<double> RatPoly::operator()(std::complex<double> x) const {
    std::complex<double> acc = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + it->get_d();
    return acc;
}

std::vector<std::complex<double>> RatPoly::to_complex() const {
    std::vector<std::complex<double>> v;
    for (const auto& q : c_) v.emplace_back(q.get_d(), 0.0);
    return v;
}

RatPoly RatPoly::operator+(const RatPoly& o) const {
    std::vector<mpq_class> v(std::max(c_.size(), o.c_.size()), mpq_class(0));
    for (size_t i = 0; i < c_.size(); ++i) v[i] += c_[i];
    for (size_t i = 0; i < o.c_.size(); ++i) v[i] += o.c_[i];
    return RatPoly(v);
}

RatPoly RatPoly::operator-() const {
    std::vector<mpq_class> v(c_);
    for (auto& q : v) q = -q;
    return RatPoly(v);
}

RatPoly RatPoly::operator-(const RatPoly& o) const { return *this + (-o); }

RatPoly RatPoly::operator*(const RatPoly& o) const {
    if (c_.empty() || o.c_.empty()) return RatPoly();
    std::vector<mpq_class> v(c_.size() + o.c_.size() - 1, mpq_class(0));
    for (size_t i = 0; i < c_.size(); ++i)
        for (size_t j = 0; j < o.c_.size(); ++j) v[i + j] += c_[i] * o.c_[j];
    return RatPoly(v);
}

RatPoly RatPoly::operator*(const mpq_class& s) const {
    std::vector<mpq_class> v(c_);
    for (auto& q : v) q *= s;
    return RatPoly(v);
}

std::pair<RatPoly, RatPoly> RatPoly::divmod(const RatPoly& d) const {
    if (d.is_zero()) fail(ErrorKind::InvalidArgument, "polynomial division by zero");
    std::vector<mpq_class> rem(c_);
    int dd = d.degree();
    int nq = degree() - dd;
    if (nq < 0) return {RatPoly(), *this};
    std::vector<mpq_class> q(nq + 1, mpq_class(0));
    mpq_class lc = d.leading();
    for (int i = nq; i >= 0; --i) {
        mpq_class f = rem[i + dd] / lc;
        q[i] = f;
        if (f == 0) continue;
        for (int j = 0; j <= dd; ++j) rem[i + j] -= f * d.c_[j];
    }
    rem.resize(dd);
    return {RatPoly(q), RatPoly(rem)};
}

std::string RatPoly::to_string(const std::string& var) const {
    if (c_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int i = degree(); i >= 0; --i) {
        const mpq_class& q = c_[i];
        if (q == 0) continue;
        bool neg = q < 0;
        mpq_class a = neg ? mpq_class(-q) : q;
        if (first) os << (neg ? "-" : "");
        else os << (neg ? " - " : " + ");
        first = false;
        if (i == 0 || a != 1) os << a.get_str();
        if (i >= 1) os << (i == 0 || a != 1 ? "*" : "") << var;
        if (i >= 2) os << "^" << i;
    }
    return os.str();
}

RatPoly gcd(RatPoly a, RatPoly b) {
    while (!b.is_zero()) {
        auto r = a.divmod(b).second;
        a = std::move(b);
        b = std::move(r);
    }
    return a.is_zero() ? a : a.monic();
}

// ---------------------------------------------------------------- Hermite / Wronskians

RatPoly hermite(int n) {
    if (n < 0) fail(ErrorKind::InvalidArgument, "hermite index must be non-negative");
    RatPoly h(1);
    RatPoly two_x = RatPoly::monomial(2, 1);
    for (int i = 0; i < n; ++i) h = two_x * h - h.derivative();
    return h;
}

RatPoly poly_wronskian(const std::vector<RatPoly>& polys) {
    const size_t n = polys.size();
    if (n == 0) fail(ErrorKind::InvalidArgument, "Wronskian of an empty list");
    std::vector<std::vector<RatPoly>> m(n, std::vector<RatPoly>(n));
    for (size_t i = 0; i < n; ++i) {
        RatPoly d = polys[i];
        for (size_t j = 0; j < n; ++j) {
            m[i][j] = d;
            d = d.derivative();
        }
    }
    // Bareiss elimination over Q[x]: all divisions are exact.
    RatPoly prev(1);
    bool negate = false;
    for (size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k].is_zero()) {
            size_t piv = k + 1;
            while (piv < n && m[piv][k].is_zero()) ++piv;
            if (piv == n) return RatPoly();
            std::swap(m[k], m[piv]);
            negate = !negate;
        }
        for (size_t i = k + 1; i < n; ++i) {
            for (size_t j = k + 1; j < n; ++j) {
                RatPoly num = m[i][j] * m[k][k] - m[i][k] * m[k][j];
                m[i][j] = num.divmod(prev).first;
            }
            m[i][k] = RatPoly();
        }
        prev = m[k][k];
    }
    RatPoly det = m[n - 1][n - 1];
    return negate ? -det : det;
}

RatPoly v_mu(const Partition& mu) {
    const int a = mu.size();
    if (a == 0) return RatPoly(1);
    std::vector<RatPoly> hs;
    for (int i = 0; i < a; ++i) hs.push_back(hermite(mu.parts()[a - 1 - i] + i));
    return poly_wronskian(hs);
}

mpz_class b_mu(const Partition& mu) {
    const auto& p = mu.parts();
    const int a = mu.size();
    long expo = 0;
    for (int i = 0; i < a; ++i) expo += p[i] + i;
    mpz_class b = 1;
    mpz_mul_2exp(b.get_mpz_t(), b.get_mpz_t(), expo);
    for (int i = 0; i < a; ++i)
        for (int j = i + 1; j < a; ++j) b *= (p[i] - p[j] + j - i);
    return b;
}

std::vector<int> n_mu_sequence(const Partition& mu, int count) {
    if (count < 1) fail(ErrorKind::InvalidArgument, "count must be positive");
    Partition t = mu.transpose();
    std::vector<int> out;
    for (int j = 0; j < count; ++j) out.push_back(j - t.part(j));
    return out;
}

// ---------------------------------------------------------------- exact linear algebra

namespace {

struct LinearSolution {
    std::vector<mpq_class> x;
    bool consistent = true;
    int rank = 0;
};

// Gauss-Jordan over Q; free variables are set to zero.
LinearSolution solve_exact(std::vector<std::vector<mpq_class>> a, std::vector<mpq_class> b) {
    const size_t rows = a.size(), cols = rows ? a[0].size() : 0;
    std::vector<int> pivot_col;
    size_t r = 0;
    for (size_t c = 0; c < cols && r < rows; ++c) {
        size_t piv = r;
        while (piv < rows && a[piv][c] == 0) ++piv;
        if (piv == rows) continue;
        std::swap(a[piv], a[r]);
        std::swap(b[piv], b[r]);
        mpq_class inv = 1 / a[r][c];
        for (size_t j = c; j < cols; ++j) a[r][j] *= inv;
        b[r] *= inv;
        for (size_t i = 0; i < rows; ++i) {
            if (i == r || a[i][c] == 0) continue;
            mpq_class f = a[i][c];
            for (size_t j = c; j < cols; ++j) a[i][j] -= f * a[r][j];
            b[i] -= f * b[r];
        }
        pivot_col.push_back(static_cast<int>(c));
        ++r;
    }
    LinearSolution sol;
    sol.rank = static_cast<int>(r);
    for (size_t i = r; i < rows; ++i)
        if (b[i] != 0) sol.consistent = false;
    sol.x.assign(cols, mpq_class(0));
    for (size_t i = 0; i < r; ++i) sol.x[pivot_col[i]] = b[i];
    return sol;
}

enum class RelationKind { Periodic, Exponential, Trigonometric };

// Applies the first-order relation operator to f.
RatPoly apply_relation(RelationKind kind, const RatPoly& y, const mpq_class& param, const RatPoly& f) {
    const RatPoly yp = y.derivative(), fp = f.derivative();
    switch (kind) {
    case RelationKind::Periodic: return y * fp - yp * f;
    case RelationKind::Exponential: return y * (f * param + fp) - yp * f;
    case RelationKind::Trigonometric: {
        RatPoly x = RatPoly::x();
        return y * (f * param + x * fp) - x * yp * f;
    }
    }
    return {};
}

// Solves relation(f) = rhs for f of the given degree. When `pin_degree` >= 0,
// the coefficient of x^{pin_degree} is fixed to zero (periodic integration constant).
RatPoly solve_relation(RelationKind kind, const RatPoly& y, const mpq_class& param, const RatPoly& rhs,
                       int deg_f, int pin_degree, ErrorKind inconsistent_kind) {
    if (deg_f < 0) {
        if (rhs.is_zero()) return RatPoly();
        fail(inconsistent_kind, "no polynomial solution of negative degree");
    }
    const int unknowns = deg_f + 1;
    int rows_deg = std::max(rhs.degree(), y.degree() + deg_f + 1);
    std::vector<std::vector<mpq_class>> a(rows_deg + 1, std::vector<mpq_class>(unknowns, mpq_class(0)));
    std::vector<mpq_class> b(rows_deg + 1, mpq_class(0));
    for (int j = 0; j < unknowns; ++j) {
        RatPoly col = apply_relation(kind, y, param, RatPoly::monomial(1, j));
        for (int i = 0; i <= col.degree(); ++i) a[i][j] = col.coeff(i);
    }
    for (int i = 0; i <= rhs.degree(); ++i) b[i] = rhs.coeff(i);
    if (pin_degree >= 0 && pin_degree < unknowns) {
        std::vector<mpq_class> row(unknowns, mpq_class(0));
        row[pin_degree] = 1;
        a.push_back(row);
        b.push_back(0);
    }
    LinearSolution sol = solve_exact(a, b);
    if (!sol.consistent) fail(inconsistent_kind, "relation has no polynomial solution of degree " + std::to_string(deg_f));
    if (sol.rank < unknowns) fail(ErrorKind::SingularLinearSystem, "relation system is rank-deficient");
    RatPoly f(sol.x);
    if (f.degree() != deg_f) fail(inconsistent_kind, "solution has unexpected degree");
    return f;
}

}  // namespace

RatPoly solve_exp_relation(const RatPoly& y, const mpq_class& c, const RatPoly& rhs) {
    if (c == 0) fail(ErrorKind::InvalidArgument, "exponential relation needs c != 0");
    int deg_f = rhs.degree() - y.degree();
    return solve_relation(RelationKind::Exponential, y, c, rhs, deg_f, -1, ErrorKind::SingularLinearSystem);
}

std::pair<RatPoly, RatPoly> wu_recursion(int r, int bound) {
    if (std::abs(r) > bound) fail(ErrorKind::InvalidArgument, "|r| exceeds configured bound");
    const int target = r >= 0 ? r : -r;
    // Forward sweep over r = 0..target produces W_r, U_r and U_{-r} for r <= target.
    RatPoly w(1), u(1);                 // W_r, U_r
    RatPoly w_neg(1), u_neg(1);         // W_{-r}, U_{-r}
    const mpq_class minus_one = -1;
    for (int step = 0;; ++step) {
        RatPoly u_next = solve_exp_relation(u, 2, w * w * mpq_class(2));  // U_{step+1}
        u_neg = u_next.scale_arg(minus_one);                               // U_{-step}
        w_neg = w.scale_arg(minus_one) * mpq_class(step % 2 ? -1 : 1);      // W_{-step}
        if (step == target) break;
        RatPoly rhs = RatPoly::monomial(step % 2 ? -4 : 4, 1) * u_neg * u_neg;
        RatPoly g = solve_exp_relation(w_neg, -2, rhs);                    // W_{step+1}(-x)
        w = g.scale_arg(minus_one);
        u = u_next;
    }
    if (r >= 0) return {w, u};
    return {w_neg, u_neg};
}

RatPoly reproduce(const RatPoly& y0, const RatPoly& y1, const ReproductionData& data, int direction) {
    if (direction != 0 && direction != 1) fail(ErrorKind::InvalidArgument, "direction must be 0 or 1");
    const RatPoly& y = direction == 0 ? y0 : y1;
    const RatPoly& other = direction == 0 ? y1 : y0;
    if (y.is_zero()) fail(ErrorKind::InvalidArgument, "cannot reproduce the zero polynomial");
    RatPoly rhs = data.rhs * other * other;
    const int d = y.degree();
    RatPoly f;
    switch (data.kind) {
    case ReproductionData::Kind::Periodic: {
        int deg_f = rhs.degree() - d + 1;
        if (deg_f == d) fail(ErrorKind::NoPolynomialSolution, "periodic relation degree collides with deg y");
        f = solve_relation(RelationKind::Periodic, y, 0, rhs, deg_f, deg_f > d ? d : -1,
                           ErrorKind::NoPolynomialSolution);
        break;
    }
    case ReproductionData::Kind::Exponential:
        f = solve_relation(RelationKind::Exponential, y, data.param, rhs, rhs.degree() - d, -1,
                           ErrorKind::NoPolynomialSolution);
        break;
    case ReproductionData::Kind::Trigonometric:
        f = solve_relation(RelationKind::Trigonometric, y, data.param, rhs, rhs.degree() - d, -1,
                           ErrorKind::NoPolynomialSolution);
        break;
    }
    return f.monic();
}

// ---------------------------------------------------------------- roots

int RootList::total() const { return std::accumulate(multiplicity.begin(), multiplicity.end(), 0); }

std::vector<std::complex<double>> flat_roots(const RootList& roots) {
    std::vector<std::complex<double>> out;
    for (size_t i = 0; i < roots.roots.size(); ++i)
        for (int m = 0; m < roots.multiplicity[i]; ++m) out.push_back(roots.roots[i]);
    return out;
}

namespace {

using cld = std::complex<long double>;

void horner(const std::vector<cld>& c, cld z, cld& p, cld& dp) {
    p = 0;
    dp = 0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) {
        dp = dp * z + p;
        p = p * z + *it;
    }
}

// Aberth-Ehrlich simultaneous iteration followed by Newton polishing.
std::vector<cld> aberth(std::vector<cld> c) {
    const int n = static_cast<int>(c.size()) - 1;
    std::vector<cld> z;
    if (n < 1) return z;
    cld lc = c.back();
    for (auto& v : c) v /= lc;
    if (n == 1) return {-c[0]};
    long double radius = 0;
    for (int i = 0; i < n; ++i) radius = std::max(radius, std::pow(std::abs(c[i]), 1.0L / (n - i)));
    radius = std::max(radius, 1e-3L);
    for (int i = 0; i < n; ++i) z.push_back(std::polar(radius, 2.0L * M_PIl * i / n + 0.4L));
    // A root is accepted once |p(z)| is within the rounding bound of Horner evaluation.
    auto rounding_bound = [&](cld x) {
        long double acc = 0, ax = std::abs(x);
        for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * ax + std::abs(*it);
        return 8 * n * std::numeric_limits<long double>::epsilon() * acc;
    };
    const int max_iter = 2000;
    std::vector<bool> converged(n, false);
    bool done = false;
    for (int it = 0; it < max_iter && !done; ++it) {
        done = true;
        for (int i = 0; i < n; ++i) {
            if (converged[i]) continue;
            cld p, dp;
            horner(c, z[i], p, dp);
            if (std::abs(p) <= rounding_bound(z[i])) {
                converged[i] = true;
                continue;
            }
            done = false;
            cld w = p / dp;
            cld s = 0;
            for (int j = 0; j < n; ++j)
                if (j != i) s += 1.0L / (z[i] - z[j]);
            z[i] -= w / (1.0L - w * s);
        }
    }
    if (!done) fail(ErrorKind::NonConvergence, "Aberth iteration did not converge");
    return z;
}

RootList cluster(const std::vector<cld>& raw, int mult, double tol) {
    RootList out;
    out.tol = tol;
    std::vector<bool> used(raw.size(), false);
    for (size_t i = 0; i < raw.size(); ++i) {
        if (used[i]) continue;
        cld sum = raw[i];
        int cnt = 1;
        used[i] = true;
        for (size_t j = i + 1; j < raw.size(); ++j) {
            if (used[j]) continue;
            if (std::abs(raw[j] - raw[i]) <= tol * (1.0L + std::abs(raw[i]))) {
                used[j] = true;
                sum += raw[j];
                ++cnt;
            }
        }
        cld m = sum / static_cast<long double>(cnt);
        out.roots.emplace_back(static_cast<double>(m.real()), static_cast<double>(m.imag()));
        out.multiplicity.push_back(cnt * mult);
    }
    return out;
}

void sort_roots(RootList& r) {
    std::vector<size_t> idx(r.roots.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) {
        if (r.roots[a].real() != r.roots[b].real()) return r.roots[a].real() < r.roots[b].real();
        return r.roots[a].imag() < r.roots[b].imag();
    });
    RootList s;
    s.tol = r.tol;
    for (size_t i : idx) {
        s.roots.push_back(r.roots[i]);
        s.multiplicity.push_back(r.multiplicity[i]);
    }
    r = s;
}

}  // namespace

RootList poly_roots(const std::vector<std::complex<double>>& coeffs, double tol) {
    std::vector<cld> c;
    for (auto v : coeffs) c.emplace_back(v.real(), v.imag());
    while (!c.empty() && c.back() == cld(0)) c.pop_back();
    if (c.size() < 2) fail(ErrorKind::InvalidArgument, "poly_roots needs degree >= 1");
    RootList out = cluster(aberth(c), 1, tol);
    sort_roots(out);
    return out;
}

RootList poly_roots(const RatPoly& p, double tol) {
    if (p.degree() < 1) fail(ErrorKind::InvalidArgument, "poly_roots needs degree >= 1");
    // Yun's square-free factorization.
    RatPoly f = p.monic();
    RatPoly fp = f.derivative();
    RatPoly b = gcd(f, fp);
    RatPoly c = f.divmod(b).first;
    RatPoly d = fp.divmod(b).first - c.derivative();
    RootList out;
    out.tol = tol;
    for (int mult = 1; c.degree() > 0; ++mult) {
        RatPoly a = gcd(c, d);
        c = c.divmod(a).first;
        d = d.divmod(a).first - c.derivative();
        if (a.degree() < 1) continue;
        std::vector<cld> ac;
        for (const auto& q : a.coeffs()) ac.emplace_back(q.get_d(), 0.0L);
        RootList part = cluster(aberth(ac), mult, tol);
        for (size_t i = 0; i < part.roots.size(); ++i) {
            out.roots.push_back(part.roots[i]);
            out.multiplicity.push_back(part.multiplicity[i]);
        }
    }
    sort_roots(out);
    return out;
}

mpq_class parse_rational(const std::string& text) {
    std::string t;
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch))) t += ch;
    if (t.empty()) fail(ErrorKind::InvalidArgument, "empty rational");
    auto dot = t.find('.');
    auto e = t.find_first_of("eE");
    if (dot != std::string::npos || e != std::string::npos) {
        // Decimal literal: exact conversion of the written digits.
        std::string mant = e == std::string::npos ? t : t.substr(0, e);
        long expo = e == std::string::npos ? 0 : std::stol(t.substr(e + 1));
        bool neg = !mant.empty() && mant[0] == '-';
        if (!mant.empty() && (mant[0] == '-' || mant[0] == '+')) mant = mant.substr(1);
        auto p = mant.find('.');
        std::string digits = mant;
        long frac = 0;
        if (p != std::string::npos) {
            digits = mant.substr(0, p) + mant.substr(p + 1);
            frac = static_cast<long>(mant.size() - p - 1);
        }
        if (digits.empty()) digits = "0";
        mpz_class num(digits, 10);
        mpz_class ten = 10, scale;
        long shift = expo - frac;
        mpz_pow_ui(scale.get_mpz_t(), ten.get_mpz_t(), static_cast<unsigned long>(std::labs(shift)));
        mpq_class q = shift >= 0 ? mpq_class(num * scale) : mpq_class(num, scale);
        q.canonicalize();
        return neg ? mpq_class(-q) : q;
    }
    try {
        mpq_class q(t, 10);
        q.canonicalize();
        return q;
    } catch (const std::exception&) {
        fail(ErrorKind::InvalidArgument, "bad rational '" + text + "'");
    }
}

}  // namespace operlab
