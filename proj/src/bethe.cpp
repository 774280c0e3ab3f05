#include "operlab/bethe.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "operlab/errors.hpp"

namespace operlab {

Precision parse_precision(const std::string& text) {
    if (text == "double") return Precision::Double;
    if (text == "extended") return Precision::Extended;
    fail(ErrorKind::InvalidArgument, "precision must be 'double' or 'extended'");
}

const char* to_string(Precision p) { return p == Precision::Double ? "double" : "extended"; }

GaudinProblem GaudinProblem::blz_case(long double k, cldouble l, int d0, int d1) {
    if (d0 < 0 || d1 < 0) fail(ErrorKind::InvalidArgument, "degrees must be non-negative");
    GaudinProblem p;
    p.blz = true;
    p.k = k;
    p.l = l;
    p.d0 = d0;
    p.d1 = d1;
    p.points = {{0.0L, p.m(), l}, {1.0L, 0.5L, 0.0L}};
    return p;
}

namespace {

std::string fmt_sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

template <typename T>
using C = std::complex<T>;

template <typename T>
C<T> cast(const cldouble& v) {
    return {static_cast<T>(v.real()), static_cast<T>(v.imag())};
}

template <typename T>
struct Unpacked {
    std::vector<C<T>> s, t, z, m, l;
    C<T> n0, n1;
};

template <typename T>
Unpacked<T> unpack(const GaudinProblem& p, const std::vector<cldouble>& s, const std::vector<cldouble>& t) {
    Unpacked<T> u;
    for (auto v : s) u.s.push_back(cast<T>(v));
    for (auto v : t) u.t.push_back(cast<T>(v));
    for (const auto& e : p.points) {
        u.z.push_back(cast<T>(e.z));
        u.m.push_back(cast<T>(e.m));
        u.l.push_back(cast<T>(e.l));
    }
    u.n0 = cast<T>(p.n0);
    u.n1 = cast<T>(p.n1);
    return u;
}

template <typename T>
void check_denominator(const C<T>& d, const char* what) {
    if (std::abs(d) < static_cast<T>(1e-300L) || !std::isfinite(static_cast<double>(std::abs(d))))
        fail(ErrorKind::DegenerateConfiguration, std::string("coinciding variables in ") + what);
}

template <typename T>
std::vector<C<T>> residual_t(const Unpacked<T>& u) {
    const size_t d0 = u.s.size(), d1 = u.t.size();
    std::vector<C<T>> r(d0 + d1);
    for (size_t i = 0; i < d0; ++i) {
        C<T> acc = u.n0;
        for (size_t j = 0; j < u.z.size(); ++j) {
            if (u.m[j] == C<T>(0)) continue;
            C<T> d = u.s[i] - u.z[j];
            check_denominator(d, "s - z");
            acc += u.m[j] / d;
        }
        for (size_t j = 0; j < d1; ++j) {
            C<T> d = u.s[i] - u.t[j];
            check_denominator(d, "s - t");
            acc += T(1) / d;
        }
        for (size_t j = 0; j < d0; ++j) {
            if (j == i) continue;
            C<T> d = u.s[i] - u.s[j];
            check_denominator(d, "s - s");
            acc -= T(1) / d;
        }
        r[i] = acc;
    }
    for (size_t i = 0; i < d1; ++i) {
        C<T> acc = u.n1;
        for (size_t j = 0; j < u.z.size(); ++j) {
            if (u.l[j] == C<T>(0)) continue;
            C<T> d = u.t[i] - u.z[j];
            check_denominator(d, "t - z");
            acc += u.l[j] / d;
        }
        for (size_t j = 0; j < d0; ++j) acc += T(1) / (u.t[i] - u.s[j]);
        for (size_t j = 0; j < d1; ++j) {
            if (j == i) continue;
            C<T> d = u.t[i] - u.t[j];
            check_denominator(d, "t - t");
            acc -= T(1) / d;
        }
        r[d0 + i] = acc;
    }
    return r;
}

template <typename T>
Eigen::Matrix<C<T>, Eigen::Dynamic, Eigen::Dynamic> jacobian_t(const Unpacked<T>& u) {
    const int d0 = static_cast<int>(u.s.size()), d1 = static_cast<int>(u.t.size());
    Eigen::Matrix<C<T>, Eigen::Dynamic, Eigen::Dynamic> J =
        Eigen::Matrix<C<T>, Eigen::Dynamic, Eigen::Dynamic>::Zero(d0 + d1, d0 + d1);
    for (int i = 0; i < d0; ++i) {
        C<T> diag = 0;
        for (size_t j = 0; j < u.z.size(); ++j) {
            if (u.m[j] == C<T>(0)) continue;
            C<T> d = u.s[i] - u.z[j];
            diag -= u.m[j] / (d * d);
        }
        for (int j = 0; j < d1; ++j) {
            C<T> d = u.s[i] - u.t[j];
            C<T> q = T(1) / (d * d);
            diag -= q;
            J(i, d0 + j) = q;
        }
        for (int j = 0; j < d0; ++j) {
            if (j == i) continue;
            C<T> d = u.s[i] - u.s[j];
            C<T> q = T(1) / (d * d);
            diag += q;
            J(i, j) = -q;
        }
        J(i, i) = diag;
    }
    for (int i = 0; i < d1; ++i) {
        C<T> diag = 0;
        for (size_t j = 0; j < u.z.size(); ++j) {
            if (u.l[j] == C<T>(0)) continue;
            C<T> d = u.t[i] - u.z[j];
            diag -= u.l[j] / (d * d);
        }
        for (int j = 0; j < d0; ++j) {
            C<T> d = u.t[i] - u.s[j];
            C<T> q = T(1) / (d * d);
            diag -= q;
            J(d0 + i, j) = q;
        }
        for (int j = 0; j < d1; ++j) {
            if (j == i) continue;
            C<T> d = u.t[i] - u.t[j];
            C<T> q = T(1) / (d * d);
            diag += q;
            J(d0 + i, d0 + j) = -q;
        }
        J(d0 + i, d0 + i) = diag;
    }
    return J;
}

template <typename T>
T sup(const std::vector<C<T>>& v) {
    T m = 0;
    for (const auto& x : v) m = std::max(m, std::abs(x));
    return m;
}

void check_shape(const BetheRoots& r) {
    if (static_cast<int>(r.s.size()) != r.problem.d0 || static_cast<int>(r.t.size()) != r.problem.d1)
        fail(ErrorKind::InvalidArgument, "root vectors do not match the problem degrees");
}

// Minimum pairwise separation among all roots and evaluation points, relative to scale.
void check_collisions(const GaudinProblem& p, const std::vector<cldouble>& s, const std::vector<cldouble>& t,
                      double threshold) {
    std::vector<cldouble> all(s);
    all.insert(all.end(), t.begin(), t.end());
    long double scale = 1;
    for (auto v : all) scale = std::max(scale, std::abs(v));
    auto close = [&](cldouble a, cldouble b) { return std::abs(a - b) < threshold * scale; };
    for (size_t i = 0; i < s.size(); ++i) {
        for (size_t j = i + 1; j < s.size(); ++j)
            if (close(s[i], s[j])) fail(ErrorKind::CollisionDetected, "two s roots collided");
        for (const auto& e : p.points)
            if (e.m != cldouble(0) && close(s[i], e.z)) fail(ErrorKind::CollisionDetected, "s root hit a marked point");
    }
    for (size_t i = 0; i < t.size(); ++i) {
        for (size_t j = i + 1; j < t.size(); ++j)
            if (close(t[i], t[j])) fail(ErrorKind::CollisionDetected, "two t roots collided");
        for (const auto& e : p.points)
            if (e.l != cldouble(0) && close(t[i], e.z)) fail(ErrorKind::CollisionDetected, "t root hit a marked point");
        for (const auto& v : s)
            if (close(t[i], v)) fail(ErrorKind::CollisionDetected, "s and t roots collided");
    }
}

template <typename T>
BetheRoots newton_t(const GaudinProblem& problem, const BetheRoots& seed, const NewtonOptions& opts) {
    BetheRoots cur = seed;
    cur.problem = problem;
    check_shape(cur);
    const int n = problem.d0 + problem.d1;
    cur.iterations = 0;
    if (n == 0) {
        cur.residual_norm = 0;
        return cur;
    }
    auto eval = [&](const std::vector<cldouble>& s, const std::vector<cldouble>& t) {
        return residual_t<T>(unpack<T>(problem, s, t));
    };
    auto res = eval(cur.s, cur.t);
    T norm = sup(res);
    for (int it = 0; it < opts.max_iter; ++it) {
        if (norm < static_cast<T>(opts.tol)) break;
        auto J = jacobian_t<T>(unpack<T>(problem, cur.s, cur.t));
        Eigen::Matrix<C<T>, Eigen::Dynamic, 1> rhs(n);
        for (int i = 0; i < n; ++i) rhs(i) = -res[i];
        Eigen::Matrix<C<T>, Eigen::Dynamic, 1> step = J.fullPivLu().solve(rhs);
        T factor = 1;
        bool accepted = false;
        for (int h = 0; h <= opts.max_halvings; ++h, factor /= 2) {
            std::vector<cldouble> s = cur.s, t = cur.t;
            for (int i = 0; i < problem.d0; ++i) s[i] += cldouble(step(i)) * static_cast<long double>(factor);
            for (int j = 0; j < problem.d1; ++j)
                t[j] += cldouble(step(problem.d0 + j)) * static_cast<long double>(factor);
            std::vector<C<T>> trial;
            try {
                trial = eval(s, t);
            } catch (const Error&) {
                continue;
            }
            T tn = sup(trial);
            if (std::isfinite(static_cast<double>(tn)) && tn < norm) {
                cur.s = s;
                cur.t = t;
                res = trial;
                norm = tn;
                accepted = true;
                break;
            }
        }
        cur.iterations = it + 1;
        check_collisions(problem, cur.s, cur.t, opts.collision_threshold);
        if (!accepted) break;
    }
    cur.residual_norm = static_cast<double>(sup(residual_t<long double>(unpack<long double>(problem, cur.s, cur.t))));
    if (!(cur.residual_norm < opts.tol))
        fail(ErrorKind::NonConvergence,
             "Newton stopped at residual " + fmt_sci(cur.residual_norm) + " after " +
                 std::to_string(cur.iterations) + " iterations");
    return cur;
}

}  // namespace

std::vector<cldouble> bae_residual(const BetheRoots& roots) {
    check_shape(roots);
    return residual_t<long double>(unpack<long double>(roots.problem, roots.s, roots.t));
}

Eigen::Matrix<cldouble, Eigen::Dynamic, Eigen::Dynamic> bae_jacobian(const BetheRoots& roots) {
    check_shape(roots);
    return jacobian_t<long double>(unpack<long double>(roots.problem, roots.s, roots.t));
}

double sup_norm(const std::vector<cldouble>& v) { return static_cast<double>(sup(v)); }

cldouble sum_rule(const BetheRoots& roots) {
    const auto& p = roots.problem;
    if (!p.blz) fail(ErrorKind::InvalidArgument, "sum rule applies to the BLZ case");
    cldouble acc = 0;
    for (auto s : roots.s) {
        if (s == cldouble(1)) fail(ErrorKind::DegenerateConfiguration, "s root at 1");
        acc += s / (s - 1.0L);
    }
    const long double r = p.r();
    return acc - (-p.d0 * (p.k + 2.0L) + r * (r + 1.0L) + 2.0L * p.l * r);
}

std::vector<cldouble> exp_bae_residual(const std::vector<cldouble>& w, const std::vector<cldouble>& u) {
    std::vector<cldouble> r;
    for (size_t i = 0; i < w.size(); ++i) {
        if (w[i] == cldouble(0)) fail(ErrorKind::DegenerateConfiguration, "w root at 0");
        cldouble acc = 1.0L / w[i] - 2.0L;
        for (auto uj : u) {
            if (w[i] == uj) fail(ErrorKind::DegenerateConfiguration, "w and u coincide");
            acc += 2.0L / (w[i] - uj);
        }
        for (size_t j = 0; j < w.size(); ++j) {
            if (j == i) continue;
            if (w[i] == w[j]) fail(ErrorKind::DegenerateConfiguration, "w roots coincide");
            acc -= 2.0L / (w[i] - w[j]);
        }
        r.push_back(acc);
    }
    for (size_t j = 0; j < u.size(); ++j) {
        cldouble acc = 2.0L;
        for (auto wi : w) acc += 2.0L / (u[j] - wi);
        for (size_t i = 0; i < u.size(); ++i) {
            if (i == j) continue;
            if (u[i] == u[j]) fail(ErrorKind::DegenerateConfiguration, "u roots coincide");
            acc -= 2.0L / (u[j] - u[i]);
        }
        r.push_back(acc);
    }
    return r;
}

namespace {

std::vector<cldouble> simple_roots_or_throw(const RatPoly& p, const std::string& what) {
    if (p.degree() < 1) return {};
    RootList rl = poly_roots(p, 1e-9);
    for (int m : rl.multiplicity)
        if (m != 1) fail(ErrorKind::DegeneratePartition, what + " has a multiple root");
    std::vector<cldouble> out;
    for (auto r : rl.roots) out.emplace_back(r.real(), r.imag());
    return out;
}

}  // namespace

BetheRoots seed_from_partition(const Partition& mu, int r, long double ell, long double k) {
    if (!(k > -2)) fail(ErrorKind::InvalidArgument, "k must exceed -2");
    if (!(ell > 0)) fail(ErrorKind::InvalidArgument, "ell must be positive");
    const int d0 = mu.weight() + r * r;
    const int d1 = d0 - r;
    BetheRoots seed;
    seed.problem = GaudinProblem::blz_case(k, ell * ell, d0, d1);
    auto [W, U] = wu_recursion(r);
    auto w = simple_roots_or_throw(W, "W_r");
    auto u = simple_roots_or_throw(U, "U_r");
    auto v = simple_roots_or_throw(v_mu(mu), "V_mu");
    const long double inv2 = 1.0L / (ell * ell);
    const long double xstar = (k + 2) / (k + 3);
    const long double c = std::pow(2.0L, 0.25L) * std::pow(k + 2, -0.25L) * std::pow(k + 3, -0.25L);
    for (auto wi : w) seed.s.push_back(1.0L + wi * inv2);
    for (auto vi : v) seed.s.push_back(xstar * (1.0L + c * vi / ell));
    for (auto ui : u) seed.t.push_back(1.0L + ui * inv2);
    for (size_t i = 0; i < v.size(); ++i) seed.t.push_back(seed.s[w.size() + i] * (1.0L - inv2));
    return seed;
}

BetheRoots newton_solve(const GaudinProblem& problem, const BetheRoots& seed, const NewtonOptions& opts) {
    if (opts.precision == Precision::Double) return newton_t<double>(problem, seed, opts);
    return newton_t<long double>(problem, seed, opts);
}

std::vector<long double> geometric_ell_path(long double ell_start, long double ell_target, long double ratio) {
    if (!(ratio > 0 && ratio < 1)) fail(ErrorKind::InvalidArgument, "ratio must lie in (0,1)");
    if (!(ell_start >= ell_target)) fail(ErrorKind::InvalidArgument, "path must decrease");
    std::vector<long double> path{ell_start};
    while (path.back() * ratio > ell_target * (1 + 1e-12L)) path.push_back(path.back() * ratio);
    if (path.back() != ell_target) path.push_back(ell_target);
    return path;
}

BetheRoots continue_in_ell(const Partition& mu, int r, const std::vector<long double>& ell_path, long double k,
                           const NewtonOptions& opts, std::vector<ContinuationStage>* stages) {
    if (ell_path.empty()) fail(ErrorKind::InvalidArgument, "empty ell path");
    for (size_t i = 1; i < ell_path.size(); ++i)
        if (!(ell_path[i] < ell_path[i - 1])) fail(ErrorKind::InvalidArgument, "ell path must be decreasing");
    BetheRoots prev_seed = seed_from_partition(mu, r, ell_path.front(), k);
    BetheRoots current;
    for (size_t i = 0; i < ell_path.size(); ++i) {
        BetheRoots seed = seed_from_partition(mu, r, ell_path[i], k);
        BetheRoots guess = seed;
        if (i > 0) {
            // Predictor: previous solution moved by the displacement of the asymptotic seeds.
            for (size_t a = 0; a < guess.s.size(); ++a) guess.s[a] = current.s[a] + (seed.s[a] - prev_seed.s[a]);
            for (size_t a = 0; a < guess.t.size(); ++a) guess.t[a] = current.t[a] + (seed.t[a] - prev_seed.t[a]);
        }
        try {
            current = newton_solve(seed.problem, guess, opts);
        } catch (const Error& e) {
            fail(e.kind(), e.message() + " (at ell = " + fmt_sci(static_cast<double>(ell_path[i])) + ")");
        }
        if (stages) stages->push_back({ell_path[i], current.residual_norm, current.iterations});
        prev_seed = seed;
    }
    return current;
}

BetheRoots canonical_order(BetheRoots roots) {
    auto less = [](const cldouble& a, const cldouble& b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    };
    std::sort(roots.s.begin(), roots.s.end(), less);
    std::sort(roots.t.begin(), roots.t.end(), less);
    return roots;
}

namespace {

// Bottleneck distance between two root lists: exact over permutations for small sizes, greedy otherwise.
long double matched_distance(const std::vector<cldouble>& a, const std::vector<cldouble>& b) {
    const size_t n = a.size();
    if (n == 0) return 0;
    if (n <= 8) {
        std::vector<size_t> perm(n);
        for (size_t i = 0; i < n; ++i) perm[i] = i;
        long double best = std::numeric_limits<long double>::infinity();
        do {
            long double d = 0;
            for (size_t i = 0; i < n && d < best; ++i) d = std::max(d, std::abs(a[i] - b[perm[i]]));
            best = std::min(best, d);
        } while (std::next_permutation(perm.begin(), perm.end()));
        return best;
    }
    std::vector<bool> used(n, false);
    long double d = 0;
    for (size_t i = 0; i < n; ++i) {
        size_t arg = n;
        long double m = std::numeric_limits<long double>::infinity();
        for (size_t j = 0; j < n; ++j)
            if (!used[j] && std::abs(a[i] - b[j]) < m) {
                m = std::abs(a[i] - b[j]);
                arg = j;
            }
        used[arg] = true;
        d = std::max(d, m);
    }
    return d;
}

}  // namespace

double root_distance(const BetheRoots& a, const BetheRoots& b) {
    if (a.s.size() != b.s.size() || a.t.size() != b.t.size())
        fail(ErrorKind::LengthMismatch, "root sets have different shapes");
    return static_cast<double>(std::max(matched_distance(a.s, b.s), matched_distance(a.t, b.t)));
}

}  // namespace operlab
