#pragma once

#include <gmpxx.h>

#include <complex>
#include <string>
#include <utility>
#include <vector>

namespace operlab {

// Weakly decreasing positive parts. Zero parts are stripped on construction.
class Partition {
public:
    Partition() = default;
    explicit Partition(std::vector<int> parts);

    // Accepts "", "0", "2", "2,1", "(2,1)" or "2 1".
    static Partition parse(const std::string& text);

    const std::vector<int>& parts() const { return parts_; }
    int size() const { return static_cast<int>(parts_.size()); }
    int weight() const;
    bool empty() const { return parts_.empty(); }
    int part(int i) const { return i < size() ? parts_[i] : 0; }  // 0-based, zero beyond
    Partition transpose() const;
    std::string to_string() const;

    bool operator==(const Partition& o) const { return parts_ == o.parts_; }

private:
    std::vector<int> parts_;
};

std::vector<Partition> partitions_of(int n);
long long partitions_count(int n);

// Univariate polynomial with exact rational coefficients, ascending order.
class RatPoly {
public:
    RatPoly() = default;
    explicit RatPoly(std::vector<mpq_class> coeffs);
    RatPoly(const mpq_class& constant);
    RatPoly(long constant) : RatPoly(mpq_class(constant)) {}

    static RatPoly x();
    static RatPoly monomial(const mpq_class& c, int degree);
    // Product of (x - r) over the given rational roots.
    static RatPoly from_roots(const std::vector<mpq_class>& roots);

    int degree() const { return static_cast<int>(c_.size()) - 1; }  // -1 for zero
    bool is_zero() const { return c_.empty(); }
    mpq_class coeff(int i) const;
    const std::vector<mpq_class>& coeffs() const { return c_; }
    mpq_class leading() const;

    RatPoly derivative() const;
    RatPoly monic() const;
    // p(a x)
    RatPoly scale_arg(const mpq_class& a) const;
    mpq_class operator()(const mpq_class& x) const;
    std::complex<double> operator()(std::complex<double> x) const;
    std::vector<std::complex<double>> to_complex() const;

    RatPoly operator+(const RatPoly& o) const;
    RatPoly operator-(const RatPoly& o) const;
    RatPoly operator-() const;
    RatPoly operator*(const RatPoly& o) const;
    RatPoly operator*(const mpq_class& s) const;
    RatPoly& operator+=(const RatPoly& o) { return *this = *this + o; }
    RatPoly& operator-=(const RatPoly& o) { return *this = *this - o; }
    RatPoly& operator*=(const RatPoly& o) { return *this = *this * o; }
    bool operator==(const RatPoly& o) const { return c_ == o.c_; }
    bool operator!=(const RatPoly& o) const { return !(*this == o); }

    // Euclidean division: *this = q*d + r with deg r < deg d.
    std::pair<RatPoly, RatPoly> divmod(const RatPoly& d) const;

    std::string to_string(const std::string& var = "x") const;

private:
    void trim();
    std::vector<mpq_class> c_;
};

RatPoly gcd(RatPoly a, RatPoly b);

RatPoly hermite(int n);
// Determinant of the matrix (d^j/dx^j p_i)_{i,j}, by fraction-free elimination over Q[x].
RatPoly poly_wronskian(const std::vector<RatPoly>& polys);
RatPoly v_mu(const Partition& mu);
// Leading coefficient of v_mu in closed form.
mpz_class b_mu(const Partition& mu);
std::vector<int> n_mu_sequence(const Partition& mu, int count);

// (W_r, U_r) normalized with leading coefficients 2^{r^2} and 2^{r(r-1)}.
std::pair<RatPoly, RatPoly> wu_recursion(int r, int bound = 12);

// Data for a single reproduction step of a pair (y0, y1) in one direction.
//   Periodic:      Wr(y, yt) = rhs * other^2          (integration constant fixed
//                                                      so that coeff of x^{deg y} in yt is 0)
//   Exponential:   y(c yt + yt') - y' yt = rhs * other^2   [Wr(y, e^{cx} yt) / e^{cx}]
//   Trigonometric: y(b yt + x yt') - x y' yt = rhs * other^2
//                                                     [Wr(y, x^b yt) / x^{b-1}]
struct ReproductionData {
    enum class Kind { Periodic, Exponential, Trigonometric };
    Kind kind = Kind::Periodic;
    mpq_class param = 0;  // c (exponential) or b (trigonometric)
    RatPoly rhs = RatPoly(1);
};

// Returns the monic yt of the given direction: direction 0 reproduces y0
// (other = y1), direction 1 reproduces y1 (other = y0).
RatPoly reproduce(const RatPoly& y0, const RatPoly& y1, const ReproductionData& data, int direction);

// Unnormalized solution of the exponential relation y(c f + f') - y' f = rhs.
RatPoly solve_exp_relation(const RatPoly& y, const mpq_class& c, const RatPoly& rhs);

struct RootList {
    std::vector<std::complex<double>> roots;
    std::vector<int> multiplicity;
    double tol = 0.0;
    int total() const;
};

// Square-free parts are found exactly, then each is solved numerically.
RootList poly_roots(const RatPoly& p, double tol = 1e-10);
// Numeric path for complex coefficients (ascending); multiplicities by clustering.
RootList poly_roots(const std::vector<std::complex<double>>& coeffs, double tol = 1e-10);

// Simple roots as a flat list (multiple roots repeated).
std::vector<std::complex<double>> flat_roots(const RootList& roots);

mpq_class parse_rational(const std::string& text);

}  // namespace operlab
