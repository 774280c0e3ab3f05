#pragma once

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "operlab/algebra.hpp"

namespace operlab {

using cldouble = std::complex<long double>;

enum class Precision { Double, Extended };

Precision parse_precision(const std::string& text);
const char* to_string(Precision p);

// One evaluation point of the periodic/exponential Gaudin model.
struct EvaluationPoint {
    cldouble z;
    cldouble m;  // weight entering the s-equations
    cldouble l;  // weight entering the t-equations
};

struct GaudinProblem {
    std::vector<EvaluationPoint> points;
    cldouble n0 = 0, n1 = 0;
    int d0 = 0, d1 = 0;
    // BLZ-case data (points = {0: (m, l), 1: (1/2, 0)}, P = x^k (x-1)).
    bool blz = false;
    long double k = 0;
    cldouble l = 0;

    static GaudinProblem blz_case(long double k, cldouble l, int d0, int d1);
    int r() const { return d0 - d1; }
    cldouble m() const { return k / 2.0L - l; }
};

struct BetheRoots {
    GaudinProblem problem;
    std::vector<cldouble> s, t;
    double residual_norm = 0.0;
    int iterations = 0;
};

struct NewtonOptions {
    double tol = 1e-12;
    int max_iter = 60;
    int max_halvings = 30;
    double collision_threshold = 1e-8;
    Precision precision = Precision::Extended;
};

std::vector<cldouble> bae_residual(const BetheRoots& roots);
Eigen::Matrix<cldouble, Eigen::Dynamic, Eigen::Dynamic> bae_jacobian(const BetheRoots& roots);
double sup_norm(const std::vector<cldouble>& v);

// Sum rule for the BLZ case: sum s/(s-1) - (-d0(k+2) + r(r+1) + 2lr).
cldouble sum_rule(const BetheRoots& roots);

// Exponential BAE with twist (-1, 1) for the large-l limit (w, u variables).
std::vector<cldouble> exp_bae_residual(const std::vector<cldouble>& w, const std::vector<cldouble>& u);

// Seeds from the large-l asymptotics with l = ell^2.
BetheRoots seed_from_partition(const Partition& mu, int r, long double ell, long double k);

BetheRoots newton_solve(const GaudinProblem& problem, const BetheRoots& seed, const NewtonOptions& opts = {});

struct ContinuationStage {
    long double ell;
    double residual;
    int iterations;
};

BetheRoots continue_in_ell(const Partition& mu, int r, const std::vector<long double>& ell_path, long double k,
                           const NewtonOptions& opts = {}, std::vector<ContinuationStage>* stages = nullptr);

// Geometric path from ell_start down to ell_target with the given ratio.
std::vector<long double> geometric_ell_path(long double ell_start, long double ell_target, long double ratio = 0.8L);

// Sorts s and t lexicographically by (Re, Im) for permutation-independent comparison.
BetheRoots canonical_order(BetheRoots roots);
// Sup distance between two canonically ordered root sets of equal shape.
double root_distance(const BetheRoots& a, const BetheRoots& b);

}  // namespace operlab
