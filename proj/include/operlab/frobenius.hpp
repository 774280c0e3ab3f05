#pragma once

#include <vector>

#include "operlab/cover.hpp"
#include "operlab/oper.hpp"

namespace operlab {

// ψ = x^α Σ_j Σ_h g[j][h] ξ^h x^j with ξ = xi_coeff · λ^lambda_power · x^K.
struct FrobeniusSeries {
    int sign = +1;
    cplx alpha = 0.0;
    cplx l = 0.0;
    double K = 0.0;
    cplx xi_coeff = 1.0;
    int lambda_power = 2;
    std::vector<std::vector<cplx>> g;
    int J = 0, H = 0;
    double radius = 0.0;  // distance to the nearest pole other than 0
};

// A solution value and x-derivative; the true values are exp(log_scale) * (value, derivative).
struct SolutionSample {
    cplx value = 0.0;
    cplx derivative = 0.0;
    CoverPoint x;
    CoverPoint lambda;
    double log_scale = 0.0;

    cplx true_value() const;
    cplx true_derivative() const;
    // Rescale so that max(|value|, |derivative|) = 1.
    SolutionSample normalized() const;
};

// Wronskian ψ₁ψ₂' − ψ₁'ψ₂ of two samples taken at the same point (mantissa and log-scale).
struct ScaledValue {
    cplx mantissa = 0.0;
    double log_scale = 0.0;
    cplx value() const;
};
ScaledValue wronskian_scaled(const SolutionSample& a, const SolutionSample& b);
cplx wronskian(const SolutionSample& a, const SolutionSample& b);

FrobeniusSeries frobenius_build(const SchroedingerSpec& spec, int sign, int J = 60, int H = 40);

// Evaluate χ± at x (|x| < 0.8 radius); throws TruncationInsufficient when the retained
// orders do not reach tail_tol relative to the largest term.
SolutionSample chi_eval(const FrobeniusSeries& series, const CoverPoint& x, const CoverPoint& lambda,
                        double tail_tol = 1e-15);

// Builds the series with growing truncations until chi_eval succeeds.
SolutionSample chi_eval_auto(const SchroedingerSpec& spec, int sign, const CoverPoint& x, const CoverPoint& lambda,
                             double tail_tol = 1e-15);

struct IntegrationOptions {
    double rel_tol = 1e-13;
    double abs_tol = 1e-13;
    long max_steps = 2000000;
    double min_step = 1e-13;  // on the unit parameter of each segment
};

// Integrates ψ'' = V(x, λ) ψ along the polyline start.x → path[0] → path[1] → …;
// the argument of x is tracked continuously.
SolutionSample continue_solution(const SchroedingerSpec& spec, const SolutionSample& start,
                                 const std::vector<cplx>& path, const IntegrationOptions& opts = {});

}  // namespace operlab
