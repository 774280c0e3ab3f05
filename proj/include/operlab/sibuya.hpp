#pragma once

#include <vector>

#include "operlab/cover.hpp"
#include "operlab/frobenius.hpp"
#include "operlab/oper.hpp"

namespace operlab {

// Leading behaviour at x = ∞ written as V_c = Λ x^{2b} (1 − μ x^{−δ}); the truncated action F
// keeps the terms of Λ^{1/2} x^b √(1 − μ x^{−δ}) that are not integrable at infinity, so that
// F' − √V = O(x^{−1−ε}). The Sibuya solution is normalized by ψ ~ x^{−b/2} e^{−F}.
//   L^G, L0: Λ = λ², 2b = k+1, μ = 1, δ = 1 (F = λR);  BLZ: Λ = 1, 2b = −1, μ = λ̄, δ = 1−k̄.
struct ActionNormalizer {
    cplx sqrt_lam = 1.0;  // Λ^{1/2} on the tracked branch
    double sqrt_lam_arg = 0.0;  // its continuous argument
    double b = 0.0;
    double delta = 1.0;
    cplx mu = 1.0;
    std::vector<double> c;  // Taylor coefficients of √(1−u)
    int jmax = 0;           // last retained term
    bool log_term = false;  // the term j = jmax integrates to a logarithm
    cplx const_absorbed = 0.0, inv_absorbed = 0.0;  // parts of V moved into V_c

    cplx action(const CoverPoint& x) const;
    cplx action_derivative(const CoverPoint& x) const;
    // √V_c on the branch continuous with Λ^{1/2} x^b.
    cplx leading_sqrt(const CoverPoint& x) const;
    // ∫_A^∞ (√V_c − F') dx along the ray through A.
    cplx tail_integral(const CoverPoint& A) const;
    // Argument of the ray on which F is real and increasing.
    double ray_arg() const;
};

ActionNormalizer make_normalizer(const SchroedingerSpec& spec, const CoverPoint& lambda);

// R(x) of the L^G normalization: the λ = 1 truncated action with a = (k+3)/2.
cplx truncated_action(double k, const CoverPoint& x);

struct AnchorConfig {
    double anchor = 0.0;      // anchor modulus; 0 selects it from the accuracy targets below
    double match = 0.0;       // match modulus; 0 selects 1.5·max(1, max|pole|, turning-point scale)
    double min_action = 300.0;  // |F| at the anchor, which controls the WKB truncation error
    int wkb_order = 6;        // corrections y_2 … y_order in the anchor data
    IntegrationOptions integration{1e-13, 1e-13, 4000000, 1e-14};
    bool verify_anchor = false;  // recompute with the anchor doubled
    double anchor_tol = 1e-9;
};

// Default match point: modulus from cfg on the decay ray of ψ⁽⁰⁾ at this λ.
CoverPoint default_match_point(const SchroedingerSpec& spec, const CoverPoint& lambda, const AnchorConfig& cfg = {});

// Anchor data (ψ, ψ') of the subdominant solution at the point A·e^{i·ray}.
SolutionSample sibuya_anchor(const SchroedingerSpec& spec, const CoverPoint& lambda, double A, int wkb_order = 6);

// ψ⁽⁰⁾(x_match, λ), integrated inward from the anchor.
SolutionSample psi0_eval(const SchroedingerSpec& spec, const CoverPoint& lambda, const CoverPoint& x_match,
                         const AnchorConfig& cfg = {});

// ψ⁽ʲ⁾(x, λ) = ψ⁽⁰⁾(x, e^{−jπi} λ).
SolutionSample psi_rotated(const SchroedingerSpec& spec, const CoverPoint& lambda, int j, const CoverPoint& x_match,
                           const AnchorConfig& cfg = {});

// σ₀ = Wr(ψ⁽⁻¹⁾, ψ⁽¹⁾) / Wr(ψ⁽⁻¹⁾, ψ⁽⁰⁾).
cplx stokes_sigma0(const SchroedingerSpec& spec, const CoverPoint& lambda, const CoverPoint& x_match,
                   const AnchorConfig& cfg = {});

}  // namespace operlab
