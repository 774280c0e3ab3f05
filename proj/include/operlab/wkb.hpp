#pragma once

#include <ostream>
#include <vector>

#include "operlab/algebra.hpp"

namespace operlab {

// Effective potential U(x) = λ² x^k (x−1) + ℓ̂²/x² on x > 0, ℓ̂ = l + ½.
enum class TurningRegime { NoTurning, Double, TwoTurning };

struct TurningData {
    double x_minus = 0.0, x_plus = 0.0;  // equal to x_* in the double regime, 0 without turning points
    TurningRegime regime = TurningRegime::NoTurning;
};

// x_* = (k+2)/(k+3), the minimum of x²U.
double x_star(double k);
// u_* = (k+3)^{(k+3)/2} / (k+2)^{(k+2)/2}: turning points exist for λ > u_* ℓ̂.
double u_star(double k);
// Slope of J₂ at u_*: (8(k+2)^{k+1}/(k+3)^{k+4})^{1/2}.
double j2_slope(double k);
// J₁(0) = Γ((k+4)/2) / (√π Γ((k+5)/2)) · 2/(k+2).
double j1_zero(double k);

TurningData turning_points(double lambda, double ell_hat, double k);

// I(λ, ℓ̂) = (2/π) ∫_{x₋}^{x₊} √(−U) dx, zero without turning points.
double wkb_integral(double lambda, double ell_hat, double k, double tol = 1e-13);

// J₁(u) = I(1, u), J₂(u) = I(u, 1).
double wkb_j1(double u, double k);
double wkb_j2(double u, double k);

// Unique λ > u_*ℓ̂ with I(λ, ℓ̂) = 2j + 1 (the prediction for (λ_j)^{(k+3)/2}).
double predicted_lambda_j(int j, double ell_hat, double k);

// Large-j line C (2j + 1 + offset): the offset is 2ℓ̂/(k+2) for the action-integral expansion
// and ℓ̂/(k+2) for the alternative form; both are exposed so the measured zeros can decide.
enum class LargeJOffset { TwoEllOverKPlus2, EllOverKPlus2 };
double large_j_line(int j, double ell_hat, double k, LargeJOffset offset = LargeJOffset::TwoEllOverKPlus2);
double large_j_prefactor(double k);

// Large-ℓ̂ line u_* ℓ̂ + (2n + 1)/j2_slope(k).
double large_ell_line(int n, double ell_hat, double k);
// Large-ℓ̂ prediction with n = n_j^μ.
double mu_zero_prediction(int j, double ell_hat, double k, const Partition& mu);

struct PredictionRow {
    int j = 0;
    double predicted = 0.0;
    double computed = 0.0;
};
// Columns j, predicted, computed, difference.
void write_prediction_csv(std::ostream& out, const std::vector<PredictionRow>& rows);

}  // namespace operlab
