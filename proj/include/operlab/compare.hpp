#pragma once

#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "operlab/spectral.hpp"

namespace operlab {

struct BlzSolveOptions {
    double tol = 1e-13;  // sup-norm of the residual relative to its scale (1 + |l̄(l̄+1)|/k̄)
    int max_iter = 60;
    double start_p = 40.0;  // continuation starts at max(start_p, l̄ + ½) ...
    double ratio = 0.85;    // ... and moves down geometrically in l̄ + ½
};

// Solution of the BLZ system with d apparent singularities, continued from the large-l̄ asymptotics
// z_j = (k̄/(1−k̄)) p² + 2^{1/4} k̄^{3/4}/(1−k̄) · v_j p^{3/2}, p = l̄ + ½, v_j the roots of V_μ
// (DegeneratePartition when V_μ has a multiple root).
std::vector<cplx> solve_blz_system(int d, double kbar, cplx lbar, const Partition& mu, const BlzSolveOptions& opts = {});
// The asymptotic seed alone.
std::vector<cplx> blz_seed(double kbar, cplx lbar, const Partition& mu);

// Zeros of Q̄₊. The search runs in the variable t = (k+3) λ̄^{(k+3)/2}, k+3 = 1/(1−k̄), in which
// the zeros of the d = 0 operator coincide with the λ* zeros of the matching L^G.
struct BlzZero {
    double lambda_bar = 0.0;
    double t = 0.0;
    double imag_t = 0.0;
    bool off_axis = false;
    double bethe_residual = -1.0;  // |γ̄^{−2} Q̄₊(λ̄q̄^{−2})/Q̄₊(λ̄q̄²) + 1|, q̄ = e^{iπk̄}, γ̄ = e^{2πi(l̄+½)}
    double counting = std::numeric_limits<double>::quiet_NaN();
};

// Wr(ψ̄⁽⁰⁾, χ̄₊) at λ̄ (normalization-free up to a constant).
ScaledValue qbar_plus(const SchroedingerSpec& blz, const CoverPoint& lambda_bar, const SpectralConfig& cfg = {});
std::vector<BlzZero> qbar_plus_zeros(const SchroedingerSpec& blz, const ZeroSearch& search, const SpectralConfig& cfg = {},
                                     bool check_counting = true, bool with_bethe = true);
// z̄(λ̄) = −2(l̄+½) + (1/2πi) log[Q̄₊(λ̄q̄^{−2})/Q̄₊(λ̄q̄²)] on an increasing grid of λ̄.
std::vector<double> blz_counting_function(const SchroedingerSpec& blz, const std::vector<double>& lambda_bars,
                                          const SpectralConfig& cfg = {});

struct ComparisonMeta {
    double k = 0.0;
    double l = 0.0;
    int r = 0;
    std::string mu;
    int d0 = 0;
    int d = 0;
    bool conjecture_probe = false;  // anything but d0 = d = 0
};

struct ComparisonReport {
    ComparisonMeta meta;
    std::vector<double> gaudin;      // λ_j, sorted
    std::vector<double> blz_scaled;  // (k+3)^{2/(k+3)} λ̄_j, sorted
    int shift = 0;                   // blz index j pairs with gaudin index j + shift
    std::vector<double> rel_diff;    // over the aligned window
    double max_rel_diff = 0.0;
    double tol = 0.0;
    bool pass = false;
};

// Pairs λ_j with scale·λ̄_j after sorting and nearest-neighbour alignment of the lowest zeros.
// LengthMismatch when the lists differ in length.
ComparisonReport compare_zero_sets(std::vector<double> gaudin, std::vector<double> blz, double scale, double tol);

struct ComparisonSetup {
    double k = -1.2;
    double l = 1.0;       // used when ell = 0
    long double ell = 0;  // > 0: l = ell² and the Gaudin roots are continued from the μ seeds
    int r = 0;
    Partition mu;
    int count = 12;  // zeros compared
    double tol = 1e-6;
    SpectralConfig cfg;
    bool concurrent = true;  // run the two pipelines on separate threads
};

struct ComparisonRun {
    ComparisonReport report;
    std::vector<QZero> gaudin_zeros;
    std::vector<BlzZero> blz_zeros;
    std::vector<cplx> zbar;
    ZeroSearch search;  // in λ*
};

ComparisonRun run_comparison(const ComparisonSetup& setup);

nlohmann::json to_json(const ComparisonReport& report);
// Columns j, gaudin, blz_scaled, rel_diff over the aligned window.
void write_pairs_csv(std::ostream& out, const ComparisonReport& report);

}  // namespace operlab
