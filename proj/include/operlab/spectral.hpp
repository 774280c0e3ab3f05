#pragma once

#include <functional>
#include <limits>
#include <ostream>
#include <vector>

#include "json.hpp"
#include "operlab/sibuya.hpp"

namespace operlab {

struct SpectralConfig {
    AnchorConfig anchor;  // Sibuya solution settings, including the match modulus
    IntegrationOptions integration{1e-13, 1e-13, 4000000, 1e-14};  // continuation of χ±
    double series_xi = 4.0;  // bound on |ξ| where the Frobenius series hands over to the integrator
    double tail_tol = 1e-15;
};

// λ* = λ^{(k+3)/2} on the tracked sheet.
CoverPoint star_of(const SchroedingerSpec& spec, const CoverPoint& lambda);

// χ± continued from the series disc to x, avoiding the apparent poles.
SolutionSample chi_at(const SchroedingerSpec& spec, int sign, const CoverPoint& x, const CoverPoint& lambda,
                      const SpectralConfig& cfg = {});

struct WronskianPair {
    ScaledValue plus, minus;  // Wr(ψ⁽⁰⁾, χ±)
};

// Wr(ψ⁽⁰⁾, χ±)(x_match, λ) for any operator kind; x_match defaults to the Sibuya match point.
WronskianPair psi_chi_wronskians(const SchroedingerSpec& spec, const CoverPoint& lambda, const SpectralConfig& cfg = {},
                                 const CoverPoint* x_match = nullptr);

struct QPair {
    cplx plus = 0.0, minus = 0.0;
};

// Q*±(λ*) = ½ e^{−iπ/4} (l+½)^{−1/2} λ*^{−1/2 ± (2l+1)/(k+3)} Wr(ψ⁽⁰⁾, χ±)(x, λ*).
QPair qstar_pair(const SchroedingerSpec& spec, const CoverPoint& lambda_star, const SpectralConfig& cfg = {},
                 const CoverPoint* x_match = nullptr);
cplx qstar(const SchroedingerSpec& spec, const CoverPoint& lambda_star, int sign, const SpectralConfig& cfg = {});
// Q*± alone (only the matching χ is built), with the magnitude kept as a separate logarithm.
ScaledValue qstar_scaled(const SchroedingerSpec& spec, const CoverPoint& lambda_star, int sign,
                         const SpectralConfig& cfg = {});

// Q±(λ) = Q*±(λ^{(k+3)/2}).
QPair q_pair(const SchroedingerSpec& spec, const CoverPoint& lambda, const SpectralConfig& cfg = {});
cplx q_pm(const SchroedingerSpec& spec, const CoverPoint& lambda, int sign, const SpectralConfig& cfg = {});

// q = e^{iπ(k+2)/(k+3)} and γ = e^{iπ(2l+1)/(k+3)}; multiplication by q^n is a rotation on the cover.
cplx q_of(const SchroedingerSpec& spec);
cplx gamma_of(const SchroedingerSpec& spec);
CoverPoint q_shift(const SchroedingerSpec& spec, const CoverPoint& lambda, int n);

// T₁(λ) = e^{iπ/2} σ₀(λ^{(k+3)/2}).
cplx t1(const SchroedingerSpec& spec, const CoverPoint& lambda, const SpectralConfig& cfg = {});
// T_j by the fusion recursion seeded with T₀ = 1 and T₁.
cplx t_j(const SchroedingerSpec& spec, const CoverPoint& lambda, int j, const SpectralConfig& cfg = {});
// T_j(λ) = γ^{j+1} Q₊(q^{j+1}λ) Q₋(q^{−j−1}λ) − γ^{−j−1} Q₊(q^{−j−1}λ) Q₋(q^{j+1}λ).
cplx t_from_q(const SchroedingerSpec& spec, const CoverPoint& lambda, int j, const SpectralConfig& cfg = {});

// Absolute deviations of the functional identities from their right sides.
double qq_residual(const SchroedingerSpec& spec, const CoverPoint& lambda, const SpectralConfig& cfg = {});
double tq_residual(const SchroedingerSpec& spec, const CoverPoint& lambda, const SpectralConfig& cfg = {});
// T₁(λ)T_j(q^{j+1}λ) − T_{j−1}(q^{j+2}λ) − T_{j+1}(q^jλ) for j = 1 … jmax, with T_j from t_from_q.
double fusion_residual(const SchroedingerSpec& spec, const CoverPoint& lambda, const SpectralConfig& cfg = {},
                       int jmax = 2);
// QQ relation for Q_{±,r} = λ^{±r} Q± with γ_r = γ q^{−2r}.
double qq_r_residual(const SchroedingerSpec& spec, const CoverPoint& lambda, int r, const SpectralConfig& cfg = {});

// γ^{−2} Q₊(λq^{−2}) / Q₊(λq²); equals −1 at zeros of Q₊.
cplx bethe_ratio(const SchroedingerSpec& spec, const CoverPoint& lambda, const SpectralConfig& cfg = {});

struct ZeroSearch {
    double lo = 0.2, hi = 10.0;  // real search interval of the scanned variable
    double rel_step = 0.02;      // log-spaced grid ...
    double max_step = 0.05;      // ... with the absolute spacing capped
    double tol = 1e-13;          // secant stopping rule, relative
    int max_iter = 60;
};

struct ZeroInfo {
    cplx root = 0.0;  // in the scanned variable
    int iterations = 0;
    double last_step = 0.0;
    double modulus_at_root = 0.0;
    bool off_axis = false;  // imaginary part above 1e−6 |root|
};

// Local minima of |f| on the grid refined by complex secant iteration.
std::vector<ZeroInfo> find_real_zeros(const std::function<cplx(cplx)>& f, const ZeroSearch& search);
// Same for a function with a separate log-magnitude: the search runs on f e^{−c₀−c₁λ}, with c₀, c₁
// levelling log|f| between the interval ends, so that no value under- or overflows.
std::vector<ZeroInfo> find_real_zeros_scaled(const std::function<ScaledValue(cplx)>& f, const ZeroSearch& search);
// Re-runs the secant iteration from a converged root.
ZeroInfo refine_zero(const std::function<cplx(cplx)>& f, cplx root, const ZeroSearch& search);

struct QZero {
    double lambda = 0.0;       // zero of Q₊
    double lambda_star = 0.0;  // λ^{(k+3)/2}
    double imag_star = 0.0;
    int iterations = 0;
    double last_step = 0.0;
    bool off_axis = false;
    double bethe_residual = -1.0;  // |γ^{−2}Q₊(λq^{−2})/Q₊(λq²) + 1|; −1 when not evaluated
    double counting = std::numeric_limits<double>::quiet_NaN();  // z(λ) when the counting check ran
};

// Spacing of consecutive zeros in λ* on the large-j line: (k+2)√π Γ((k+5)/2)/Γ((k+4)/2).
double star_zero_spacing(double k);

// Zeros of Q₊ with λ* in [search.lo, search.hi]; the grid is uniform in log λ* with its spacing capped
// at search.max_step. Throws MissedZeroSuspected when the counting function predicts more zeros above
// the first one found.
std::vector<QZero> zeros_of_qplus(const SchroedingerSpec& spec, const ZeroSearch& search,
                                  const SpectralConfig& cfg = {}, bool check_counting = true, bool with_bethe = true);

// z(λ) = −(2l+1)/(k+3) + (1/2πi) log[Q₊(λq^{−2})/Q₊(λq²)] on an increasing grid of real λ,
// with the phase followed continuously from the first sample.
std::vector<double> counting_function(const SchroedingerSpec& spec, const std::vector<double>& lambdas,
                                      const SpectralConfig& cfg = {});
// Single value on a default grid from small λ.
double counting_function(const SchroedingerSpec& spec, double lambda, const SpectralConfig& cfg = {});
// Increasing λ grid for counting_function up to lambda_max, with the given points always included.
std::vector<double> counting_grid(const SchroedingerSpec& spec, double lambda_max,
                                  const std::vector<double>& include = {});

// Nearest integers of z(λ_j) − ½; NonIntegerRootNumber when a deviation exceeds max_dev.
std::vector<int> root_numbers(const SchroedingerSpec& spec, const std::vector<QZero>& zeros,
                              const SpectralConfig& cfg = {}, double max_dev = 0.1,
                              std::vector<double>* deviations = nullptr);

struct OrderFit {
    double ord_plus = 0.0, ord_minus = 0.0;
    double resid_plus = 0.0, resid_minus = 0.0;  // max deviation from the fit
    int expected_plus = 0, expected_minus = 0;   // −r and +r
};

// Orders from a least-squares fit log|Q±| = c + ord·log λ + b·λ on positive reals (at least four);
// FitUnstable when a residual exceeds max_resid.
OrderFit small_lambda_probe(const SchroedingerSpec& spec, int r, const std::vector<double>& lambdas,
                            const SpectralConfig& cfg = {}, double max_resid = 0.05);

struct SpectralSample {
    CoverPoint lambda;
    cplx qp = 0.0, qm = 0.0, t1 = 0.0;
    double qq = 0.0, tq = -1.0, fusion = -1.0;  // −1: not evaluated
};

struct SpectralTable {
    std::vector<SpectralSample> samples;
    std::vector<QZero> zeros;
};

// Ring sweep: `count` points on each radius, with the ring offset so that no sample sits on the real axis.
std::vector<CoverPoint> ring_samples(const std::vector<double>& radii, int count);
SpectralTable spectral_sweep(const SchroedingerSpec& spec, const std::vector<CoverPoint>& lambdas, bool tq, bool fusion,
                             const SpectralConfig& cfg = {}, int jobs = 1);

void write_csv(std::ostream& out, const SpectralTable& table);
nlohmann::json to_json(const std::vector<QZero>& zeros);

}  // namespace operlab
