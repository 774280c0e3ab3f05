#pragma once

#include <array>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "json.hpp"
#include "operlab/bethe.hpp"
#include "operlab/cover.hpp"

namespace operlab {

enum class OperKind { GaudinL1, GaudinL0, BLZ, OscillatorExt };

const char* to_string(OperKind kind);
OperKind parse_oper_kind(const std::string& text);

// Pole of the potential: quadratic / (x-a)^2 + residue / (x-a).
struct OperPole {
    cldouble location;
    cldouble quadratic;
    cldouble residue;
};

// The λ-dependent term of the potential: coeff * λ^lambda_power * x^alpha * (x-1)^beta.
struct Coupling {
    cplx coeff = 1.0;
    int lambda_power = 2;
    double alpha = 0.0;
    int beta = 1;
};

// Schrödinger operator ∂² − V(x, λ) with
//   V = constant + angular/x² + inv_x/x + Σ poles + coupling(x, λ).
// Coefficients are kept in extended precision: near-cancelling monodromy criteria need it.
struct SchroedingerSpec {
    OperKind kind = OperKind::GaudinL1;
    double k = 0.0;  // k, or k̄ for the BLZ kind
    cldouble l = 0.0L;  // l, m (for L0) or l̄ (for BLZ)
    int r = 0;
    cldouble n1 = 0.0L;
    cldouble constant = 0.0L;
    cldouble angular = 0.0L;
    cldouble inv_x = 0.0L;
    std::vector<OperPole> poles;
    Coupling coupling;
    double exclusion_radius = 0.0;

    // Locations of the double poles with coefficient 2 (the apparent singularities).
    std::vector<cplx> apparent_poles() const;
};

nlohmann::json to_json(const SchroedingerSpec& spec);

// L^G: Gaudin L1 with P(x) = x^k (x-1). When residues are supplied they must equal (ln P)'(s_i).
SchroedingerSpec build_LG(double k, cldouble l, cldouble n1, int r, const std::vector<cldouble>& s,
                          const std::optional<std::vector<cldouble>>& residues = std::nullopt, double tol = 1e-10);
SchroedingerSpec build_LG(double k, cldouble l, cldouble n1, const BetheRoots& roots);

// L0 of the BLZ case; checks the regularity at infinity b0 + b1 + Σ q_j = 0.
SchroedingerSpec build_L0(double k, cldouble m, const BetheRoots& roots, double tol = 1e-8);

// L^BLZ with apparent singularities zbar.
SchroedingerSpec build_BLZ(double kbar, cldouble lbar, const std::vector<cldouble>& zbar);

// ∂² − 1 − Σ 2/(x−w)² − Σ (1/w)/(x−w) − λ² x.
SchroedingerSpec build_oscillator(const std::vector<cldouble>& w);

cplx potential_eval(const SchroedingerSpec& spec, const CoverPoint& x, cplx lambda);
// Value and x-derivative of V.
std::pair<cplx, cplx> potential_and_derivative(const SchroedingerSpec& spec, const CoverPoint& x, cplx lambda);

// Per apparent pole: max of |constant part| and |λ part| of the trivial-monodromy criterion
// (cubic criterion for coefficient 2, quadratic criterion for coefficient 3/4).
std::vector<double> monodromy_residual(const SchroedingerSpec& spec);

// Exact criterion values for L^G with rational k, l, poles s and residues (ln P)'(s).
std::vector<mpq_class> monodromy_residual_exact(const mpq_class& k, const mpq_class& l, const std::vector<mpq_class>& s);

// (s^(1), s^(0), s^(-1)).
std::array<cplx, 3> depth1_exact(double k, cplx l);
std::array<mpq_class, 3> depth1_exact(const mpq_class& k, const mpq_class& l);

// Left sides of the BLZ system f̄(z_i) + Σ ḡ(z_i, z_j).
std::vector<cplx> blz_system_residual(const std::vector<cplx>& zbar, double kbar, cplx lbar);
// The unique solution with one apparent singularity.
cplx blz_depth1_root(double kbar, cplx lbar);

struct ParamBundle {
    double k = 0.0;
    cplx l = 0.0;
    int r = 0;
    double kbar = 0.0;
    cplx lbar = 0.0;  // shifted by r
    double c = 0.0;
    cplx delta_r = 0.0;
    cplx q = 0.0;
    cplx gamma = 0.0;
    cplx gamma_r = 0.0;

    // λ̄ = (λ/(k+3))^{2/(k+3)} on the tracked sheet.
    CoverPoint lambda_bar(const CoverPoint& lambda) const;
    // Factor (k+3)^{2/(k+3)} relating zeros in λ̄ to zeros in λ^{2/(k+3)}.
    double zero_factor() const;
};

ParamBundle param_map(double k, cplx l, int r);
// Inverse of the l̄ map: recovers l from the shifted l̄.
cplx l_from_lbar(double k, cplx lbar, int r);

// Left sides of the twisted oscillator monodromy system.
std::vector<cplx> osc_monodromy_residual(const std::vector<cplx>& w);

}  // namespace operlab
