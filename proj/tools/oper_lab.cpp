// oper-lab: batch driver for the Bethe, oper, spectral, WKB and BLZ comparison pipelines.
//
// Exit codes: 0 success, 2 Bethe solve stage, 3 operator / Q-function stage, 4 zero search and WKB stage,
// 5 comparison or verification verdict, 64 usage errors.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "operlab/compare.hpp"
#include "operlab/errors.hpp"
#include "operlab/wkb.hpp"

using namespace operlab;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

enum Stage { kSolve = 2, kOperator = 3, kZeros = 4, kVerdict = 5, kUsage = 64 };

struct StageFailure {
    int code;
    std::string what;
};

template <class F>
auto in_stage(Stage stage, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const Error& e) {
        throw StageFailure{e.kind() == ErrorKind::InvalidArgument && stage == kUsage ? kUsage : stage, e.what()};
    }
}

struct Global {
    double tol = 0.0;  // 0: the command default
    std::string precision;
    std::string out = ".";
    int jobs = 1;
};

double tol_or(const Global& g, double fallback) { return g.tol > 0.0 ? g.tol : fallback; }

Precision precision_of(const Global& g) {
    return in_stage(kUsage, [&] { return parse_precision(g.precision); });
}

// Double precision bottoms out near 1e−10 relative to the largest terms of the Bethe equations at ell ~ 40.
NewtonOptions newton_options(const Global& g) {
    NewtonOptions opts;
    opts.precision = precision_of(g);
    opts.tol = tol_or(g, opts.precision == Precision::Double ? 1e-9 : opts.tol);
    return opts;
}

// The operator under study: L^G for (k, l) with roots from a file, the exact depth-1 solution, or
// continuation from the partition seeds.
struct ProblemArgs {
    std::string k = "-1.2";
    std::string l = "1";
    double ell = 0.0;
    std::string partition;
    int r = 0;
    std::string roots;
};

void add_problem_flags(CLI::App* cmd, ProblemArgs& p) {
    cmd->add_option("--k", p.k, "exponent k (decimal or p/q)");
    cmd->add_option("--l", p.l, "l (decimal or p/q); ignored when --ell is set");
    cmd->add_option("--ell", p.ell, "ell > 0: l = ell^2 and roots continued from the partition seeds");
    cmd->add_option("--partition", p.partition, "partition mu, e.g. 2,1");
    cmd->add_option("--r", p.r, "r = d0 - d1");
    cmd->add_option("--roots", p.roots, "roots JSON written by solve-bae");
}

struct Problem {
    double k = 0.0, l = 0.0;
    double ell = 0.0;
    int r = 0;
    Partition mu;
    int d0 = 0;
    BetheRoots roots;
    SchroedingerSpec spec;
    std::string source;
};

double parse_number(const std::string& text, const char* name) {
    return in_stage(kUsage, [&] {
        try {
            return parse_rational(text).get_d();
        } catch (const Error&) {
            std::size_t pos = 0;
            double v = 0.0;
            try {
                v = std::stod(text, &pos);
            } catch (const std::exception&) {
                pos = 0;
            }
            if (pos == 0 || pos != text.size()) fail(ErrorKind::InvalidArgument, std::string("bad value for ") + name);
            return v;
        }
    });
}

json cplx_json(cldouble z) { return json::array({static_cast<double>(z.real()), static_cast<double>(z.imag())}); }

std::vector<cldouble> cplx_list(const json& arr) {
    std::vector<cldouble> out;
    for (const auto& v : arr) out.emplace_back(v.at(0).get<double>(), v.at(1).get<double>());
    return out;
}

json roots_json(const BetheRoots& roots) {
    json s = json::array(), t = json::array();
    for (auto v : roots.s) s.push_back(cplx_json(v));
    for (auto v : roots.t) t.push_back(cplx_json(v));
    return {{"s", s}, {"t", t}};
}

Problem resolve(const ProblemArgs& a, const Global& g) {
    Problem p;
    const NewtonOptions opts = newton_options(g);
    if (!a.roots.empty()) {
        std::ifstream in(a.roots);
        if (!in) throw StageFailure{kUsage, "cannot read " + a.roots};
        json doc;
        try {
            doc = json::parse(in);
            p.k = doc.at("problem").at("k").get<double>();
            p.l = doc.at("problem").at("l").get<double>();
            p.r = doc.at("problem").at("r").get<int>();
            p.mu = Partition::parse(doc.at("problem").value("partition", ""));
            p.roots.s = cplx_list(doc.at("roots").at("s"));
            p.roots.t = cplx_list(doc.at("roots").at("t"));
        } catch (const json::exception& e) {
            throw StageFailure{kUsage, std::string("malformed roots file: ") + e.what()};
        }
        p.d0 = static_cast<int>(p.roots.s.size());
        p.roots.problem = GaudinProblem::blz_case(p.k, p.l, p.d0, static_cast<int>(p.roots.t.size()));
        p.spec = in_stage(kOperator, [&] { return build_LG(p.k, p.l, 0.0L, p.roots); });
        p.source = "file";
        return p;
    }
    p.k = parse_number(a.k, "--k");
    p.ell = a.ell;
    p.l = a.ell > 0.0 ? a.ell * a.ell : parse_number(a.l, "--l");
    p.r = a.r;
    p.mu = in_stage(kUsage, [&] { return Partition::parse(a.partition); });
    p.d0 = p.mu.weight() + p.r * p.r;
    p.roots.problem = GaudinProblem::blz_case(p.k, p.l, p.d0, p.d0 - p.r);
    if (p.d0 == 0) {
        p.source = "ground";
    } else if (a.ell > 0.0) {
        const long double ell = a.ell;
        p.roots = in_stage(kSolve, [&] {
            return continue_in_ell(p.mu, p.r, geometric_ell_path(std::max(40.0L, 2.0L * ell), ell), p.k, opts);
        });
        p.source = "continuation";
    } else if (p.d0 == 1) {
        const auto s = in_stage(kSolve, [&] { return depth1_exact(p.k, cplx(p.l, 0.0))[1 - p.r]; });
        p.roots.s = {cldouble(s.real(), s.imag())};
        p.source = "depth1-exact";
    } else {
        throw StageFailure{kUsage, "d0 > 1 needs --ell or --roots"};
    }
    if (p.source == "depth1-exact")
        p.spec = in_stage(kOperator, [&] { return build_LG(p.k, p.l, 0.0L, p.r, p.roots.s); });
    else
        p.spec = in_stage(kOperator, [&] { return build_LG(p.k, p.l, 0.0L, p.roots); });
    return p;
}

json problem_json(const Problem& p) {
    return {{"k", p.k}, {"l", p.l}, {"ell", p.ell}, {"r", p.r}, {"partition", p.mu.to_string()},
            {"d0", p.d0}, {"source", p.source}};
}

std::string timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    return buf;
}

// CSV files start with a single comment line carrying the timestamp; the rest is deterministic.
void write_output(const Global& g, const std::string& name, const std::string& command, const std::string& body) {
    fs::create_directories(g.out);
    std::ofstream out(fs::path(g.out) / name);
    if (!out) throw StageFailure{kUsage, "cannot write " + name};
    if (name.size() > 4 && name.substr(name.size() - 4) == ".csv") out << "# oper-lab " << command << ' ' << timestamp() << '\n';
    out << body;
}

void emit_summary(const Global& g, const std::string& command, json summary) {
    summary["command"] = command;
    summary["precision"] = g.precision;
    summary["jobs"] = g.jobs;
    write_output(g, command + ".json", command, summary.dump(2) + "\n");
    std::cout << summary.dump(2) << '\n';
}

SpectralConfig spectral_config() { return {}; }

json spectral_tolerances(const SpectralConfig& cfg) {
    return {{"integration_rel", cfg.integration.rel_tol},
            {"integration_abs", cfg.integration.abs_tol},
            {"series_tail", cfg.tail_tol},
            {"anchor_min_action", cfg.anchor.min_action}};
}

// ---------------------------------------------------------------------------------------------
// solve-bae

struct SolveArgs {
    ProblemArgs problem;
    std::string seed = "partition";
    int d0 = -1, d1 = -1;
};

int cmd_solve_bae(const SolveArgs& a, const Global& g) {
    const NewtonOptions opts = newton_options(g);
    json summary;
    BetheRoots roots;
    json exact = nullptr;
    double k = 0.0, l = 0.0;
    int r = a.problem.r;
    Partition mu;
    if (a.seed == "exact") {
        // Depth-one solutions in closed form: s from the trivial-monodromy condition and, for d1 = 1,
        // t = l s / (l + 1) from the single t-equation.
        const int d0 = a.d0 < 0 ? 0 : a.d0, d1 = a.d1 < 0 ? d0 - r : a.d1;
        const mpq_class kq = in_stage(kUsage, [&] { return parse_rational(a.problem.k); });
        const mpq_class lq = in_stage(kUsage, [&] { return parse_rational(a.problem.l); });
        k = kq.get_d();
        l = lq.get_d();
        r = d0 - d1;
        roots.problem = GaudinProblem::blz_case(k, l, d0, d1);
        std::vector<std::string> s_exact, t_exact;
        if (d0 == 0 && d1 == 0) {
        } else if (d0 == 1 && (d1 == 0 || d1 == 1)) {
            const auto s = in_stage(kSolve, [&] { return depth1_exact(kq, lq)[1 - r]; });
            roots.s = {static_cast<long double>(s.get_d())};
            s_exact.push_back(s.get_str());
            if (d1 == 1) {
                mpq_class t = lq * s / (lq + 1);
                t.canonicalize();
                roots.t = {static_cast<long double>(t.get_d())};
                t_exact.push_back(t.get_str());
            }
        } else {
            throw StageFailure{kUsage, "--seed exact supports (d0, d1) in {(0,0), (1,0), (1,1)}"};
        }
        if (d0 > 0) roots = in_stage(kSolve, [&] { return newton_solve(roots.problem, roots, opts); });
        exact = {{"s", s_exact}, {"t", t_exact}};
    } else if (a.seed == "partition") {
        k = parse_number(a.problem.k, "--k");
        mu = in_stage(kUsage, [&] { return Partition::parse(a.problem.partition); });
        const int d0 = mu.weight() + r * r;
        if (a.d0 >= 0 && a.d0 != d0) throw StageFailure{kUsage, "--d0 disagrees with |mu| + r^2"};
        if (d0 == 0) {
            l = a.problem.ell > 0.0 ? a.problem.ell * a.problem.ell : parse_number(a.problem.l, "--l");
            roots.problem = GaudinProblem::blz_case(k, l, 0, 0);
        } else {
            if (!(a.problem.ell > 0.0)) throw StageFailure{kUsage, "--seed partition needs --ell > 0"};
            const long double ell = a.problem.ell;
            l = a.problem.ell * a.problem.ell;
            std::vector<ContinuationStage> stages;
            roots = in_stage(kSolve, [&] {
                return continue_in_ell(mu, r, geometric_ell_path(std::max(40.0L, 2.0L * ell), ell), k, opts, &stages);
            });
            json path = json::array();
            for (const auto& st : stages)
                path.push_back({{"ell", static_cast<double>(st.ell)}, {"residual", st.residual}, {"iterations", st.iterations}});
            summary["continuation"] = path;
        }
    } else {
        throw StageFailure{kUsage, "--seed must be 'exact' or 'partition'"};
    }
    const double residual = roots.s.empty() && roots.t.empty() ? 0.0 : sup_norm(bae_residual(roots));
    const double sum = static_cast<double>(std::abs(sum_rule(roots)));
    summary["problem"] = {{"k", k}, {"l", l}, {"r", r}, {"partition", mu.to_string()},
                          {"d0", roots.problem.d0}, {"d1", roots.problem.d1}};
    summary["roots"] = roots_json(roots);
    if (!exact.is_null()) summary["exact"] = exact;
    summary["residual"] = residual;
    summary["sum_rule"] = sum;
    summary["iterations"] = roots.iterations;
    summary["tolerances"] = {{"newton", opts.tol}, {"sum_rule", 1e-10}};
    summary["sum_rule_pass"] = sum < 1e-10;
    write_output(g, "roots.json", "solve-bae", summary.dump(2) + "\n");
    emit_summary(g, "solve-bae", summary);
    return 0;
}

// ---------------------------------------------------------------------------------------------
// build-oper

int cmd_build_oper(const ProblemArgs& a, const std::string& kind, const Global& g) {
    Problem p;
    SchroedingerSpec spec;
    json summary;
    if (kind == "gaudin") {
        p = resolve(a, g);
        spec = p.spec;
        summary["problem"] = problem_json(p);
    } else if (kind == "blz") {
        ProblemArgs b = a;
        const double k = parse_number(b.k, "--k");
        const double l = b.ell > 0.0 ? b.ell * b.ell : parse_number(b.l, "--l");
        const Partition mu = in_stage(kUsage, [&] { return Partition::parse(b.partition); });
        const auto pm = in_stage(kOperator, [&] { return param_map(k, l, b.r); });
        const auto zbar = in_stage(kSolve, [&] { return solve_blz_system(mu.weight(), pm.kbar, pm.lbar, mu); });
        std::vector<cldouble> zl;
        for (auto z : zbar) zl.emplace_back(z.real(), z.imag());
        spec = in_stage(kOperator, [&] { return build_BLZ(pm.kbar, cldouble(pm.lbar.real(), pm.lbar.imag()), zl); });
        summary["problem"] = {{"k", k}, {"l", l}, {"r", b.r}, {"partition", mu.to_string()},
                              {"kbar", pm.kbar}, {"lbar", json::array({pm.lbar.real(), pm.lbar.imag()})}};
    } else {
        throw StageFailure{kUsage, "--kind must be 'gaudin' or 'blz'"};
    }
    const auto resid = in_stage(kOperator, [&] { return monodromy_residual(spec); });
    double worst = 0.0;
    for (double v : resid) worst = std::max(worst, v);
    const double tol = tol_or(g, 1e-8);
    summary["operator"] = to_json(spec);
    summary["monodromy_residual"] = resid;
    summary["tolerances"] = {{"monodromy", tol}};
    summary["monodromy_pass"] = worst < tol;
    emit_summary(g, "build-oper", summary);
    return 0;
}

// ---------------------------------------------------------------------------------------------
// qfunction

struct QfunctionArgs {
    ProblemArgs problem;
    std::vector<double> radii{0.5, 1.0};
    int count = 8;
    std::string verify;
    bool small_lambda = false;
};

int cmd_qfunction(const QfunctionArgs& a, const Global& g) {
    const Problem p = resolve(a.problem, g);
    const bool tq = a.verify.find("tq") != std::string::npos;
    const bool fusion = a.verify.find("fusion") != std::string::npos;
    const SpectralConfig cfg = spectral_config();
    const auto samples = in_stage(kUsage, [&] { return ring_samples(a.radii, a.count); });
    const auto table = in_stage(kOperator, [&] { return spectral_sweep(p.spec, samples, tq, fusion, cfg, g.jobs); });
    std::ostringstream csv;
    write_csv(csv, table);
    write_output(g, "qfunction.csv", "qfunction", csv.str());
    double qq = 0.0, tqr = 0.0, fu = 0.0;
    for (const auto& s : table.samples) {
        qq = std::max(qq, s.qq);
        tqr = std::max(tqr, s.tq);
        fu = std::max(fu, s.fusion);
    }
    const double tol = tol_or(g, 1e-6);
    json summary;
    summary["problem"] = problem_json(p);
    summary["rows"] = table.samples.size();
    summary["max_qq_residual"] = qq;
    if (tq) summary["max_tq_residual"] = tqr;
    if (fusion) summary["max_fusion_residual"] = fu;
    summary["residual_pass"] = qq < tol && (!tq || tqr < tol) && (!fusion || fu < tol);
    summary["tolerances"] = spectral_tolerances(cfg);
    summary["tolerances"]["residual"] = tol;
    if (a.small_lambda) {
        const auto fit = in_stage(kOperator, [&] {
            return small_lambda_probe(p.spec, p.r, {1e-1, 3e-2, 1e-2, 3e-3, 1e-3}, cfg, 10.0);
        });
        summary["small_lambda"] = {{"ord_plus", fit.ord_plus},       {"ord_minus", fit.ord_minus},
                                   {"expected_plus", fit.expected_plus}, {"expected_minus", fit.expected_minus},
                                   {"resid_plus", fit.resid_plus},   {"resid_minus", fit.resid_minus}};
    }
    emit_summary(g, "qfunction", summary);
    return 0;
}

// ---------------------------------------------------------------------------------------------
// zeros and wkb-predict

// Window in λ* from below the first predicted zero to midway between predictions jmax and jmax + 1.
ZeroSearch zero_window(double k, double l, int jmax, double tol) {
    ZeroSearch zs;
    const double h = star_zero_spacing(k);
    const double ell_hat = l + 0.5;
    const double first = predicted_lambda_j(0, ell_hat, k);
    zs.lo = std::max(0.2, std::min(first - 2.0 * h, 0.9 * first));
    zs.hi = 0.5 * (predicted_lambda_j(jmax, ell_hat, k) + predicted_lambda_j(jmax + 1, ell_hat, k));
    zs.max_step = h / 40.0;
    zs.tol = tol;
    return zs;
}

int cmd_zeros(const ProblemArgs& a, int jmax, const Global& g) {
    const Problem p = resolve(a, g);
    const SpectralConfig cfg = spectral_config();
    const ZeroSearch zs = in_stage(kZeros, [&] { return zero_window(p.k, p.l, jmax, tol_or(g, 1e-13)); });
    // Excited states have holes in their root numbers; the counting check applies to d0 = 0.
    const bool counting = p.d0 == 0;
    const auto zeros = in_stage(kZeros, [&] { return zeros_of_qplus(p.spec, zs, cfg, counting, true); });
    std::ostringstream csv;
    csv << "j,lambda,lambda_star,imag_star,bethe_residual,counting\n";
    char buf[256];
    for (size_t j = 0; j < zeros.size(); ++j) {
        const auto& z = zeros[j];
        std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.3e,%.3e,%.12g\n", j, z.lambda, z.lambda_star, z.imag_star,
                      z.bethe_residual, z.counting);
        csv << buf;
    }
    write_output(g, "zeros.csv", "zeros", csv.str());
    double worst = 0.0;
    for (const auto& z : zeros) worst = std::max(worst, z.bethe_residual);
    json summary;
    summary["problem"] = problem_json(p);
    summary["search"] = {{"lo", zs.lo}, {"hi", zs.hi}, {"max_step", zs.max_step}, {"rel_step", zs.rel_step}};
    summary["zeros"] = to_json(zeros);
    summary["count"] = zeros.size();
    summary["counting_checked"] = counting;
    summary["max_bethe_residual"] = worst;
    summary["tolerances"] = spectral_tolerances(cfg);
    summary["tolerances"]["secant"] = zs.tol;
    summary["tolerances"]["bethe"] = 1e-5;
    summary["bethe_pass"] = worst < 1e-5;
    emit_summary(g, "zeros", summary);
    return 0;
}

struct PredictArgs {
    ProblemArgs problem;
    int jmax = 10;
    std::string model = "quantization";
    std::string zeros;
};

int cmd_wkb_predict(const PredictArgs& a, const Global& g) {
    const double k = parse_number(a.problem.k, "--k");
    const double l = a.problem.ell > 0.0 ? a.problem.ell * a.problem.ell : parse_number(a.problem.l, "--l");
    const Partition mu = in_stage(kUsage, [&] { return Partition::parse(a.problem.partition); });
    const double ell_hat = l + 0.5;
    std::vector<double> computed;
    if (!a.zeros.empty()) {
        std::ifstream in(a.zeros);
        if (!in) throw StageFailure{kUsage, "cannot read " + a.zeros};
        try {
            const json doc = json::parse(in);
            for (const auto& z : doc.at("zeros")) computed.push_back(z.at("lambda_star").get<double>());
        } catch (const json::exception& e) {
            throw StageFailure{kUsage, std::string("malformed zeros file: ") + e.what()};
        }
    }
    std::vector<PredictionRow> rows;
    double scaled = 0.0;
    for (int j = 0; j <= a.jmax; ++j) {
        PredictionRow row;
        row.j = j;
        row.predicted = in_stage(kZeros, [&] {
            if (a.model == "quantization") return predicted_lambda_j(j, ell_hat, k);
            if (a.model == "large-j") return large_j_line(j, ell_hat, k);
            if (a.model == "large-j-alt") return large_j_line(j, ell_hat, k, LargeJOffset::EllOverKPlus2);
            if (a.model == "large-ell") return mu_zero_prediction(j, ell_hat, k, mu);
            fail(ErrorKind::InvalidArgument, "unknown model " + a.model);
        });
        row.computed = j < static_cast<int>(computed.size()) ? computed[j] : std::nan("");
        if (std::isfinite(row.computed)) scaled = std::max(scaled, std::abs(row.computed - row.predicted) * std::max(j, 1));
        rows.push_back(row);
    }
    std::ostringstream csv;
    write_prediction_csv(csv, rows);
    write_output(g, "predictions.csv", "wkb-predict", csv.str());
    json summary;
    summary["problem"] = {{"k", k}, {"l", l}, {"partition", mu.to_string()}};
    summary["model"] = a.model;
    summary["jmax"] = a.jmax;
    summary["compared"] = std::min<size_t>(computed.size(), rows.size());
    summary["max_difference_times_j"] = scaled;
    summary["tolerances"] = {{"quadrature", 1e-13}};
    emit_summary(g, "wkb-predict", summary);
    return 0;
}

// ---------------------------------------------------------------------------------------------
// compare-blz

struct CompareArgs {
    ProblemArgs problem;
    int count = 12;
    int d0 = -1;
};

int cmd_compare_blz(const CompareArgs& a, const Global& g) {
    ComparisonSetup s;
    s.k = parse_number(a.problem.k, "--k");
    s.l = parse_number(a.problem.l, "--l");
    s.ell = a.problem.ell;
    s.r = a.problem.r;
    s.mu = in_stage(kUsage, [&] { return Partition::parse(a.problem.partition); });
    s.count = a.count;
    s.tol = tol_or(g, 1e-6);
    s.concurrent = g.jobs > 1;
    if (a.d0 >= 0 && a.d0 != s.mu.weight() + s.r * s.r) throw StageFailure{kUsage, "--d0 disagrees with |mu| + r^2"};
    const auto run = in_stage(kZeros, [&] { return run_comparison(s); });
    std::ostringstream csv;
    write_pairs_csv(csv, run.report);
    write_output(g, "pairs.csv", "compare-blz", csv.str());
    json summary = to_json(run.report);
    summary["tolerances"] = spectral_tolerances(s.cfg);
    summary["tolerances"]["comparison"] = s.tol;
    json zb = json::array();
    for (auto z : run.zbar) zb.push_back(json::array({z.real(), z.imag()}));
    summary["zbar"] = zb;
    emit_summary(g, "compare-blz", summary);
    // Conjecture probes report; only the exact d0 = d = 0 case is gated.
    return run.report.pass || run.report.meta.conjecture_probe ? 0 : kVerdict;
}

// ---------------------------------------------------------------------------------------------
// verify

int cmd_verify(const ProblemArgs& a, const Global& g) {
    const Problem p = resolve(a, g);
    const SpectralConfig cfg = spectral_config();
    const double tol = tol_or(g, 1e-6);
    const auto table = in_stage(kOperator, [&] {
        return spectral_sweep(p.spec, ring_samples({0.5, 1.0}, 8), true, true, cfg, g.jobs);
    });
    double qq = 0.0, tq = 0.0, fu = 0.0;
    for (const auto& s : table.samples) {
        qq = std::max(qq, s.qq);
        tq = std::max(tq, s.tq);
        fu = std::max(fu, s.fusion);
    }
    // Q± come back to themselves after λ goes once around the origin.
    const double loop = in_stage(kOperator, [&] {
        const CoverPoint start(1.0, 0.1);
        const auto q0 = q_pair(p.spec, start, cfg), q1 = q_pair(p.spec, start.rotated(2.0 * M_PI), cfg);
        return std::max(std::abs(q1.plus - q0.plus) / std::abs(q0.plus),
                        std::abs(q1.minus - q0.minus) / std::abs(q0.minus));
    });
    const auto mono = in_stage(kOperator, [&] { return monodromy_residual(p.spec); });
    double mono_max = 0.0;
    for (double v : mono) mono_max = std::max(mono_max, v);
    json checks = {{"qq", {{"max", qq}, {"pass", qq < tol}}},
                   {"tq", {{"max", tq}, {"pass", tq < tol}}},
                   {"fusion", {{"max", fu}, {"pass", fu < tol}}},
                   {"single_valued", {{"max", loop}, {"pass", loop < tol}}},
                   {"monodromy", {{"max", mono_max}, {"pass", mono_max < 1e-8}}}};
    bool pass = true;
    for (const auto& [name, c] : checks.items()) pass = pass && c.at("pass").get<bool>();
    json summary;
    summary["problem"] = problem_json(p);
    summary["samples"] = table.samples.size();
    summary["checks"] = checks;
    summary["pass"] = pass;
    summary["tolerances"] = spectral_tolerances(cfg);
    summary["tolerances"]["identities"] = tol;
    summary["tolerances"]["monodromy"] = 1e-8;
    emit_summary(g, "verify", summary);
    return pass ? 0 : kVerdict;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"oper-lab: Gaudin opers, Q-functions and their zeros"};
    app.require_subcommand(1);
    Global g;
    const char* env = std::getenv("OPER_LAB_PRECISION");
    g.precision = env && *env ? env : "extended";
    app.add_option("--tol", g.tol, "tolerance override for the command's main check")->check(CLI::PositiveNumber);
    app.add_option("--precision", g.precision, "double or extended (default $OPER_LAB_PRECISION or extended)");
    app.add_option("--out", g.out, "output directory");
    app.add_option("--jobs", g.jobs, "worker threads for sweeps")->check(CLI::PositiveNumber);

    SolveArgs solve;
    auto* c_solve = app.add_subcommand("solve-bae", "solve the Bethe equations");
    add_problem_flags(c_solve, solve.problem);
    c_solve->add_option("--seed", solve.seed, "exact or partition");
    c_solve->add_option("--d0", solve.d0, "number of s roots");
    c_solve->add_option("--d1", solve.d1, "number of t roots");

    ProblemArgs build;
    std::string kind = "gaudin";
    auto* c_build = app.add_subcommand("build-oper", "construct the Schroedinger operator and check its monodromy");
    add_problem_flags(c_build, build);
    c_build->add_option("--kind", kind, "gaudin or blz");

    QfunctionArgs qf;
    auto* c_qf = app.add_subcommand("qfunction", "Q-, T-functions and identity residuals on rings");
    add_problem_flags(c_qf, qf.problem);
    c_qf->add_option("--radii", qf.radii, "ring radii in lambda");
    c_qf->add_option("--count", qf.count, "samples per ring");
    c_qf->add_option("--verify", qf.verify, "extra residual columns: tq,fusion");
    c_qf->add_flag("--small-lambda-probe", qf.small_lambda, "fit the orders of Q at small lambda");

    ProblemArgs zp;
    int jmax = 10;
    auto* c_zeros = app.add_subcommand("zeros", "zeros of Q+");
    add_problem_flags(c_zeros, zp);
    c_zeros->add_option("--jmax", jmax, "last zero index")->check(CLI::NonNegativeNumber);

    PredictArgs pr;
    auto* c_pred = app.add_subcommand("wkb-predict", "WKB and asymptotic zero predictions");
    add_problem_flags(c_pred, pr.problem);
    c_pred->add_option("--jmax", pr.jmax, "last zero index")->check(CLI::NonNegativeNumber);
    c_pred->add_option("--model", pr.model, "quantization, large-j, large-j-alt or large-ell");
    c_pred->add_option("--zeros", pr.zeros, "zeros.json from the zeros command");

    CompareArgs cmp;
    auto* c_cmp = app.add_subcommand("compare-blz", "compare zeros of Q+ with those of the BLZ Q-function");
    add_problem_flags(c_cmp, cmp.problem);
    c_cmp->add_option("--count", cmp.count, "zeros compared");
    c_cmp->add_option("--d0", cmp.d0, "expected d0 (consistency check)");

    ProblemArgs ver;
    auto* c_ver = app.add_subcommand("verify", "QQ, TQ, fusion, single-valuedness and monodromy checks");
    add_problem_flags(c_ver, ver);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        std::cerr << app.help();
        return kUsage;
    }

    try {
        precision_of(g);
        if (*c_solve) return cmd_solve_bae(solve, g);
        if (*c_build) return cmd_build_oper(build, kind, g);
        if (*c_qf) return cmd_qfunction(qf, g);
        if (*c_zeros) return cmd_zeros(zp, jmax, g);
        if (*c_pred) return cmd_wkb_predict(pr, g);
        if (*c_cmp) return cmd_compare_blz(cmp, g);
        if (*c_ver) return cmd_verify(ver, g);
    } catch (const StageFailure& f) {
        std::cerr << "oper-lab: " << f.what << '\n';
        if (f.code == kUsage) std::cerr << app.help();
        return f.code;
    } catch (const Error& e) {
        std::cerr << "oper-lab: " << e.what() << '\n';
        return kOperator;
    }
    return 0;
}
