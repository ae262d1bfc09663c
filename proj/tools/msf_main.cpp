#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "msf/corpus.hpp"
#include "msf/diagnostics.hpp"
#include "msf/jsonio.hpp"
#include "msf/matpoly.hpp"
#include "msf/nme.hpp"
#include "msf/surd.hpp"

namespace {

using namespace msf;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitStalled = 2;
constexpr int kExitBreakdown = 3;
constexpr int kExitNotRepresentable = 4;

struct Loaded {
    MatLaurentPoly poly;
    NmeProblem prob;
    std::size_t base_r = 0;
    int m = 0;
    const Example* ex = nullptr;  // non-null when loaded from the corpus
};

Loaded load_target(const std::string& input, int example_id) {
    if (input.empty() == (example_id == 0))
        throw JsonFormatError("give exactly one of --input or --example");
    Loaded out;
    if (example_id != 0) {
        out.ex = &example(example_id);
        out.poly = out.ex->laurent();
        out.prob = out.ex->problem();
    } else {
        out.poly = load_laurent(input);
        out.prob.label = input;
        if (out.poly.degree() <= 1) {
            out.prob.p0 = out.poly.coeff(0);
            out.prob.p1 = out.poly.coeff(1);
            if (out.prob.p1.rows() == 0) out.prob.p1 = DenseMatrix(out.poly.dim(), out.poly.dim());
        } else {
            const EmbeddedPair pair = block_embed(out.poly);
            out.prob.p0 = pair.p0;
            out.prob.p1 = pair.p1;
        }
    }
    out.base_r = out.poly.dim();
    out.m = std::max(out.poly.degree(), 1);
    return out;
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text << std::endl;
        return;
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw JsonFormatError("cannot write '" + out_path + "'");
    f << text << '\n';
}

int status_exit(SolveStatus s) {
    switch (s) {
        case SolveStatus::Converged: return kExitOk;
        case SolveStatus::Stalled:
        case SolveStatus::MaxIterations: return kExitStalled;
        case SolveStatus::IndefiniteBreakdown: return kExitBreakdown;
    }
    return kExitBreakdown;
}

struct FactorArgs {
    std::string input, method = "fpi", trace_path, out_path;
    int example_id = 0;
    double tol = -1.0;
    long max_iter = -1;
};

int run_factor(const FactorArgs& a) {
    const Loaded t = load_target(a.input, a.example_id);
    SolverConfig cfg;
    cfg.tol_residual = a.tol;
    cfg.max_iter = a.max_iter;
    std::optional<DenseMatrix> ref;
    if (t.ex) {
        ref = to_dense(exact_embedding(*t.ex).h0);
        cfg.reference_h0 = ref;
    }
    const FactorResult res =
        a.method == "newton" ? newton_solve(t.prob, cfg) : fpi_solve(t.prob, cfg);

    RunReport rep;
    rep.label = t.prob.label;
    rep.method = a.method;
    rep.status = res.status;
    rep.iterations = res.iterations;
    if (res.h0.rows() > 0) {
        rep.final_eps_p = metric_eps_p({res.h0, res.h1}, t.prob);
        if (ref) rep.final_eps_h = metric_eps_h(res.h0, *ref);
        if (t.m > 1) {
            try {
                rep.factors = block_extract(res.h0, res.h1, t.base_r).h;
            } catch (const InconsistentBlocks&) {
                rep.factors = {res.h0, res.h1};  // keep the raw block pair
            }
        } else {
            rep.factors = {res.h0, res.h1};
        }
    } else if (!res.trace.records.empty()) {
        rep.final_eps_p = res.trace.records.back().eps_p;
    }
    try {
        rep.rate = estimate_rate(ref ? series_eps_h(res.trace) : series_eps_p(res.trace), 2);
        rep.has_rate = true;
    } catch (const InsufficientData&) {
    }
    try {
        rep.singularity = singularity_report(res.x, t.prob.p1);
        rep.has_singularity = true;
    } catch (const SingularSystem&) {
    }

    if (!a.trace_path.empty()) {
        std::ofstream f(a.trace_path, std::ios::binary);
        if (!f) throw JsonFormatError("cannot write '" + a.trace_path + "'");
        write_trace_csv(f, res.trace);
    }
    emit(run_report_to_json(rep), a.out_path);
    char htail[48] = "";
    if (rep.final_eps_h >= 0)
        std::snprintf(htail, sizeof htail, ", eps_H=%.3g", rep.final_eps_h);
    std::fprintf(stderr, "%s %s: %s after %ld iterations, eps_P=%.3g%s\n",
                 rep.label.c_str(), a.method.c_str(), to_string(res.status).c_str(),
                 res.iterations, rep.final_eps_p, htail);
    return status_exit(res.status);
}

struct AnalyzeArgs {
    std::string input, out_path;
    int example_id = 0;
    std::size_t samples = 512;
};

int run_analyze(const AnalyzeArgs& a) {
    const Loaded t = load_target(a.input, a.example_id);
    json j;
    j["label"] = t.prob.label;
    j["r"] = t.base_r;
    j["m"] = t.poly.degree();
    j["para_hermitian"] = is_para_hermitian(t.poly);
    const PsdReport psd = psd_on_circle(t.poly, a.samples);
    j["psd"] = {{"ok", psd.ok}, {"min_eig", psd.min_eig}, {"theta_min", psd.theta_min}};

    const ScalarLaurentPoly det = det_poly(t.poly);
    json dc = json::object();
    for (const auto& [k, c] : det.coeffs) dc[std::to_string(k)] = c;
    j["det_coeffs"] = std::move(dc);

    const CircleZeroReport zeros = circle_zeros(det);
    json zl = json::array();
    for (const CircleZero& z : zeros.zeros)
        zl.push_back({{"re", z.location.re},
                      {"im", z.location.im},
                      {"multiplicity", z.multiplicity},
                      {"on_circle", z.on_circle}});
    j["circle_zeros"] = std::move(zl);
    j["singular"] = zeros.any_on_circle;
    j["verdict"] = zeros.any_on_circle ? "singular" : "nonsingular";

    try {
        const ExistenceReport ex = existence_conditions(t.prob);
        j["existence"] = {{"necessary_value", ex.necessary_value},
                          {"necessary_ok", ex.nec_ok},
                          {"sufficient_value", ex.sufficient_value},
                          {"sufficient_ok", ex.suff_ok}};
    } catch (const std::exception&) {
        j["existence"] = nullptr;
    }
    emit(j.dump(2), a.out_path);
    std::fprintf(stderr, "%s: %s, min circle eigenvalue %.3g\n", t.prob.label.c_str(),
                 j["verdict"].get<std::string>().c_str(), psd.min_eig);
    return kExitOk;
}

struct VerifyArgs {
    std::string input, out_path;
    int example_id = 0;
};

int run_verify(const VerifyArgs& a) {
    if (a.input.empty() == (a.example_id == 0))
        throw JsonFormatError("give exactly one of --input or --example");
    ExactInput in;
    std::string label;
    if (a.example_id != 0) {
        const Example& ex = example(a.example_id);
        const ExactEmbedding em = exact_embedding(ex);
        in = {em.p0, em.p1, em.x, em.h0, em.h1};
        label = ex.name;
    } else {
        in = exact_input_from_json(read_text_file(a.input));
        label = a.input;
    }
    const ExactVerifyFlags flags = exact_verify(in.p0, in.p1, in.x, in.h0, in.h1);
    bool scalar_ok = true;
    bool has_scalar = false;
    if (in.p0.rows() == 1) {
        has_scalar = true;
        scalar_ok = exact_scalar_solve(in.p0(0, 0), in.p1(0, 0)) == in.x(0, 0);
    }
    json j;
    j["label"] = label;
    j["nme"] = flags.nme_ok;
    j["product"] = flags.product_ok;
    j["cross"] = flags.cross_ok;
    j["cholesky"] = flags.cholesky_ok;
    if (has_scalar) j["scalar_solve"] = scalar_ok;
    const bool all = flags.all() && scalar_ok;
    j["all"] = all;
    emit(j.dump(2), a.out_path);
    std::fprintf(stderr, "%s: nme %s, product %s, cross %s, cholesky %s%s\n", label.c_str(),
                 flags.nme_ok ? "ok" : "FAIL", flags.product_ok ? "ok" : "FAIL",
                 flags.cross_ok ? "ok" : "FAIL", flags.cholesky_ok ? "ok" : "FAIL",
                 has_scalar ? (scalar_ok ? ", scalar solve ok" : ", scalar solve FAIL") : "");
    return all ? kExitOk : kExitStalled;
}

struct RatesArgs {
    std::string method = "newton", trace_path, out_path;
    int example_id = 0;
    long iters = -1;
};

int run_rates(const RatesArgs& a) {
    const Example& ex = example(a.example_id);
    const NmeProblem prob = ex.problem();
    const ExactEmbedding em = exact_embedding(ex);
    SolverConfig cfg;
    cfg.reference_h0 = to_dense(em.h0);
    cfg.tol_residual = 0.0;  // run to the floor so the whole decay is visible
    cfg.tol_step = 0.0;
    cfg.max_iter = a.iters > 0 ? a.iters : (a.method == "newton" ? 120 : 100000);
    const FactorResult res =
        a.method == "newton" ? newton_solve(prob, cfg) : fpi_solve(prob, cfg);

    json j;
    j["example"] = a.example_id;
    j["method"] = a.method;
    j["status"] = to_string(res.status);
    j["iterations"] = res.iterations;
    j["chain"] = ex.chain;
    if (a.method == "newton" && ex.chain >= 1)
        j["expected_factor"] = expected_newton_factor(ex.chain);
    else
        j["expected_factor"] = nullptr;
    try {
        const RateEstimate rate =
            estimate_rate(series_eps_h(res.trace), a.method == "newton" ? 0 : 2);
        j["rate"] = {{"class", to_string(rate.cls)},
                     {"factor", rate.factor},
                     {"power", rate.power},
                     {"n_first", rate.n_first},
                     {"n_last", rate.n_last},
                     {"points", rate.points},
                     {"fit_residual", rate.fit_residual}};
    } catch (const InsufficientData& e) {
        j["rate"] = nullptr;
    }
    if (!a.trace_path.empty()) {
        std::ofstream f(a.trace_path, std::ios::binary);
        if (!f) throw JsonFormatError("cannot write '" + a.trace_path + "'");
        write_trace_csv(f, res.trace);
    }
    emit(j.dump(2), a.out_path);
    std::fprintf(stderr, "example %d %s: %s, %ld iterations recorded\n", a.example_id,
                 a.method.c_str(), to_string(res.status).c_str(), res.iterations);
    return kExitOk;
}

struct PencilArgs {
    std::string out_path;
    int example_id = 0;
};

json matrix_rows(const DenseMatrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(m(i, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

int run_pencil(const PencilArgs& a) {
    const Example& ex = example(a.example_id);
    const NmeProblem prob = ex.problem();
    const PencilPair pencil = gdare_pencil(prob);
    const PencilReport prep = pencil_unit_circle_report(pencil);
    const SingularityReport srep =
        singularity_report(to_dense(exact_embedding(ex).x), prob.p1);

    const double tol = 1e-6;
    bool any_interior = false, any_boundary = false;
    json pts = json::array();
    for (const ComplexPair& ev : srep.eigenvalues) {
        const double m = ev.modulus();
        const bool boundary = m >= 1.0 - tol;
        (boundary ? any_boundary : any_interior) = true;
        pts.push_back(
            {{"re", ev.re}, {"im", ev.im}, {"modulus", m}, {"on_circle", boundary}});
    }
    const char* verdict = any_interior && any_boundary ? "mixed"
                          : any_boundary               ? "on"
                                                       : "inside";

    json zl = json::array();
    for (const CircleZero& z : prep.zeros)
        zl.push_back({{"re", z.location.re},
                      {"im", z.location.im},
                      {"multiplicity", z.multiplicity},
                      {"on_circle", z.on_circle}});
    json j;
    j["example"] = a.example_id;
    j["m"] = matrix_rows(pencil.m);
    j["n"] = matrix_rows(pencil.n);
    j["pencil"] = {{"finite", prep.finite},
                   {"inside", prep.inside},
                   {"on_circle", prep.on_circle},
                   {"outside", prep.outside},
                   {"max_modulus", prep.max_modulus},
                   {"eigenvalues", std::move(zl)}};
    j["closed_loop"] = {{"points", std::move(pts)},
                        {"max_modulus", srep.max_modulus},
                        {"p_estimate", srep.p_estimate},
                        {"verdict", verdict}};
    emit(j.dump(2), a.out_path);
    std::fprintf(stderr, "example %d: closed loop %s, chain estimate %d\n", a.example_id,
                 verdict, srep.p_estimate);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"spectral factorization of para-Hermitian matrix Laurent polynomials"};
    app.require_subcommand(1);

    FactorArgs fa;
    CLI::App* factor = app.add_subcommand("factor", "solve for the spectral factor");
    factor->add_option("--input", fa.input, "polynomial JSON file");
    factor->add_option("--example", fa.example_id, "built-in example id (1-7)");
    factor->add_option("--method", fa.method, "fpi or newton")
        ->check(CLI::IsMember({"fpi", "newton"}));
    factor->add_option("--tol", fa.tol, "residual tolerance");
    factor->add_option("--max-iter", fa.max_iter, "iteration cap");
    factor->add_option("--trace", fa.trace_path, "write iteration trace CSV here");
    factor->add_option("--out", fa.out_path, "write run report JSON here");

    AnalyzeArgs aa;
    CLI::App* analyze = app.add_subcommand("analyze", "polynomial diagnostics");
    analyze->add_option("--input", aa.input, "polynomial JSON file");
    analyze->add_option("--example", aa.example_id, "built-in example id (1-7)");
    analyze->add_option("--samples", aa.samples, "circle sample count");
    analyze->add_option("--out", aa.out_path, "write analysis JSON here");

    VerifyArgs va;
    CLI::App* verify = app.add_subcommand("verify", "exact identity verification");
    verify->add_option("--input", va.input, "exact data JSON file (surd expression strings)");
    verify->add_option("--example", va.example_id, "built-in example id (1-7)");
    verify->add_option("--out", va.out_path, "write flag JSON here");

    RatesArgs ra;
    CLI::App* rates = app.add_subcommand("rates", "convergence rate measurement");
    rates->add_option("--example", ra.example_id, "built-in example id (1-7)")->required();
    rates->add_option("--method", ra.method, "fpi or newton")
        ->check(CLI::IsMember({"fpi", "newton"}));
    rates->add_option("--iters", ra.iters, "forced iteration count");
    rates->add_option("--trace", ra.trace_path, "write iteration trace CSV here");
    rates->add_option("--out", ra.out_path, "write rate JSON here");

    PencilArgs pa;
    CLI::App* pencil = app.add_subcommand("pencil", "pencil and closed-loop spectrum");
    pencil->add_option("--example", pa.example_id, "built-in example id (1-7)")->required();
    pencil->add_option("--out", pa.out_path, "write pencil JSON here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (factor->parsed()) return run_factor(fa);
        if (analyze->parsed()) return run_analyze(aa);
        if (verify->parsed()) return run_verify(va);
        if (rates->parsed()) return run_rates(ra);
        if (pencil->parsed()) return run_pencil(pa);
    } catch (const NotRepresentable& e) {
        std::fprintf(stderr, "error: value leaves the representable field: %s\n", e.what());
        return kExitNotRepresentable;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    }
    return kExitUsage;
}
