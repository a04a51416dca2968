#include <CLI11.hpp>
#include <Eigen/Core>

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <iostream>
#include <sstream>

#include "weldfactor/json_io.hpp"
#include "weldfactor/svg.hpp"

namespace wf = weldfactor;

namespace {

bool g_deterministic = false;

int classify_exit(wf::ErrorCode code) {
    switch (code) {
        case wf::ErrorCode::ParseError:
        case wf::ErrorCode::DomainInvalid:
        case wf::ErrorCode::BoundViolated:
        case wf::ErrorCode::EmptyList:
        case wf::ErrorCode::NonMonotoneInput:
            return 2;
        default:
            return 1;  // numerical failure
    }
}

void stamp(wf::Json& doc) {
    if (g_deterministic) return;
    std::time_t now = std::time(nullptr);
    char buf[64];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    doc["generated_at"] = buf;
}

void write_document(const std::string& path, const std::string& kind, wf::Json payload) {
    wf::Json doc = wf::make_document(kind, std::move(payload));
    stamp(doc);
    wf::write_file_atomic(path, doc.dump(2) + "\n");
}

void write_failure(const std::string& path, const wf::Error& e) {
    if (path.empty()) return;
    try {
        wf::Json doc = wf::make_document(
            "diagnostics", wf::Json{{"error", wf::error_code_name(e.code())}, {"message", e.what()}});
        stamp(doc);
        wf::write_file_atomic(path, doc.dump(2) + "\n");
    } catch (...) {
    }
}

wf::Complex parse_complex_flag(const std::string& s) {
    std::istringstream in(s);
    double re = 0.0, im = 0.0;
    char comma = ',';
    if (!(in >> re)) throw wf::Error(wf::ErrorCode::ParseError, "bad complex literal " + s);
    if (in >> comma >> im && comma != ',')
        throw wf::Error(wf::ErrorCode::ParseError, "bad complex literal " + s);
    return {re, im};
}

}  // namespace

int main(int argc, char** argv) {
    if (const char* threads = std::getenv("WELDFACTOR_THREADS")) {
        int t = std::atoi(threads);
        if (t > 0) Eigen::setNbThreads(t);
    }

    CLI::App app{"Factor conformal maps on multiply connected domains into simply connected pieces"};
    app.require_subcommand(1);

    int order = 64;
    double tol = 1e-8;
    app.add_flag("--deterministic", g_deterministic, "suppress timestamps for byte-identical reruns");

    auto* cmd_fixture = app.add_subcommand("fixture", "emit a synthetic problem with known truth");
    int fx_n = 2;
    std::uint64_t fx_seed = 1;
    std::string fx_out, fx_truth;
    cmd_fixture->add_option("--n", fx_n, "number of boundary components");
    cmd_fixture->add_option("--seed", fx_seed, "fixture seed");
    cmd_fixture->add_option("--order", order, "series order");
    cmd_fixture->add_option("-o,--output", fx_out, "problem JSON path")->required();
    cmd_fixture->add_option("--truth", fx_truth, "ground-truth map JSON path");

    auto* cmd_riemann = app.add_subcommand("riemann", "Riemann map of one side of a curve");
    std::string rm_in, rm_out, rm_side = "interior", rm_centre = "0,0";
    cmd_riemann->add_option("-i,--input", rm_in, "curve JSON")->required();
    cmd_riemann->add_option("-o,--output", rm_out, "solution JSON")->required();
    cmd_riemann->add_option("--side", rm_side, "interior | exterior");
    cmd_riemann->add_option("--centre", rm_centre, "interior normalisation centre 're,im'");
    cmd_riemann->add_option("--order", order, "series order");
    cmd_riemann->add_option("--tol", tol, "relative tolerance");

    auto* cmd_weld = app.add_subcommand("weld", "solve the conformal welding problem");
    std::string wd_in, wd_out, wd_svg;
    cmd_weld->add_option("-i,--input", wd_in, "correspondence JSON")->required();
    cmd_weld->add_option("-o,--output", wd_out, "solution JSON")->required();
    cmd_weld->add_option("--svg", wd_svg, "optional weld-curve SVG path");
    cmd_weld->add_option("--order", order, "series order (default: derived from input)");
    cmd_weld->add_option("--tol", tol, "relative tolerance");

    auto* cmd_factor = app.add_subcommand("factor", "factor a conformal map, one factor per component");
    std::string fa_in, fa_out, fa_peel = "desc";
    cmd_factor->add_option("-i,--input", fa_in, "problem JSON")->required();
    cmd_factor->add_option("-o,--output", fa_out, "result JSON")->required();
    cmd_factor->add_option("--order", order, "series order");
    cmd_factor->add_option("--tol", tol, "relative tolerance");
    cmd_factor->add_option("--peel-order", fa_peel, "'desc' or comma-separated curve indices");

    auto* cmd_verify = app.add_subcommand("verify", "compare a factorisation against its problem");
    std::string vf_problem, vf_result, vf_out;
    cmd_verify->add_option("-i,--input", vf_problem, "problem JSON")->required();
    cmd_verify->add_option("-r,--result", vf_result, "factorisation result JSON")->required();
    cmd_verify->add_option("-o,--output", vf_out, "metrics JSON")->required();

    auto* cmd_plot = app.add_subcommand("plot", "render curves/domains/solutions as static SVG");
    std::string pl_in, pl_out;
    cmd_plot->add_option("-i,--input", pl_in, "input JSON")->required();
    cmd_plot->add_option("-o,--output", pl_out, "SVG path")->required();

    CLI11_PARSE(app, argc, argv);

    std::string failure_path;
    try {
        auto t0 = std::chrono::steady_clock::now();
        auto elapsed = [&] {
            return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        };

        if (*cmd_fixture) {
            failure_path = fx_out;
            wf::FixtureSpec spec;
            spec.n = fx_n;
            spec.seed = fx_seed;
            spec.order = order;
            wf::Fixture fx = wf::make_fixture(spec);
            write_document(fx_out, "problem", wf::to_json(fx.problem));
            if (!fx_truth.empty()) {
                wf::Json t{{"map", wf::to_json(fx.truth)},
                           {"label_permutation", fx.label_permutation}};
                write_document(fx_truth, "truth", std::move(t));
            }
            std::cout << "fixture n=" << fx_n << " seed=" << fx_seed
                      << " interior_samples=" << fx.problem.interior_samples.size() << " time="
                      << (g_deterministic ? std::string("-") : std::to_string(elapsed())) << "\n";
        } else if (*cmd_riemann) {
            failure_path = rm_out;
            auto payload = wf::open_document(wf::parse_file(rm_in), "curve");
            wf::AnalyticCurve curve = wf::curve_from_json(payload);
            wf::RiemannOptions opts;
            opts.order = order;
            opts.tol_rel = tol;
            wf::RiemannSolution sol = rm_side == "exterior"
                                          ? wf::riemann_exterior(curve, opts)
                                          : wf::riemann_interior(
                                                curve, wf::PlanePoint(parse_complex_flag(rm_centre)), opts);
            write_document(rm_out, "riemann_solution", wf::to_json(sol));
            std::cout << "riemann side=" << rm_side << " residual=" << sol.residual
                      << " newton=" << sol.newton_iterations << "\n";
        } else if (*cmd_weld) {
            failure_path = wd_out;
            auto payload = wf::open_document(wf::parse_file(wd_in), "correspondence");
            wf::WeldingProblem problem;
            problem.phi = wf::correspondence_from_json(payload);
            problem.options.tol_rel = tol;
            if (cmd_weld->count("--order")) problem.options.order = order;
            wf::WeldingSolution sol = wf::solve_welding(problem);
            write_document(wd_out, "welding_solution", wf::to_json(sol));
            if (!wd_svg.empty()) {
                std::vector<wf::PlotCurve> pcs{{sol.weld_curve, "weld"},
                                               {wf::AnalyticCurve::circle(0.0, 1.0), "unit circle"}};
                wf::write_file_atomic(wd_svg, wf::render_svg(pcs));
            }
            std::cout << "weld residual=" << sol.residual << " stages=" << sol.continuation_stages << "\n";
        } else if (*cmd_factor) {
            failure_path = fa_out;
            auto payload = wf::open_document(wf::parse_file(fa_in), "problem");
            wf::FactorizationProblem problem = wf::problem_from_json(payload);
            auto report = wf::validate_domain(problem.domain);
            if (!report.accepted()) {
                wf::Json doc = wf::make_document("diagnostics",
                                                 wf::Json{{"error", "DOMAIN_INVALID"},
                                                          {"validation", wf::to_json(report)}});
                stamp(doc);
                wf::write_file_atomic(fa_out, doc.dump(2) + "\n");
                std::cerr << "DOMAIN_INVALID\n";
                return 2;
            }
            wf::FactorizationOptions opts;
            opts.order = order;
            opts.tol_rel = tol;
            if (fa_peel != "desc") {
                std::istringstream in(fa_peel);
                std::string tok;
                while (std::getline(in, tok, ',')) opts.peel_order.push_back(std::stoi(tok));
            }
            wf::FactorizationResult result = wf::factorize(problem, opts);
            write_document(fa_out, "factorization_result", wf::to_json(result));
            std::cout << "factor n=" << problem.domain.curves.size()
                      << " moebius_fit=" << result.moebius_fit_residual << " time="
                      << (g_deterministic ? std::string("-") : std::to_string(elapsed())) << "\n";
        } else if (*cmd_verify) {
            failure_path = vf_out;
            auto problem = wf::problem_from_json(wf::open_document(wf::parse_file(vf_problem), "problem"));
            auto result = wf::factorization_result_from_json(
                wf::open_document(wf::parse_file(vf_result), "factorization_result"));
            wf::VerificationMetrics metrics = wf::verify_factorization(result, problem);
            write_document(vf_out, "verification", wf::to_json(metrics));
            std::cout << "verify max_error=" << metrics.max_interior_error
                      << " mean_error=" << metrics.mean_interior_error << "\n";
        } else if (*cmd_plot) {
            auto doc = wf::parse_file(pl_in);
            std::string kind = doc.value("kind", "");
            std::vector<wf::PlotCurve> pcs;
            if (kind == "curve") {
                pcs.push_back({wf::curve_from_json(doc.at("payload")), "0"});
            } else if (kind == "domain") {
                auto d = wf::domain_from_json(doc.at("payload"));
                for (size_t i = 0; i < d.curves.size(); ++i)
                    pcs.push_back({d.curves[i], std::to_string(i)});
            } else if (kind == "problem") {
                auto p = wf::problem_from_json(doc.at("payload"));
                for (size_t i = 0; i < p.domain.curves.size(); ++i)
                    pcs.push_back({p.domain.curves[i], std::to_string(i)});
            } else if (kind == "welding_solution") {
                auto s = wf::welding_solution_from_json(doc.at("payload"));
                pcs.push_back({s.weld_curve, "weld"});
                pcs.push_back({wf::AnalyticCurve::circle(0.0, 1.0), "unit circle"});
            } else {
                throw wf::Error(wf::ErrorCode::ParseError, "cannot plot document kind '" + kind + "'");
            }
            wf::write_file_atomic(pl_out, wf::render_svg(pcs));
            std::cout << "plot curves=" << pcs.size() << "\n";
        }
    } catch (const wf::Error& e) {
        int rc = classify_exit(e.code());
        if (rc == 1) write_failure(failure_path, e);
        std::cerr << wf::error_code_name(e.code()) << "\n";
        return rc;
    } catch (const std::exception& e) {
        std::cerr << "PARSE_ERROR\n";
        return 2;
    }
    return 0;
}
