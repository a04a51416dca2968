#include "weldfactor/json_io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace weldfactor {

Json to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Json to_json(const PlanePoint& p) {
    if (p.is_infinite()) return Json("infinity");
    return to_json(p.value());
}

namespace {

Json coeff_array(const std::vector<Complex>& coeffs) {
    Json arr = Json::array();
    for (const auto& c : coeffs) arr.push_back(to_json(c));
    return arr;
}

std::vector<Complex> coeff_vector(const Json& j) {
    std::vector<Complex> out;
    for (const auto& e : j) out.push_back(complex_from_json(e));
    return out;
}

}  // namespace

Json to_json(const AnalyticCurve& c) {
    return Json{{"coeffs", coeff_array(c.coeffs())},
                {"k_min", c.k_min()},
                {"orientation", c.domain_side() == CurveSide::Left ? "left" : "right"}};
}

Json to_json(const DomainSpec& d) {
    Json curves = Json::array();
    for (const auto& c : d.curves) curves.push_back(to_json(c));
    return Json{{"curves", curves}, {"base_point", to_json(d.base_point)}};
}

Json to_json(const BoundaryCorrespondence& bc) {
    return Json{{"periodic_coeffs", coeff_array(bc.periodic_coeffs())},
                {"k_min", bc.k_min()},
                {"direction", bc.forward() ? "forward" : "backward"}};
}

Json to_json(const ConformalMap& m) {
    Json j;
    if (const auto* mb = m.as<MoebiusMap>()) {
        j = Json{{"kind", "moebius"},
                 {"a", to_json(mb->a)},
                 {"b", to_json(mb->b)},
                 {"c", to_json(mb->c)},
                 {"d", to_json(mb->d)}};
    } else if (const auto* ps = m.as<PowerSeriesMap>()) {
        j = Json{{"kind", "power"}, {"coeffs", coeff_array(ps->coeffs)}};
    } else if (const auto* ls = m.as<LaurentSeriesMap>()) {
        j = Json{{"kind", "laurent"}, {"lambda", to_json(ls->lambda)}, {"coeffs", coeff_array(ls->coeffs)}};
    } else if (const auto* comp = m.as<CompositeMap>()) {
        Json factors = Json::array();
        for (const auto& f : comp->factors)
            factors.push_back(Json{{"map", to_json(*f.map)}, {"inverted", f.inverted}});
        j = Json{{"kind", "composite"}, {"factors", factors}};
    }
    if (m.domain()) j["domain"] = to_json(*m.domain());
    return j;
}

Json to_json(const FactorizationProblem& p) {
    Json bd = Json::array();
    for (const auto& d : p.boundary_data)
        bd.push_back(Json{{"target_curve", to_json(d.target)}, {"correspondence", to_json(d.w)}});
    Json samples = Json::array();
    for (const auto& [z, gz] : p.interior_samples)
        samples.push_back(Json::array({to_json(z), to_json(gz)}));
    return Json{{"domain", to_json(p.domain)}, {"boundary_data", bd}, {"interior_samples", samples}};
}

Json to_json(const WeldingSolution& s) {
    return Json{{"f_int", to_json(ConformalMap(s.f_int))},
                {"f_ext", to_json(ConformalMap(s.f_ext))},
                {"weld_curve", to_json(s.weld_curve)},
                {"residual", s.residual},
                {"newton_iterations", s.newton_iterations},
                {"continuation_stages", s.continuation_stages}};
}

Json to_json(const RiemannSolution& s) {
    return Json{{"map", to_json(s.map)},
                {"correspondence", to_json(s.correspondence)},
                {"residual", s.residual},
                {"newton_iterations", s.newton_iterations},
                {"continuation_stages", s.continuation_stages}};
}

Json to_json(const FactorizationResult& r) {
    Json factors = Json::array();
    for (const auto& f : r.factors) factors.push_back(to_json(f));
    Json diags = Json::array();
    for (const auto& d : r.diagnostics)
        diags.push_back(Json{{"original_index", d.original_index},
                             {"connectivity_before", d.connectivity_before},
                             {"welding_residual", d.welding_residual},
                             {"riemann_interior_iterations", d.riemann_interior_iterations},
                             {"riemann_exterior_iterations", d.riemann_exterior_iterations},
                             {"phi_projection_defect", d.phi_projection_defect},
                             {"phi_monotonicity_margin", d.phi_monotonicity_margin},
                             {"curve_projection_defect", d.curve_projection_defect}});
    return Json{{"factors", factors},
                {"diagnostics", diags},
                {"connectivity_trace", r.connectivity_trace},
                {"moebius_fit_residual", r.moebius_fit_residual}};
}

Json to_json(const VerificationMetrics& m) {
    Json reports = Json::array();
    for (const auto& rep : m.factor_reports)
        reports.push_back(Json{{"pass", rep.pass},
                               {"probes", rep.probes},
                               {"winding_failures", rep.winding_failures},
                               {"min_derivative", rep.min_derivative},
                               {"worst_winding_defect", rep.worst_winding_defect}});
    return Json{{"max_interior_error", m.max_interior_error},
                {"mean_interior_error", m.mean_interior_error},
                {"boundary_defects", m.boundary_defects},
                {"factor_injectivity", reports}};
}

Json to_json(const ValidationReport& r) {
    Json checks = Json::array();
    for (const auto& c : r.checks)
        checks.push_back(Json{{"name", c.name}, {"pass", c.pass}, {"margin", c.margin}, {"detail", c.detail}});
    return Json{{"accepted", r.accepted()}, {"checks", checks}};
}

Complex complex_from_json(const Json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw Error(ErrorCode::ParseError, "complex number must be [re, im]");
    return Complex(j[0].get<double>(), j[1].get<double>());
}

PlanePoint plane_point_from_json(const Json& j) {
    if (j.is_string() && j.get<std::string>() == "infinity") return PlanePoint::infinity();
    return PlanePoint(complex_from_json(j));
}

AnalyticCurve curve_from_json(const Json& j) {
    if (!j.contains("coeffs") || !j.contains("k_min") || !j.contains("orientation"))
        throw Error(ErrorCode::ParseError, "curve needs coeffs, k_min, orientation");
    CurveSide side = j["orientation"].get<std::string>() == "left" ? CurveSide::Left : CurveSide::Right;
    return AnalyticCurve(j["k_min"].get<int>(), coeff_vector(j["coeffs"]), side);
}

DomainSpec domain_from_json(const Json& j) {
    DomainSpec d;
    for (const auto& c : j.at("curves")) d.curves.push_back(curve_from_json(c));
    d.base_point = plane_point_from_json(j.at("base_point"));
    return d;
}

BoundaryCorrespondence correspondence_from_json(const Json& j) {
    bool forward = !j.contains("direction") || j["direction"].get<std::string>() == "forward";
    return BoundaryCorrespondence(j.at("k_min").get<int>(), coeff_vector(j.at("periodic_coeffs")), forward);
}

ConformalMap map_from_json(const Json& j) {
    std::string kind = j.at("kind").get<std::string>();
    ConformalMap m;
    if (kind == "moebius") {
        // Stored coefficients are already normalized; assign directly so the
        // round trip is bit-exact (the constructor would renormalize).
        MoebiusMap mb;
        mb.a = complex_from_json(j.at("a"));
        mb.b = complex_from_json(j.at("b"));
        mb.c = complex_from_json(j.at("c"));
        mb.d = complex_from_json(j.at("d"));
        m = ConformalMap(mb);
    } else if (kind == "power") {
        m = ConformalMap(PowerSeriesMap(coeff_vector(j.at("coeffs"))));
    } else if (kind == "laurent") {
        m = ConformalMap(LaurentSeriesMap(complex_from_json(j.at("lambda")), coeff_vector(j.at("coeffs"))));
    } else if (kind == "composite") {
        CompositeMap comp;
        for (const auto& f : j.at("factors"))
            comp.factors.push_back({std::make_shared<ConformalMap>(map_from_json(f.at("map"))),
                                    f.value("inverted", false)});
        m = ConformalMap(std::move(comp));
    } else {
        throw Error(ErrorCode::ParseError, "unknown map kind " + kind);
    }
    if (j.contains("domain")) m = m.with_domain(domain_from_json(j["domain"]));
    return m;
}

FactorizationProblem problem_from_json(const Json& j) {
    FactorizationProblem p;
    p.domain = domain_from_json(j.at("domain"));
    for (const auto& bd : j.at("boundary_data"))
        p.boundary_data.push_back(
            {curve_from_json(bd.at("target_curve")), correspondence_from_json(bd.at("correspondence"))});
    if (j.contains("interior_samples"))
        for (const auto& s : j["interior_samples"])
            p.interior_samples.emplace_back(complex_from_json(s.at(0)), complex_from_json(s.at(1)));
    return p;
}

WeldingSolution welding_solution_from_json(const Json& j) {
    WeldingSolution s;
    ConformalMap fi = map_from_json(j.at("f_int"));
    ConformalMap fe = map_from_json(j.at("f_ext"));
    const auto* ps = fi.as<PowerSeriesMap>();
    const auto* ls = fe.as<LaurentSeriesMap>();
    if (!ps || !ls) throw Error(ErrorCode::ParseError, "welding solution needs power + laurent maps");
    s.f_int = *ps;
    s.f_ext = *ls;
    s.weld_curve = curve_from_json(j.at("weld_curve"));
    s.residual = j.value("residual", 0.0);
    return s;
}

FactorizationResult factorization_result_from_json(const Json& j) {
    FactorizationResult r;
    for (const auto& f : j.at("factors")) r.factors.push_back(map_from_json(f));
    if (j.contains("connectivity_trace"))
        r.connectivity_trace = j["connectivity_trace"].get<std::vector<int>>();
    r.moebius_fit_residual = j.value("moebius_fit_residual", 0.0);
    return r;
}

Json make_document(const std::string& kind, Json payload) {
    Json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["kind"] = kind;
    doc["payload"] = std::move(payload);
    return doc;
}

Json open_document(const Json& doc, const std::string& kind) {
    if (!doc.contains("schema_version") || doc["schema_version"].get<int>() != kSchemaVersion)
        throw Error(ErrorCode::ParseError, "unsupported schema_version");
    if (!doc.contains("kind") || doc["kind"].get<std::string>() != kind)
        throw Error(ErrorCode::ParseError, "expected document kind " + kind);
    return doc.at("payload");
}

Json parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
    try {
        return Json::parse(in);
    } catch (const std::exception& e) {
        throw Error(ErrorCode::ParseError, e.what());
    }
}

void write_file_atomic(const std::string& path, const std::string& contents) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorCode::ParseError, "cannot write " + tmp);
        out << contents;
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw Error(ErrorCode::ParseError, "cannot rename into " + path);
}

}  // namespace weldfactor
