#pragma once

#include <string>

#include <json.hpp>

#include "weldfactor/factorize.hpp"
#include "weldfactor/fixtures.hpp"

namespace weldfactor {

// Schema version 1: complex numbers as [re, im] arrays; curves as
// {coeffs, k_min, orientation}; correspondences as {periodic_coeffs, k_min,
// direction}; maps as tagged objects; the point at infinity as "infinity".
using Json = nlohmann::ordered_json;

constexpr int kSchemaVersion = 1;

Json to_json(Complex z);
Json to_json(const PlanePoint& p);
Json to_json(const AnalyticCurve& c);
Json to_json(const DomainSpec& d);
Json to_json(const BoundaryCorrespondence& bc);
Json to_json(const ConformalMap& m);
Json to_json(const FactorizationProblem& p);
Json to_json(const WeldingSolution& s);
Json to_json(const RiemannSolution& s);
Json to_json(const FactorizationResult& r);
Json to_json(const VerificationMetrics& m);
Json to_json(const ValidationReport& r);

Complex complex_from_json(const Json& j);
PlanePoint plane_point_from_json(const Json& j);
AnalyticCurve curve_from_json(const Json& j);
DomainSpec domain_from_json(const Json& j);
BoundaryCorrespondence correspondence_from_json(const Json& j);
ConformalMap map_from_json(const Json& j);
FactorizationProblem problem_from_json(const Json& j);
WeldingSolution welding_solution_from_json(const Json& j);
FactorizationResult factorization_result_from_json(const Json& j);

/// Wrap a payload with schema_version and document kind.
Json make_document(const std::string& kind, Json payload);

/// Parse and check schema_version + kind; throws ParseError.
Json open_document(const Json& doc, const std::string& kind);

Json parse_file(const std::string& path);

/// Atomic write: temp file in the same directory, then rename.
void write_file_atomic(const std::string& path, const std::string& contents);

}  // namespace weldfactor
