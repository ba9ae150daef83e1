#pragma once

#include <string>

#include <json.hpp>

#include "anisotetra/geom.hpp"
#include "anisotetra/verify.hpp"

namespace anisotetra {

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kSweepCsvHeader =
    "# anisotetra sweep csv v1\n"
    "level,alpha1,alpha2,alpha3,R_T,h_T,max_ratio,max_squeeze,argmax_field,indeterminate,"
    "refinement_warning\n";

using Json = nlohmann::ordered_json;

/// %.17g; "inf" / "-inf" / "nan" for non-finite values.
std::string format_number(double x);

/// Non-finite doubles become the strings "inf", "-inf" and "nan".
Json number(double x);

Json to_json(const Tetrahedron& t);
Json to_json(const Classification& c);
Json to_json(const StandardPosition& sp);
Json to_json(const TransformMatrices& m);
Json to_json(const GeometryReport& g);
Json to_json(const MacConstants& c);
Json to_json(const ErrorRatioResult& r);
Json to_json(const SweepResult& s);
Json to_json(const EquivalenceReport& r);
Json to_json(const MacDirection& d);
Json to_json(const MacReport& r);
Json to_json(const ConvergenceResult& r);

/// Envelope shared by every command.
Json make_report(const std::string& command, const Json& config, const Json& results,
                 const Json& warnings, std::uint64_t seed);

std::string sweep_csv(const SweepResult& s);

}  // namespace anisotetra
