#pragma once

// Matrix file format, canonical JSON serialization of results and run records.

#include "opineq/classifiers.hpp"
#include "opineq/inequalities.hpp"
#include "opineq/linalg.hpp"
#include "opineq/norms.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace opineq {

using Json = nlohmann::json;

inline constexpr const char* kToolVersion = "1.0.0";

/// {"rows": r, "cols": c, "entries": [...]} with real or [re, im] entries.
ComplexMatrix parse_matrix_file(std::string_view bytes);
ComplexMatrix read_matrix_file(const std::filesystem::path& path);

/// Entries always written as [re, im].
Json matrix_to_json(const ComplexMatrix& m);
Json vector_to_json(const ComplexVector& v);
Json complex_to_json(Complex z);
/// Non-finite reals become the strings "inf", "-inf" and "nan".
Json real_to_json(double x);

/// Sorted keys, no whitespace, reals with 17 significant digits.
std::string canonical_json(const Json& j);

Json to_json(const Budget& b);
Json to_json(const ClassificationReport& r);
Json to_json(const OptimizationResult& r);
Json to_json(const VerificationReport& r);
Json to_json(const SearchResult& r);
Json to_json(const GapResult& r);
Json to_json(const PenroseResiduals& r);

struct RunRecord {
  std::string command;
  Json arguments = Json::object();
  std::uint64_t seed = 0;
  Json tolerances = Json::object();
  Json result = Json::object();
  std::string timestamp;
  std::string tool_version = kToolVersion;
  /// Wall-clock measurements, kept out of the reproducible result payload.
  Json timing = Json::object();
};

Json to_json(const RunRecord& r);
RunRecord run_record_from_json(const Json& j);

/// ISO-8601 UTC with microseconds, e.g. 2026-01-02T03:04:05.123456Z.
std::string utc_timestamp();

/// Writes <timestamp>-<command>-<seed>.json into dir and returns its path.
/// A numeric suffix is appended when the name is taken. Fills an empty
/// timestamp with the current time.
std::filesystem::path write_report(RunRecord record, const std::filesystem::path& dir);

}  // namespace opineq
