#pragma once

#include <filesystem>
#include <string>

#include "wsvm/pipeline.hpp"
#include "wsvm/quality.hpp"

namespace wsvm {

inline constexpr int kReportSchemaVersion = 1;

/// Parsed report: quality metrics plus the optimization trace (empty for
/// `quality`-only reports). Wall time is not part of the document.
struct ReportDocument {
  QualityReport quality;
  RunTrace trace;
};

/// Pretty-printed JSON with a top-level "schema_version". Doubles round-trip
/// exactly.
std::string report_to_json(const QualityReport& quality, const RunTrace* trace = nullptr);

/// Throws ParseError on malformed input or a schema version mismatch.
ReportDocument report_from_json(const std::string& text);

void write_report(const std::filesystem::path& path, const QualityReport& quality, const RunTrace* trace = nullptr);

}  // namespace wsvm
