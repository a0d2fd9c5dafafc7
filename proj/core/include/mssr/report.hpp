#pragma once

#include <string>
#include <string_view>

#include "mssr/analysis.hpp"
#include "mssr/lemmas.hpp"

namespace mssr {

enum class ReportFormat { Json, Csv };

/// Full metadata (event, t, samples, seeds, reference, fit). Deterministic output.
std::string to_json(const ConvergenceReport& report);
ConvergenceReport convergence_report_from_json(std::string_view text);
/// Columns N,d,stderr; one row per grid point.
std::string to_csv(const ConvergenceReport& report);

std::string to_json(const LemmaReport& report);

/// Writes the report to `path` in the requested format.
void emit_report(const ConvergenceReport& report, ReportFormat format, const std::string& path);

}  // namespace mssr
