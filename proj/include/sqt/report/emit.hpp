#ifndef SQT_REPORT_EMIT_HPP
#define SQT_REPORT_EMIT_HPP

#include <set>
#include <string>

#include "sqt/report/tables.hpp"

namespace sqt {

enum class OutputFormat { Text, Csv, Svg };

std::optional<OutputFormat> output_format_from(const std::string& s);

/// All emitters produce deterministic bytes for fixed input.
std::string emit_accuracy_text(const AccuracyTable& table);
std::string emit_accuracy_csv(const AccuracyTable& table);

/// Grouped bar chart for one direction: one group per model, one bar per
/// strategy, heights proportional to correct counts.
std::string emit_accuracy_svg(const AccuracyTable& table, const std::string& direction);

std::string emit_error_text(const ErrorReportTables& report);
std::string emit_error_csv(const ErrorReportTables& report);
std::string emit_cooccurrence_csv(const ErrorReportTables& report);
std::string emit_category_csv(const ErrorReportTables& report);

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Writes the requested formats under out_dir; returns the files written.
std::vector<std::string> emit_outputs(const AccuracyTable& accuracy,
                                      const ErrorReportTables& errors,
                                      const std::set<OutputFormat>& formats,
                                      const std::string& out_dir);

} // namespace sqt

#endif
