#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "listcombine/data.hpp"
#include "listcombine/estimators.hpp"
#include "listcombine/placebo.hpp"

namespace listcombine {

enum class ReportFormat { Text, Json, Csv };

/// Parses "text" | "json" | "csv"; throws OutOfDomainError otherwise.
ReportFormat parse_report_format(const std::string& name);

/// All three prevalence estimates for one question, plus the variance
/// reduction of the combined over the standard list estimator.
struct QuestionEstimates {
    std::string question;
    EstimateReport direct;
    EstimateReport standard_list;
    EstimateReport combined;
    double reduction = 0.0; // fraction, not percent
    ExclusionCounts excluded;
};

/// One placebo-test line. ok is false when the test could not run (for
/// example, too few confessors); note carries the reason.
struct PlaceboRow {
    std::string question;
    bool ok = true;
    std::string note;
    PlaceboReport report;
};

struct CrossStudyRow {
    std::string question;
    Method method = Method::Direct;
    PlaceboReport report;
};

/// Renders a flat collection of estimate reports. JSON output is versioned
/// ("listcombine/1"); a single report renders as one object carrying the
/// version, several render under a "reports" array. Text prints three
/// decimals; JSON and CSV keep full precision.
std::string render_report(std::span<const EstimateReport> reports, ReportFormat format);

/// The three-estimator prevalence table: one row per question with columns
/// Direct, Standard List, Combined List and the percent reduction in
/// sampling variance.
std::string render_estimates(std::span<const QuestionEstimates> rows, ReportFormat format);

/// Placebo-test table: statistic / SE / p / n per question, with an optional
/// Fisher's-method combination across questions (dropped lists the questions
/// a degenerate cell excluded from the combination).
std::string render_placebo(std::span<const PlaceboRow> rows,
                           const std::optional<FisherResult>& fisher,
                           std::span<const std::string> dropped, ReportFormat format);

/// Study-A-minus-study-B differences per question and method.
std::string render_cross_study(std::span<const CrossStudyRow> rows, ReportFormat format);

} // namespace listcombine
