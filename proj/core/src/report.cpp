#include "listcombine/report.hpp"

#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "format.hpp"

namespace listcombine {

using nlohmann::json;

namespace {

constexpr const char* kSchemaVersion = "listcombine/1";

std::string fixed3(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return buf;
}

std::string fixed1(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.1f", v);
    return buf;
}

void pad_to(std::string& line, std::size_t width) {
    if (line.size() < width) line.append(width - line.size(), ' ');
}

json estimate_json(const EstimateReport& r) {
    return json{{"method", method_name(r.method)},
                {"estimate", r.estimate},
                {"std_error", r.std_error},
                {"ci_low", r.ci_low},
                {"ci_high", r.ci_high},
                {"n_used", r.n_used},
                {"alpha", r.alpha},
                {"diagnostics", r.diagnostics.names()}};
}

json placebo_json(const PlaceboReport& r) {
    return json{{"test", placebo_test_name(r.test)},
                {"statistic", r.statistic},
                {"std_error", r.std_error},
                {"p_value", r.p_value},
                {"null_value", r.null_value},
                {"n_used", r.n_used},
                {"n_treated", r.n_treated},
                {"n_control", r.n_control},
                {"diagnostics", r.diagnostics.names()}};
}

json exclusions_json(const ExclusionCounts& e) {
    return json{{"missing_field", e.missing_field},
                {"out_of_range", e.out_of_range},
                {"duplicate_id", e.duplicate_id},
                {"failed_attention", e.failed_attention}};
}

std::string diagnostics_csv(const Flags& flags) {
    std::string out;
    for (const std::string& name : flags.names()) {
        if (!out.empty()) out += '|';
        out += name;
    }
    return out;
}

} // namespace

ReportFormat parse_report_format(const std::string& name) {
    if (name == "text") return ReportFormat::Text;
    if (name == "json") return ReportFormat::Json;
    if (name == "csv") return ReportFormat::Csv;
    throw OutOfDomainError("unknown report format '" + name + "'");
}

std::string render_report(std::span<const EstimateReport> reports, ReportFormat format) {
    if (reports.empty()) {
        throw EmptyInputError("render_report needs at least one report");
    }
    switch (format) {
        case ReportFormat::Json: {
            if (reports.size() == 1) {
                json obj = estimate_json(reports.front());
                obj["schema_version"] = kSchemaVersion;
                return obj.dump(2) + "\n";
            }
            json obj{{"schema_version", kSchemaVersion}};
            json arr = json::array();
            for (const EstimateReport& r : reports) arr.push_back(estimate_json(r));
            obj["reports"] = std::move(arr);
            return obj.dump(2) + "\n";
        }
        case ReportFormat::Csv: {
            std::ostringstream out;
            out << "method,estimate,std_error,ci_low,ci_high,n_used,alpha,diagnostics\n";
            for (const EstimateReport& r : reports) {
                out << method_name(r.method) << ',' << detail::format_double(r.estimate) << ','
                    << detail::format_double(r.std_error) << ','
                    << detail::format_double(r.ci_low) << ','
                    << detail::format_double(r.ci_high) << ',' << r.n_used << ','
                    << detail::format_double(r.alpha) << ',' << diagnostics_csv(r.diagnostics)
                    << '\n';
            }
            return out.str();
        }
        case ReportFormat::Text: {
            std::ostringstream out;
            out << "method          estimate      SE     CI low    CI high   n\n";
            for (const EstimateReport& r : reports) {
                std::string line = method_name(r.method);
                pad_to(line, 16);
                line += fixed3(r.estimate);
                pad_to(line, 26);
                line += fixed3(r.std_error);
                pad_to(line, 36);
                line += fixed3(r.ci_low);
                pad_to(line, 46);
                line += fixed3(r.ci_high);
                pad_to(line, 56);
                line += std::to_string(r.n_used);
                const auto names = r.diagnostics.names();
                if (!names.empty()) {
                    line += "   [";
                    for (std::size_t i = 0; i < names.size(); ++i) {
                        if (i) line += ' ';
                        line += names[i];
                    }
                    line += ']';
                }
                out << line << '\n';
            }
            return out.str();
        }
    }
    return {};
}

std::string render_estimates(std::span<const QuestionEstimates> rows, ReportFormat format) {
    if (rows.empty()) {
        throw EmptyInputError("render_estimates needs at least one question");
    }
    switch (format) {
        case ReportFormat::Json: {
            json obj{{"schema_version", kSchemaVersion}};
            json arr = json::array();
            for (const QuestionEstimates& q : rows) {
                arr.push_back(json{{"question", q.question},
                                   {"n_used", q.direct.n_used},
                                   {"exclusions", exclusions_json(q.excluded)},
                                   {"direct", estimate_json(q.direct)},
                                   {"standard_list", estimate_json(q.standard_list)},
                                   {"combined_list", estimate_json(q.combined)},
                                   {"variance_reduction", q.reduction}});
            }
            obj["questions"] = std::move(arr);
            return obj.dump(2) + "\n";
        }
        case ReportFormat::Csv: {
            std::ostringstream out;
            out << "question,method,estimate,std_error,ci_low,ci_high,n_used,"
                   "variance_reduction,diagnostics\n";
            for (const QuestionEstimates& q : rows) {
                const EstimateReport* reports[3] = {&q.direct, &q.standard_list, &q.combined};
                for (const EstimateReport* r : reports) {
                    out << detail::csv_field(q.question) << ',' << method_name(r->method) << ','
                        << detail::format_double(r->estimate) << ','
                        << detail::format_double(r->std_error) << ','
                        << detail::format_double(r->ci_low) << ','
                        << detail::format_double(r->ci_high) << ',' << r->n_used << ','
                        << detail::format_double(q.reduction) << ','
                        << diagnostics_csv(r->diagnostics) << '\n';
                }
            }
            return out.str();
        }
        case ReportFormat::Text: {
            std::size_t name_width = 8;
            for (const QuestionEstimates& q : rows) {
                name_width = std::max(name_width, q.question.size());
            }
            name_width += 2;
            std::ostringstream out;
            std::string head = "Question";
            pad_to(head, name_width);
            head += "Direct      SE        Standard    SE        Combined    SE        "
                    "% Reduction";
            out << head << '\n';
            for (const QuestionEstimates& q : rows) {
                std::string line = q.question;
                pad_to(line, name_width);
                const std::size_t base = name_width;
                line += fixed3(q.direct.estimate);
                pad_to(line, base + 12);
                line += fixed3(q.direct.std_error);
                pad_to(line, base + 22);
                line += fixed3(q.standard_list.estimate);
                pad_to(line, base + 34);
                line += fixed3(q.standard_list.std_error);
                pad_to(line, base + 44);
                line += fixed3(q.combined.estimate);
                pad_to(line, base + 56);
                line += fixed3(q.combined.std_error);
                pad_to(line, base + 66);
                line += fixed1(q.reduction * 100.0);
                out << line << '\n';
            }
            std::string notes;
            for (const QuestionEstimates& q : rows) {
                if (q.excluded.total() != 0) {
                    notes += q.question + ": " + std::to_string(q.excluded.total()) +
                             " record(s) excluded\n";
                }
            }
            if (!notes.empty()) out << '\n' << notes;
            return out.str();
        }
    }
    return {};
}

std::string render_placebo(std::span<const PlaceboRow> rows,
                           const std::optional<FisherResult>& fisher,
                           std::span<const std::string> dropped, ReportFormat format) {
    if (rows.empty()) {
        throw EmptyInputError("render_placebo needs at least one row");
    }
    switch (format) {
        case ReportFormat::Json: {
            json obj{{"schema_version", kSchemaVersion}};
            json arr = json::array();
            for (const PlaceboRow& r : rows) {
                json item = placebo_json(r.report);
                item["question"] = r.question;
                item["ok"] = r.ok;
                if (!r.note.empty()) item["note"] = r.note;
                arr.push_back(std::move(item));
            }
            obj["questions"] = std::move(arr);
            if (fisher) {
                obj["fisher"] = json{{"statistic", fisher->statistic},
                                     {"df", fisher->df},
                                     {"p_value", fisher->p_value},
                                     {"dropped", dropped}};
            }
            return obj.dump(2) + "\n";
        }
        case ReportFormat::Csv: {
            std::ostringstream out;
            out << "question,test,statistic,std_error,p_value,null_value,n_treated,"
                   "n_control,n_used,diagnostics,note\n";
            for (const PlaceboRow& r : rows) {
                out << detail::csv_field(r.question) << ',' << placebo_test_name(r.report.test)
                    << ',' << detail::format_double(r.report.statistic) << ','
                    << detail::format_double(r.report.std_error) << ','
                    << detail::format_double(r.report.p_value) << ','
                    << detail::format_double(r.report.null_value) << ',' << r.report.n_treated
                    << ',' << r.report.n_control << ',' << r.report.n_used << ','
                    << diagnostics_csv(r.report.diagnostics) << ','
                    << detail::csv_field(r.note) << '\n';
            }
            return out.str();
        }
        case ReportFormat::Text: {
            std::size_t name_width = 8;
            for (const PlaceboRow& r : rows) {
                name_width = std::max(name_width, r.question.size());
            }
            name_width += 2;
            std::ostringstream out;
            std::string head = "Question";
            pad_to(head, name_width);
            head += "Estimate    SE        p-value   n";
            out << head << '\n';
            for (const PlaceboRow& r : rows) {
                std::string line = r.question;
                pad_to(line, name_width);
                if (!r.ok) {
                    line += "-- " + r.note;
                    out << line << '\n';
                    continue;
                }
                line += fixed3(r.report.statistic);
                pad_to(line, name_width + 12);
                line += fixed3(r.report.std_error);
                pad_to(line, name_width + 22);
                line += fixed3(r.report.p_value);
                pad_to(line, name_width + 32);
                line += std::to_string(r.report.n_used);
                line += "  (T " + std::to_string(r.report.n_treated) + " / C " +
                        std::to_string(r.report.n_control) + ")";
                out << line << '\n';
            }
            if (fisher) {
                out << "\nFisher joint test: statistic " << fixed3(fisher->statistic) << ", df "
                    << fisher->df << ", p " << fixed3(fisher->p_value);
                if (!dropped.empty()) {
                    out << "  (dropped:";
                    for (const std::string& d : dropped) out << ' ' << d;
                    out << ')';
                }
                out << '\n';
            }
            return out.str();
        }
    }
    return {};
}

std::string render_cross_study(std::span<const CrossStudyRow> rows, ReportFormat format) {
    if (rows.empty()) {
        throw EmptyInputError("render_cross_study needs at least one row");
    }
    switch (format) {
        case ReportFormat::Json: {
            json obj{{"schema_version", kSchemaVersion}};
            json arr = json::array();
            for (const CrossStudyRow& r : rows) {
                json item = placebo_json(r.report);
                item["question"] = r.question;
                item["method"] = method_name(r.method);
                arr.push_back(std::move(item));
            }
            obj["differences"] = std::move(arr);
            return obj.dump(2) + "\n";
        }
        case ReportFormat::Csv: {
            std::ostringstream out;
            out << "question,method,difference,std_error,p_value,n_a,n_b\n";
            for (const CrossStudyRow& r : rows) {
                out << detail::csv_field(r.question) << ',' << method_name(r.method) << ','
                    << detail::format_double(r.report.statistic) << ','
                    << detail::format_double(r.report.std_error) << ','
                    << detail::format_double(r.report.p_value) << ',' << r.report.n_treated
                    << ',' << r.report.n_control << '\n';
            }
            return out.str();
        }
        case ReportFormat::Text: {
            std::size_t name_width = 8;
            for (const CrossStudyRow& r : rows) {
                name_width = std::max(name_width, r.question.size());
            }
            name_width += 2;
            std::ostringstream out;
            std::string head = "Question";
            pad_to(head, name_width);
            head += "Method          Difference  SE        p-value";
            out << head << '\n';
            for (const CrossStudyRow& r : rows) {
                std::string line = r.question;
                pad_to(line, name_width);
                line += method_name(r.method);
                pad_to(line, name_width + 16);
                line += fixed3(r.report.statistic);
                pad_to(line, name_width + 28);
                line += fixed3(r.report.std_error);
                pad_to(line, name_width + 38);
                line += fixed3(r.report.p_value);
                out << line << '\n';
            }
            return out.str();
        }
    }
    return {};
}

} // namespace listcombine
