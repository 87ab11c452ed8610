#include "listcombine/csv.hpp"

#include <charconv>
#include <fstream>
#include <ostream>
#include <unordered_map>

#include "format.hpp"

namespace listcombine {

namespace {

// Splits one CSV line; supports double-quoted fields with "" escapes.
std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else if (c != '\r') {
            field += c;
        }
    }
    fields.push_back(std::move(field));
    return fields;
}

bool is_missing(const std::string& s) {
    return s.empty() || s == "NA" || s == "na" || s == "NaN" || s == "nan";
}

std::optional<int> parse_int_cell(const std::string& s, std::size_t row,
                                  const std::string& column) {
    if (is_missing(s)) return std::nullopt;
    int value = 0;
    const char* begin = s.data();
    const char* end = begin + s.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end) {
        throw UnparseableCellError("row " + std::to_string(row) + ", column '" + column +
                                   "': cannot parse '" + s + "' as an integer");
    }
    return value;
}

struct ColumnIndex {
    int respondent_id = -1;
    int question_id = -1;
    int study = -1;
    int y_direct = -1;
    int z_treat = -1;
    int v_count = -1;
    int attention = -1;
};

std::string field_or_empty(const std::vector<std::string>& fields, int idx) {
    if (idx < 0 || static_cast<std::size_t>(idx) >= fields.size()) return {};
    return fields[static_cast<std::size_t>(idx)];
}

} // namespace

std::vector<RawRecord> load_csv(std::istream& input, const ColumnMapping& columns) {
    std::string line;
    if (!std::getline(input, line)) {
        throw EmptyFileError("input has no header row");
    }
    const std::vector<std::string> header = split_line(line);

    std::unordered_map<std::string, int> pos;
    for (std::size_t i = 0; i < header.size(); ++i) {
        pos.emplace(header[i], static_cast<int>(i));
    }
    auto find = [&](const std::string& name) {
        auto it = pos.find(name);
        return it == pos.end() ? -1 : it->second;
    };

    ColumnIndex idx;
    idx.respondent_id = find(columns.respondent_id);
    idx.question_id = find(columns.question_id);
    idx.study = find(columns.study);
    idx.y_direct = find(columns.y_direct);
    idx.z_treat = find(columns.z_treat);
    idx.v_count = find(columns.v_count);
    idx.attention = find(columns.attention);

    for (const auto& [role, name] : {std::pair{"y_direct", columns.y_direct},
                                     std::pair{"z_treat", columns.z_treat},
                                     std::pair{"v_count", columns.v_count}}) {
        if (find(name) < 0) {
            throw MissingColumnError(std::string("required column '") + name + "' (" + role +
                                     ") not found in header");
        }
    }

    std::vector<RawRecord> out;
    std::size_t row = 1;
    while (std::getline(input, line)) {
        ++row;
        if (line.empty() || (line.size() == 1 && line[0] == '\r')) continue;
        const std::vector<std::string> fields = split_line(line);

        RawRecord rec;
        rec.id = field_or_empty(fields, idx.respondent_id);
        if (rec.id.empty()) rec.id = "row" + std::to_string(row);
        const std::string q = field_or_empty(fields, idx.question_id);
        rec.question = q.empty() ? "q1" : q;
        rec.study = field_or_empty(fields, idx.study);
        rec.y_direct = parse_int_cell(field_or_empty(fields, idx.y_direct), row, columns.y_direct);
        rec.z_treat = parse_int_cell(field_or_empty(fields, idx.z_treat), row, columns.z_treat);
        rec.v_count = parse_int_cell(field_or_empty(fields, idx.v_count), row, columns.v_count);
        if (idx.attention >= 0) {
            auto a = parse_int_cell(field_or_empty(fields, idx.attention), row, columns.attention);
            if (a.has_value()) rec.attention_passed = (*a != 0);
        }
        out.push_back(std::move(rec));
    }
    if (out.empty()) {
        throw EmptyFileError("input has a header but no data rows");
    }
    return out;
}

std::vector<RawRecord> load_csv(const std::string& path, const ColumnMapping& columns) {
    std::ifstream in(path);
    if (!in) {
        throw EmptyFileError("cannot open '" + path + "'");
    }
    return load_csv(in, columns);
}

void write_dataset_csv(std::ostream& out, const Dataset& dataset) {
    out << "respondent_id,question_id,study,y_direct,z_treat,v_count\n";
    const std::string q = detail::csv_field(dataset.question_id);
    for (const Respondent& r : dataset.records) {
        out << detail::csv_field(r.id) << ',' << q << ',' << detail::csv_field(r.study) << ','
            << r.y_direct << ',' << r.z_treat << ',' << r.v_count << '\n';
    }
}

void write_dataset_csv(const std::string& path, const Dataset& dataset) {
    std::ofstream out(path);
    if (!out) {
        throw EmptyFileError("cannot open '" + path + "' for writing");
    }
    write_dataset_csv(out, dataset);
}

void write_power_csv(std::ostream& out, const std::vector<PowerCell>& cells) {
    out << "n_yes,violation_type,share_or_wsuccess,replicates,power,seed\n";
    for (const PowerCell& c : cells) {
        out << c.n_yes << ',' << violation_name(c.violation) << ','
            << detail::format_double(c.share_or_rate) << ',' << c.replicates << ','
            << detail::format_double(c.power) << ',' << c.seed << '\n';
    }
}

std::vector<std::string> question_order(const std::vector<RawRecord>& records) {
    std::vector<std::string> order;
    std::unordered_map<std::string, bool> seen;
    for (const RawRecord& r : records) {
        if (!seen.contains(r.question)) {
            seen.emplace(r.question, true);
            order.push_back(r.question);
        }
    }
    return order;
}

} // namespace listcombine
