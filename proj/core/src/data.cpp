#include "listcombine/data.hpp"

#include <unordered_set>

namespace listcombine {

void ListDesign::validate() const {
    if (j_items < 1) {
        throw DesignInvalidError("list design needs at least one non-sensitive item");
    }
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw DesignInvalidError("alpha must lie strictly between 0 and 1");
    }
}

ValidationResult validate(std::span<const RawRecord> records, const ListDesign& design,
                          const std::string& question_id) {
    design.validate();

    std::string target = question_id;
    if (target.empty()) {
        for (const RawRecord& r : records) {
            if (target.empty()) {
                target = r.question;
            } else if (r.question != target) {
                throw DesignInvalidError(
                    "records span multiple questions; pass an explicit question_id");
            }
        }
        if (target.empty()) target = "q1";
    }

    ValidationResult out;
    out.dataset.design = design;
    out.dataset.question_id = target;

    std::unordered_set<std::string> seen_ids;
    for (const RawRecord& r : records) {
        if (!question_id.empty() && r.question != target) continue;

        if (r.attention_passed.has_value() && !*r.attention_passed) {
            ++out.excluded.failed_attention;
            continue;
        }
        if (!r.y_direct || !r.z_treat || !r.v_count) {
            ++out.excluded.missing_field;
            continue;
        }
        const int y = *r.y_direct;
        const int z = *r.z_treat;
        const int v = *r.v_count;
        if (y < 0 || y > 1 || z < 0 || z > 1 || v < 0 || v > design.j_items + z) {
            ++out.excluded.out_of_range;
            continue;
        }
        if (!r.id.empty() && !seen_ids.insert(r.id).second) {
            ++out.excluded.duplicate_id;
            continue;
        }
        out.dataset.records.push_back(Respondent{r.id, y, z, v, r.study});
    }

    if (out.dataset.records.empty()) {
        throw AllRecordsExcludedError("no record passed validation for question '" + target + "'");
    }
    return out;
}

double CellSummary::Cell::mean() const {
    if (n == 0) throw DegenerateCellsError("mean of empty cell");
    return sum / static_cast<double>(n);
}

double CellSummary::Cell::variance() const {
    if (n < 2) throw DegenerateCellsError("variance undefined for cell with fewer than 2 records");
    const double nn = static_cast<double>(n);
    double v = (sum_sq - sum * sum / nn) / (nn - 1.0);
    return v < 0.0 ? 0.0 : v;
}

void CellSummary::add(int z, int y, double v) {
    Cell& c = cells_[z][y];
    ++c.n;
    c.sum += v;
    c.sum_sq += v * v;
    ++n_;
    if (z == 1) ++m_;
}

CellSummary::Cell CellSummary::arm_v(int z) const {
    Cell out;
    for (int y = 0; y < 2; ++y) {
        out.n += cells_[z][y].n;
        out.sum += cells_[z][y].sum;
        out.sum_sq += cells_[z][y].sum_sq;
    }
    return out;
}

CellSummary::Cell CellSummary::arm_y(int z) const {
    // Y is binary, so its sum and sum of squares both equal the yes-count.
    Cell out;
    out.n = cells_[z][0].n + cells_[z][1].n;
    out.sum = static_cast<double>(cells_[z][1].n);
    out.sum_sq = out.sum;
    return out;
}

double CellSummary::direct_yes_rate() const {
    if (n_ == 0) throw DegenerateCellsError("direct_yes_rate of empty summary");
    return static_cast<double>(cells_[0][1].n + cells_[1][1].n) / static_cast<double>(n_);
}

double CellSummary::treat_share_hat() const {
    if (n_ == 0) throw DegenerateCellsError("treat_share_hat of empty summary");
    return static_cast<double>(m_) / static_cast<double>(n_);
}

CellSummary summarize_cells(const Dataset& dataset) {
    CellSummary s;
    for (const Respondent& r : dataset.records) {
        s.add(r.z_treat, r.y_direct, static_cast<double>(r.v_count));
    }
    return s;
}

} // namespace listcombine
