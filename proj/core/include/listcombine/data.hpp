#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "listcombine/errors.hpp"
#include "listcombine/stats.hpp"

namespace listcombine {

/// Survey design for one list experiment: J non-sensitive items plus the
/// level used for confidence intervals and tests.
struct ListDesign {
    int j_items = 4;
    double alpha = 0.05;

    void validate() const; // throws DesignInvalidError
};

/// One validated survey record. y_direct is the answer to the direct
/// question, z_treat the list-treatment indicator, v_count the reported item
/// count (at most j_items + z_treat).
struct Respondent {
    std::string id;
    int y_direct = 0;
    int z_treat = 0;
    int v_count = 0;
    std::string study; // optional label, empty when absent
};

/// A record as ingested, before validation. Absent fields are "missing" and
/// are counted per reason when the record is excluded.
struct RawRecord {
    std::string id;
    std::string question = "q1";
    std::string study;
    std::optional<int> y_direct;
    std::optional<int> z_treat;
    std::optional<int> v_count;
    std::optional<bool> attention_passed;
};

struct ExclusionCounts {
    std::size_t missing_field = 0;
    std::size_t out_of_range = 0;
    std::size_t duplicate_id = 0;
    std::size_t failed_attention = 0;

    std::size_t total() const {
        return missing_field + out_of_range + duplicate_id + failed_attention;
    }
};

/// Immutable after construction via validate().
struct Dataset {
    std::vector<Respondent> records;
    ListDesign design;
    std::string question_id;

    std::size_t size() const { return records.size(); }
};

struct ValidationResult {
    Dataset dataset;
    ExclusionCounts excluded;
};

/// Validates raw records against the design: listwise deletion of records
/// with a missing field, an out-of-range count (v > J + z, or non-binary
/// y/z, or v < 0), a duplicate id, or a failed attention check. Out-of-range
/// counts are excluded, never clamped. Records must all belong to a single
/// question; pass question_id to select one from a mixed batch.
/// Throws AllRecordsExcludedError when nothing survives, DesignInvalidError
/// on a bad design.
ValidationResult validate(std::span<const RawRecord> records, const ListDesign& design,
                          const std::string& question_id = "");

/// Per-cell summary statistics, exact on integer inputs.
class CellSummary {
public:
    struct Cell {
        std::size_t n = 0;
        double sum = 0.0;
        double sum_sq = 0.0;

        bool empty() const { return n == 0; }
        bool variance_undefined() const { return n < 2; }
        double mean() const; // throws DegenerateCellsError when empty
        /// Unbiased sample variance; throws when variance_undefined().
        double variance() const;
    };

    /// Cell of records with treatment z and direct answer y.
    const Cell& cell(int z, int y) const { return cells_[z][y]; }
    /// V statistics for arm z pooled over direct answers.
    Cell arm_v(int z) const;
    /// Statistics of the binary direct answer within arm z.
    Cell arm_y(int z) const;

    std::size_t n() const { return n_; }
    std::size_t treated_count() const { return m_; }
    /// Ybar, the overall mean of the direct answer.
    double direct_yes_rate() const;
    /// gamma-hat = treated_count / n.
    double treat_share_hat() const;

    void add(int z, int y, double v);

private:
    Cell cells_[2][2];
    std::size_t n_ = 0;
    std::size_t m_ = 0;
};

/// Exact counts, means and variances of V for every (z, y) cell, plus the
/// arm-level aggregates the estimators consume. Empty cells and single-record
/// cells are flagged on the Cell, not reported as failures.
CellSummary summarize_cells(const Dataset& dataset);

} // namespace listcombine
