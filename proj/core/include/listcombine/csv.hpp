#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "listcombine/data.hpp"
#include "listcombine/simulation.hpp"

namespace listcombine {

/// Maps the roles this library needs onto the column names of an input file.
/// y/z/v are required; the rest are synthesized when absent (row-number ids,
/// question "q1", empty study, attention check passed).
struct ColumnMapping {
    std::string respondent_id = "respondent_id";
    std::string question_id = "question_id";
    std::string study = "study";
    std::string y_direct = "y_direct";
    std::string z_treat = "z_treat";
    std::string v_count = "v_count";
    std::string attention = "attention";
};

/// Reads a long-format respondent CSV (one row per respondent per question).
/// Blank and "NA" cells become missing values for validate() to count.
/// Throws EmptyFileError, MissingColumnError, or UnparseableCellError (with
/// the row and column named).
std::vector<RawRecord> load_csv(const std::string& path, const ColumnMapping& columns = {});
std::vector<RawRecord> load_csv(std::istream& input, const ColumnMapping& columns = {});

/// Writes a dataset back out in the ingestion schema.
void write_dataset_csv(std::ostream& out, const Dataset& dataset);
void write_dataset_csv(const std::string& path, const Dataset& dataset);

/// Long-format power surface rows:
/// n_yes,violation_type,share_or_wsuccess,replicates,power,seed
void write_power_csv(std::ostream& out, const std::vector<PowerCell>& cells);

/// Question ids in first-appearance order.
std::vector<std::string> question_order(const std::vector<RawRecord>& records);

} // namespace listcombine
