#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>

#include "listcombine/data.hpp"
#include "listcombine/estimators.hpp"

namespace listcombine {

enum class PlaceboTest { TestI, TestII, CrossStudy };

const char* placebo_test_name(PlaceboTest t);

struct PlaceboReport {
    PlaceboTest test = PlaceboTest::TestI;
    double statistic = 0.0;  // beta-hat, delta-hat, or the study difference
    double std_error = 0.0;
    double p_value = 1.0;
    double null_value = 1.0; // 1 for Test I, 0 otherwise
    std::size_t n_used = 0;
    // Cell sizes behind the statistic, so callers can judge power.
    std::size_t n_treated = 0;
    std::size_t n_control = 0;
    Flags diagnostics;
};

/// Two-sided normal p-value for a statistic against its null value. Never
/// returns exactly zero: underflow is floored at the smallest positive
/// double and flagged. A zero standard error yields p = 1 when the statistic
/// sits exactly on the null and the floored value otherwise.
double placebo_p_value(double statistic, double null_value, double std_error, Flags& flags);

/// Placebo Test I: among respondents who answer the direct question "Yes",
/// the treated-minus-control difference in reported counts should equal 1.
/// Requires 2+ records in each (z, y=1) cell; throws
/// InsufficientConfessorsError otherwise.
PlaceboReport placebo_test_one(const CellSummary& cells, double alpha);

/// Placebo Test II: the direct answer should be independent of the list
/// treatment, so the between-arm difference in Ybar should equal 0.
PlaceboReport placebo_test_two(const CellSummary& cells, double alpha);

struct FisherResult {
    double statistic = 0.0; // -2 * sum(log p_i)
    int df = 0;             // 2k
    double p_value = 1.0;
};

/// Fisher's method for combining independent p-values. Inputs must lie in
/// (0, 1]; a zero p-value throws ZeroPValueError.
FisherResult fisher_combine(std::span<const double> p_values);

/// Difference between two independent estimates of the same quantity
/// (study A minus study B), with SE = sqrt(se_a^2 + se_b^2) and a two-sided
/// normal p-value against zero. Throws MethodMismatchError when the reports
/// come from different estimators.
PlaceboReport cross_study_difference(const EstimateReport& study_a,
                                     const EstimateReport& study_b);

/// Distributional variant of Test I: a two-sample Kolmogorov-Smirnov test of
/// the control counts against the treated counts shifted down by one, within
/// the Yes stratum, with a permutation p-value. The mean-based
/// placebo_test_one is the primary test; this one picks up distributional
/// violations that leave the means intact.
PlaceboReport placebo_test_one_ks(const Dataset& dataset, std::size_t permutations,
                                  std::uint64_t seed);

} // namespace listcombine
