#include "listcombine/placebo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "listcombine/rng.hpp"
#include "listcombine/stats.hpp"

namespace listcombine {

const char* placebo_test_name(PlaceboTest t) {
    switch (t) {
        case PlaceboTest::TestI: return "placebo_test_one";
        case PlaceboTest::TestII: return "placebo_test_two";
        case PlaceboTest::CrossStudy: return "cross_study_difference";
    }
    return "unknown";
}

double placebo_p_value(double statistic, double null_value, double std_error, Flags& flags) {
    const double dev = std::fabs(statistic - null_value);
    double p;
    if (std_error == 0.0) {
        p = dev == 0.0 ? 1.0 : 0.0;
    } else {
        p = 2.0 * std_normal_cdf(-dev / std_error).value();
    }
    if (p > 1.0) p = 1.0;
    if (p <= 0.0) {
        p = std::numeric_limits<double>::min();
        flags.set(Flag::PValueFloored);
    }
    return p;
}

PlaceboReport placebo_test_one(const CellSummary& cells, double alpha) {
    (void)alpha; // the report carries everything needed at any level
    const CellSummary::Cell& t = cells.cell(1, 1);
    const CellSummary::Cell& c = cells.cell(0, 1);
    if (t.n < 2 || c.n < 2) {
        throw InsufficientConfessorsError(
            "placebo test I needs 2+ confessors in each arm (treated " +
            std::to_string(t.n) + ", control " + std::to_string(c.n) + ")");
    }
    PlaceboReport r;
    r.test = PlaceboTest::TestI;
    r.null_value = 1.0;
    r.n_treated = t.n;
    r.n_control = c.n;
    r.n_used = t.n + c.n;
    r.statistic = t.mean() - c.mean();
    r.std_error = std::sqrt(t.variance() / static_cast<double>(t.n) +
                            c.variance() / static_cast<double>(c.n));
    r.p_value = placebo_p_value(r.statistic, r.null_value, r.std_error, r.diagnostics);
    return r;
}

PlaceboReport placebo_test_two(const CellSummary& cells, double alpha) {
    (void)alpha;
    const CellSummary::Cell t = cells.arm_y(1);
    const CellSummary::Cell c = cells.arm_y(0);
    if (t.n < 2 || c.n < 2) {
        throw DegenerateCellsError("placebo test II needs 2+ records per arm");
    }
    PlaceboReport r;
    r.test = PlaceboTest::TestII;
    r.null_value = 0.0;
    r.n_treated = t.n;
    r.n_control = c.n;
    r.n_used = t.n + c.n;
    r.statistic = t.mean() - c.mean();
    r.std_error = std::sqrt(t.variance() / static_cast<double>(t.n) +
                            c.variance() / static_cast<double>(c.n));
    r.p_value = placebo_p_value(r.statistic, r.null_value, r.std_error, r.diagnostics);
    return r;
}

FisherResult fisher_combine(std::span<const double> p_values) {
    if (p_values.empty()) {
        throw EmptyInputError("fisher_combine of empty sequence");
    }
    double stat = 0.0;
    for (double p : p_values) {
        if (p == 0.0) {
            throw ZeroPValueError("fisher_combine received a zero p-value");
        }
        Probability checked(p); // rejects p outside [0,1]
        stat += std::log(checked.value());
    }
    FisherResult out;
    out.statistic = -2.0 * stat;
    out.df = 2 * static_cast<int>(p_values.size());
    out.p_value = chi_square_sf(out.statistic, out.df).value();
    return out;
}

PlaceboReport cross_study_difference(const EstimateReport& study_a,
                                     const EstimateReport& study_b) {
    if (study_a.method != study_b.method) {
        throw MethodMismatchError("cross-study difference requires the same estimator on both sides");
    }
    PlaceboReport r;
    r.test = PlaceboTest::CrossStudy;
    r.null_value = 0.0;
    r.n_used = study_a.n_used + study_b.n_used;
    r.n_treated = study_a.n_used;
    r.n_control = study_b.n_used;
    r.statistic = study_a.estimate - study_b.estimate;
    r.std_error = std::sqrt(study_a.std_error * study_a.std_error +
                            study_b.std_error * study_b.std_error);
    r.p_value = placebo_p_value(r.statistic, r.null_value, r.std_error, r.diagnostics);
    return r;
}

namespace {

// Max |ECDF_a - ECDF_b| over the pooled support.
double ks_statistic(std::vector<double>& a, std::vector<double>& b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        d = std::max(d, std::fabs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

} // namespace

PlaceboReport placebo_test_one_ks(const Dataset& dataset, std::size_t permutations,
                                  std::uint64_t seed) {
    std::vector<double> treated;
    std::vector<double> control;
    for (const Respondent& r : dataset.records) {
        if (r.y_direct != 1) continue;
        // Shift the treated counts down by one; under the identifying
        // assumptions both samples then share a distribution.
        if (r.z_treat == 1) {
            treated.push_back(static_cast<double>(r.v_count) - 1.0);
        } else {
            control.push_back(static_cast<double>(r.v_count));
        }
    }
    if (treated.size() < 2 || control.size() < 2) {
        throw InsufficientConfessorsError("KS placebo test needs 2+ confessors in each arm");
    }

    PlaceboReport r;
    r.test = PlaceboTest::TestI;
    r.null_value = 0.0;
    r.n_treated = treated.size();
    r.n_control = control.size();
    r.n_used = treated.size() + control.size();

    std::vector<double> a = treated;
    std::vector<double> b = control;
    const double observed = ks_statistic(a, b);
    r.statistic = observed;
    r.std_error = 0.0;

    std::vector<double> pooled = treated;
    pooled.insert(pooled.end(), control.begin(), control.end());

    std::size_t at_least = 0;
    for (std::size_t rep = 0; rep < permutations; ++rep) {
        RandomStream rng = derive_stream(seed, /*stream=*/5, rep);
        for (std::size_t k = pooled.size(); k > 1; --k) {
            std::swap(pooled[k - 1], pooled[rng.uniform_index(k)]);
        }
        a.assign(pooled.begin(), pooled.begin() + static_cast<std::ptrdiff_t>(treated.size()));
        b.assign(pooled.begin() + static_cast<std::ptrdiff_t>(treated.size()), pooled.end());
        if (ks_statistic(a, b) >= observed - 1e-12) ++at_least;
    }
    // Permutation p-value with the observed arrangement counted once.
    r.p_value = (static_cast<double>(at_least) + 1.0) / (static_cast<double>(permutations) + 1.0);
    return r;
}

} // namespace listcombine
