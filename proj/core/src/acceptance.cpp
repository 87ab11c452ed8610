#include "listcombine/acceptance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <vector>

#include "listcombine/placebo.hpp"
#include "listcombine/rng.hpp"
#include "listcombine/stats.hpp"

namespace listcombine {

namespace {

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), pattern, a, b, c);
    return buf;
}

std::size_t scaled(std::size_t full, double factor, std::size_t floor_at) {
    const auto r = static_cast<std::size_t>(std::lround(static_cast<double>(full) * factor));
    return std::max(r, floor_at);
}

// Monte Carlo bands get wider when replicate counts shrink.
double widen(double band, std::size_t full, std::size_t actual) {
    if (actual >= full) return band;
    return band * std::sqrt(static_cast<double>(full) / static_cast<double>(actual));
}

DgpParams reference_params(std::size_t n) {
    DgpParams p;
    p.prevalence = 0.3;
    p.truthful_rate = 0.5;
    p.treat_share = 0.5;
    p.list_items = 4;
    p.control_item_rate = 0.4;
    p.n = n;
    return p;
}

// Published five-question survey fixtures used for the arithmetic
// cross-checks below: placebo-test statistics with their printed p-values,
// the standard/combined standard-error pairs with the printed percent
// variance reductions, and one direct-question cross-study difference.
struct PlaceboFixture {
    const char* question;
    double beta_hat;
    double se;
    double printed_p;
};
constexpr PlaceboFixture kPlaceboRows[] = {
    {"nuclear_power", 1.054, 0.095, 0.568},
    {"public_transportation", 0.790, 0.091, 0.021},
    {"spanish_speaking", 0.848, 0.279, 0.585},
    {"muslim_teachers", 1.008, 0.237, 0.973},
    {"cnn", 0.696, 0.143, 0.034},
};

struct ReductionFixture {
    const char* question;
    double se_standard;
    double se_combined;
    double printed_pct;
};
constexpr ReductionFixture kReductionRows[] = {
    // direct-questions-first arm
    {"nuclear_power/A", 0.084, 0.049, 66.8},
    {"public_transportation/A", 0.072, 0.049, 54.0},
    {"spanish_speaking/A", 0.079, 0.074, 14.0},
    {"muslim_teachers/A", 0.081, 0.074, 15.4},
    {"cnn/A", 0.105, 0.070, 55.3},
    // lists-first arm
    {"nuclear_power/B", 0.089, 0.052, 65.3},
    {"public_transportation/B", 0.073, 0.051, 51.8},
    {"spanish_speaking/B", 0.083, 0.076, 16.3},
    {"muslim_teachers/B", 0.083, 0.074, 20.1},
    {"cnn/B", 0.101, 0.065, 59.4},
};

double round3(double v) { return std::round(v * 1000.0) / 1000.0; }

CriterionResult identification_exact() {
    CriterionResult r{"identification_exact", true, ""};
    const double mus[] = {0.1, 0.3, 0.5, 0.7, 0.9};
    const double ps[] = {0.1, 0.3, 0.5, 0.7, 0.9};
    const double ws[] = {0.2, 0.4, 0.6};
    double worst = 0.0;
    for (double mu : mus) {
        for (double p : ps) {
            for (double w : ws) {
                DgpParams params = reference_params(0);
                params.prevalence = mu;
                params.truthful_rate = p;
                params.control_item_rate = w;
                const double err = std::fabs(identification_oracle(params) - mu);
                worst = std::max(worst, err);
            }
        }
    }
    r.passed = worst <= 1e-12;
    r.detail = fmt("max |oracle - prevalence| = %.3g over 75 points (tol 1e-12)", worst);
    return r;
}

CriterionResult consistency(const AcceptanceScale& scale, std::uint64_t seed,
                            ParallelConfig par) {
    const std::size_t reps = scaled(500, scale.replicates, 100);
    const DgpParams params = reference_params(10000);
    const double se = std::sqrt(asymptotic_variance_combined(params) /
                                static_cast<double>(params.n));
    std::size_t within = 0;
    (void)par;
    for (std::size_t i = 0; i < reps; ++i) {
        const std::uint64_t s = derive_stream(seed, 102, i).next_u64();
        const CellSummary cells = summarize(generate_records(params, s));
        const double est = combined_estimate(cells, 0.05).estimate;
        if (std::fabs(est - params.prevalence) <= 3.0 * se) ++within;
    }
    const double share = static_cast<double>(within) / static_cast<double>(reps);
    const double required = scale.replicates >= 1.0 ? 0.99 : 0.97;
    CriterionResult r{"consistency", share >= required, ""};
    r.detail = fmt("share within 3 analytic SEs = %.4f (need >= %.2f)", share, required);
    return r;
}

CriterionResult coverage(const AcceptanceScale& scale, std::uint64_t seed,
                         ParallelConfig par) {
    const std::size_t reps = scaled(2000, scale.replicates, 300);
    const DgpParams params = reference_params(2000);
    const CoverageResult res =
        coverage_experiment(params, reps, 0.05, derive_stream(seed, 103).next_u64(), par);
    const double band = widen(0.02, 2000, reps);
    const bool ok = res.coverage >= 0.95 - band && res.coverage <= 0.95 + band;
    CriterionResult r{"coverage", ok, ""};
    r.detail = fmt("coverage = %.4f over %.0f replicates (band 0.95 +- %.3f)", res.coverage,
                   static_cast<double>(reps), band);
    return r;
}

CriterionResult variance_formula(const AcceptanceScale& scale, std::uint64_t seed,
                                 ParallelConfig par) {
    (void)par;
    const std::size_t reps = scaled(1000, scale.replicates, 200);
    const DgpParams params = reference_params(10000);
    const double target = asymptotic_variance_combined(params);
    double sum = 0.0;
    for (std::size_t i = 0; i < reps; ++i) {
        const std::uint64_t s = derive_stream(seed, 104, i).next_u64();
        const CellSummary cells = summarize(generate_records(params, s));
        sum += static_cast<double>(params.n) * combined_variance(cells);
    }
    const double mean_nvar = sum / static_cast<double>(reps);
    const double rel = std::fabs(mean_nvar - target) / target;
    const double tol = widen(0.05, 1000, reps);
    CriterionResult r{"variance_formula", rel <= tol, ""};
    r.detail = fmt("mean n*Var = %.4f vs asymptotic %.4f (rel err %.3f)", mean_nvar, target,
                   rel);
    return r;
}

CriterionResult efficiency(const AcceptanceScale& scale, std::uint64_t seed,
                           ParallelConfig par) {
    // strict ordering on a 100-point parameter grid
    const double mus[] = {0.1, 0.3, 0.5, 0.7, 0.9};
    const double ps[] = {0.1, 0.3, 0.5, 0.7, 0.9};
    const double gammas[] = {0.3, 0.5};
    const double ws[] = {0.25, 0.5};
    std::size_t violations = 0;
    for (double mu : mus) {
        for (double p : ps) {
            for (double g : gammas) {
                for (double w : ws) {
                    DgpParams params = reference_params(0);
                    params.prevalence = mu;
                    params.truthful_rate = p;
                    params.treat_share = g;
                    params.control_item_rate = w;
                    if (!(asymptotic_variance_standard(params) >
                          asymptotic_variance_combined(params))) {
                        ++violations;
                    }
                }
            }
        }
    }

    const std::size_t reps = scaled(2000, scale.replicates, 300);
    const EfficiencyResult res = efficiency_experiment(
        reference_params(10000), reps, derive_stream(seed, 105).next_u64(), par);
    const double rel = std::fabs(res.empirical_ratio - res.analytic_ratio) / res.analytic_ratio;
    const double tol = widen(0.10, 2000, reps);
    CriterionResult r{"efficiency", violations == 0 && rel <= tol, ""};
    r.detail = fmt("grid violations = %.0f; empirical/analytic ratio %.4f vs %.4f",
                   static_cast<double>(violations), res.empirical_ratio, res.analytic_ratio);
    return r;
}

double test_one_power_at(std::size_t n_yes, double fc_share, double item_rate,
                         std::size_t reps, double alpha, std::uint64_t seed,
                         ParallelConfig par) {
    PowerGridSpec spec;
    spec.n_yes = {n_yes};
    spec.violation = ViolationType::FalseConfessor;
    spec.x_values = {fc_share};
    spec.control_item_rate = item_rate;
    return power_test_one_grid(spec, reps, alpha, seed, par).front().power;
}

CriterionResult placebo1_null_calibration(const AcceptanceScale& scale, std::uint64_t seed,
                                          ParallelConfig par) {
    const std::size_t reps = scaled(5000, scale.replicates, 600);
    const double rate = test_one_power_at(400, 0.0, 0.4, reps, 0.05,
                                          derive_stream(seed, 106).next_u64(), par);
    const double band = widen(0.02, 5000, reps);
    const bool ok = rate >= 0.05 - band && rate <= 0.05 + band;
    CriterionResult r{"placebo1_null_calibration", ok, ""};
    r.detail = fmt("rejection rate = %.4f (band 0.05 +- %.3f)", rate, band);
    return r;
}

CriterionResult placebo1_power_point(const AcceptanceScale& scale, std::uint64_t seed,
                                     ParallelConfig par) {
    const std::size_t reps = scaled(1000, scale.replicates, 200);
    const double power = test_one_power_at(800, 0.20, 0.4, reps, 0.05,
                                           derive_stream(seed, 107).next_u64(), par);
    const double band = widen(0.05, 1000, reps);
    const bool ok = power >= 0.80 - band && power <= 0.80 + band;
    CriterionResult r{"placebo1_power_point", ok, ""};
    r.detail = fmt("power at n_yes=800, 20%% false confessors = %.3f (band 0.80 +- %.3f)",
                   power, band);
    return r;
}

CriterionResult placebo1_power_variability(const AcceptanceScale& scale, std::uint64_t seed,
                                           ParallelConfig par) {
    const std::size_t reps = scaled(1000, scale.replicates, 200);
    const double p_low = test_one_power_at(800, 0.20, 0.1, reps, 0.05,
                                           derive_stream(seed, 108, 1).next_u64(), par);
    const double p_high = test_one_power_at(800, 0.20, 0.5, reps, 0.05,
                                            derive_stream(seed, 108, 2).next_u64(), par);
    CriterionResult r{"placebo1_power_variability", p_low - p_high >= 0.05, ""};
    r.detail = fmt("power(rate 0.1) = %.3f vs power(rate 0.5) = %.3f (need gap >= 0.05)",
                   p_low, p_high);
    return r;
}

CriterionResult placebo2_power_crossval(const AcceptanceScale& scale, std::uint64_t seed,
                                        ParallelConfig par) {
    const std::size_t reps = scaled(10000, scale.replicates, 1500);
    const double analytic =
        power_test_two(0.6, 0.5, 500, 500, 0.05, PowerMode::Analytic, 0, 0);
    const double simulated = power_test_two(0.6, 0.5, 500, 500, 0.05, PowerMode::Simulated,
                                            reps, derive_stream(seed, 109).next_u64(), par);
    const double tol = widen(0.03, 10000, reps);
    CriterionResult r{"placebo2_power_crossval", std::fabs(analytic - simulated) <= tol, ""};
    r.detail = fmt("analytic %.4f vs simulated %.4f (tol %.3f)", analytic, simulated, tol);
    return r;
}

CriterionResult table_arithmetic() {
    CriterionResult r{"table_arithmetic", true, ""};
    double worst_p = 0.0;
    for (const PlaceboFixture& row : kPlaceboRows) {
        Flags flags;
        const double p = placebo_p_value(row.beta_hat, 1.0, row.se, flags);
        worst_p = std::max(worst_p, std::fabs(p - row.printed_p));
    }
    if (worst_p > 0.005) r.passed = false;

    double worst_red = 0.0;
    for (const ReductionFixture& row : kReductionRows) {
        const double pct = 100.0 * variance_reduction(row.se_standard, row.se_combined);
        worst_red = std::max(worst_red, std::fabs(pct - row.printed_pct));
    }
    if (worst_red > 2.0) r.passed = false;

    // Direct-question cross-study difference for the first question:
    // (0.656, 0.021) vs (0.603, 0.022) must reproduce 0.053 / 0.030 at the
    // printed precision.
    EstimateReport a;
    a.method = Method::Direct;
    a.estimate = 0.656;
    a.std_error = 0.021;
    a.n_used = 500;
    EstimateReport b;
    b.method = Method::Direct;
    b.estimate = 0.603;
    b.std_error = 0.022;
    b.n_used = 514;
    const PlaceboReport diff = cross_study_difference(a, b);
    if (round3(diff.statistic) != 0.053 || round3(diff.std_error) != 0.030) r.passed = false;

    r.detail = fmt("max p deviation %.4f (tol 0.005); max reduction deviation %.2f pp (tol 2)",
                   worst_p, worst_red);
    return r;
}

CriterionResult monotonicity_violation_bias(const AcceptanceScale& scale, std::uint64_t seed) {
    DgpParams params = reference_params(scaled(200000, scale.replicates, 50000));
    params.share_false_confessors = 0.20;
    const double inflated = identification_oracle(params);
    const CellSummary cells =
        summarize(generate_records(params, derive_stream(seed, 111).next_u64()));
    const EstimateReport est = combined_estimate(cells, 0.05);
    const bool exceeds = est.estimate - params.prevalence >= 3.0 * est.std_error;
    const bool matches = std::fabs(est.estimate - inflated) <= 3.0 * est.std_error;
    CriterionResult r{"monotonicity_violation_bias", exceeds && matches, ""};
    r.detail = fmt("estimate %.4f vs prevalence 0.3 and inflated estimand %.4f (SE %.4f)",
                   est.estimate, inflated, est.std_error);
    return r;
}

CriterionResult reduction_identity(std::uint64_t seed) {
    RandomStream rng = derive_stream(seed, 112);
    std::size_t mismatches = 0;
    for (int trial = 0; trial < 100; ++trial) {
        CellSummary cells;
        // Small all-No datasets with 2..12 records per arm and counts in 0..J+z.
        const int j_items = 2 + static_cast<int>(rng.uniform_index(4));
        for (int z = 0; z < 2; ++z) {
            const std::size_t arm = 2 + rng.uniform_index(11);
            for (std::size_t i = 0; i < arm; ++i) {
                const int v = static_cast<int>(rng.uniform_index(
                    static_cast<std::uint64_t>(j_items + z + 1)));
                cells.add(z, 0, static_cast<double>(v));
            }
        }
        const EstimateReport combined = combined_estimate(cells, 0.05);
        const EstimateReport standard = standard_list_estimate(cells, 0.05);
        if (combined.estimate != standard.estimate || combined.std_error != standard.std_error) {
            ++mismatches;
        }
    }
    CriterionResult r{"reduction_identity", mismatches == 0, ""};
    r.detail = fmt("%.0f of 100 all-No datasets disagreed (estimates and SEs compared exactly)",
                   static_cast<double>(mismatches));
    return r;
}

} // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceScale& scale, std::uint64_t seed,
                                            ParallelConfig parallel) {
    std::vector<CriterionResult> out;
    out.push_back(identification_exact());
    out.push_back(consistency(scale, seed, parallel));
    out.push_back(coverage(scale, seed, parallel));
    out.push_back(variance_formula(scale, seed, parallel));
    out.push_back(efficiency(scale, seed, parallel));
    out.push_back(placebo1_null_calibration(scale, seed, parallel));
    out.push_back(placebo1_power_point(scale, seed, parallel));
    out.push_back(placebo1_power_variability(scale, seed, parallel));
    out.push_back(placebo2_power_crossval(scale, seed, parallel));
    out.push_back(table_arithmetic());
    out.push_back(monotonicity_violation_bias(scale, seed));
    out.push_back(reduction_identity(seed));
    return out;
}

} // namespace listcombine
