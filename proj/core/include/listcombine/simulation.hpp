#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "listcombine/data.hpp"
#include "listcombine/dgp.hpp"
#include "listcombine/estimators.hpp"

namespace listcombine {

/// Internal simulated record; carries the latent engagement flag and
/// baseline count alongside the observables.
struct SimRecord {
    std::uint8_t x = 0; // latent engagement
    std::uint8_t y = 0;
    std::uint8_t z = 0;
    std::int16_t w = 0; // latent baseline count
    std::int16_t v = 0;
    UnitKind kind = UnitKind::NonEngager;
};

/// Draws params.n records from the population law, unconditionally
/// (Bernoulli mode). Deterministic given (params, seed).
std::vector<SimRecord> generate_records(const DgpParams& params, std::uint64_t seed);

/// Conditional mode: draws exactly n_yes records from the Yes stratum
/// (every record has y = 1), with violator kinds assigned at the given
/// shares. This is the stratum Placebo Test I acts on.
std::vector<SimRecord> generate_confessor_stratum(const DgpParams& params,
                                                  std::size_t n_yes,
                                                  std::uint64_t seed);

/// Wraps generate_records into a validated Dataset with synthesized ids.
Dataset generate_dataset(const DgpParams& params, std::uint64_t seed,
                         const std::string& question_id = "sim");

CellSummary summarize(const std::vector<SimRecord>& records);

// ---------------------------------------------------------------------------
// Monte Carlo experiments. Every experiment derives one stream per replicate
// (or per grid cell and replicate) from the master seed, so results do not
// depend on the worker count.
// ---------------------------------------------------------------------------

/// Upper bound on worker threads; 0 means the hardware concurrency.
struct ParallelConfig {
    unsigned threads = 0;
};

enum class ViolationType { FalseConfessor, Liar, DesignAffected, ControlVariability };

const char* violation_name(ViolationType v);

/// One cell of a power surface.
struct PowerCell {
    std::size_t n_yes = 0;
    ViolationType violation = ViolationType::FalseConfessor;
    double share_or_rate = 0.0; // violator share, or the control item rate
    std::size_t replicates = 0;
    double power = 0.0;
    std::uint64_t seed = 0;
};

/// Grid specification for the Test I power surface. For the three violation
/// panels x_values are violator shares (the other two shares stay 0) and the
/// control item rate is fixed; for the ControlVariability panel x_values are
/// control item rates and the false-confessor share is fixed.
struct PowerGridSpec {
    std::vector<std::size_t> n_yes;
    ViolationType violation = ViolationType::FalseConfessor;
    std::vector<double> x_values;
    double fixed_false_confessor_share = 0.20;
    int list_items = 4;
    double control_item_rate = 0.4;
    double treat_share = 0.5;
};

/// Rejection frequency of Placebo Test I at level alpha on every grid cell.
/// Replicates where a confessor cell degenerates count as non-rejections.
std::vector<PowerCell> power_test_one_grid(const PowerGridSpec& spec,
                                           std::size_t replicates, double alpha,
                                           std::uint64_t seed,
                                           ParallelConfig parallel = {});

enum class PowerMode { Analytic, Simulated };

/// Power of Placebo Test II against the alternative (p1, p0). Analytic mode
/// delegates to two_prop_power; simulated mode runs the test on Bernoulli
/// draws.
double power_test_two(double p1, double p0, std::size_t n1, std::size_t n0,
                      double alpha, PowerMode mode, std::size_t replicates,
                      std::uint64_t seed, ParallelConfig parallel = {});

struct CoverageResult {
    double coverage = 0.0;
    double mean_ci_width = 0.0;
    std::size_t replicates = 0;
    bool small_sample_warning = false;
};

/// Share of replicates whose combined-estimator Wald interval contains the
/// true prevalence. Requires a violation-free DGP.
CoverageResult coverage_experiment(const DgpParams& params, std::size_t replicates,
                                   double alpha, std::uint64_t seed,
                                   ParallelConfig parallel = {});

struct EfficiencyResult {
    double empirical_var_combined = 0.0;
    double empirical_var_standard = 0.0;
    double empirical_ratio = 0.0; // combined / standard
    double analytic_ratio = 0.0;
    std::size_t replicates = 0;
};

/// Empirical sampling variances of the combined and standard estimators over
/// replicated datasets, next to the closed-form variance ratio.
EfficiencyResult efficiency_experiment(const DgpParams& params, std::size_t replicates,
                                       std::uint64_t seed, ParallelConfig parallel = {});

} // namespace listcombine
