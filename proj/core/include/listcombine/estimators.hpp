#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "listcombine/data.hpp"
#include "listcombine/dgp.hpp"

namespace listcombine {

enum class Method { Direct, StandardList, CombinedList };

const char* method_name(Method m);

/// Diagnostic flags carried by reports. Flags inform, they never censor: an
/// estimate of -0.02 is reported as -0.02 with EstimateOutsideUnit set.
enum class Flag : std::uint32_t {
    EstimateOutsideUnit = 1u << 0,
    CiOutsideUnit = 1u << 1,
    DegenerateCell = 1u << 2,
    DirectRateZero = 1u << 3,
    DirectRateOne = 1u << 4,
    PValueFloored = 1u << 5,
    SmallSample = 1u << 6,
};

class Flags {
public:
    void set(Flag f) { bits_ |= static_cast<std::uint32_t>(f); }
    bool has(Flag f) const { return bits_ & static_cast<std::uint32_t>(f); }
    bool empty() const { return bits_ == 0; }
    std::vector<std::string> names() const;

private:
    std::uint32_t bits_ = 0;
};

struct ConfidenceInterval {
    double low = 0.0;
    double high = 0.0;
};

/// Symmetric Wald interval estimate +- z_{1-alpha/2} * std_error. Bounds are
/// not truncated to [0,1]; callers flag excursions instead.
ConfidenceInterval wald_ci(double estimate, double std_error, double alpha);

struct EstimateReport {
    Method method = Method::Direct;
    double estimate = 0.0;
    double std_error = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    std::size_t n_used = 0;
    double alpha = 0.05;
    Flags diagnostics;
};

/// Prevalence from the direct question alone: Ybar with the binomial
/// standard error sqrt(Ybar(1-Ybar)/n).
EstimateReport direct_estimate(const CellSummary& cells, double alpha);

/// The difference-in-means list-experiment estimator Vbar_1 - Vbar_0 pooled
/// over direct answers, with the unpooled two-sample standard error.
EstimateReport standard_list_estimate(const CellSummary& cells, double alpha);

/// Which denominators the plug-in variance uses for the list-difference term:
/// arm sizes through gamma-hat (the printed form), or the (z, y=0) cell
/// counts directly. The two agree asymptotically.
enum class VarianceForm { GammaHat, CellCounts };

/// Plug-in variance of the combined estimator. On the displayed
/// (asymptotic, n-scaled) expression this library divides by n so that the
/// value feeds Wald intervals directly:
///   Var[mu-hat] = (1/n) * { (1-mu-hat)^2 * Ybar/(1-Ybar)
///                           + (1-Ybar) * [ s2_{1,0}/gh + s2_{0,0}/(1-gh) ] }
/// where gh is gamma-hat and Ybar substitutes for the mu-hat*p-hat product.
double combined_variance(const CellSummary& cells,
                         VarianceForm form = VarianceForm::GammaHat);

/// The combined estimator Ybar + (1-Ybar)(Vbar_{1,0} - Vbar_{0,0}).
/// When Ybar = 1 both y=0 cells are empty; the estimate is pinned to 1 with
/// a zero standard error and a degenerate-cell flag rather than an error.
EstimateReport combined_estimate(const CellSummary& cells, double alpha,
                                 VarianceForm form = VarianceForm::GammaHat);

/// Large-sample variance (n-scaled) of the combined estimator, evaluated
/// exactly from closed-form population moments of the DGP.
double asymptotic_variance_combined(const DgpParams& params);

/// Large-sample variance (n-scaled) of the standard difference-in-means
/// estimator, evaluated as the within-cell variance terms plus the
/// between-cell mean-shift terms weighted by Pr[Y=1]Pr[Y=0].
double asymptotic_variance_standard(const DgpParams& params);

/// 1 - se_combined^2 / se_standard^2, the fraction of sampling variance the
/// combined estimator removes. Throws DivisionByZeroError when se_standard
/// is zero.
double variance_reduction(double se_standard, double se_combined);

} // namespace listcombine
