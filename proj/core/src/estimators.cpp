#include "listcombine/estimators.hpp"

#include <cmath>

#include "listcombine/stats.hpp"

namespace listcombine {

const char* method_name(Method m) {
    switch (m) {
        case Method::Direct: return "direct";
        case Method::StandardList: return "standard_list";
        case Method::CombinedList: return "combined_list";
    }
    return "unknown";
}

std::vector<std::string> Flags::names() const {
    static constexpr std::pair<Flag, const char*> table[] = {
        {Flag::EstimateOutsideUnit, "estimate_outside_unit"},
        {Flag::CiOutsideUnit, "ci_outside_unit"},
        {Flag::DegenerateCell, "degenerate_cell"},
        {Flag::DirectRateZero, "direct_rate_zero"},
        {Flag::DirectRateOne, "direct_rate_one"},
        {Flag::PValueFloored, "p_value_floored"},
        {Flag::SmallSample, "small_sample"},
    };
    std::vector<std::string> out;
    for (auto [flag, name] : table) {
        if (has(flag)) out.emplace_back(name);
    }
    return out;
}

ConfidenceInterval wald_ci(double estimate, double std_error, double alpha) {
    if (std_error < 0.0) {
        throw OutOfDomainError("wald_ci requires a nonnegative standard error");
    }
    const double z = std_normal_quantile(Probability(1.0 - alpha / 2.0));
    return {estimate - z * std_error, estimate + z * std_error};
}

namespace {

void apply_common_flags(EstimateReport& r) {
    if (r.estimate < 0.0 || r.estimate > 1.0) r.diagnostics.set(Flag::EstimateOutsideUnit);
    if (r.ci_low < 0.0 || r.ci_high > 1.0) r.diagnostics.set(Flag::CiOutsideUnit);
}

void finish_report(EstimateReport& r, double alpha) {
    r.alpha = alpha;
    const ConfidenceInterval ci = wald_ci(r.estimate, r.std_error, alpha);
    r.ci_low = ci.low;
    r.ci_high = ci.high;
    apply_common_flags(r);
}

} // namespace

EstimateReport direct_estimate(const CellSummary& cells, double alpha) {
    if (cells.n() < 2) {
        throw InsufficientDataError("direct_estimate needs at least 2 records");
    }
    EstimateReport r;
    r.method = Method::Direct;
    r.n_used = cells.n();
    const double ybar = cells.direct_yes_rate();
    r.estimate = ybar;
    r.std_error = std::sqrt(ybar * (1.0 - ybar) / static_cast<double>(cells.n()));
    if (ybar == 0.0) r.diagnostics.set(Flag::DirectRateZero);
    if (ybar == 1.0) r.diagnostics.set(Flag::DirectRateOne);
    finish_report(r, alpha);
    return r;
}

EstimateReport standard_list_estimate(const CellSummary& cells, double alpha) {
    const CellSummary::Cell treated = cells.arm_v(1);
    const CellSummary::Cell control = cells.arm_v(0);
    if (treated.n < 2 || control.n < 2) {
        throw DegenerateCellsError("standard_list_estimate needs 2+ records per arm");
    }
    EstimateReport r;
    r.method = Method::StandardList;
    r.n_used = cells.n();
    r.estimate = treated.mean() - control.mean();
    r.std_error = std::sqrt(treated.variance() / static_cast<double>(treated.n) +
                            control.variance() / static_cast<double>(control.n));
    finish_report(r, alpha);
    return r;
}

double combined_variance(const CellSummary& cells, VarianceForm form) {
    const std::size_t n = cells.n();
    if (n == 0) throw DegenerateCellsError("combined_variance of empty summary");
    const double ybar = cells.direct_yes_rate();
    if (ybar == 1.0) {
        throw DegenerateCellsError("combined_variance undefined when every direct answer is Yes");
    }
    const CellSummary::Cell& c10 = cells.cell(1, 0);
    const CellSummary::Cell& c00 = cells.cell(0, 0);
    if (c10.variance_undefined() || c00.variance_undefined()) {
        throw DegenerateCellsError("combined_variance needs 2+ records in each (z, y=0) cell");
    }

    const double mu_hat = ybar + (1.0 - ybar) * (c10.mean() - c00.mean());
    const double confessed_term = (1.0 - mu_hat) * (1.0 - mu_hat) * ybar / (1.0 - ybar);

    double list_term;
    if (form == VarianceForm::GammaHat) {
        // (1-Ybar) * [ s2/gh + s2/(1-gh) ] / n with gh = m/n, evaluated with
        // the arm counts directly (n * gh is exactly m).
        const double m = static_cast<double>(cells.treated_count());
        const double mc = static_cast<double>(n - cells.treated_count());
        if (m == 0.0 || mc == 0.0) {
            throw DegenerateCellsError("combined_variance needs both treatment arms");
        }
        list_term = (1.0 - ybar) * (c10.variance() / m + c00.variance() / mc);
        return confessed_term / static_cast<double>(n) + list_term;
    }
    // Cell-count form: the list-difference variance taken over the y=0 cells
    // themselves, weighted by (1-Ybar)^2.
    list_term = (1.0 - ybar) * (1.0 - ybar) *
                (c10.variance() / static_cast<double>(c10.n) +
                 c00.variance() / static_cast<double>(c00.n));
    return confessed_term / static_cast<double>(n) + list_term;
}

EstimateReport combined_estimate(const CellSummary& cells, double alpha, VarianceForm form) {
    EstimateReport r;
    r.method = Method::CombinedList;
    r.n_used = cells.n();
    if (cells.n() < 2) {
        throw InsufficientDataError("combined_estimate needs at least 2 records");
    }
    const double ybar = cells.direct_yes_rate();
    if (ybar == 1.0) {
        // Both y=0 cells are empty; only the confessed term remains.
        r.estimate = 1.0;
        r.std_error = 0.0;
        r.diagnostics.set(Flag::DirectRateOne);
        r.diagnostics.set(Flag::DegenerateCell);
        finish_report(r, alpha);
        return r;
    }
    const CellSummary::Cell& c10 = cells.cell(1, 0);
    const CellSummary::Cell& c00 = cells.cell(0, 0);
    if (c10.variance_undefined() || c00.variance_undefined()) {
        throw DegenerateCellsError("combined_estimate needs 2+ records in each (z, y=0) cell");
    }
    r.estimate = ybar + (1.0 - ybar) * (c10.mean() - c00.mean());
    r.std_error = std::sqrt(combined_variance(cells, form));
    if (ybar == 0.0) r.diagnostics.set(Flag::DirectRateZero);
    finish_report(r, alpha);
    return r;
}

namespace {

void require_nondegenerate(const DgpParams& params) {
    params.validate();
    if (!(params.treat_share > 0.0 && params.treat_share < 1.0)) {
        throw DegenerateParamsError("treat_share must lie strictly between 0 and 1");
    }
    if (!(params.control_item_rate > 0.0 && params.control_item_rate < 1.0)) {
        throw DegenerateParamsError("control counts are degenerate at this item rate");
    }
    if (params.prevalence * params.truthful_rate >= 1.0) {
        throw DegenerateParamsError("everyone answers Yes; the y=0 cells are empty");
    }
}

} // namespace

double asymptotic_variance_combined(const DgpParams& params) {
    require_nondegenerate(params);
    const PopulationMoments m = population_moments(params);
    const double yes = m.yes_rate;
    const double mu = params.prevalence;
    const double confessed = yes > 0.0 ? (1.0 - mu) * (1.0 - mu) * yes / (1.0 - yes) : 0.0;
    const double list = (1.0 - yes) * (m.variance[1][0] / params.treat_share +
                                       m.variance[0][0] / (1.0 - params.treat_share));
    return confessed + list;
}

double asymptotic_variance_standard(const DgpParams& params) {
    require_nondegenerate(params);
    const PopulationMoments m = population_moments(params);
    const double yes = m.yes_rate;
    double out = 0.0;
    for (int z = 0; z < 2; ++z) {
        const double arm_share = z == 1 ? params.treat_share : 1.0 - params.treat_share;
        double within = (1.0 - yes) * m.variance[z][0];
        double between = 0.0;
        if (yes > 0.0) {
            within += yes * m.variance[z][1];
            const double shift = m.mean[z][0] - m.mean[z][1];
            between = yes * (1.0 - yes) * shift * shift;
        }
        out += (within + between) / arm_share;
    }
    return out;
}

double variance_reduction(double se_standard, double se_combined) {
    if (se_standard == 0.0) {
        throw DivisionByZeroError("variance_reduction undefined for a zero standard error");
    }
    const double ratio = se_combined / se_standard;
    return 1.0 - ratio * ratio;
}

} // namespace listcombine
