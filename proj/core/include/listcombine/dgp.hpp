#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "listcombine/errors.hpp"

namespace listcombine {

/// Population parameters of the data-generating process.
///
/// Baseline units follow the identifying assumptions: engagement
/// X ~ Bernoulli(prevalence), a direct "Yes" for engagers with probability
/// truthful_rate, treatment Z ~ Bernoulli(treat_share) independent of
/// everything, control count W ~ Binomial(list_items, control_item_rate)
/// independent of (X, Y), and a reported count of V = W + X*Z.
///
/// Violation shares are fractions of the "Yes"-answering stratum:
///  - false confessors: X = 0 despite Y = 1; they report V = W in both arms.
///    They displace truthful confessors (who then withhold), so Pr[Y=1]
///    stays prevalence*truthful_rate and Pr[X=1] stays prevalence.
///  - liars: treated report stays at the control count, V = W.
///  - design-affected: treated report hits a ceiling, V = min(W+1, J).
struct DgpParams {
    double prevalence = 0.3;        // mu
    double truthful_rate = 0.5;     // p
    double treat_share = 0.5;       // gamma
    int list_items = 4;             // J
    double control_item_rate = 0.4; // W ~ Binomial(J, this)
    double share_false_confessors = 0.0;
    double share_liars = 0.0;
    double share_design_affected = 0.0;
    std::size_t n = 0;

    void validate() const; // throws InvalidParamsError
};

/// Respondent type in the generated population.
enum class UnitKind : std::uint8_t {
    TruthfulConfessor, // X=1, Y=1, complies
    Liar,              // X=1, Y=1, treated report stays at W
    DesignAffected,    // X=1, Y=1, treated report min(W+1, J)
    FalseConfessor,    // X=0, Y=1
    Withholder,        // X=1, Y=0, complies
    NonEngager,        // X=0, Y=0
};

/// Population shares of the six unit kinds implied by DgpParams.
std::array<double, 6> unit_kind_shares(const DgpParams& params);

/// Reported count for a unit of the given kind with baseline count w under
/// treatment assignment z.
int reported_count(UnitKind kind, int w, int z, int list_items);

/// Closed-form conditional moments of V within every (z, y) cell, computed
/// by enumerating the finite outcome space (W in 0..J crossed with the unit
/// kinds). Cells with zero mass carry NaN moments and weight 0.
struct PopulationMoments {
    double yes_rate = 0.0;       // Pr[Y = 1]
    double mean[2][2] = {};      // E[V | Z=z, Y=y]
    double variance[2][2] = {};  // Var[V | Z=z, Y=y]
    double weight[2][2] = {};    // Pr[Z=z, Y=y]
};

PopulationMoments population_moments(const DgpParams& params);

/// Evaluates the identifying representation
///   E[Y] + E[1-Y] * (E[V|Z=1,Y=0] - E[V|Z=0,Y=0])
/// exactly from the closed-form DGP moments. Equals the prevalence whenever
/// every violation share is zero; exceeds it when false confessors are
/// present (the inflated estimand the combined estimator converges to).
double identification_oracle(const DgpParams& params);

} // namespace listcombine
