#include "listcombine/dgp.hpp"

#include <cmath>

namespace listcombine {

namespace {

bool in_unit(double v) { return v >= 0.0 && v <= 1.0 && !std::isnan(v); }

// Binomial pmf by the multiplicative recurrence; J stays small here.
std::vector<double> binomial_pmf(int j_items, double rate) {
    std::vector<double> pmf(static_cast<std::size_t>(j_items) + 1, 0.0);
    pmf[0] = 1.0;
    for (int trial = 0; trial < j_items; ++trial) {
        for (int k = trial + 1; k > 0; --k) {
            pmf[k] = pmf[k] * (1.0 - rate) + pmf[k - 1] * rate;
        }
        pmf[0] *= (1.0 - rate);
    }
    return pmf;
}

} // namespace

void DgpParams::validate() const {
    if (!in_unit(prevalence) || !in_unit(truthful_rate) || !in_unit(treat_share) ||
        !in_unit(control_item_rate) || !in_unit(share_false_confessors) ||
        !in_unit(share_liars) || !in_unit(share_design_affected)) {
        throw InvalidParamsError("DGP probabilities must lie in [0,1]");
    }
    if (list_items < 1) {
        throw InvalidParamsError("list_items must be at least 1");
    }
    const double viol = share_false_confessors + share_liars + share_design_affected;
    if (viol > 1.0 + 1e-12) {
        throw InvalidParamsError("violation shares within the Yes stratum exceed 1");
    }
    // False confessors are recruited from the non-engaging population.
    const double yes_rate = prevalence * truthful_rate;
    if (prevalence + yes_rate * share_false_confessors > 1.0 + 1e-12) {
        throw InvalidParamsError(
            "false-confessor share infeasible: non-engager pool too small");
    }
}

std::array<double, 6> unit_kind_shares(const DgpParams& params) {
    const double yes = params.prevalence * params.truthful_rate;
    const double fc = yes * params.share_false_confessors;
    const double liar = yes * params.share_liars;
    const double da = yes * params.share_design_affected;
    const double truthful = yes - fc - liar - da;
    const double withhold = params.prevalence - (yes - fc);
    const double nonengage = 1.0 - yes - withhold;
    return {truthful, liar, da, fc, withhold, nonengage};
}

int reported_count(UnitKind kind, int w, int z, int list_items) {
    if (z == 0) return w;
    switch (kind) {
        case UnitKind::TruthfulConfessor:
        case UnitKind::Withholder:
            return w + 1;
        case UnitKind::DesignAffected:
            return w + 1 > list_items ? list_items : w + 1;
        case UnitKind::Liar:
        case UnitKind::FalseConfessor:
        case UnitKind::NonEngager:
            return w;
    }
    return w;
}

PopulationMoments population_moments(const DgpParams& params) {
    params.validate();

    const auto shares = unit_kind_shares(params);
    const auto pmf = binomial_pmf(params.list_items, params.control_item_rate);
    const int y_of_kind[6] = {1, 1, 1, 1, 0, 0};

    PopulationMoments out;
    out.yes_rate = params.prevalence * params.truthful_rate;

    for (int z = 0; z < 2; ++z) {
        const double pz = z == 1 ? params.treat_share : 1.0 - params.treat_share;
        for (int y = 0; y < 2; ++y) {
            double mass = 0.0;
            double e1 = 0.0;
            double e2 = 0.0;
            for (int k = 0; k < 6; ++k) {
                if (y_of_kind[k] != y || shares[k] <= 0.0) continue;
                mass += shares[k];
                for (int w = 0; w <= params.list_items; ++w) {
                    const double pr = shares[k] * pmf[static_cast<std::size_t>(w)];
                    const double v = reported_count(static_cast<UnitKind>(k), w, z,
                                                    params.list_items);
                    e1 += pr * v;
                    e2 += pr * v * v;
                }
            }
            out.weight[z][y] = pz * mass;
            if (mass > 0.0) {
                e1 /= mass;
                e2 /= mass;
                out.mean[z][y] = e1;
                out.variance[z][y] = e2 - e1 * e1;
            } else {
                out.mean[z][y] = std::nan("");
                out.variance[z][y] = std::nan("");
            }
        }
    }
    return out;
}

double identification_oracle(const DgpParams& params) {
    const PopulationMoments m = population_moments(params);
    if (m.yes_rate >= 1.0) return 1.0;
    const double diff = m.mean[1][0] - m.mean[0][0];
    return m.yes_rate + (1.0 - m.yes_rate) * diff;
}

} // namespace listcombine
