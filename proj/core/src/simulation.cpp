#include "listcombine/simulation.hpp"

#include <array>
#include <atomic>
#include <cmath>
#include <functional>
#include <thread>

#include "listcombine/placebo.hpp"
#include "listcombine/rng.hpp"

namespace listcombine {

namespace {

// Stream ids per purpose, so different experiments sharing a master seed do
// not draw overlapping sequences.
enum StreamId : std::uint64_t {
    kStreamGenerate = 1,
    kStreamStratum = 2,
    kStreamPowerOne = 3,
    kStreamPowerTwo = 4,
    kStreamCoverage = 6,
    kStreamEfficiency = 7,
};

UnitKind draw_kind(const std::array<double, 6>& shares, RandomStream& rng) {
    double u = rng.next_unit();
    for (int k = 0; k < 5; ++k) {
        if (u < shares[static_cast<std::size_t>(k)]) return static_cast<UnitKind>(k);
        u -= shares[static_cast<std::size_t>(k)];
    }
    return UnitKind::NonEngager;
}

SimRecord make_record(UnitKind kind, const DgpParams& params, RandomStream& rng) {
    SimRecord rec;
    rec.kind = kind;
    rec.y = (kind == UnitKind::Withholder || kind == UnitKind::NonEngager) ? 0 : 1;
    rec.x = (kind == UnitKind::FalseConfessor || kind == UnitKind::NonEngager) ? 0 : 1;
    rec.z = rng.bernoulli(params.treat_share) ? 1 : 0;
    rec.w = static_cast<std::int16_t>(rng.binomial(params.list_items, params.control_item_rate));
    rec.v = static_cast<std::int16_t>(reported_count(kind, rec.w, rec.z, params.list_items));
    return rec;
}

void run_parallel(std::size_t items, ParallelConfig parallel,
                  const std::function<void(std::size_t)>& body) {
    unsigned workers = parallel.threads != 0 ? parallel.threads
                                             : std::thread::hardware_concurrency();
    if (workers == 0) workers = 1;
    if (workers == 1 || items < 2) {
        for (std::size_t i = 0; i < items; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned t = 0; t < workers; ++t) {
        pool.emplace_back([&]() {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= items) return;
                body(i);
            }
        });
    }
    for (auto& th : pool) th.join();
}

} // namespace

std::vector<SimRecord> generate_records(const DgpParams& params, std::uint64_t seed) {
    params.validate();
    if (params.n == 0) {
        throw InvalidParamsError("generate_records requires n >= 1");
    }
    const auto shares = unit_kind_shares(params);
    RandomStream rng = derive_stream(seed, kStreamGenerate);
    std::vector<SimRecord> out;
    out.reserve(params.n);
    for (std::size_t i = 0; i < params.n; ++i) {
        out.push_back(make_record(draw_kind(shares, rng), params, rng));
    }
    return out;
}

std::vector<SimRecord> generate_confessor_stratum(const DgpParams& params,
                                                  std::size_t n_yes,
                                                  std::uint64_t seed) {
    params.validate();
    if (n_yes == 0) {
        throw InvalidParamsError("confessor stratum requires n_yes >= 1");
    }
    const double s_fc = params.share_false_confessors;
    const double s_liar = params.share_liars;
    const double s_da = params.share_design_affected;
    RandomStream rng = derive_stream(seed, kStreamStratum);
    std::vector<SimRecord> out;
    out.reserve(n_yes);
    for (std::size_t i = 0; i < n_yes; ++i) {
        const double u = rng.next_unit();
        UnitKind kind;
        if (u < s_fc) {
            kind = UnitKind::FalseConfessor;
        } else if (u < s_fc + s_liar) {
            kind = UnitKind::Liar;
        } else if (u < s_fc + s_liar + s_da) {
            kind = UnitKind::DesignAffected;
        } else {
            kind = UnitKind::TruthfulConfessor;
        }
        out.push_back(make_record(kind, params, rng));
    }
    return out;
}

Dataset generate_dataset(const DgpParams& params, std::uint64_t seed,
                         const std::string& question_id) {
    const std::vector<SimRecord> sims = generate_records(params, seed);
    Dataset out;
    out.design.j_items = params.list_items;
    out.question_id = question_id;
    out.records.reserve(sims.size());
    std::size_t i = 0;
    for (const SimRecord& s : sims) {
        out.records.push_back(Respondent{
            "r" + std::to_string(++i), s.y, s.z, s.v, std::string{}});
    }
    return out;
}

CellSummary summarize(const std::vector<SimRecord>& records) {
    CellSummary s;
    for (const SimRecord& r : records) {
        s.add(r.z, r.y, static_cast<double>(r.v));
    }
    return s;
}

const char* violation_name(ViolationType v) {
    switch (v) {
        case ViolationType::FalseConfessor: return "false-confessor";
        case ViolationType::Liar: return "liar";
        case ViolationType::DesignAffected: return "design-affected";
        case ViolationType::ControlVariability: return "control-variability";
    }
    return "unknown";
}

std::vector<PowerCell> power_test_one_grid(const PowerGridSpec& spec,
                                           std::size_t replicates, double alpha,
                                           std::uint64_t seed,
                                           ParallelConfig parallel) {
    if (spec.n_yes.empty() || spec.x_values.empty() || replicates == 0) {
        throw InvalidGridError("power grid needs n_yes values, x values and replicates");
    }
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw InvalidGridError("power grid alpha must lie strictly between 0 and 1");
    }
    for (double x : spec.x_values) {
        if (!(x >= 0.0 && x <= 1.0)) {
            throw InvalidGridError("power grid x values must lie in [0,1]");
        }
    }
    for (std::size_t n : spec.n_yes) {
        if (n < 4) throw InvalidGridError("power grid needs n_yes >= 4");
    }

    struct CellSpec {
        std::size_t n_yes;
        double x;
    };
    std::vector<CellSpec> cells;
    cells.reserve(spec.n_yes.size() * spec.x_values.size());
    for (std::size_t ny : spec.n_yes) {
        for (double x : spec.x_values) cells.push_back({ny, x});
    }

    const double zcrit = std_normal_quantile(Probability(1.0 - alpha / 2.0));
    std::vector<PowerCell> out(cells.size());

    run_parallel(cells.size(), parallel, [&](std::size_t ci) {
        const CellSpec& cs = cells[ci];
        DgpParams params;
        params.list_items = spec.list_items;
        params.treat_share = spec.treat_share;
        params.n = cs.n_yes;
        if (spec.violation == ViolationType::ControlVariability) {
            params.control_item_rate = cs.x;
            params.share_false_confessors = spec.fixed_false_confessor_share;
        } else {
            params.control_item_rate = spec.control_item_rate;
            if (spec.violation == ViolationType::FalseConfessor) {
                params.share_false_confessors = cs.x;
            } else if (spec.violation == ViolationType::Liar) {
                params.share_liars = cs.x;
            } else {
                params.share_design_affected = cs.x;
            }
        }

        std::size_t rejections = 0;
        for (std::size_t rep = 0; rep < replicates; ++rep) {
            const std::uint64_t stream_seed =
                derive_stream(seed, kStreamPowerOne, ci, rep).next_u64();
            const auto stratum = generate_confessor_stratum(params, cs.n_yes, stream_seed);
            const CellSummary summary = summarize(stratum);
            try {
                const PlaceboReport rep_one = placebo_test_one(summary, alpha);
                const double dev = std::fabs(rep_one.statistic - rep_one.null_value);
                if (rep_one.std_error > 0.0 && dev / rep_one.std_error > zcrit) {
                    ++rejections;
                }
            } catch (const InsufficientConfessorsError&) {
                // a degenerate arm cannot reject
            }
        }

        PowerCell cell;
        cell.n_yes = cs.n_yes;
        cell.violation = spec.violation;
        cell.share_or_rate = cs.x;
        cell.replicates = replicates;
        cell.power = static_cast<double>(rejections) / static_cast<double>(replicates);
        cell.seed = seed;
        out[ci] = cell;
    });
    return out;
}

double power_test_two(double p1, double p0, std::size_t n1, std::size_t n0,
                      double alpha, PowerMode mode, std::size_t replicates,
                      std::uint64_t seed, ParallelConfig parallel) {
    Probability pp1(p1), pp0(p0);
    if (n1 < 2 || n0 < 2) {
        throw InvalidParamsError("power_test_two requires n1, n0 >= 2");
    }
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw InvalidParamsError("power_test_two requires 0 < alpha < 1");
    }
    if (mode == PowerMode::Analytic) {
        return two_prop_power(pp1, pp0, n1, n0, Probability(alpha)).value();
    }
    if (replicates == 0) {
        throw InvalidParamsError("simulated power needs replicates >= 1");
    }

    const double zcrit = std_normal_quantile(Probability(1.0 - alpha / 2.0));
    std::vector<std::uint8_t> rejected(replicates, 0);
    run_parallel(replicates, parallel, [&](std::size_t rep) {
        RandomStream rng = derive_stream(seed, kStreamPowerTwo, rep);
        CellSummary cells;
        for (std::size_t i = 0; i < n1; ++i) {
            cells.add(1, rng.bernoulli(p1) ? 1 : 0, 0.0);
        }
        for (std::size_t i = 0; i < n0; ++i) {
            cells.add(0, rng.bernoulli(p0) ? 1 : 0, 0.0);
        }
        const PlaceboReport r = placebo_test_two(cells, alpha);
        if (r.std_error > 0.0 &&
            std::fabs(r.statistic) / r.std_error > zcrit) {
            rejected[rep] = 1;
        }
    });
    std::size_t count = 0;
    for (std::uint8_t b : rejected) count += b;
    return static_cast<double>(count) / static_cast<double>(replicates);
}

CoverageResult coverage_experiment(const DgpParams& params, std::size_t replicates,
                                   double alpha, std::uint64_t seed,
                                   ParallelConfig parallel) {
    params.validate();
    if (params.share_false_confessors != 0.0 || params.share_liars != 0.0 ||
        params.share_design_affected != 0.0) {
        throw InvalidParamsError("coverage_experiment requires a violation-free DGP");
    }
    if (replicates == 0 || params.n < 2) {
        throw InvalidParamsError("coverage_experiment needs replicates >= 1 and n >= 2");
    }

    std::vector<std::uint8_t> covered(replicates, 0);
    std::vector<double> widths(replicates, 0.0);
    run_parallel(replicates, parallel, [&](std::size_t rep) {
        const std::uint64_t rep_seed = derive_stream(seed, kStreamCoverage, rep).next_u64();
        const auto records = generate_records(params, rep_seed);
        const CellSummary cells = summarize(records);
        const EstimateReport est = combined_estimate(cells, alpha);
        covered[rep] = (est.ci_low <= params.prevalence && params.prevalence <= est.ci_high)
                           ? 1 : 0;
        widths[rep] = est.ci_high - est.ci_low;
    });

    CoverageResult out;
    out.replicates = replicates;
    std::size_t hits = 0;
    double width_sum = 0.0;
    for (std::size_t i = 0; i < replicates; ++i) {
        hits += covered[i];
        width_sum += widths[i];
    }
    out.coverage = static_cast<double>(hits) / static_cast<double>(replicates);
    out.mean_ci_width = width_sum / static_cast<double>(replicates);
    // The interval is asymptotic; warn instead of promising a level when the
    // per-dataset sample is tiny.
    out.small_sample_warning = params.n < 200;
    return out;
}

EfficiencyResult efficiency_experiment(const DgpParams& params, std::size_t replicates,
                                       std::uint64_t seed, ParallelConfig parallel) {
    params.validate();
    if (replicates < 2 || params.n < 4) {
        throw InvalidParamsError("efficiency_experiment needs replicates >= 2 and n >= 4");
    }

    std::vector<double> combined(replicates, 0.0);
    std::vector<double> standard(replicates, 0.0);
    run_parallel(replicates, parallel, [&](std::size_t rep) {
        const std::uint64_t rep_seed = derive_stream(seed, kStreamEfficiency, rep).next_u64();
        const auto records = generate_records(params, rep_seed);
        const CellSummary cells = summarize(records);
        combined[rep] = combined_estimate(cells, 0.05).estimate;
        standard[rep] = standard_list_estimate(cells, 0.05).estimate;
    });

    EfficiencyResult out;
    out.replicates = replicates;
    out.empirical_var_combined = sample_variance(combined);
    out.empirical_var_standard = sample_variance(standard);
    out.empirical_ratio = out.empirical_var_combined / out.empirical_var_standard;
    out.analytic_ratio =
        asymptotic_variance_combined(params) / asymptotic_variance_standard(params);
    return out;
}

} // namespace listcombine
