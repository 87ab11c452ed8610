#include <doctest.h>

#include <cmath>

#include "listcombine/placebo.hpp"
#include "listcombine/rng.hpp"
#include "listcombine/simulation.hpp"

using namespace listcombine;

namespace {

DgpParams reference_params(std::size_t n = 0) {
    DgpParams p;
    p.prevalence = 0.3;
    p.truthful_rate = 0.5;
    p.treat_share = 0.5;
    p.list_items = 4;
    p.control_item_rate = 0.4;
    p.n = n;
    return p;
}

} // namespace

TEST_CASE("parameter validation") {
    DgpParams bad = reference_params(10);
    bad.prevalence = 1.2;
    CHECK_THROWS_AS(bad.validate(), InvalidParamsError);

    DgpParams shares = reference_params(10);
    shares.share_false_confessors = 0.6;
    shares.share_liars = 0.6;
    CHECK_THROWS_AS(shares.validate(), InvalidParamsError);

    // false confessors must fit into the non-engager pool
    DgpParams pool = reference_params(10);
    pool.prevalence = 0.9;
    pool.truthful_rate = 0.9;
    pool.share_false_confessors = 0.5;
    CHECK_THROWS_AS(pool.validate(), InvalidParamsError);

    CHECK_THROWS_AS(generate_records(reference_params(0), 1), InvalidParamsError);
}

TEST_CASE("degenerate corners of the DGP") {
    // prevalence 0: everyone reports the baseline count
    DgpParams zeros = reference_params(2000);
    zeros.prevalence = 0.0;
    for (const SimRecord& r : generate_records(zeros, 3)) {
        CHECK(r.x == 0);
        CHECK(r.y == 0);
        CHECK(r.v == r.w);
    }
    // prevalence 1, truthful 1: every direct answer Yes, treated counts W+1
    DgpParams ones = reference_params(2000);
    ones.prevalence = 1.0;
    ones.truthful_rate = 1.0;
    for (const SimRecord& r : generate_records(ones, 4)) {
        CHECK(r.y == 1);
        CHECK(r.v == r.w + (r.z == 1 ? 1 : 0));
    }
}

TEST_CASE("generation is deterministic and reproducible") {
    const DgpParams params = reference_params(5000);
    const auto a = generate_records(params, 123);
    const auto b = generate_records(params, 123);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].v == b[i].v);
        CHECK(a[i].z == b[i].z);
        CHECK(a[i].y == b[i].y);
        CHECK(a[i].w == b[i].w);
    }
    const auto c = generate_records(params, 124);
    bool any_differs = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        any_differs = any_differs || a[i].v != c[i].v || a[i].z != c[i].z;
    }
    CHECK(any_differs);
}

TEST_CASE("identification oracle") {
    // equals the prevalence exactly whenever no violation is active
    for (double mu : {0.0, 0.2, 0.5, 0.9}) {
        for (double tr : {0.0, 0.4, 1.0}) {
            DgpParams p = reference_params();
            p.prevalence = mu;
            p.truthful_rate = tr;
            CHECK(std::fabs(identification_oracle(p) - mu) <= 1e-12);
        }
    }
    // 20% false confessors inflate the estimand to 0.33 (frozen enumeration)
    DgpParams fc = reference_params();
    fc.share_false_confessors = 0.2;
    CHECK(identification_oracle(fc) == doctest::Approx(0.33).epsilon(1e-12));
    // a fully false-confessing Yes stratum still exceeds the prevalence
    DgpParams all_fc = reference_params();
    all_fc.share_false_confessors = 1.0;
    CHECK(identification_oracle(all_fc) == doctest::Approx(0.45).epsilon(1e-12));
    CHECK(identification_oracle(all_fc) > 0.3);
    // liars and ceiling effects do not move the estimand (they sit in Y=1 cells)
    DgpParams liars = reference_params();
    liars.share_liars = 0.3;
    liars.share_design_affected = 0.2;
    CHECK(identification_oracle(liars) == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("generated marginals match the oracle at scale") {
    DgpParams params = reference_params(200000);
    const auto records = generate_records(params, 909);
    const CellSummary cells = summarize(records);

    // direct-answer rate near mu * p
    const double ybar = cells.direct_yes_rate();
    const double se_y = std::sqrt(0.15 * 0.85 / 200000.0);
    CHECK(std::fabs(ybar - 0.15) <= 4.0 * se_y);

    // combined estimate near the oracle value, Test I near its null
    const EstimateReport est = combined_estimate(cells, 0.05);
    CHECK(std::fabs(est.estimate - 0.3) <= 3.0 * est.std_error);
    const PlaceboReport t1 = placebo_test_one(cells, 0.05);
    CHECK(std::fabs(t1.statistic - 1.0) <= 3.0 * t1.std_error);

    // arm difference near the oracle under a violation
    DgpParams fc = params;
    fc.share_false_confessors = 0.2;
    const CellSummary vc = summarize(generate_records(fc, 910));
    const EstimateReport vest = combined_estimate(vc, 0.05);
    CHECK(std::fabs(vest.estimate - identification_oracle(fc)) <= 3.0 * vest.std_error);
}

TEST_CASE("confessor stratum composition") {
    DgpParams params = reference_params();
    params.share_false_confessors = 0.25;
    params.share_liars = 0.25;
    const auto stratum = generate_confessor_stratum(params, 20000, 55);
    CHECK(stratum.size() == 20000);
    std::size_t fc = 0, liar = 0;
    for (const SimRecord& r : stratum) {
        CHECK(r.y == 1);
        if (r.kind == UnitKind::FalseConfessor) ++fc;
        if (r.kind == UnitKind::Liar) ++liar;
        if (r.z == 0) CHECK(r.v == r.w);
    }
    const double sigma = std::sqrt(0.25 * 0.75 / 20000.0);
    CHECK(std::fabs(fc / 20000.0 - 0.25) <= 4.0 * sigma);
    CHECK(std::fabs(liar / 20000.0 - 0.25) <= 4.0 * sigma);
}

TEST_CASE("test I power grid") {
    PowerGridSpec spec;
    spec.n_yes = {400, 800};
    spec.violation = ViolationType::FalseConfessor;
    spec.x_values = {0.0, 0.1, 0.2};
    const auto cells = power_test_one_grid(spec, 400, 0.05, 2026);
    REQUIRE(cells.size() == 6);

    // null calibration at share 0
    for (const PowerCell& c : cells) {
        if (c.share_or_rate == 0.0) {
            CHECK(c.power >= 0.01);
            CHECK(c.power <= 0.10);
        }
    }
    // power grows with the violator share at fixed n, and with n at fixed share
    auto power_at = [&](std::size_t ny, double x) {
        for (const PowerCell& c : cells) {
            if (c.n_yes == ny && c.share_or_rate == x) return c.power;
        }
        REQUIRE(false);
        return 0.0;
    };
    CHECK(power_at(800, 0.2) > power_at(800, 0.1));
    CHECK(power_at(800, 0.2) > power_at(400, 0.2) - 0.03);

    // deterministic in the seed and independent of the worker count
    const auto again = power_test_one_grid(spec, 400, 0.05, 2026, {1});
    const auto wide = power_test_one_grid(spec, 400, 0.05, 2026, {4});
    for (std::size_t i = 0; i < cells.size(); ++i) {
        CHECK(cells[i].power == again[i].power);
        CHECK(cells[i].power == wide[i].power);
    }

    CHECK_THROWS_AS(power_test_one_grid(PowerGridSpec{}, 100, 0.05, 1), InvalidGridError);
    PowerGridSpec bad = spec;
    bad.x_values = {1.5};
    CHECK_THROWS_AS(power_test_one_grid(bad, 100, 0.05, 1), InvalidGridError);
}

TEST_CASE("control variability panel: less baseline noise, more power") {
    PowerGridSpec spec;
    spec.n_yes = {800};
    spec.violation = ViolationType::ControlVariability;
    spec.x_values = {0.1, 0.5};
    spec.fixed_false_confessor_share = 0.20;
    const auto cells = power_test_one_grid(spec, 400, 0.05, 31);
    REQUIRE(cells.size() == 2);
    CHECK(cells[0].power > cells[1].power);
}

TEST_CASE("test II power: analytic and simulated modes agree") {
    const double analytic =
        power_test_two(0.6, 0.5, 500, 500, 0.05, PowerMode::Analytic, 0, 0);
    const double simulated =
        power_test_two(0.6, 0.5, 500, 500, 0.05, PowerMode::Simulated, 4000, 17);
    CHECK(std::fabs(analytic - simulated) <= 0.03);

    const double null_rate =
        power_test_two(0.5, 0.5, 300, 300, 0.05, PowerMode::Simulated, 4000, 18);
    CHECK(null_rate >= 0.03);
    CHECK(null_rate <= 0.08);

    CHECK(power_test_two(1.0, 0.0, 100, 100, 0.05, PowerMode::Analytic, 0, 0) ==
          doctest::Approx(1.0).epsilon(1e-9));

    // simulated mode is thread-count invariant
    const double t1 = power_test_two(0.6, 0.5, 200, 200, 0.05, PowerMode::Simulated, 500, 9, {1});
    const double t4 = power_test_two(0.6, 0.5, 200, 200, 0.05, PowerMode::Simulated, 500, 9, {4});
    CHECK(t1 == t4);
}

TEST_CASE("coverage experiment") {
    // extreme level: a 50% interval covers about half the time
    const CoverageResult half =
        coverage_experiment(reference_params(2000), 2000, 0.5, 444);
    CHECK(half.coverage >= 0.47);
    CHECK(half.coverage <= 0.53);
    CHECK_FALSE(half.small_sample_warning);

    // tiny samples only get a warning, no numeric promise
    const CoverageResult tiny = coverage_experiment(reference_params(50), 50, 0.05, 4);
    CHECK(tiny.small_sample_warning);

    DgpParams with_viol = reference_params(1000);
    with_viol.share_liars = 0.2;
    CHECK_THROWS_AS(coverage_experiment(with_viol, 10, 0.05, 1), InvalidParamsError);

    // worker-count invariance
    const CoverageResult a = coverage_experiment(reference_params(500), 200, 0.05, 5, {1});
    const CoverageResult b = coverage_experiment(reference_params(500), 200, 0.05, 5, {4});
    CHECK(a.coverage == b.coverage);
    CHECK(a.mean_ci_width == b.mean_ci_width);
}

TEST_CASE("efficiency experiment") {
    // nobody confesses: the estimators coincide and the ratio is 1
    DgpParams p0 = reference_params(4000);
    p0.truthful_rate = 0.0;
    const EfficiencyResult none = efficiency_experiment(p0, 400, 21);
    CHECK(none.analytic_ratio == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(none.empirical_ratio == doctest::Approx(1.0).epsilon(1e-9));

    // high confession rates: large efficiency gains, empirical tracks analytic
    DgpParams strong = reference_params(10000);
    strong.prevalence = 0.5;
    strong.truthful_rate = 0.9;
    const EfficiencyResult res = efficiency_experiment(strong, 800, 22);
    CHECK(res.empirical_var_combined < res.empirical_var_standard);
    CHECK(res.empirical_ratio == doctest::Approx(res.analytic_ratio).epsilon(0.15));

    // a high-direct-rate regime sits in the strong-reduction band
    DgpParams high = reference_params(10000);
    high.prevalence = 0.66;
    high.truthful_rate = 0.99;
    const EfficiencyResult band = efficiency_experiment(high, 600, 23);
    const double reduction = 1.0 - band.analytic_ratio;
    CHECK(reduction >= 0.5);
    CHECK(reduction <= 0.7);
    CHECK(1.0 - band.empirical_ratio >= 0.4);
    CHECK(1.0 - band.empirical_ratio <= 0.8);
}

TEST_CASE("generate_dataset wraps records with ids and validates") {
    const Dataset d = generate_dataset(reference_params(100), 8, "energy");
    CHECK(d.size() == 100);
    CHECK(d.question_id == "energy");
    CHECK(d.records.front().id == "r1");
    for (const Respondent& r : d.records) {
        CHECK(r.v_count <= d.design.j_items + r.z_treat);
        CHECK(r.v_count >= 0);
    }
}
