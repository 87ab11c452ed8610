#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "listcombine/data.hpp"
#include "listcombine/rng.hpp"
#include "listcombine/simulation.hpp"

using namespace listcombine;

namespace {

RawRecord raw(std::string id, int y, int z, int v) {
    RawRecord r;
    r.id = std::move(id);
    r.y_direct = y;
    r.z_treat = z;
    r.v_count = v;
    return r;
}

} // namespace

TEST_CASE("design validation") {
    ListDesign bad_j{0, 0.05};
    CHECK_THROWS_AS(bad_j.validate(), DesignInvalidError);
    ListDesign bad_alpha{4, 0.0};
    CHECK_THROWS_AS(bad_alpha.validate(), DesignInvalidError);
    ListDesign ok{1, 0.5};
    CHECK_NOTHROW(ok.validate());
}

TEST_CASE("validate keeps complete in-range records") {
    std::vector<RawRecord> rs{raw("a", 0, 0, 1), raw("b", 1, 1, 5), raw("c", 0, 1, 0)};
    const ValidationResult res = validate(rs, ListDesign{4, 0.05});
    CHECK(res.dataset.size() == 3);
    CHECK(res.excluded.total() == 0);
    CHECK(res.dataset.question_id == "q1");
}

TEST_CASE("validate excludes and reports by reason") {
    std::vector<RawRecord> rs;
    rs.push_back(raw("a", 0, 0, 5)); // exceeds J=4 under control
    rs.push_back(raw("b", 0, 1, 5)); // fine: J + z = 5
    rs.push_back(raw("c", 2, 0, 1)); // y out of range
    rs.push_back(raw("d", 0, 0, -1)); // negative count
    rs.push_back(raw("e", 1, 0, 2));
    rs.push_back(raw("e", 0, 0, 2)); // duplicate id
    RawRecord missing = raw("f", 0, 0, 2);
    missing.v_count.reset();
    rs.push_back(missing);
    RawRecord inattentive = raw("g", 0, 0, 2);
    inattentive.attention_passed = false;
    rs.push_back(inattentive);

    const ValidationResult res = validate(rs, ListDesign{4, 0.05});
    CHECK(res.dataset.size() == 2);
    CHECK(res.excluded.out_of_range == 3);
    CHECK(res.excluded.duplicate_id == 1);
    CHECK(res.excluded.missing_field == 1);
    CHECK(res.excluded.failed_attention == 1);
}

TEST_CASE("validate reproduces the 1023 -> 1014 retention pattern") {
    std::vector<RawRecord> rs;
    RandomStream rng(99);
    for (int i = 0; i < 1023; ++i) {
        RawRecord r = raw("id" + std::to_string(i), rng.bernoulli(0.4) ? 1 : 0,
                          rng.bernoulli(0.5) ? 1 : 0, 0);
        r.v_count = static_cast<int>(rng.uniform_index(4)) + (*r.z_treat == 1 ? 1 : 0);
        if (i < 2) r.attention_passed = false;
        else if (i < 9) r.y_direct.reset();
        rs.push_back(r);
    }
    const ValidationResult res = validate(rs, ListDesign{4, 0.05});
    CHECK(res.dataset.size() == 1014);
    CHECK(res.excluded.failed_attention == 2);
    CHECK(res.excluded.missing_field == 7);
}

TEST_CASE("validate rejects fully excluded batches and mixed questions") {
    std::vector<RawRecord> all_bad{raw("a", 0, 0, 9)};
    CHECK_THROWS_AS(validate(all_bad, ListDesign{4, 0.05}), AllRecordsExcludedError);

    std::vector<RawRecord> mixed{raw("a", 0, 0, 1), raw("b", 0, 0, 1)};
    mixed[1].question = "other";
    CHECK_THROWS_AS(validate(mixed, ListDesign{4, 0.05}), DesignInvalidError);
    // explicit selection works
    const ValidationResult res = validate(mixed, ListDesign{4, 0.05}, "other");
    CHECK(res.dataset.size() == 1);
}

TEST_CASE("summarize_cells small examples") {
    Dataset d;
    d.design = ListDesign{4, 0.05};
    d.question_id = "q1";
    d.records = {Respondent{"a", 0, 0, 1, ""}, Respondent{"b", 0, 1, 2, ""}};
    const CellSummary s = summarize_cells(d);
    CHECK(s.cell(0, 0).n == 1);
    CHECK(s.cell(0, 0).mean() == 1.0);
    CHECK(s.cell(1, 0).n == 1);
    CHECK(s.cell(1, 0).mean() == 2.0);
    CHECK(s.cell(0, 0).variance_undefined());
    CHECK(s.cell(1, 0).variance_undefined());
    CHECK(s.cell(0, 1).empty());
    CHECK(s.n() == 2);
    CHECK(s.treated_count() == 1);

    // constant cell has zero variance
    d.records = {Respondent{"a", 0, 0, 2, ""}, Respondent{"b", 0, 0, 2, ""},
                 Respondent{"c", 0, 0, 2, ""}};
    CHECK(summarize_cells(d).cell(0, 0).variance() == 0.0);
}

TEST_CASE("summarize_cells matches the multinomial cell shares of the DGP") {
    DgpParams params;
    params.prevalence = 0.3;
    params.truthful_rate = 0.5;
    params.treat_share = 0.5;
    params.n = 10000;
    const CellSummary s = summarize(generate_records(params, 2024));
    const double yes = 0.15;
    const double expected[2][2] = {{(1 - yes) * 0.5, yes * 0.5}, {(1 - yes) * 0.5, yes * 0.5}};
    for (int z = 0; z < 2; ++z) {
        for (int y = 0; y < 2; ++y) {
            const double share =
                static_cast<double>(s.cell(z, y).n) / static_cast<double>(s.n());
            const double p = expected[z][y];
            const double sigma = std::sqrt(p * (1 - p) / static_cast<double>(s.n()));
            CHECK(std::fabs(share - p) <= 3.0 * sigma);
        }
    }
}

TEST_CASE("summarize_cells is permutation invariant") {
    DgpParams params;
    params.n = 500;
    auto records = generate_records(params, 7);
    const CellSummary before = summarize(records);

    RandomStream rng(13);
    for (std::size_t k = records.size(); k > 1; --k) {
        std::swap(records[k - 1], records[rng.uniform_index(k)]);
    }
    const CellSummary after = summarize(records);
    for (int z = 0; z < 2; ++z) {
        for (int y = 0; y < 2; ++y) {
            CHECK(before.cell(z, y).n == after.cell(z, y).n);
            CHECK(before.cell(z, y).sum == after.cell(z, y).sum);
            CHECK(before.cell(z, y).sum_sq == after.cell(z, y).sum_sq);
        }
    }
    CHECK(before.direct_yes_rate() == after.direct_yes_rate());
}
