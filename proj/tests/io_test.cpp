#include <doctest.h>

#include <sstream>

#include <json.hpp>

#include "listcombine/csv.hpp"
#include "listcombine/report.hpp"
#include "listcombine/simulation.hpp"

using namespace listcombine;

TEST_CASE("load_csv basic parsing") {
    std::istringstream in(
        "respondent_id,question_id,study,y_direct,z_treat,v_count\n"
        "a,energy,A,1,0,2\n"
        "b,energy,A,0,1,4\n"
        "c,energy,B,0,0,1\n");
    const auto records = load_csv(in);
    REQUIRE(records.size() == 3);
    CHECK(records[0].id == "a");
    CHECK(records[0].question == "energy");
    CHECK(records[0].study == "A");
    CHECK(*records[0].y_direct == 1);
    CHECK(*records[1].v_count == 4);
    CHECK(records[2].study == "B");
}

TEST_CASE("load_csv synthesizes optional columns and keeps NA as missing") {
    std::istringstream in(
        "y_direct,z_treat,v_count\n"
        "NA,1,2\n"
        "0,0,\n");
    const auto records = load_csv(in);
    REQUIRE(records.size() == 2);
    CHECK_FALSE(records[0].y_direct.has_value());
    CHECK(records[0].id == "row2");
    CHECK(records[0].question == "q1");
    CHECK_FALSE(records[1].v_count.has_value());

    // the NA record is later excluded with a missing-field reason
    const ValidationResult res = validate(records, ListDesign{4, 0.05});
    CHECK(res.dataset.size() == 1);
    CHECK(res.excluded.missing_field == 1);
}

TEST_CASE("load_csv error reporting") {
    std::istringstream empty("");
    CHECK_THROWS_AS(load_csv(empty), EmptyFileError);

    std::istringstream header_only("y_direct,z_treat,v_count\n");
    CHECK_THROWS_AS(load_csv(header_only), EmptyFileError);

    std::istringstream missing("y_direct,z_treat\n1,0\n");
    try {
        load_csv(missing);
        FAIL("expected MissingColumnError");
    } catch (const MissingColumnError& e) {
        CHECK(std::string(e.what()).find("v_count") != std::string::npos);
    }

    std::istringstream garbled("y_direct,z_treat,v_count\n1,0,2\nx,0,1\n");
    try {
        load_csv(garbled);
        FAIL("expected UnparseableCellError");
    } catch (const UnparseableCellError& e) {
        const std::string what = e.what();
        CHECK(what.find("row 3") != std::string::npos);
        CHECK(what.find("y_direct") != std::string::npos);
    }
}

TEST_CASE("load_csv honors a custom column mapping and quoted fields") {
    ColumnMapping cols;
    cols.y_direct = "said_yes";
    cols.v_count = "items";
    std::istringstream in(
        "said_yes,z_treat,items,respondent_id\n"
        "1,0,3,\"smith, jane\"\n");
    const auto records = load_csv(in, cols);
    REQUIRE(records.size() == 1);
    CHECK(records[0].id == "smith, jane");
    CHECK(*records[0].v_count == 3);
}

TEST_CASE("csv round trip reproduces the cell summary bit for bit") {
    DgpParams params;
    params.prevalence = 0.3;
    params.truthful_rate = 0.5;
    params.n = 2000;
    const Dataset original = generate_dataset(params, 606, "roundtrip");
    const CellSummary before = summarize_cells(original);

    std::ostringstream out;
    write_dataset_csv(out, original);
    std::istringstream in(out.str());
    const auto raw = load_csv(in);
    const Dataset reloaded = validate(raw, original.design, "roundtrip").dataset;
    REQUIRE(reloaded.size() == original.size());
    const CellSummary after = summarize_cells(reloaded);

    for (int z = 0; z < 2; ++z) {
        for (int y = 0; y < 2; ++y) {
            CHECK(before.cell(z, y).n == after.cell(z, y).n);
            CHECK(before.cell(z, y).sum == after.cell(z, y).sum);
            CHECK(before.cell(z, y).sum_sq == after.cell(z, y).sum_sq);
        }
    }
}

TEST_CASE("power surface csv") {
    std::vector<PowerCell> cells(1);
    cells[0].n_yes = 800;
    cells[0].violation = ViolationType::FalseConfessor;
    cells[0].share_or_rate = 0.2;
    cells[0].replicates = 1000;
    cells[0].power = 0.8;
    cells[0].seed = 7;
    std::ostringstream out;
    write_power_csv(out, cells);
    CHECK(out.str() ==
          "n_yes,violation_type,share_or_wsuccess,replicates,power,seed\n"
          "800,false-confessor,0.2,1000,0.8,7\n");
}

TEST_CASE("question order follows first appearance") {
    std::istringstream in(
        "question_id,y_direct,z_treat,v_count\n"
        "b,0,0,1\n"
        "a,0,0,1\n"
        "b,0,1,1\n"
        "c,0,0,1\n");
    const auto records = load_csv(in);
    const auto order = question_order(records);
    REQUIRE(order.size() == 3);
    CHECK(order[0] == "b");
    CHECK(order[1] == "a");
    CHECK(order[2] == "c");
}

TEST_CASE("single estimate report renders as one versioned json object") {
    EstimateReport r;
    r.method = Method::CombinedList;
    r.estimate = 0.666;
    r.std_error = 0.049;
    r.ci_low = 0.57;
    r.ci_high = 0.762;
    r.n_used = 500;
    r.alpha = 0.05;
    const std::string text = render_report(std::vector<EstimateReport>{r}, ReportFormat::Json);
    const auto obj = nlohmann::json::parse(text);
    CHECK(obj["schema_version"] == "listcombine/1");
    CHECK(obj["method"] == "combined_list");
    CHECK(obj["estimate"] == 0.666);
    CHECK(obj["std_error"] == 0.049);
    CHECK(obj["ci_low"] == 0.57);
    CHECK(obj["ci_high"] == 0.762);
    CHECK(obj["n_used"] == 500);
    // empty diagnostics stay present as an empty list
    CHECK(obj["diagnostics"].is_array());
    CHECK(obj["diagnostics"].empty());
}

TEST_CASE("json round trip reproduces numeric fields exactly") {
    EstimateReport r;
    r.method = Method::Direct;
    r.estimate = 1.0 / 3.0;
    r.std_error = 0.1234567890123456789;
    r.ci_low = r.estimate - 1.959963984540054 * r.std_error;
    r.ci_high = r.estimate + 1.959963984540054 * r.std_error;
    r.n_used = 7;
    const std::string text = render_report(std::vector<EstimateReport>{r}, ReportFormat::Json);
    const auto obj = nlohmann::json::parse(text);
    CHECK(obj["estimate"].get<double>() == r.estimate);
    CHECK(obj["std_error"].get<double>() == r.std_error);
    CHECK(obj["ci_low"].get<double>() == r.ci_low);
    CHECK(obj["ci_high"].get<double>() == r.ci_high);
}

TEST_CASE("estimate table renders five questions in column order") {
    std::vector<QuestionEstimates> rows;
    for (const char* q : {"energy", "transport", "neighbors", "teachers", "news"}) {
        QuestionEstimates row;
        row.question = q;
        row.direct.method = Method::Direct;
        row.direct.estimate = 0.5;
        row.direct.std_error = 0.02;
        row.direct.n_used = 500;
        row.standard_list.method = Method::StandardList;
        row.standard_list.estimate = 0.52;
        row.standard_list.std_error = 0.08;
        row.combined.method = Method::CombinedList;
        row.combined.estimate = 0.51;
        row.combined.std_error = 0.05;
        row.reduction = 0.609;
        rows.push_back(row);
    }
    const std::string text = render_estimates(rows, ReportFormat::Text);
    // header first, then one row per question, in order
    CHECK(text.find("Direct") != std::string::npos);
    CHECK(text.find("Direct") < text.find("Standard"));
    CHECK(text.find("Standard") < text.find("Combined"));
    CHECK(text.find("Combined") < text.find("% Reduction"));
    CHECK(text.find("energy") < text.find("transport"));
    CHECK(text.find("teachers") < text.find("news"));
    // five data rows
    std::size_t lines = 0;
    for (char c : text) lines += c == '\n' ? 1 : 0;
    CHECK(lines == 6);
    // three decimals in text mode, percent with one decimal
    CHECK(text.find("0.500") != std::string::npos);
    CHECK(text.find("60.9") != std::string::npos);

    const std::string csv = render_estimates(rows, ReportFormat::Csv);
    CHECK(csv.find("question,method,estimate") == 0);
    const auto obj = nlohmann::json::parse(render_estimates(rows, ReportFormat::Json));
    CHECK(obj["schema_version"] == "listcombine/1");
    CHECK(obj["questions"].size() == 5);
    CHECK(obj["questions"][0]["variance_reduction"] == 0.609);
}

TEST_CASE("placebo and cross-study rendering") {
    PlaceboRow row;
    row.question = "energy";
    row.report.test = PlaceboTest::TestI;
    row.report.statistic = 1.054;
    row.report.std_error = 0.095;
    row.report.p_value = 0.5697;
    row.report.null_value = 1.0;
    row.report.n_used = 328;
    row.report.n_treated = 160;
    row.report.n_control = 168;
    PlaceboRow broken;
    broken.question = "niche";
    broken.ok = false;
    broken.note = "too few confessors";

    FisherResult fisher;
    fisher.statistic = 29.364;
    fisher.df = 10;
    fisher.p_value = 0.0011;
    const std::vector<std::string> dropped{"niche"};

    const std::string text = render_placebo(std::vector<PlaceboRow>{row, broken}, fisher,
                                            dropped, ReportFormat::Text);
    CHECK(text.find("1.054") != std::string::npos);
    CHECK(text.find("328") != std::string::npos);
    CHECK(text.find("Fisher") != std::string::npos);
    CHECK(text.find("dropped: niche") != std::string::npos);
    CHECK(text.find("too few confessors") != std::string::npos);

    const auto obj = nlohmann::json::parse(render_placebo(
        std::vector<PlaceboRow>{row, broken}, fisher, dropped, ReportFormat::Json));
    CHECK(obj["questions"].size() == 2);
    CHECK(obj["fisher"]["df"] == 10);
    CHECK(obj["questions"][1]["ok"] == false);

    CrossStudyRow cs;
    cs.question = "energy";
    cs.method = Method::Direct;
    cs.report.test = PlaceboTest::CrossStudy;
    cs.report.statistic = 0.053;
    cs.report.std_error = 0.030;
    cs.report.p_value = 0.08;
    const std::string cs_text =
        render_cross_study(std::vector<CrossStudyRow>{cs}, ReportFormat::Text);
    CHECK(cs_text.find("0.053") != std::string::npos);
    CHECK(cs_text.find("direct") != std::string::npos);
}
