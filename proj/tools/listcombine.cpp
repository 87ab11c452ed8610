// Command-line front end: prevalence estimation from combined direct and
// list-experiment questioning, placebo tests of the identifying assumptions,
// cross-study comparisons, a DGP simulator, and Monte Carlo power analyses.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "listcombine/acceptance.hpp"
#include "listcombine/csv.hpp"
#include "listcombine/report.hpp"

namespace lc = listcombine;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

// --j-items accepts either one list length for every question ("4") or a
// per-question mapping ("energy=4,transport=3").
std::map<std::string, int> parse_j_spec(const std::string& spec, int& default_j) {
    std::map<std::string, int> per_question;
    std::stringstream ss(spec);
    std::string part;
    while (std::getline(ss, part, ',')) {
        const auto eq = part.find('=');
        if (eq == std::string::npos) {
            default_j = std::stoi(part);
        } else {
            per_question[part.substr(0, eq)] = std::stoi(part.substr(eq + 1));
        }
    }
    return per_question;
}

std::vector<std::size_t> parse_size_range(const std::string& spec) {
    std::vector<std::size_t> out;
    const auto c1 = spec.find(':');
    if (c1 == std::string::npos) {
        out.push_back(std::stoull(spec));
        return out;
    }
    const auto c2 = spec.find(':', c1 + 1);
    if (c2 == std::string::npos) {
        throw lc::InvalidGridError("range must be start:stop:step, got '" + spec + "'");
    }
    const std::size_t start = std::stoull(spec.substr(0, c1));
    const std::size_t stop = std::stoull(spec.substr(c1 + 1, c2 - c1 - 1));
    const std::size_t step = std::stoull(spec.substr(c2 + 1));
    if (step == 0 || stop < start) {
        throw lc::InvalidGridError("bad range '" + spec + "'");
    }
    for (std::size_t v = start; v <= stop; v += step) out.push_back(v);
    return out;
}

std::vector<double> parse_double_range(const std::string& spec) {
    std::vector<double> out;
    const auto c1 = spec.find(':');
    if (c1 == std::string::npos) {
        out.push_back(std::stod(spec));
        return out;
    }
    const auto c2 = spec.find(':', c1 + 1);
    if (c2 == std::string::npos) {
        throw lc::InvalidGridError("range must be start:stop:step, got '" + spec + "'");
    }
    const double start = std::stod(spec.substr(0, c1));
    const double stop = std::stod(spec.substr(c1 + 1, c2 - c1 - 1));
    const double step = std::stod(spec.substr(c2 + 1));
    if (step <= 0.0 || stop < start) {
        throw lc::InvalidGridError("bad range '" + spec + "'");
    }
    for (double v = start; v <= stop + 1e-12; v += step) out.push_back(v);
    return out;
}

void write_output(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(path);
    if (!out) {
        throw lc::EmptyFileError("cannot open '" + path + "' for writing");
    }
    out << content;
}

struct CommonInput {
    std::string input_path;
    std::string j_spec = "4";
    double alpha = 0.05;
    std::string format = "text";
    std::vector<std::string> questions; // empty = all, in file order
};

void add_common_input(CLI::App* cmd, CommonInput& in) {
    cmd->add_option("--input,-i", in.input_path, "respondent CSV (long format)")
        ->required();
    cmd->add_option("--j-items,-j", in.j_spec,
                    "non-sensitive list length: one value or question=J pairs");
    cmd->add_option("--alpha,-a", in.alpha, "level for intervals and tests")
        ->check(CLI::Range(1e-9, 1.0 - 1e-9));
    cmd->add_option("--format,-f", in.format, "text | json | csv")
        ->check(CLI::IsMember({"text", "json", "csv"}));
    cmd->add_option("--question,-q", in.questions, "restrict to these question ids");
}

struct LoadedQuestion {
    std::string question;
    lc::ValidationResult validated;
};

std::vector<LoadedQuestion> load_questions(const CommonInput& in,
                                           const std::vector<lc::RawRecord>& records) {
    int default_j = 4;
    const auto per_question = parse_j_spec(in.j_spec, default_j);

    std::vector<std::string> order = lc::question_order(records);
    if (!in.questions.empty()) {
        std::vector<std::string> filtered;
        for (const std::string& q : order) {
            for (const std::string& want : in.questions) {
                if (q == want) filtered.push_back(q);
            }
        }
        order = std::move(filtered);
        if (order.empty()) {
            throw lc::AllRecordsExcludedError("no rows match the requested question ids");
        }
    }

    std::vector<LoadedQuestion> out;
    for (const std::string& q : order) {
        lc::ListDesign design;
        design.alpha = in.alpha;
        const auto it = per_question.find(q);
        design.j_items = it != per_question.end() ? it->second : default_j;
        out.push_back({q, lc::validate(records, design, q)});
    }
    return out;
}

int cmd_estimate(const CommonInput& in, const std::string& variance_form,
                 const std::string& output) {
    const auto records = lc::load_csv(in.input_path);
    const auto questions = load_questions(in, records);
    const lc::VarianceForm form = variance_form == "cell" ? lc::VarianceForm::CellCounts
                                                          : lc::VarianceForm::GammaHat;
    std::vector<lc::QuestionEstimates> rows;
    for (const LoadedQuestion& lq : questions) {
        const lc::CellSummary cells = lc::summarize_cells(lq.validated.dataset);
        lc::QuestionEstimates row;
        row.question = lq.question;
        row.excluded = lq.validated.excluded;
        row.direct = lc::direct_estimate(cells, in.alpha);
        row.standard_list = lc::standard_list_estimate(cells, in.alpha);
        row.combined = lc::combined_estimate(cells, in.alpha, form);
        row.reduction =
            lc::variance_reduction(row.standard_list.std_error, row.combined.std_error);
        rows.push_back(std::move(row));
    }
    write_output(output, lc::render_estimates(rows, lc::parse_report_format(in.format)));
    return kExitOk;
}

int cmd_placebo(const CommonInput& in, const std::string& which, bool fisher,
                const std::string& output) {
    const auto records = lc::load_csv(in.input_path);
    const auto questions = load_questions(in, records);

    std::ostringstream all;
    const lc::ReportFormat format = lc::parse_report_format(in.format);
    for (const std::string test : which == "both"
                                      ? std::vector<std::string>{"one", "two"}
                                      : std::vector<std::string>{which}) {
        std::vector<lc::PlaceboRow> rows;
        std::vector<double> p_values;
        std::vector<std::string> dropped;
        for (const LoadedQuestion& lq : questions) {
            const lc::CellSummary cells = lc::summarize_cells(lq.validated.dataset);
            lc::PlaceboRow row;
            row.question = lq.question;
            try {
                row.report = test == "one" ? lc::placebo_test_one(cells, in.alpha)
                                           : lc::placebo_test_two(cells, in.alpha);
                p_values.push_back(row.report.p_value);
            } catch (const lc::DegenerateCellsError& e) {
                row.ok = false;
                row.note = e.what();
                dropped.push_back(lq.question);
            }
            rows.push_back(std::move(row));
        }
        std::optional<lc::FisherResult> joint;
        if (fisher && !p_values.empty()) {
            joint = lc::fisher_combine(p_values);
        }
        if (format == lc::ReportFormat::Text) {
            all << (test == "one" ? "Placebo Test I (list difference among confessors; null 1)"
                                  : "Placebo Test II (direct answer by treatment; null 0)")
                << '\n';
        }
        all << lc::render_placebo(rows, joint, dropped, format);
        if (format == lc::ReportFormat::Text) all << '\n';
    }
    write_output(output, all.str());
    return kExitOk;
}

int cmd_compare_studies(const CommonInput& in, const std::string& study_a,
                        const std::string& study_b, const std::string& method,
                        const std::string& output) {
    const auto records = lc::load_csv(in.input_path);
    int default_j = 4;
    const auto per_question = parse_j_spec(in.j_spec, default_j);

    std::vector<std::string> order = lc::question_order(records);
    if (!in.questions.empty()) {
        std::erase_if(order, [&](const std::string& q) {
            return std::find(in.questions.begin(), in.questions.end(), q) ==
                   in.questions.end();
        });
    }

    std::vector<lc::CrossStudyRow> rows;
    for (const std::string& q : order) {
        std::vector<lc::RawRecord> a_records;
        std::vector<lc::RawRecord> b_records;
        for (const lc::RawRecord& r : records) {
            if (r.question != q) continue;
            if (r.study == study_a) a_records.push_back(r);
            if (r.study == study_b) b_records.push_back(r);
        }
        lc::ListDesign design;
        design.alpha = in.alpha;
        const auto it = per_question.find(q);
        design.j_items = it != per_question.end() ? it->second : default_j;

        const lc::Dataset da = lc::validate(a_records, design, q).dataset;
        const lc::Dataset db = lc::validate(b_records, design, q).dataset;
        const lc::CellSummary ca = lc::summarize_cells(da);
        const lc::CellSummary cb = lc::summarize_cells(db);

        const auto add_row = [&](lc::Method m) {
            lc::EstimateReport ra, rb;
            switch (m) {
                case lc::Method::Direct:
                    ra = lc::direct_estimate(ca, in.alpha);
                    rb = lc::direct_estimate(cb, in.alpha);
                    break;
                case lc::Method::StandardList:
                    ra = lc::standard_list_estimate(ca, in.alpha);
                    rb = lc::standard_list_estimate(cb, in.alpha);
                    break;
                case lc::Method::CombinedList:
                    ra = lc::combined_estimate(ca, in.alpha);
                    rb = lc::combined_estimate(cb, in.alpha);
                    break;
            }
            rows.push_back({q, m, lc::cross_study_difference(ra, rb)});
        };
        if (method == "all" || method == "direct") add_row(lc::Method::Direct);
        if (method == "all" || method == "standard") add_row(lc::Method::StandardList);
        if (method == "all" || method == "combined") add_row(lc::Method::CombinedList);
    }
    write_output(output, lc::render_cross_study(rows, lc::parse_report_format(in.format)));
    return kExitOk;
}

struct SimulateArgs {
    lc::DgpParams params;
    std::uint64_t seed = 0;
    std::string question = "sim";
    std::string output;
};

int cmd_simulate(const SimulateArgs& args) {
    const lc::Dataset data = lc::generate_dataset(args.params, args.seed, args.question);
    std::ostringstream out;
    lc::write_dataset_csv(out, data);
    write_output(args.output, out.str());
    std::cerr << "seed: " << args.seed << "\n";
    return kExitOk;
}

struct PowerOneArgs {
    std::string n_yes_spec = "800";
    std::string violation = "false-confessor";
    std::string share_spec = "0.20";
    std::string rate_spec = "0:1:0.01";
    double fixed_share = 0.20;
    int j_items = 4;
    double control_item_rate = 0.4;
    double gamma = 0.5;
    std::size_t replicates = 1000;
    double alpha = 0.05;
    std::uint64_t seed = 0;
    unsigned threads = 0;
    std::string output;
};

int cmd_power_one(const PowerOneArgs& args) {
    lc::PowerGridSpec spec;
    spec.n_yes = parse_size_range(args.n_yes_spec);
    spec.list_items = args.j_items;
    spec.control_item_rate = args.control_item_rate;
    spec.treat_share = args.gamma;
    spec.fixed_false_confessor_share = args.fixed_share;
    if (args.violation == "false-confessor") {
        spec.violation = lc::ViolationType::FalseConfessor;
        spec.x_values = parse_double_range(args.share_spec);
    } else if (args.violation == "liar") {
        spec.violation = lc::ViolationType::Liar;
        spec.x_values = parse_double_range(args.share_spec);
    } else if (args.violation == "design-affected") {
        spec.violation = lc::ViolationType::DesignAffected;
        spec.x_values = parse_double_range(args.share_spec);
    } else if (args.violation == "control-variability") {
        spec.violation = lc::ViolationType::ControlVariability;
        spec.x_values = parse_double_range(args.rate_spec);
    } else {
        throw lc::InvalidGridError("unknown violation '" + args.violation + "'");
    }
    const auto cells = lc::power_test_one_grid(spec, args.replicates, args.alpha, args.seed,
                                               {args.threads});
    std::ostringstream out;
    lc::write_power_csv(out, cells);
    write_output(args.output, out.str());
    return kExitOk;
}

struct PowerTwoArgs {
    double p1 = 0.6;
    double p0 = 0.5;
    std::size_t n1 = 500;
    std::size_t n0 = 500;
    double alpha = 0.05;
    std::string mode = "analytic";
    std::size_t replicates = 10000;
    std::optional<std::uint64_t> seed;
    bool continuity = false;
    unsigned threads = 0;
};

int cmd_power_two(const PowerTwoArgs& args) {
    double power;
    std::uint64_t seed = 0;
    if (args.mode == "analytic") {
        lc::TwoPropPowerOptions opts;
        opts.continuity_correction = args.continuity;
        power = lc::two_prop_power(lc::Probability(args.p1), lc::Probability(args.p0),
                                   args.n1, args.n0, lc::Probability(args.alpha), opts)
                    .value();
    } else {
        if (!args.seed) {
            std::cerr << "power --test two --mode simulated requires --seed\n";
            return kExitUsage;
        }
        seed = *args.seed;
        power = lc::power_test_two(args.p1, args.p0, args.n1, args.n0, args.alpha,
                                   lc::PowerMode::Simulated, args.replicates, seed,
                                   {args.threads});
    }
    std::printf("mode,p1,p0,n1,n0,alpha,replicates,seed,power\n");
    std::printf("%s,%g,%g,%zu,%zu,%g,%zu,%llu,%.6f\n", args.mode.c_str(), args.p1, args.p0,
                args.n1, args.n0, args.alpha,
                args.mode == "analytic" ? 0 : args.replicates,
                static_cast<unsigned long long>(seed), power);
    return kExitOk;
}

int cmd_selftest(double scale, std::uint64_t seed, unsigned threads) {
    std::cerr << "seed: " << seed << " (scale " << scale << ")\n";
    const auto results =
        lc::run_acceptance(lc::AcceptanceScale{scale}, seed, lc::ParallelConfig{threads});
    bool all_ok = true;
    for (const lc::CriterionResult& r : results) {
        std::printf("[%s] %-28s %s\n", r.passed ? "PASS" : "FAIL", r.name.c_str(),
                    r.detail.c_str());
        all_ok = all_ok && r.passed;
    }
    return all_ok ? kExitOk : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"survey prevalence estimation from combined direct questioning and list "
                 "experiments"};
    app.require_subcommand(1);

    // estimate
    CommonInput est_in;
    std::string est_variance_form = "gamma";
    std::string est_output;
    CLI::App* est = app.add_subcommand("estimate",
                                       "direct, standard-list and combined prevalence "
                                       "estimates per question");
    add_common_input(est, est_in);
    est->add_option("--variance-form", est_variance_form,
                    "combined-variance denominators: gamma (arm shares) | cell (cell counts)")
        ->check(CLI::IsMember({"gamma", "cell"}));
    est->add_option("--output,-o", est_output, "write here instead of stdout");

    // placebo
    CommonInput pl_in;
    std::string pl_test = "both";
    bool pl_fisher = false;
    std::string pl_output;
    CLI::App* pl = app.add_subcommand("placebo", "placebo tests of the identifying assumptions");
    add_common_input(pl, pl_in);
    pl->add_option("--test,-t", pl_test, "one | two | both")
        ->check(CLI::IsMember({"one", "two", "both"}));
    pl->add_flag("--fisher", pl_fisher, "combine p-values across questions (Fisher's method)");
    pl->add_option("--output,-o", pl_output, "write here instead of stdout");

    // compare-studies
    CommonInput cs_in;
    std::string cs_a = "A";
    std::string cs_b = "B";
    std::string cs_method = "all";
    std::string cs_output;
    CLI::App* cs = app.add_subcommand("compare-studies",
                                      "study-A-minus-study-B differences per question");
    add_common_input(cs, cs_in);
    cs->add_option("--study-a", cs_a, "study label of the first arm");
    cs->add_option("--study-b", cs_b, "study label of the second arm");
    cs->add_option("--method,-m", cs_method, "all | direct | standard | combined")
        ->check(CLI::IsMember({"all", "direct", "standard", "combined"}));
    cs->add_option("--output,-o", cs_output, "write here instead of stdout");

    // simulate
    SimulateArgs sim;
    CLI::App* sm = app.add_subcommand("simulate", "draw a dataset from the DGP and write CSV");
    sm->add_option("--mu", sim.params.prevalence, "true prevalence")->required();
    sm->add_option("--p", sim.params.truthful_rate, "truthful-confession rate")->required();
    sm->add_option("--gamma", sim.params.treat_share, "treatment share");
    sm->add_option("--j-items,-j", sim.params.list_items, "non-sensitive list length");
    sm->add_option("--w", sim.params.control_item_rate, "control item rate (binomial)");
    sm->add_option("--n", sim.params.n, "records to draw")->required();
    sm->add_option("--fc", sim.params.share_false_confessors, "false-confessor share of Yes");
    sm->add_option("--liar", sim.params.share_liars, "liar share of Yes");
    sm->add_option("--da", sim.params.share_design_affected, "design-affected share of Yes");
    sm->add_option("--question", sim.question, "question id to stamp on the rows");
    sm->add_option("--seed,-s", sim.seed, "RNG seed")->required();
    sm->add_option("--output,-o", sim.output, "write here instead of stdout");

    // power
    CLI::App* pw = app.add_subcommand("power", "Monte Carlo / analytic power analyses");
    std::string pw_test;
    pw->add_option("--test,-t", pw_test, "one | two")
        ->required()
        ->check(CLI::IsMember({"one", "two"}));
    PowerOneArgs p1args;
    pw->add_option("--n-yes", p1args.n_yes_spec, "Yes-stratum size, value or start:stop:step");
    pw->add_option("--violation", p1args.violation,
                   "false-confessor | liar | design-affected | control-variability");
    pw->add_option("--share", p1args.share_spec, "violator share, value or start:stop:step");
    pw->add_option("--w-success", p1args.rate_spec,
                   "control item rates for the control-variability panel");
    pw->add_option("--fixed-share", p1args.fixed_share,
                   "false-confessor share held fixed in the control-variability panel");
    pw->add_option("--j-items,-j", p1args.j_items, "non-sensitive list length");
    pw->add_option("--w", p1args.control_item_rate, "control item rate for the share panels");
    pw->add_option("--gamma", p1args.gamma, "treatment share");
    PowerTwoArgs p2args;
    pw->add_option("--p1", p2args.p1, "treated-arm proportion (test two)");
    pw->add_option("--p0", p2args.p0, "control-arm proportion (test two)");
    pw->add_option("--n1", p2args.n1, "treated-arm size (test two)");
    pw->add_option("--n0", p2args.n0, "control-arm size (test two)");
    pw->add_option("--mode", p2args.mode, "analytic | simulated (test two)")
        ->check(CLI::IsMember({"analytic", "simulated"}));
    pw->add_flag("--continuity-correction", p2args.continuity,
                 "apply the continuity correction in analytic mode");
    std::size_t pw_replicates = 0;
    pw->add_option("--replicates,-r", pw_replicates, "Monte Carlo replicates");
    double pw_alpha = 0.05;
    pw->add_option("--alpha,-a", pw_alpha, "test level")->check(CLI::Range(1e-9, 1.0 - 1e-9));
    std::optional<std::uint64_t> pw_seed;
    pw->add_option("--seed,-s", pw_seed, "RNG seed");
    unsigned pw_threads = 0;
    pw->add_option("--threads", pw_threads, "worker threads (0 = all cores)");
    std::string pw_output;
    pw->add_option("--output,-o", pw_output, "write here instead of stdout");

    // selftest
    CLI::App* st = app.add_subcommand("selftest",
                                      "run the acceptance checks at reduced scale");
    double st_scale = 0.2;
    std::uint64_t st_seed = 20260810;
    unsigned st_threads = 0;
    st->add_option("--scale", st_scale, "replicate-count factor")
        ->check(CLI::Range(0.01, 1.0));
    st->add_option("--seed,-s", st_seed, "RNG seed");
    st->add_option("--threads", st_threads, "worker threads (0 = all cores)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n\n";
        if (!app.get_subcommands().empty()) {
            std::cerr << app.get_subcommands().front()->help();
        } else {
            std::cerr << app.help();
        }
        return kExitUsage;
    }

    try {
        if (est->parsed()) return cmd_estimate(est_in, est_variance_form, est_output);
        if (pl->parsed()) return cmd_placebo(pl_in, pl_test, pl_fisher, pl_output);
        if (cs->parsed()) return cmd_compare_studies(cs_in, cs_a, cs_b, cs_method, cs_output);
        if (sm->parsed()) return cmd_simulate(sim);
        if (pw->parsed()) {
            if (pw_test == "one") {
                if (!pw_seed) {
                    std::cerr << "power --test one requires --seed\n";
                    return kExitUsage;
                }
                p1args.replicates = pw_replicates == 0 ? 1000 : pw_replicates;
                p1args.alpha = pw_alpha;
                p1args.seed = *pw_seed;
                p1args.threads = pw_threads;
                p1args.output = pw_output;
                return cmd_power_one(p1args);
            }
            p2args.alpha = pw_alpha;
            p2args.replicates = pw_replicates == 0 ? 10000 : pw_replicates;
            p2args.seed = pw_seed;
            p2args.threads = pw_threads;
            return cmd_power_two(p2args);
        }
        if (st->parsed()) return cmd_selftest(st_scale, st_seed, st_threads);
    } catch (const lc::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
    return kExitUsage;
}
