#include <doctest.h>

#include <sstream>

#include <robustboost/experiment.hpp>

using namespace robustboost;

namespace {

Json robustify_config_json() {
    return Json{{"kind", "robustify"},
                {"master_seed", 7},
                {"trials", 5},
                {"instance", {{"domain", 12}, {"u_max", 3}, {"class_size", 6}, {"m", 6}}},
                {"params",
                 {{"m0", 5}, {"n_co", 5}, {"inner_members", 3}, {"rounds_constant", 1.0}}}};
}

}  // namespace

TEST_CASE("parse_config: accepted shape and schema rejections") {
    const ExperimentConfig ok = parse_config(robustify_config_json());
    CHECK(ok.kind == "robustify");
    CHECK(ok.master_seed == 7);
    CHECK(ok.trials == 5);

    CHECK_THROWS_AS(parse_config(Json::array()), SchemaError);
    CHECK_THROWS_AS(parse_config(Json{{"master_seed", 1}, {"trials", 1}}), SchemaError);
    CHECK_THROWS_AS(
        parse_config(Json{{"kind", "nope"}, {"master_seed", 1}, {"trials", 1}}), SchemaError);
    CHECK_THROWS_AS(
        parse_config(Json{{"kind", 3}, {"master_seed", 1}, {"trials", 1}}), SchemaError);
    CHECK_THROWS_AS(
        parse_config(Json{{"kind", "bounds"}, {"master_seed", -4}, {"trials", 1}}), SchemaError);
    CHECK_THROWS_AS(
        parse_config(Json{{"kind", "bounds"}, {"master_seed", 1}, {"trials", 0}}), SchemaError);
    CHECK_THROWS_AS(parse_config(Json{{"kind", "bounds"},
                                      {"master_seed", 1},
                                      {"trials", 1},
                                      {"extra", true}}),
                    SchemaError);
    CHECK_THROWS_AS(parse_config(Json{{"kind", "bounds"},
                                      {"master_seed", 1},
                                      {"trials", 1},
                                      {"instance", Json::array()}}),
                    SchemaError);
}

TEST_CASE("inline instance parsing: valid input and schema violations") {
    Json inst = {{"domain", 4},
                 {"adversary", {{"0", {0, 1}}, {"2", {2, 3}}}},
                 {"classes", {{1, 1, -1, -1}, {-1, -1, 1, 1}}},
                 {"sample", {{0, 1}, {2, -1}}}};
    const GeneratedInstance g = detail::parse_inline_instance(inst);
    CHECK(g.domain == 4);
    CHECK(g.s.size() == 2);
    CHECK(g.classes.members.size() == 2);
    CHECK(g.u.perturbations(0) == std::vector<InstanceId>{0, 1});
    CHECK(g.target(0) == Label::Plus);

    Json bad = inst;
    bad["sample"] = Json{{0, 2}};  // label must be +-1
    CHECK_THROWS_AS(detail::parse_inline_instance(bad), SchemaError);
    bad = inst;
    bad["adversary"]["0"] = Json{0, 9};  // perturbation outside the space
    CHECK_THROWS_AS(detail::parse_inline_instance(bad), SchemaError);
    bad = inst;
    bad["classes"] = Json{{1, 1, -1}};  // row length mismatch
    CHECK_THROWS_AS(detail::parse_inline_instance(bad), SchemaError);
}

TEST_CASE("robustify experiment: every trial reaches zero empirical robust risk") {
    const ExperimentConfig cfg = parse_config(robustify_config_json());
    const ExperimentResult result = run_experiment(cfg);
    REQUIRE(result.records.size() == cfg.trials);
    for (std::size_t t = 0; t < result.records.size(); ++t) {
        const auto& rec = result.records[t];
        CHECK(rec.trial == t);
        CHECK(rec.seed == derive_seed(cfg.master_seed, t));
        CHECK(rec.metrics.at("empirical_robust_risk") == 0.0);
        CHECK(rec.metrics.at("learner_calls") > 0.0);
        CHECK(rec.metrics.at("certificate_size") <=
              rec.metrics.at("m0") * rec.metrics.at("n_co"));
    }
}

TEST_CASE("jsonl output is byte-identical across independent runs") {
    const ExperimentConfig cfg = parse_config(robustify_config_json());
    const std::string a = jsonl_output(cfg, run_experiment(cfg));
    const std::string b = jsonl_output(cfg, run_experiment(cfg));
    CHECK(a == b);

    std::istringstream lines(a);
    std::string line;
    REQUIRE(std::getline(lines, line));
    const Json meta = Json::parse(line);
    CHECK(meta.at("type") == "meta");
    CHECK(meta.at("kind") == "robustify");
    CHECK(meta.at("rng") == kRngName);
    CHECK(meta.at("master_seed") == 7);
    std::size_t records = 0;
    while (std::getline(lines, line)) {
        const Json rec = Json::parse(line);
        CHECK(rec.at("type") == "record");
        CHECK(rec.at("trial") == records);
        ++records;
    }
    CHECK(records == cfg.trials);
}

TEST_CASE("csv summary is recomputable from the jsonl records") {
    const ExperimentConfig cfg = parse_config(robustify_config_json());
    const ExperimentResult result = run_experiment(cfg);
    const std::string csv = csv_summary(cfg, result);

    // Re-derive the mean of each metric from the JSONL and match the CSV rows.
    std::map<std::string, double> means;
    std::istringstream lines(jsonl_output(cfg, result));
    std::string line;
    std::getline(lines, line);  // meta
    while (std::getline(lines, line)) {
        const Json rec = Json::parse(line);
        for (const auto& [key, v] : rec.at("metrics").items())
            means[key] += v.get<double>() / static_cast<double>(cfg.trials);
    }
    std::istringstream csv_lines(csv);
    std::getline(csv_lines, line);  // comment header
    std::getline(csv_lines, line);
    CHECK(line == "metric,mean,std");
    std::size_t rows = 0;
    while (std::getline(csv_lines, line)) {
        const auto c1 = line.find(',');
        const auto c2 = line.find(',', c1 + 1);
        const std::string key = line.substr(0, c1);
        const double mean = std::stod(line.substr(c1 + 1, c2 - c1 - 1));
        REQUIRE(means.count(key) == 1);
        CHECK(mean == doctest::Approx(means.at(key)).epsilon(1e-12));
        ++rows;
    }
    CHECK(rows == means.size());
}

TEST_CASE("mistake-learn experiment: metrics echo the halting-window formulas") {
    const ExperimentConfig cfg = parse_config(
        Json{{"kind", "mistake-learn"},
             {"master_seed", 11},
             {"trials", 5},
             {"instance", {{"n", 5}, {"u_max", 3}}},
             {"params", {{"eps", 0.2}, {"delta", 0.1}}}});
    Alg3Config acfg;
    acfg.eps = 0.2;
    acfg.delta = 0.1;
    const ExperimentResult result = run_experiment(cfg);
    for (const auto& rec : result.records) {
        CHECK(rec.metrics.at("mistake_bound") == 5.0);
        CHECK(rec.metrics.at("run_length") == static_cast<double>(acfg.run_length(5)));
        CHECK(rec.metrics.at("max_samples") == static_cast<double>(acfg.max_samples(5)));
        CHECK(rec.metrics.at("updates") <= 5.0);
        if (rec.metrics.at("halted") == 1.0)
            CHECK(rec.metrics.at("samples") <= rec.metrics.at("max_samples"));
    }
}

TEST_CASE("bounds experiment: values match the closed-form calls") {
    const ExperimentConfig cfg = parse_config(
        Json{{"kind", "bounds"},
             {"master_seed", 1},
             {"trials", 1},
             {"params",
              {{"m", 1000}, {"k", 50}, {"delta", 0.05}, {"d", 2}, {"d_star", 3},
               {"eps", 0.1}, {"mistake_bound", 3}}}});
    const auto rec = run_experiment(cfg).records.at(0);
    CHECK(rec.metrics.at("compression_bound") ==
          doctest::Approx(compression_bound(1000, 50, 0.05)));
    CHECK(rec.metrics.at("sample_complexity_bound") ==
          doctest::Approx(sample_complexity_bound(2, 3, 0.1, 0.05)));
    CHECK(rec.metrics.at("boost_rounds") == static_cast<double>(alpha_schedule(1000).rounds));
    Alg3Config acfg;
    acfg.eps = 0.1;
    acfg.delta = 0.05;
    CHECK(rec.metrics.at("run_length") == static_cast<double>(acfg.run_length(3)));
    CHECK(rec.metrics.at("max_samples") == static_cast<double>(acfg.max_samples(3)));
    CHECK(rec.metrics.at("sparsify_n") == static_cast<double>(sparsify_sample_count(3)));
}

TEST_CASE("sweep over u_max: one row per value, deterministic, with fitted c") {
    ExperimentConfig base = parse_config(robustify_config_json());
    base.trials = 3;
    const std::vector<double> values = {1, 2, 3};
    const std::string csv = sweep_csv(base, "u_max", values);
    CHECK(csv == sweep_csv(base, "u_max", values));

    std::istringstream lines(csv);
    std::string line;
    std::getline(lines, line);
    CHECK(line.rfind("# kind=robustify", 0) == 0);
    std::getline(lines, line);
    CHECK(line.rfind("u_max,", 0) == 0);
    CHECK(line.find("complexity_ratio") != std::string::npos);
    std::size_t rows = 0;
    std::string last;
    while (std::getline(lines, line)) {
        last = line;
        if (line.rfind("#", 0) != 0) ++rows;
    }
    CHECK(rows == values.size());
    CHECK(last.rfind("# fitted_c=", 0) == 0);
}

TEST_CASE("sweep over k for mistake-lb: probe at large budget uses 2k oracle calls") {
    ExperimentConfig base;
    base.kind = "mistake-lb";
    base.master_seed = 21;
    base.trials = 4;
    base.params = Json{{"strategy", "probe"}, {"t_budget", 1000}};
    for (double k : {2.0, 4.0}) {
        const ExperimentConfig cfg = apply_axis(base, "k", k);
        for (const auto& rec : run_experiment(cfg).records) {
            CHECK(rec.metrics.at("oracle_calls") == 2.0 * k);
            CHECK(rec.metrics.at("robust_on_s") == 1.0);
        }
    }
}

TEST_CASE("sweep guards: unknown axis and fractional integer values") {
    const ExperimentConfig base = parse_config(robustify_config_json());
    CHECK_THROWS_AS(apply_axis(base, "gamma", 1.0), SchemaError);
    CHECK_THROWS_AS(apply_axis(base, "u_max", 1.5), SchemaError);
    CHECK(apply_axis(base, "eps", 0.25).params.at("eps") == 0.25);
}
