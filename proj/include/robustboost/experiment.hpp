// experiment.hpp
//
// Experiment harness: JSON config parsing with schema validation, seeded
// per-trial execution for every experiment kind, JSONL metric records, CSV
// summaries, and parameter sweeps. All outputs are byte-deterministic given
// (config, master_seed); wall-clock time is therefore never written into
// metric files.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "adversary.hpp"
#include "boosting.hpp"
#include "core.hpp"
#include "errors.hpp"
#include "learners.hpp"
#include "lowerbounds.hpp"
#include "mistake_reduction.hpp"
#include "reduction.hpp"
#include "rng.hpp"
#include "vcdim.hpp"

namespace robustboost {

using Json = nlohmann::ordered_json;

inline const std::vector<std::string>& experiment_kinds() {
    static const std::vector<std::string> kinds = {
        "robustify", "mistake-learn", "pac-lb", "mistake-lb", "vc-verify", "bounds"};
    return kinds;
}

struct ExperimentConfig {
    std::string kind;
    std::uint64_t master_seed = 0;
    std::size_t trials = 1;
    Json instance;  // kind-specific instance spec (inline or generator)
    Json params;    // kind-specific parameters
};

// ---------------------------------------------------------------------------
// Schema validation

namespace detail {

inline const Json& require_field(const Json& j, const std::string& key, const std::string& ctx) {
    if (!j.is_object() || !j.contains(key))
        throw SchemaError(ctx + ": missing required field '" + key + "'");
    return j.at(key);
}

inline std::uint64_t as_u64(const Json& j, const std::string& ctx) {
    if (j.is_number_unsigned()) return j.get<std::uint64_t>();
    if (j.is_number_integer() && j.get<std::int64_t>() >= 0)
        return static_cast<std::uint64_t>(j.get<std::int64_t>());
    throw SchemaError(ctx + ": expected an unsigned integer");
}

inline double as_number(const Json& j, const std::string& ctx) {
    if (!j.is_number()) throw SchemaError(ctx + ": expected a number");
    return j.get<double>();
}

inline std::string as_string(const Json& j, const std::string& ctx) {
    if (!j.is_string()) throw SchemaError(ctx + ": expected a string");
    return j.get<std::string>();
}

inline std::uint64_t get_u64(const Json& j, const std::string& key, std::uint64_t fallback,
                             const std::string& ctx) {
    if (!j.is_object() || !j.contains(key)) return fallback;
    return as_u64(j.at(key), ctx + "." + key);
}

inline double get_number(const Json& j, const std::string& key, double fallback,
                         const std::string& ctx) {
    if (!j.is_object() || !j.contains(key)) return fallback;
    return as_number(j.at(key), ctx + "." + key);
}

inline std::string get_string(const Json& j, const std::string& key, std::string fallback,
                              const std::string& ctx) {
    if (!j.is_object() || !j.contains(key)) return fallback;
    return as_string(j.at(key), ctx + "." + key);
}

inline bool get_bool(const Json& j, const std::string& key, bool fallback,
                     const std::string& ctx) {
    if (!j.is_object() || !j.contains(key)) return fallback;
    if (!j.at(key).is_boolean()) throw SchemaError(ctx + "." + key + ": expected a boolean");
    return j.at(key).get<bool>();
}

}  // namespace detail

inline ExperimentConfig parse_config(const Json& j) {
    if (!j.is_object()) throw SchemaError("config: expected a JSON object");
    ExperimentConfig cfg;
    cfg.kind = detail::as_string(detail::require_field(j, "kind", "config"), "config.kind");
    const auto& kinds = experiment_kinds();
    if (std::find(kinds.begin(), kinds.end(), cfg.kind) == kinds.end())
        throw SchemaError("config.kind: unknown experiment kind '" + cfg.kind + "'");
    cfg.master_seed =
        detail::as_u64(detail::require_field(j, "master_seed", "config"), "config.master_seed");
    cfg.trials = detail::as_u64(detail::require_field(j, "trials", "config"), "config.trials");
    if (cfg.trials == 0) throw SchemaError("config.trials: must be >= 1");
    cfg.instance = j.contains("instance") ? j.at("instance") : Json::object();
    cfg.params = j.contains("params") ? j.at("params") : Json::object();
    if (!cfg.instance.is_object()) throw SchemaError("config.instance: expected an object");
    if (!cfg.params.is_object()) throw SchemaError("config.params: expected an object");
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (key != "kind" && key != "master_seed" && key != "trials" && key != "instance" &&
            key != "params")
            throw SchemaError("config." + key + ": unrecognized field");
    }
    return cfg;
}

inline ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("config: cannot open '" + path + "'");
    Json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError("config: JSON parse failure in '" + path + "': " + e.what());
    }
    return parse_config(j);
}

// ---------------------------------------------------------------------------
// Instance material

struct GeneratedInstance {
    std::size_t domain = 0;
    Dataset s;
    Adversary u;
    FiniteClass classes;
    Hypothesis target;
};

// Random robustly-realizable instance: a random finite class containing a
// random target, perturbation sets confined to the target's label regions
// (so the target witnesses robust realizability), and a target-labeled sample.
inline GeneratedInstance random_realizable_instance(std::size_t domain, std::size_t u_max,
                                                    std::size_t class_size, std::size_t m,
                                                    Rng& rng) {
    if (domain < 2 || class_size < 1 || m < 1 || u_max < 1)
        throw ContractError("random_realizable_instance: bad sizes");
    GeneratedInstance inst;
    inst.domain = domain;

    std::vector<std::uint8_t> target_bits(domain);
    bool has0 = false, has1 = false;
    for (auto& b : target_bits) {
        b = rng.coin();
        (b ? has1 : has0) = true;
    }
    if (!has0) target_bits[0] = 0;
    if (!has1) target_bits[domain - 1] = 1;
    inst.target = Hypothesis::from_bits(target_bits);

    inst.classes.domain_size = domain;
    inst.classes.members.push_back(inst.target);
    for (std::size_t i = 1; i < class_size; ++i) {
        std::vector<std::uint8_t> bits(domain);
        for (auto& b : bits) b = rng.coin();
        inst.classes.members.push_back(Hypothesis::from_bits(std::move(bits)));
    }

    std::vector<InstanceId> region[2];
    for (InstanceId x = 0; x < domain; ++x) region[target_bits[x]].push_back(x);
    std::map<InstanceId, std::vector<InstanceId>> sets;
    for (InstanceId x = 0; x < domain; ++x) {
        std::vector<InstanceId> pool = region[target_bits[x]];
        rng.shuffle(pool);
        std::vector<InstanceId> zs = {x};
        for (InstanceId z : pool) {
            if (zs.size() >= u_max) break;
            if (z != x) zs.push_back(z);
        }
        sets[x] = std::move(zs);
    }
    inst.u = Adversary::from_map(std::move(sets));

    for (std::size_t i = 0; i < m; ++i) {
        const auto x = static_cast<InstanceId>(rng.uniform_below(domain));
        inst.s.push_back({x, inst.target(x)});
    }
    return inst;
}

namespace detail {

inline Label label_from_json(const Json& j, const std::string& ctx) {
    if (!j.is_number_integer()) throw SchemaError(ctx + ": expected +1 or -1");
    const int v = j.get<int>();
    if (v != 1 && v != -1) throw SchemaError(ctx + ": expected +1 or -1");
    return label_from_sign(v);
}

// Inline instance spec: {"domain": N, "adversary": {"x": [z...]},
// "classes": [[+-1 ...] ...], "sample": [[x, +-1] ...]}.
inline GeneratedInstance parse_inline_instance(const Json& j) {
    GeneratedInstance inst;
    inst.domain = as_u64(require_field(j, "domain", "instance"), "instance.domain");
    if (inst.domain < 1) throw SchemaError("instance.domain: must be >= 1");

    std::map<InstanceId, std::vector<InstanceId>> sets;
    const Json& adv = require_field(j, "adversary", "instance");
    if (!adv.is_object()) throw SchemaError("instance.adversary: expected an object");
    for (const auto& [key, zs] : adv.items()) {
        std::uint64_t x = 0;
        try {
            x = std::stoull(key);
        } catch (...) {
            throw SchemaError("instance.adversary: non-numeric instance id '" + key + "'");
        }
        if (x >= inst.domain)
            throw SchemaError("instance.adversary: id " + key + " outside the declared space");
        if (!zs.is_array()) throw SchemaError("instance.adversary." + key + ": expected an array");
        std::vector<InstanceId> set;
        for (const auto& z : zs) {
            const std::uint64_t zi = as_u64(z, "instance.adversary." + key + "[]");
            if (zi >= inst.domain)
                throw SchemaError("instance.adversary." + key +
                                  ": perturbation outside the declared space");
            set.push_back(static_cast<InstanceId>(zi));
        }
        sets[static_cast<InstanceId>(x)] = std::move(set);
    }
    inst.u = Adversary::from_map(std::move(sets));

    const Json& classes = require_field(j, "classes", "instance");
    if (!classes.is_array() || classes.empty())
        throw SchemaError("instance.classes: expected a non-empty array of label rows");
    std::vector<std::vector<int>> rows;
    for (const auto& row : classes) {
        if (!row.is_array() || row.size() != inst.domain)
            throw SchemaError("instance.classes: each row must list one label per instance");
        std::vector<int> r;
        for (const auto& v : row) r.push_back(sign_of(label_from_json(v, "instance.classes[]")));
        rows.push_back(std::move(r));
    }
    inst.classes = FiniteClass::from_label_matrix(rows);
    inst.target = inst.classes.members.front();

    const Json& sample = require_field(j, "sample", "instance");
    if (!sample.is_array() || sample.empty())
        throw SchemaError("instance.sample: expected a non-empty array of [x, label] pairs");
    for (const auto& e : sample) {
        if (!e.is_array() || e.size() != 2)
            throw SchemaError("instance.sample: expected [x, label] pairs");
        const std::uint64_t x = as_u64(e.at(0), "instance.sample[].x");
        if (x >= inst.domain)
            throw SchemaError("instance.sample: instance id outside the declared space");
        inst.s.push_back({static_cast<InstanceId>(x),
                          label_from_json(e.at(1), "instance.sample[].label")});
    }
    return inst;
}

inline ReductionConfig reduction_config_from_params(const Json& p) {
    ReductionConfig cfg;
    cfg.m0 = detail::get_u64(p, "m0", 0, "params");
    cfg.n_co = detail::get_u64(p, "n_co", 0, "params");
    cfg.inner_members = detail::get_u64(p, "inner_members", 0, "params");
    const double rc = detail::get_number(p, "rounds_constant", 0.0, "params");
    if (rc > 0.0) {
        cfg.inner.rounds_constant = rc;
        cfg.outer.rounds_constant = rc;
    }
    cfg.use_sampling_oracle = detail::get_bool(p, "use_sampling_oracle", false, "params");
    return cfg;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Metric records

struct MetricRecord {
    std::size_t trial = 0;
    std::uint64_t seed = 0;
    std::map<std::string, double> metrics;  // key-sorted, deterministic
};

struct ExperimentResult {
    std::vector<MetricRecord> records;  // trial-index order
};

// ---------------------------------------------------------------------------
// Per-kind trial runners

inline MetricRecord run_robustify_trial(const ExperimentConfig& cfg, std::size_t trial) {
    MetricRecord rec;
    rec.trial = trial;
    rec.seed = derive_seed(cfg.master_seed, trial);

    GeneratedInstance inst;
    if (cfg.instance.contains("classes")) {
        inst = detail::parse_inline_instance(cfg.instance);
    } else {
        Rng gen(derive_seed(rec.seed, 1000));
        inst = random_realizable_instance(
            detail::get_u64(cfg.instance, "domain", 16, "instance"),
            detail::get_u64(cfg.instance, "u_max", 4, "instance"),
            detail::get_u64(cfg.instance, "class_size", 8, "instance"),
            detail::get_u64(cfg.instance, "m", 8, "instance"), gen);
    }
    const double guard = default_guard_limit();
    const auto d = static_cast<int>(vc_dim(inst.classes, guard));
    const auto ds = static_cast<int>(dual_vc_dim(inst.classes, guard));
    const PacLearner a = erm_learner(inst.classes, std::max(d, 1), std::max(ds, 1));
    const ReductionConfig rcfg = detail::reduction_config_from_params(cfg.params);

    const RobustLearnReport report = robustify(inst.s, inst.u, a, rcfg, inst.domain, rec.seed);
    rec.metrics["empirical_robust_risk"] = report.empirical_robust_risk;
    rec.metrics["learner_calls"] = static_cast<double>(report.stats.learner_calls);
    rec.metrics["sampler_calls"] = static_cast<double>(report.stats.sampler_calls);
    rec.metrics["mistake_oracle_calls"] = static_cast<double>(report.stats.mistake_oracle_calls);
    rec.metrics["outer_rounds"] = static_cast<double>(report.outer_rounds);
    rec.metrics["outer_weak_retries"] = static_cast<double>(report.outer_weak_retries);
    rec.metrics["outer_sparsify_retries"] = static_cast<double>(report.outer_sparsify_retries);
    rec.metrics["certificate_size"] = static_cast<double>(report.certificate.total_size());
    rec.metrics["m0"] = static_cast<double>(report.m0);
    rec.metrics["n_co"] = static_cast<double>(report.n_co);
    return rec;
}

inline MetricRecord run_mistake_learn_trial(const ExperimentConfig& cfg, std::size_t trial) {
    MetricRecord rec;
    rec.trial = trial;
    rec.seed = derive_seed(cfg.master_seed, trial);
    Rng rng(rec.seed);

    const std::size_t n = detail::get_u64(cfg.instance, "n", 5, "instance");
    const std::size_t u_max = detail::get_u64(cfg.instance, "u_max", 3, "instance");
    if (n < 1 || n > 20) throw SchemaError("instance.n: need 1 <= n <= 20");
    const std::size_t domain = std::size_t{1} << n;
    const auto all_vars = static_cast<std::uint32_t>(domain - 1);
    auto mask = static_cast<std::uint32_t>(
        detail::get_u64(cfg.instance, "mask", 0, "instance"));
    if (mask == 0) mask = static_cast<std::uint32_t>(rng.uniform_below(domain - 1)) + 1;
    if ((mask & ~all_vars) != 0) throw SchemaError("instance.mask: variable outside 0..n-1");
    const Hypothesis target = disjunction_concept(n, mask);

    std::vector<InstanceId> region[2];
    for (InstanceId x = 0; x < domain; ++x)
        region[target(x) == Label::Plus].push_back(x);
    std::map<InstanceId, std::vector<InstanceId>> sets;
    for (InstanceId x = 0; x < domain; ++x) {
        std::vector<InstanceId> pool = region[target(x) == Label::Plus];
        rng.shuffle(pool);
        std::vector<InstanceId> zs = {x};
        for (InstanceId z : pool) {
            if (zs.size() >= u_max) break;
            if (z != x) zs.push_back(z);
        }
        sets[x] = std::move(zs);
    }
    const Adversary u = Adversary::from_map(std::move(sets));

    std::vector<Example> support;
    for (InstanceId x = 0; x < domain; ++x) support.push_back({x, target(x)});
    const DiscreteDistribution dist = DiscreteDistribution::uniform(std::move(support));

    Alg3Config acfg;
    acfg.eps = detail::get_number(cfg.params, "eps", 0.2, "params");
    acfg.delta = detail::get_number(cfg.params, "delta", 0.1, "params");
    acfg.check();

    DisjunctionLearner learner(n);
    OracleStats stats;
    const ExampleStream stream = [&dist, &rng] {
        const std::size_t i = rng.sample_weighted(dist.probs);
        return dist.support[i];
    };

    rec.metrics["mistake_bound"] = static_cast<double>(learner.mistake_bound());
    rec.metrics["run_length"] = static_cast<double>(acfg.run_length(learner.mistake_bound()));
    rec.metrics["max_samples"] = static_cast<double>(acfg.max_samples(learner.mistake_bound()));
    try {
        auto [h, report] = robust_learn_mistake_oracle(stream, learner, u, acfg, stats);
        rec.metrics["halted"] = 1.0;
        rec.metrics["samples"] = static_cast<double>(report.samples);
        rec.metrics["oracle_calls"] = static_cast<double>(report.oracle_calls);
        rec.metrics["updates"] = static_cast<double>(report.updates);
        rec.metrics["exact_robust_risk"] = robust_risk(h, dist, u);
    } catch (const StreamExhausted&) {
        rec.metrics["halted"] = 0.0;
        rec.metrics["samples"] = static_cast<double>(acfg.max_samples(learner.mistake_bound()));
        rec.metrics["oracle_calls"] = static_cast<double>(stats.mistake_oracle_calls);
        rec.metrics["updates"] = 0.0;
        rec.metrics["exact_robust_risk"] = 1.0;  // conservative: non-halting counts as failure
    }
    return rec;
}

inline MetricRecord run_pac_lb_trial_record(const ExperimentConfig& cfg, std::size_t trial) {
    MetricRecord rec;
    rec.trial = trial;
    rec.seed = derive_seed(cfg.master_seed, trial);

    const std::size_t m = detail::get_u64(cfg.params, "m", 1, "params");
    const double zexp = detail::get_number(cfg.params, "zexp", 10.0, "params");
    const double eps = detail::get_number(cfg.params, "eps", 0.125, "params");
    const std::string strategy =
        detail::get_string(cfg.params, "strategy", "memorize", "params");
    const std::size_t t_budget =
        detail::get_u64(cfg.params, "t_budget", pac_lb_max_queries(m, eps), "params");
    // Sample-size cap from the construction: |S| <= 2^{9m-3}.
    const auto cap = static_cast<std::size_t>(std::pow(2.0, 9.0 * static_cast<double>(m) - 3.0));
    const std::size_t n_samples = detail::get_u64(cfg.params, "n_samples", cap, "params");
    if (n_samples > cap) throw ContractError("pac-lb: n_samples exceeds the 2^{9m-3} cap");

    const PacLBInstance inst = build_pac_lb(m, zexp, eps, derive_seed(rec.seed, 0));
    Rng rng(derive_seed(rec.seed, 1));
    OracleStats stats;

    PacLBStrategy strat;
    if (strategy == "memorize") {
        strat = pac_lb_memorize_strategy;
    } else if (strategy == "probe") {
        strat = [t_budget](PacLBContext& ctx) { return pac_lb_probe_strategy(ctx, t_budget); };
    } else if (strategy == "cheat") {
        strat = [](PacLBContext& ctx) { return ctx.inst.h_star; };
    } else {
        throw SchemaError("params.strategy: unknown pac-lb strategy '" + strategy + "'");
    }

    rec.metrics["robust_risk"] = run_pac_lb_trial(inst, strat, t_budget, n_samples, rng, &stats);
    rec.metrics["learner_calls"] = static_cast<double>(stats.learner_calls);
    rec.metrics["t_budget"] = static_cast<double>(t_budget);
    rec.metrics["n_samples"] = static_cast<double>(n_samples);
    rec.metrics["min_group_disagreement"] =
        static_cast<double>(pac_lb_min_group_disagreement(inst, inst.chain.size()));
    return rec;
}

inline MetricRecord run_mistake_lb_trial_record(const ExperimentConfig& cfg, std::size_t trial) {
    MetricRecord rec;
    rec.trial = trial;
    rec.seed = derive_seed(cfg.master_seed, trial);

    const std::size_t k = detail::get_u64(cfg.params, "k", 4, "params");
    const std::string strategy = detail::get_string(cfg.params, "strategy", "greedy", "params");
    const std::size_t t_budget =
        detail::get_u64(cfg.params, "t_budget", k > 0 ? k - 1 : 0, "params");

    const MistakeLBInstance inst = build_mistake_lb(k, rec.seed);
    MistakeLBStrategy strat;
    if (strategy == "greedy") {
        strat = mistake_lb_greedy_strategy;
    } else if (strategy == "probe") {
        strat = mistake_lb_probe_strategy;
    } else {
        throw SchemaError("params.strategy: unknown mistake-lb strategy '" + strategy + "'");
    }
    const MistakeLBTrialResult out = run_mistake_lb_trial(inst, strat, t_budget);
    rec.metrics["remaining_mistakes"] = static_cast<double>(out.remaining_mistakes);
    rec.metrics["robust_on_s"] = out.robust_on_s ? 1.0 : 0.0;
    rec.metrics["oracle_calls"] = static_cast<double>(out.oracle_calls);
    rec.metrics["t_budget"] = static_cast<double>(t_budget);
    rec.metrics["k"] = static_cast<double>(k);
    return rec;
}

inline MetricRecord run_vc_verify_trial(const ExperimentConfig& cfg, std::size_t trial) {
    MetricRecord rec;
    rec.trial = trial;
    rec.seed = derive_seed(cfg.master_seed, trial);
    Rng rng(rec.seed);

    FiniteClass h;
    if (cfg.instance.contains("classes")) {
        h = detail::parse_inline_instance(cfg.instance).classes;
    } else {
        const std::size_t domain = detail::get_u64(cfg.instance, "domain", 6, "instance");
        const std::size_t size = detail::get_u64(cfg.instance, "class_size", 4, "instance");
        if (domain < 1 || size < 1) throw SchemaError("instance: bad vc-verify sizes");
        h.domain_size = domain;
        for (std::size_t i = 0; i < size; ++i) {
            std::vector<std::uint8_t> bits(domain);
            for (auto& b : bits) b = rng.coin();
            h.members.push_back(Hypothesis::from_bits(std::move(bits)));
        }
    }
    const std::size_t k = detail::get_u64(cfg.params, "k", 3, "params");
    const std::size_t c_max = detail::get_u64(cfg.params, "c_max", 4, "params");
    const double guard = default_guard_limit();

    const HullLemmaReport report = verify_convexhull_lemma(h, k, c_max, guard);
    const std::size_t vc = vc_dim(h, guard);
    rec.metrics["vc"] = static_cast<double>(vc);
    rec.metrics["dual_vc"] = static_cast<double>(report.base_dual_vc);
    rec.metrics["hull_dual_vc"] = static_cast<double>(report.measured);
    rec.metrics["smallest_c"] = static_cast<double>(report.smallest_c);
    rec.metrics["bound_ok"] = report.bound_ok ? 1.0 : 0.0;
    rec.metrics["assouad_ok"] =
        static_cast<double>(report.base_dual_vc) < std::pow(2.0, static_cast<double>(vc) + 1.0)
            ? 1.0
            : 0.0;
    rec.metrics["k"] = static_cast<double>(k);
    return rec;
}

inline MetricRecord run_bounds_trial(const ExperimentConfig& cfg, std::size_t trial) {
    MetricRecord rec;
    rec.trial = trial;
    rec.seed = derive_seed(cfg.master_seed, trial);

    const std::size_t m = detail::get_u64(cfg.params, "m", 100, "params");
    const std::size_t k = detail::get_u64(cfg.params, "k", 10, "params");
    const double delta = detail::get_number(cfg.params, "delta", 0.05, "params");
    const auto d = static_cast<int>(detail::get_u64(cfg.params, "d", 1, "params"));
    const auto ds = static_cast<int>(detail::get_u64(cfg.params, "d_star", 1, "params"));
    const double eps = detail::get_number(cfg.params, "eps", 0.1, "params");
    const std::size_t mb = detail::get_u64(cfg.params, "mistake_bound", 5, "params");

    rec.metrics["compression_bound"] = compression_bound(m, k, delta);
    rec.metrics["sample_complexity_bound"] = sample_complexity_bound(d, ds, eps, delta);
    const BoostSchedule schedule = alpha_schedule(std::max<std::size_t>(m, 2));
    rec.metrics["boost_rounds"] = static_cast<double>(schedule.rounds);
    rec.metrics["alpha"] = schedule.alpha;
    Alg3Config acfg;
    acfg.eps = eps;
    acfg.delta = delta;
    rec.metrics["run_length"] = static_cast<double>(acfg.run_length(mb));
    rec.metrics["max_samples"] = static_cast<double>(acfg.max_samples(mb));
    rec.metrics["sparsify_n"] = static_cast<double>(sparsify_sample_count(ds));
    return rec;
}

inline MetricRecord run_trial(const ExperimentConfig& cfg, std::size_t trial) {
    if (cfg.kind == "robustify") return run_robustify_trial(cfg, trial);
    if (cfg.kind == "mistake-learn") return run_mistake_learn_trial(cfg, trial);
    if (cfg.kind == "pac-lb") return run_pac_lb_trial_record(cfg, trial);
    if (cfg.kind == "mistake-lb") return run_mistake_lb_trial_record(cfg, trial);
    if (cfg.kind == "vc-verify") return run_vc_verify_trial(cfg, trial);
    if (cfg.kind == "bounds") return run_bounds_trial(cfg, trial);
    throw SchemaError("config.kind: unknown experiment kind '" + cfg.kind + "'");
}

inline ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    ExperimentResult result;
    result.records.reserve(cfg.trials);
    for (std::size_t t = 0; t < cfg.trials; ++t) result.records.push_back(run_trial(cfg, t));
    return result;
}

// ---------------------------------------------------------------------------
// Serialization

inline Json record_to_json(const MetricRecord& rec) {
    Json j;
    j["type"] = "record";
    j["trial"] = rec.trial;
    j["seed"] = rec.seed;
    Json metrics = Json::object();
    for (const auto& [key, value] : rec.metrics) metrics[key] = value;
    j["metrics"] = metrics;
    return j;
}

// JSONL: one meta line (generator name + master seed, for replay), then one
// record per trial, in trial-index order.
inline std::string jsonl_output(const ExperimentConfig& cfg, const ExperimentResult& result) {
    std::ostringstream out;
    Json meta;
    meta["type"] = "meta";
    meta["kind"] = cfg.kind;
    meta["rng"] = kRngName;
    meta["master_seed"] = cfg.master_seed;
    meta["trials"] = cfg.trials;
    out << meta.dump() << '\n';
    for (const auto& rec : result.records) out << record_to_json(rec).dump() << '\n';
    return out.str();
}

struct MetricSummary {
    double mean = 0.0;
    double stddev = 0.0;  // population standard deviation
};

inline std::map<std::string, MetricSummary> summarize(const std::vector<MetricRecord>& records) {
    std::map<std::string, std::vector<double>> columns;
    for (const auto& rec : records)
        for (const auto& [key, value] : rec.metrics) columns[key].push_back(value);
    std::map<std::string, MetricSummary> summary;
    for (const auto& [key, values] : columns) {
        double mean = 0.0;
        for (double v : values) mean += v;
        mean /= static_cast<double>(values.size());
        double var = 0.0;
        for (double v : values) var += (v - mean) * (v - mean);
        var /= static_cast<double>(values.size());
        summary[key] = {mean, std::sqrt(std::max(var, 0.0))};
    }
    return summary;
}

// Deterministic shortest-round-trip number formatting (same as the JSON dump).
inline std::string format_number(double v) { return Json(v).dump(); }

inline std::string csv_summary(const ExperimentConfig& cfg, const ExperimentResult& result) {
    std::ostringstream out;
    out << "# kind=" << cfg.kind << " rng=" << kRngName << " master_seed=" << cfg.master_seed
        << " trials=" << cfg.trials << '\n';
    out << "metric,mean,std\n";
    for (const auto& [key, s] : summarize(result.records))
        out << key << ',' << format_number(s.mean) << ',' << format_number(s.stddev) << '\n';
    return out.str();
}

// ---------------------------------------------------------------------------
// Sweeps

inline const std::vector<std::string>& sweep_axes() {
    static const std::vector<std::string> axes = {"u_max", "m", "eps", "mistake_bound", "k",
                                                  "domain", "class_size"};
    return axes;
}

// Clone the template config with the axis parameter set to `value`.
inline ExperimentConfig apply_axis(const ExperimentConfig& base, const std::string& axis,
                                   double value) {
    const auto& axes = sweep_axes();
    if (std::find(axes.begin(), axes.end(), axis) == axes.end())
        throw SchemaError("sweep: unrecognized axis '" + axis + "'");
    ExperimentConfig cfg = base;
    const auto as_count = static_cast<std::uint64_t>(value);
    if (axis == "eps") {
        cfg.params["eps"] = value;
    } else if (axis == "k") {
        cfg.params["k"] = as_count;
    } else if (axis == "m") {
        if (cfg.kind == "pac-lb")
            cfg.params["m"] = as_count;
        else
            cfg.instance["m"] = as_count;
    } else if (axis == "mistake_bound") {
        if (cfg.kind == "mistake-learn")
            cfg.instance["n"] = as_count;  // the disjunction learner's bound is n
        else
            cfg.params["mistake_bound"] = as_count;
    } else {
        cfg.instance[axis] = as_count;  // u_max, domain, class_size
    }
    if (static_cast<double>(as_count) != value && axis != "eps")
        throw SchemaError("sweep: axis '" + axis + "' takes integer values");
    return cfg;
}

// One CSV row per axis value: per-metric means plus the oracle-complexity
// diagnostic learner_calls / (log2 m + log2 |U| + 1)^2.
inline std::string sweep_csv(const ExperimentConfig& base, const std::string& axis,
                             const std::vector<double>& values) {
    if (values.empty()) throw SchemaError("sweep: empty value list");

    std::vector<std::pair<double, std::map<std::string, MetricSummary>>> rows;
    std::vector<ExperimentConfig> configs;
    std::vector<std::string> columns;
    for (double value : values) {
        ExperimentConfig cfg = apply_axis(base, axis, value);
        const ExperimentResult result = run_experiment(cfg);
        auto summary = summarize(result.records);
        for (const auto& [key, s] : summary) {
            (void)s;
            if (std::find(columns.begin(), columns.end(), key) == columns.end())
                columns.push_back(key);
        }
        rows.push_back({value, std::move(summary)});
        configs.push_back(std::move(cfg));
    }
    std::sort(columns.begin(), columns.end());

    std::ostringstream out;
    out << "# kind=" << base.kind << " rng=" << kRngName << " master_seed=" << base.master_seed
        << " trials=" << base.trials << " axis=" << axis << '\n';
    out << axis;
    for (const auto& c : columns) out << ',' << c << "_mean";
    out << ",complexity_ratio\n";
    double fitted_c = 0.0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& [value, summary] = rows[i];
        out << format_number(value);
        for (const auto& c : columns) {
            const auto it = summary.find(c);
            out << ',' << (it == summary.end() ? "" : format_number(it->second.mean));
        }
        double ratio = 0.0;
        const auto it = summary.find("learner_calls");
        if (it != summary.end()) {
            const double m = static_cast<double>(std::max<std::uint64_t>(
                detail::get_u64(configs[i].instance, "m",
                                detail::get_u64(configs[i].params, "m", 8, "params"),
                                "instance"),
                2));
            const double u = static_cast<double>(std::max<std::uint64_t>(
                detail::get_u64(configs[i].instance, "u_max", 1, "instance"), 1));
            const double denom = std::pow(std::log2(m) + std::log2(u) + 1.0, 2.0);
            ratio = it->second.mean / denom;
            fitted_c = std::max(fitted_c, ratio);
        }
        out << ',' << format_number(ratio) << '\n';
    }
    out << "# fitted_c=" << format_number(fitted_c) << '\n';
    return out.str();
}

}  // namespace robustboost
