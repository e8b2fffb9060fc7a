// Acceptance gates: one pass/fail line per criterion, nonzero exit on any
// failure. Each check is exact where the property is exact and Monte-Carlo
// with fixed seeds where it is statistical.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include <robustboost/experiment.hpp>

using namespace robustboost;

namespace {

int g_failures = 0;

void report(int index, const std::string& name, bool ok, const std::string& detail) {
    std::printf("%s %2d %s: %s\n", ok ? "PASS" : "FAIL", index, name.c_str(), detail.c_str());
    if (!ok) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

ReductionConfig desk_config() {
    ReductionConfig cfg;
    cfg.m0 = 6;
    cfg.n_co = 5;
    cfg.inner_members = 3;
    cfg.inner.rounds_constant = 1.0;
    cfg.outer.rounds_constant = 1.0;
    return cfg;
}

// --- 1: exact zero empirical robust risk over 200 random instances ----------

void criterion_zero_risk() {
    const auto t0 = std::chrono::steady_clock::now();
    int exact = 0;
    const int trials = 200;
    for (int t = 0; t < trials; ++t) {
        Rng sizes(10'000 + t);
        const std::size_t domain = 8 + sizes.uniform_below(57);      // <= 64
        const std::size_t u_max = 1 + sizes.uniform_below(8);        // <= 8
        const std::size_t class_size = 2 + sizes.uniform_below(31);  // <= 32
        const std::size_t m = 1 + sizes.uniform_below(16);           // <= 16
        Rng gen(20'000 + t);
        const auto inst = random_realizable_instance(domain, u_max, class_size, m, gen);
        const PacLearner a = erm_learner(inst.classes, 2, 2);
        const auto rep = robustify(inst.s, inst.u, a, desk_config(), inst.domain, 30'000 + t);
        // Full perturbation enumeration, exact comparison.
        bool zero = rep.empirical_robust_risk == 0.0;
        for (const auto& e : inst.s)
            for (InstanceId z : inst.u.perturbations(e.x))
                if (rep.predictor(z) != e.y) zero = false;
        if (zero) ++exact;
    }
    const double dt = seconds_since(t0);
    report(1, "robustify-zero-empirical-risk",
           exact == trials && dt < 120.0,
           std::to_string(exact) + "/" + std::to_string(trials) + " exact-zero instances in " +
               std::to_string(dt) + "s");
}

// --- 2: boosting margin >= 5/9 at the full default schedule -----------------

void criterion_margin() {
    const auto t0 = std::chrono::steady_clock::now();
    int ok = 0;
    const int trials = 50;
    for (int t = 0; t < trials; ++t) {
        Rng gen(41'000 + t);
        const auto inst = random_realizable_instance(10, 2, 6, 5, gen);
        const auto records = inflate(inst.s, inst.u);
        if (records.size() < 2) {
            ++ok;  // nothing to boost over; margin is vacuous
            continue;
        }
        const PacLearner a = erm_learner(inst.classes, 2, 2);
        BoostConfig cfg;  // full default schedule: T = ceil(112 ln |records|)
        Rng rng(42'000 + t);
        OracleStats stats;
        const auto result = alpha_boost(records, a.fit, cfg, rng, stats);
        if (result.hypotheses.size() == alpha_schedule(records.size()).rounds &&
            min_agreement(result.hypotheses, records) >= 5.0 / 9.0)
            ++ok;
    }
    const double dt = seconds_since(t0);
    report(2, "alpha-boost-margin-5/9", ok == trials && dt < 120.0,
           std::to_string(ok) + "/" + std::to_string(trials) + " instances at the full schedule in " +
               std::to_string(dt) + "s");
}

// --- 3: sparsification deviation < 1/18 in >= 2/3 of draws ------------------

void criterion_sparsify() {
    // Hypothesis pool with per-record agreement exactly 5/9 everywhere.
    std::vector<Hypothesis> hyps;
    std::vector<InflatedRecord> records;
    const std::size_t n_records = 45;
    for (std::size_t j = 0; j < 9; ++j) {
        std::vector<std::uint8_t> bits(n_records);
        for (std::size_t i = 0; i < n_records; ++i) bits[i] = (i + j) % 9 < 5;
        hyps.push_back(Hypothesis::from_bits(std::move(bits)));
    }
    for (std::size_t i = 0; i < n_records; ++i)
        records.push_back({static_cast<InstanceId>(i), Label::Plus, i});

    const std::size_t d_star = dual_vc_dim(FiniteClass{hyps, n_records});
    const std::size_t n = sparsify_sample_count(static_cast<int>(d_star));
    Rng rng(43'000);
    std::size_t good = 0;
    const std::size_t draws = 1000;
    for (std::size_t t = 0; t < draws; ++t) {
        std::vector<Hypothesis> picked;
        for (std::size_t j = 0; j < n; ++j)
            picked.push_back(hyps[rng.uniform_below(hyps.size())]);
        const MajorityVote vote(picked);
        bool close = true;
        for (const auto& r : records)
            if (std::abs(vote.agreement(r.z, r.y) - 5.0 / 9.0) >= 1.0 / 18.0) close = false;
        if (close) ++good;
    }

    const auto deviation_ok = [&](const MajorityVote& vote) {
        for (const auto& r : records)
            if (std::abs(vote.agreement(r.z, r.y) - 5.0 / 9.0) >= 1.0 / 18.0) return false;
        return true;
    };
    SparsifyConfig sp;
    sp.members = n;
    sp.max_retries = 50;
    bool retries_ok = true;
    for (int run = 0; run < 10; ++run) {
        try {
            const auto result = sparsify(hyps, sp, deviation_ok, rng);
            if (result.retries > 50) retries_ok = false;
        } catch (const SparsifyFailure&) {
            retries_ok = false;
        }
    }
    report(3, "sparsify-deviation-1/18", good * 3 >= draws * 2 && retries_ok,
           std::to_string(good) + "/" + std::to_string(draws) +
               " draws within 1/18 at N=" + std::to_string(n) +
               (retries_ok ? ", retry loop <= 50" : ", retry loop FAILED"));
}

// --- 4: oracle-complexity shape across |U| in {1,2,4,8,16,32} ---------------

struct SweepInstance {
    std::size_t domain = 80;
    Dataset s;
    FiniteClass classes;
    Hypothesis target;
    std::vector<std::vector<InstanceId>> pools;  // per x: {x} then same-label fill
};

SweepInstance make_sweep_instance(std::uint64_t seed) {
    SweepInstance inst;
    Rng rng(seed);
    std::vector<std::uint8_t> bits(inst.domain);
    for (auto& b : bits) b = rng.coin();
    bits[0] = 0;
    bits[inst.domain - 1] = 1;
    inst.target = Hypothesis::from_bits(bits);
    inst.classes.domain_size = inst.domain;
    inst.classes.members.push_back(inst.target);
    for (int i = 0; i < 7; ++i) {
        std::vector<std::uint8_t> b2(inst.domain);
        for (auto& b : b2) b = rng.coin();
        inst.classes.members.push_back(Hypothesis::from_bits(std::move(b2)));
    }
    std::vector<InstanceId> region[2];
    for (InstanceId x = 0; x < inst.domain; ++x) region[bits[x]].push_back(x);
    inst.pools.resize(inst.domain);
    for (InstanceId x = 0; x < inst.domain; ++x) {
        std::vector<InstanceId> pool = region[bits[x]];
        rng.shuffle(pool);
        inst.pools[x] = {x};
        for (InstanceId z : pool)
            if (z != x && inst.pools[x].size() < 32) inst.pools[x].push_back(z);
    }
    for (int i = 0; i < 8; ++i) {
        const auto x = static_cast<InstanceId>(rng.uniform_below(inst.domain));
        inst.s.push_back({x, inst.target(x)});
    }
    return inst;
}

// Truncating every pool to its first `u` entries yields nested adversaries.
Adversary truncated_adversary(const SweepInstance& inst, std::size_t u) {
    std::map<InstanceId, std::vector<InstanceId>> sets;
    for (InstanceId x = 0; x < inst.domain; ++x) {
        const auto& pool = inst.pools[x];
        sets[x] = std::vector<InstanceId>(pool.begin(),
                                          pool.begin() + std::min(u, pool.size()));
    }
    return Adversary::from_map(std::move(sets));
}

void criterion_oracle_complexity() {
    const std::vector<std::size_t> u_values = {1, 2, 4, 8, 16, 32};
    const int seeds = 50;
    std::vector<double> medians;
    double fitted_c = 0.0;
    for (std::size_t u : u_values) {
        std::vector<double> calls;
        for (int t = 0; t < seeds; ++t) {
            const SweepInstance inst = make_sweep_instance(50'000 + t);
            const Adversary adv = truncated_adversary(inst, u);
            const PacLearner a = erm_learner(inst.classes, 2, 2);
            const auto rep = robustify(inst.s, adv, a, desk_config(), inst.domain, 60'000 + t);
            calls.push_back(static_cast<double>(rep.stats.learner_calls));
        }
        std::sort(calls.begin(), calls.end());
        const double median = calls[calls.size() / 2];
        medians.push_back(median);
        const double denom = std::pow(
            std::log2(8.0) + std::log2(static_cast<double>(u)) + 1.0, 2.0);
        fitted_c = std::max(fitted_c, median / denom);
    }
    bool monotone = true;
    for (std::size_t i = 1; i < medians.size(); ++i)
        if (medians[i] < medians[i - 1]) monotone = false;
    std::string shape;
    for (double m : medians) shape += std::to_string(static_cast<long long>(m)) + " ";
    report(4, "oracle-complexity-shape", monotone && std::isfinite(fitted_c) && fitted_c > 0.0,
           "median learner_calls over |U|=1..32: " + shape + "fitted c=" +
               std::to_string(fitted_c));
}

// --- 5: two-stage sampling law equals the explicit distribution -------------

void criterion_sampler_exactness() {
    double worst = 0.0;
    int compared = 0;
    Rng outer(70'000);
    for (int trial = 0; trial < 20; ++trial) {
        Rng gen(outer.next_u64());
        const auto inst = random_realizable_instance(10, 2, 4, 3, gen);
        const auto records = inflate(inst.s, inst.u);
        if (records.size() < 2) continue;
        const double alpha = 0.21;
        auto d_t = WeightedDataset::uniform(records);
        std::vector<Hypothesis> votes;
        for (int round = 0; round < 5; ++round) {
            const auto law = two_stage_law(inst.s, inst.u, votes, alpha);
            for (std::size_t i = 0; i < records.size(); ++i)
                worst = std::max(worst, std::abs(law[i].second - d_t.weights[i]));
            ++compared;
            std::vector<std::uint8_t> bits(inst.domain);
            for (auto& b : bits) b = gen.coin();
            const Hypothesis g = Hypothesis::from_bits(std::move(bits));
            d_t = update_distribution(d_t, g, alpha).next;
            votes.push_back(g);
        }
    }
    report(5, "two-stage-sampler-exactness", compared > 0 && worst < 1e-12,
           "max |law - D_t| = " + std::to_string(worst) + " over " + std::to_string(compared) +
               " rounds");
}

// --- 6: online-to-robust conversion guarantees ------------------------------

void criterion_mistake_learn() {
    ExperimentConfig cfg;
    cfg.kind = "mistake-learn";
    cfg.master_seed = 80'000;
    cfg.trials = 1000;
    cfg.instance = Json{{"n", 5}, {"u_max", 3}};
    cfg.params = Json{{"eps", 0.2}, {"delta", 0.1}};
    const auto result = run_experiment(cfg);
    std::size_t risk_ok = 0, updates_ok = 0, samples_ok = 0, halting = 0;
    for (const auto& rec : result.records) {
        if (rec.metrics.at("exact_robust_risk") <= 0.2) ++risk_ok;
        if (rec.metrics.at("updates") <= 5.0) ++updates_ok;
        if (rec.metrics.at("halted") == 1.0) {
            ++halting;
            if (rec.metrics.at("samples") <= rec.metrics.at("max_samples")) ++samples_ok;
        }
    }
    const bool ok = risk_ok * 10 >= cfg.trials * 9 && updates_ok == cfg.trials &&
                    samples_ok == halting;
    report(6, "mistake-oracle-conversion", ok,
           "risk<=0.2 in " + std::to_string(risk_ok) + "/1000, updates<=5 in " +
               std::to_string(updates_ok) + "/1000, sample budget kept in " +
               std::to_string(samples_ok) + "/" + std::to_string(halting) + " halting runs");
}

// --- 7: pac lower bound, budget-respecting strategies stay >= 1/4 - 0.05 ----

void criterion_pac_lb() {
    const std::size_t m = 1;
    const double eps = 0.125;
    const std::size_t budget = pac_lb_max_queries(m, eps);  // = 0
    const auto n_samples = static_cast<std::size_t>(std::pow(2.0, 9.0 * m - 3.0));
    double total = 0.0;
    std::size_t structural_ok = 0;
    const int seeds = 500;
    for (int t = 0; t < seeds; ++t) {
        const auto inst = build_pac_lb(m, 10.0, eps, 90'000 + t);
        if (pac_lb_min_group_disagreement(inst, inst.chain.size()) >= 1) ++structural_ok;
        Rng rng(91'000 + t);
        total += run_pac_lb_trial(inst, pac_lb_memorize_strategy, budget, n_samples, rng);
    }
    const double mean = total / seeds;
    report(7, "pac-lower-bound", mean >= 0.25 - 0.05 && structural_ok == seeds,
           "mean robust risk " + std::to_string(mean) + " at budget " + std::to_string(budget) +
               ", group disagreement >= 1 in " + std::to_string(structural_ok) + "/500 builds");
}

// --- 8: mistake-oracle lower bound across k in {4,8,16} ---------------------

void criterion_mistake_lb() {
    bool ok = true;
    std::string detail;
    for (std::size_t k : {4u, 8u, 16u}) {
        const int seeds = 500;
        int fail_robust = 0, full_ok = 0;
        double total_remaining = 0.0;
        for (int t = 0; t < seeds; ++t) {
            const auto inst = build_mistake_lb(k, 95'000 + 1000 * k + t);
            const auto short_run = run_mistake_lb_trial(inst, mistake_lb_greedy_strategy, k - 1);
            if (!short_run.robust_on_s) ++fail_robust;
            total_remaining += static_cast<double>(short_run.remaining_mistakes);
            const auto full = run_mistake_lb_trial(inst, mistake_lb_probe_strategy, 2 * k);
            if (full.robust_on_s) ++full_ok;
        }
        const double mean_remaining = total_remaining / seeds;
        if (!(fail_robust > 0 && mean_remaining >= 1.0 && full_ok == seeds)) ok = false;
        detail += "k=" + std::to_string(k) + ": " + std::to_string(fail_robust) +
                  "/500 fail at budget k-1 (mean remaining " + std::to_string(mean_remaining) +
                  "), " + std::to_string(full_ok) + "/500 succeed at 2k; ";
    }
    report(8, "mistake-oracle-lower-bound", ok, detail);
}

// --- 9: dual-vc growth of majority-vote closures ----------------------------

void criterion_dual_vc() {
    Rng rng(97'000);
    std::size_t bound_ok = 0, assouad_ok = 0, total = 0;
    std::size_t worst_c = 0;
    for (int t = 0; t < 30; ++t) {
        FiniteClass h;
        h.domain_size = 1 + rng.uniform_below(7);  // |X| <= 7
        const std::size_t members = 1 + rng.uniform_below(4);
        for (std::size_t i = 0; i < members; ++i) {
            std::vector<std::uint8_t> bits(h.domain_size);
            for (auto& b : bits) b = rng.coin();
            h.members.push_back(Hypothesis::from_bits(std::move(bits)));
        }
        const std::size_t vc = vc_dim(h);
        const std::size_t dual = dual_vc_dim(h);
        if (static_cast<double>(dual) < std::pow(2.0, static_cast<double>(vc) + 1.0))
            ++assouad_ok;
        for (std::size_t k : {1u, 3u, 5u}) {
            const auto rep = verify_convexhull_lemma(h, k);
            ++total;
            if (rep.bound_ok && rep.smallest_c <= 4) ++bound_ok;
            worst_c = std::max(worst_c, rep.smallest_c);
        }
    }
    report(9, "dual-vc-closure-growth", bound_ok == total && assouad_ok == 30,
           std::to_string(bound_ok) + "/" + std::to_string(total) +
               " hull checks with c <= 4 (worst c=" + std::to_string(worst_c) + "), " +
               std::to_string(assouad_ok) + "/30 within the 2^{vc+1} dual bound");
}

// --- 10: byte-identical reruns ----------------------------------------------

void criterion_determinism() {
    bool ok = true;
    for (const char* kind : {"robustify", "mistake-lb", "bounds"}) {
        ExperimentConfig cfg;
        cfg.kind = kind;
        cfg.master_seed = 98'000;
        cfg.trials = 4;
        if (cfg.kind == "robustify") {
            cfg.instance = Json{{"domain", 12}, {"u_max", 3}, {"class_size", 6}, {"m", 6}};
            cfg.params = Json{{"m0", 5}, {"n_co", 5}, {"inner_members", 3},
                              {"rounds_constant", 1.0}};
        }
        const std::string a = jsonl_output(cfg, run_experiment(cfg));
        const std::string b = jsonl_output(cfg, run_experiment(cfg));
        if (a != b || a.empty()) ok = false;
    }
    report(10, "byte-identical-reruns", ok, "3 kinds x 2 runs compared byte-for-byte");
}

}  // namespace

int main() {
    criterion_zero_risk();
    criterion_margin();
    criterion_sparsify();
    criterion_oracle_complexity();
    criterion_sampler_exactness();
    criterion_mistake_learn();
    criterion_pac_lb();
    criterion_mistake_lb();
    criterion_dual_vc();
    criterion_determinism();
    if (g_failures > 0) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all criteria passed\n");
    return 0;
}
