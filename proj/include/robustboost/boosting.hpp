// boosting.hpp
//
// Fixed-step alpha-Boost with exact weighted weak-error measurement, plus
// majority-vote sparsification by uniform index sampling with a verified
// success predicate.
#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "adversary.hpp"
#include "core.hpp"
#include "errors.hpp"
#include "learners.hpp"
#include "rng.hpp"

namespace robustboost {

struct BoostConfig {
    double rounds_constant = 112.0;  // T = ceil(rounds_constant * ln m)
    std::optional<double> alpha_override;
    std::size_t m0 = 10;             // per-call sample size fed to the weak learner
    double weak_error_target = 1.0 / 3.0;
    std::size_t max_weak_retries = 1000;
};

struct BoostSchedule {
    std::size_t rounds;
    double alpha;
};

// T = ceil(c * ln m), alpha = (1/2) ln(1 + sqrt(2 ln m / T)).
inline BoostSchedule alpha_schedule(std::size_t m, const BoostConfig& cfg = {}) {
    if (m < 2) throw ContractError("alpha_schedule: need m >= 2");
    if (!(cfg.rounds_constant > 0.0))
        throw ContractError("alpha_schedule: rounds_constant must be positive");
    const double lnm = std::log(static_cast<double>(m));
    const auto rounds = static_cast<std::size_t>(std::ceil(cfg.rounds_constant * lnm));
    double alpha = 0.5 * std::log1p(std::sqrt(2.0 * lnm / static_cast<double>(rounds)));
    if (cfg.alpha_override) alpha = *cfg.alpha_override;
    return {rounds, alpha};
}

struct DistributionUpdate {
    WeightedDataset next;
    double z_t;  // normalization factor
};

// Multiplicative update: correct records shrink by e^{-2 alpha}, incorrect
// keep weight 1, then renormalize.
template <typename Predictor>
DistributionUpdate update_distribution(const WeightedDataset& d_t, const Predictor& h_t,
                                       double alpha) {
    d_t.check_normalized();
    WeightedDataset next;
    next.records = d_t.records;
    next.weights.resize(d_t.weights.size());
    const double shrink = std::exp(-2.0 * alpha);
    double z_t = 0.0;
    for (std::size_t i = 0; i < d_t.records.size(); ++i) {
        const auto& r = d_t.records[i];
        next.weights[i] = d_t.weights[i] * (h_t(r.z) == r.y ? shrink : 1.0);
        z_t += next.weights[i];
    }
    if (!(z_t > 0.0)) throw ContractError("update_distribution: all mass vanished");
    for (double& w : next.weights) w /= z_t;
    return {std::move(next), z_t};
}

struct BoostRound {
    std::size_t t = 0;
    double weak_error = 0.0;
    double z_t = 1.0;
    std::size_t retries = 0;
};

struct BoostResult {
    std::vector<Hypothesis> hypotheses;
    std::vector<BoostRound> rounds;
    double alpha = 0.0;
};

using WeakLearnerFn = std::function<Hypothesis(const Dataset& sample, Rng& rng)>;

inline Dataset draw_sample(const WeightedDataset& d, std::size_t m0, Rng& rng) {
    Dataset sample;
    sample.reserve(m0);
    for (std::size_t j = 0; j < m0; ++j) {
        const std::size_t i = rng.sample_weighted(d.weights);
        sample.push_back({d.records[i].z, d.records[i].y});
    }
    return sample;
}

// alpha-Boost over a fixed record set. Each round samples m0 points from D_t,
// calls the weak learner, and measures its error EXACTLY on the weighted
// records; rounds whose sampled call misses the target are retried with fresh
// samples. Counts every weak-learner call in stats.learner_calls.
inline BoostResult alpha_boost(const std::vector<InflatedRecord>& records,
                               const WeakLearnerFn& weak, const BoostConfig& cfg, Rng& rng,
                               OracleStats& stats, std::size_t rounds_override = 0) {
    if (records.empty()) throw ContractError("alpha_boost: empty record set");
    BoostSchedule schedule{1, 0.0};
    if (records.size() >= 2) schedule = alpha_schedule(records.size(), cfg);
    if (rounds_override > 0) schedule.rounds = rounds_override;

    BoostResult result;
    result.alpha = schedule.alpha;
    WeightedDataset d_t = WeightedDataset::uniform(records);
    for (std::size_t t = 1; t <= schedule.rounds; ++t) {
        BoostRound round;
        round.t = t;
        Hypothesis h_t;
        for (std::size_t attempt = 0;; ++attempt) {
            if (attempt >= cfg.max_weak_retries)
                throw WeakLearnerFailure(
                    "alpha_boost: weak learner missed target error " +
                    std::to_string(cfg.weak_error_target) + " after " +
                    std::to_string(attempt) + " attempts (round " + std::to_string(t) + ")");
            const Dataset sample = draw_sample(d_t, cfg.m0, rng);
            h_t = weak(sample, rng);
            ++stats.learner_calls;
            round.weak_error = standard_error(h_t, d_t);
            if (round.weak_error <= cfg.weak_error_target) break;
            ++round.retries;
        }
        auto updated = update_distribution(d_t, h_t, schedule.alpha);
        round.z_t = updated.z_t;
        d_t = std::move(updated.next);
        result.hypotheses.push_back(std::move(h_t));
        result.rounds.push_back(round);
    }
    return result;
}

// Smallest per-record fraction of hypotheses agreeing with the record label.
inline double min_agreement(const std::vector<Hypothesis>& hyps,
                            const std::vector<InflatedRecord>& records) {
    double lo = 1.0;
    for (const auto& r : records) {
        std::size_t agree = 0;
        for (const auto& h : hyps)
            if (h(r.z) == r.y) ++agree;
        lo = std::min(lo, static_cast<double>(agree) / static_cast<double>(hyps.size()));
    }
    return lo;
}

struct SparsifyConfig {
    std::size_t members = 1;  // N: indices drawn per attempt
    std::size_t max_retries = 1000;
};

// Default sample count N = ceil((d* + ln(1/delta)) / eps^2).
inline std::size_t sparsify_sample_count(int dual_vc, double eps = 1.0 / 18.0,
                                         double delta = 1.0 / 3.0) {
    return static_cast<std::size_t>(
        std::ceil((static_cast<double>(dual_vc) + std::log(1.0 / delta)) / (eps * eps)));
}

struct SparsifyResult {
    MajorityVote vote;
    std::vector<std::size_t> indices;  // drawn member indices, in draw order
    std::size_t retries = 0;
};

// Draw N member indices uniformly with replacement; redraw whole batches
// until the success predicate accepts the vote. Soundness rests on the
// verified predicate, not on N.
inline SparsifyResult sparsify(const std::vector<Hypothesis>& hyps, const SparsifyConfig& cfg,
                               const std::function<bool(const MajorityVote&)>& success,
                               Rng& rng) {
    if (hyps.empty()) throw ContractError("sparsify: empty hypothesis list");
    if (cfg.members == 0) throw ContractError("sparsify: need at least one member");
    for (std::size_t attempt = 0; attempt < cfg.max_retries; ++attempt) {
        std::vector<Hypothesis> picked;
        std::vector<std::size_t> indices;
        picked.reserve(cfg.members);
        for (std::size_t j = 0; j < cfg.members; ++j) {
            indices.push_back(rng.uniform_below(hyps.size()));
            picked.push_back(hyps[indices.back()]);
        }
        MajorityVote vote(std::move(picked));
        if (success(vote)) return {std::move(vote), std::move(indices), attempt};
    }
    throw SparsifyFailure("sparsify: success predicate not met within " +
                          std::to_string(cfg.max_retries) + " retries");
}

}  // namespace robustboost
