// reduction.hpp
//
// The full robustification pipeline: ZeroRobustLoss (inner boosting over the
// inflated set), the outer compression-driven boosting loop with projection,
// final sparsification, compression accounting, the two-stage sampling path
// that avoids explicit inflation, and the bound calculators.
#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <utility>
#include <vector>

#include "adversary.hpp"
#include "boosting.hpp"
#include "core.hpp"
#include "errors.hpp"
#include "learners.hpp"
#include "rng.hpp"

namespace robustboost {

struct ReductionConfig {
    std::size_t m0 = 0;             // 0 -> auto: ceil(c0 * d * d* * log2(d* + 2))
    double m0_constant = 10.0;
    std::size_t n_co = 0;           // 0 -> auto from the sparsification formula
    std::size_t inner_members = 0;  // 0 -> auto: 2 d* + 1
    BoostConfig inner;
    BoostConfig outer;
    std::size_t sparsify_max_retries = 1000;
    bool use_sampling_oracle = false;
};

inline std::size_t auto_m0(const ReductionConfig& cfg, const PacLearner& a) {
    if (cfg.m0 > 0) return cfg.m0;
    const double d = a.image_vc;
    const double ds = a.image_dual_vc;
    return static_cast<std::size_t>(std::ceil(cfg.m0_constant * d * ds * std::log2(ds + 2.0)));
}

inline std::size_t auto_n_co(const ReductionConfig& cfg, const PacLearner& a) {
    if (cfg.n_co > 0) return cfg.n_co;
    const double ds = a.image_dual_vc;
    const std::size_t n = static_cast<std::size_t>(
        std::ceil((ds * std::log2(ds + 2.0) + std::log(3.0)) * 324.0));
    return n | 1;  // odd member count, so the final vote is never tied
}

inline std::size_t auto_inner_members(const ReductionConfig& cfg, const PacLearner& a) {
    if (cfg.inner_members > 0) return cfg.inner_members;
    return 2 * static_cast<std::size_t>(a.image_dual_vc) + 1;
}

// Alg. step: replace each drawn perturbation by its originating training
// example, preserving multiplicity and draw order.
inline Dataset project(const std::vector<InflatedRecord>& drawn, const Dataset& s) {
    Dataset l;
    l.reserve(drawn.size());
    for (const auto& r : drawn) {
        if (r.origin >= s.size()) throw ContractError("project: origin index out of range");
        l.push_back(s[r.origin]);
    }
    return l;
}

struct ZeroRobustLossResult {
    MajorityVote vote;
    Hypothesis materialized;   // same predictor as a flat label vector
    std::size_t boost_rounds = 0;
    std::size_t sparsify_retries = 0;
};

// Boost the non-robust learner on the inflated set of L until the running
// majority vote has zero robust loss on L, then sparsify with the same
// (exactly verified) success predicate. The schedule starts at the configured
// rounds constant and doubles up to the ceil(112 ln |L_U|) schedule, so small
// configured constants stay sound.
inline ZeroRobustLossResult zero_robust_loss(const Dataset& l, const Adversary& u,
                                             const PacLearner& a, const ReductionConfig& cfg,
                                             std::size_t domain_size, Rng& rng,
                                             OracleStats& stats) {
    if (l.empty()) throw ContractError("zero_robust_loss: empty dataset");
    const auto records = inflate(l, u);
    if (records.empty()) {
        // Nothing the adversary can show; any predictor is robust on L.
        Hypothesis h = Hypothesis::constant(domain_size, Label::Plus);
        return {MajorityVote({h}), h, 0, 0};
    }

    BoostConfig inner = cfg.inner;
    inner.m0 = auto_m0(cfg, a);
    const std::size_t cap = static_cast<std::size_t>(
        std::ceil(112.0 * std::log(static_cast<double>(std::max<std::size_t>(records.size(), 2)))));
    std::size_t rounds = 0;  // 0 -> use the configured schedule on the first attempt

    BoostResult boosted;
    for (;;) {
        boosted = alpha_boost(records, a.fit, inner, rng, stats, rounds);
        MajorityVote all(boosted.hypotheses);
        if (robust_risk(all, l, u) == 0.0) break;
        if (boosted.hypotheses.size() >= cap)
            throw WeakLearnerFailure("zero_robust_loss: no zero-robust-loss vote at the full "
                                     "boosting schedule; instance not robustly realizable?");
        rounds = std::min(cap, std::max<std::size_t>(boosted.hypotheses.size() * 2, 2));
    }

    SparsifyConfig sp;
    sp.members = auto_inner_members(cfg, a);
    sp.max_retries = cfg.sparsify_max_retries;
    auto sparse = sparsify(
        boosted.hypotheses, sp,
        [&](const MajorityVote& f) { return robust_risk(f, l, u) == 0.0; }, rng);

    std::vector<std::uint8_t> bits(domain_size);
    for (InstanceId x = 0; x < domain_size; ++x) bits[x] = sparse.vote(x) == Label::Plus;
    return {std::move(sparse.vote), Hypothesis::from_bits(std::move(bits)),
            boosted.hypotheses.size(), sparse.retries};
}

// ---------------------------------------------------------------------------
// Two-stage sampling (the implicit-inflation path)

// E^y_t(z) = -2 alpha * #{s <= t : g_s(z) = y}.
inline EnergyFunction vote_energy(const std::vector<Hypothesis>& votes, Label y, double alpha) {
    return [&votes, y, alpha](InstanceId z) {
        std::size_t agree = 0;
        for (const auto& g : votes)
            if (g(z) == y) ++agree;
        return -2.0 * alpha * static_cast<double>(agree);
    };
}

// Exact record law of the two-stage process: origin i drawn with probability
// proportional to sum_{z in U(x_i)} exp(E^{y_i}(z)), then z within U(x_i)
// proportional to exp(E^{y_i}(z)). Equals the explicit alpha-Boost D_t.
inline std::vector<std::pair<InflatedRecord, double>> two_stage_law(
    const Dataset& s, const Adversary& u, const std::vector<Hypothesis>& votes, double alpha) {
    std::vector<std::pair<InflatedRecord, double>> law;
    std::vector<double> log_masses;  // per-origin log sum exp
    std::vector<std::vector<double>> energies(s.size());
    bool any = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const EnergyFunction e = vote_energy(votes, s[i].y, alpha);
        const auto zs = u.perturbations(s[i].x);
        energies[i].reserve(zs.size());
        for (InstanceId z : zs) energies[i].push_back(e(z));
        if (!zs.empty()) any = true;
        log_masses.push_back(zs.empty() ? -std::numeric_limits<double>::infinity()
                                        : log_sum_exp(energies[i]));
    }
    if (!any) throw ContractError("two_stage_law: every perturbation set is empty");
    const double log_total = log_sum_exp([&] {
        std::vector<double> finite;
        for (double lm : log_masses)
            if (std::isfinite(lm)) finite.push_back(lm);
        return finite;
    }());
    for (std::size_t i = 0; i < s.size(); ++i) {
        const auto zs = u.perturbations(s[i].x);
        for (std::size_t j = 0; j < zs.size(); ++j)
            law.push_back({InflatedRecord{zs[j], s[i].y, i},
                           std::exp(energies[i][j] - log_total)});
    }
    return law;
}

// Draw one inflated record through the sampling oracle: origin by marginal
// mass, then perturbation by the conditional energy law.
inline InflatedRecord two_stage_sample(const Dataset& s, const Adversary& u,
                                       const std::vector<Hypothesis>& votes, double alpha,
                                       Rng& rng, OracleStats& stats) {
    std::vector<double> masses(s.size());
    std::vector<double> max_energy(s.size(), 0.0);
    double global_max = -std::numeric_limits<double>::infinity();
    std::vector<std::vector<double>> energies(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        const EnergyFunction e = vote_energy(votes, s[i].y, alpha);
        for (InstanceId z : u.perturbations(s[i].x)) {
            energies[i].push_back(e(z));
            global_max = std::max(global_max, energies[i].back());
        }
    }
    if (!std::isfinite(global_max))
        throw ContractError("two_stage_sample: every perturbation set is empty");
    for (std::size_t i = 0; i < s.size(); ++i) {
        double m = 0.0;
        for (double en : energies[i]) m += std::exp(en - global_max);
        masses[i] = m;
    }
    ++stats.sampler_calls;
    const std::size_t origin = rng.sample_weighted(masses);
    std::vector<double> probs(energies[origin].size());
    for (std::size_t j = 0; j < probs.size(); ++j)
        probs[j] = std::exp(energies[origin][j] - global_max);
    const std::size_t pick = rng.sample_weighted(probs);
    return {u.perturbations(s[origin].x)[pick], s[origin].y, origin};
}

// ---------------------------------------------------------------------------
// Outer loop

struct CompressionMember {
    std::vector<std::size_t> origins;  // indices into S, in draw order
    std::uint64_t rng_seed = 0;        // replaying zero_robust_loss with this seed
                                       // reproduces the member bit-exactly
};

struct CompressionCertificate {
    std::vector<CompressionMember> members;  // one per final vote member, vote order

    std::size_t total_size() const {
        std::size_t n = 0;
        for (const auto& m : members) n += m.origins.size();
        return n;
    }
};

struct RobustLearnReport {
    MajorityVote predictor;
    double empirical_robust_risk = 1.0;
    OracleStats stats;
    CompressionCertificate certificate;
    std::size_t outer_rounds = 0;
    std::size_t outer_weak_retries = 0;
    std::size_t outer_sparsify_retries = 0;
    double alpha = 0.0;
    std::size_t m0 = 0;
    std::size_t n_co = 0;
};

namespace detail {

struct OuterWeak {
    Hypothesis predictor;
    CompressionMember cert;
    std::size_t retries = 0;
};

}  // namespace detail

// Algorithm: outer alpha-Boost over the inflated training set using
// ZeroRobustLoss(project(.)) as its weak learner, then sparsification to
// N_co members with R_U(.; S) = 0 verified exactly.
inline RobustLearnReport robustify(const Dataset& s, const Adversary& u, const PacLearner& a,
                                   const ReductionConfig& cfg, std::size_t domain_size,
                                   std::uint64_t seed) {
    if (s.empty()) throw ContractError("robustify: empty training set");
    RobustLearnReport report;
    report.m0 = auto_m0(cfg, a);
    report.n_co = auto_n_co(cfg, a);

    Rng rng(derive_seed(seed, 0));
    std::uint64_t call_counter = 1;  // child-seed index for replayable learner calls

    // Explicit inflation is used for the weight bookkeeping unless the
    // sampling-oracle path is on; the realizability check runs either way.
    const auto records = inflate(s, u);
    std::size_t record_count = records.size();
    if (record_count == 0) {
        Hypothesis h = Hypothesis::constant(domain_size, Label::Plus);
        report.predictor = MajorityVote({h});
        report.empirical_robust_risk = 0.0;
        report.certificate.members.push_back({});
        return report;
    }

    const BoostSchedule schedule =
        alpha_schedule(std::max<std::size_t>(record_count, 2), cfg.outer);
    report.alpha = schedule.alpha;
    // The configured schedule is the first attempt; if its vote misses zero
    // robust risk on S the loop keeps boosting, up to the full-constant cap.
    const std::size_t cap = std::max<std::size_t>(
        schedule.rounds,
        static_cast<std::size_t>(std::ceil(
            112.0 * std::log(static_cast<double>(std::max<std::size_t>(record_count, 2))))));

    WeightedDataset d_t = WeightedDataset::uniform(records);
    std::vector<Hypothesis> votes;  // materialized f_t's, also drive the energies
    std::vector<CompressionMember> certs;

    auto run_weak_call = [&](const std::vector<InflatedRecord>& drawn) -> detail::OuterWeak {
        detail::OuterWeak out;
        out.cert.rng_seed = derive_seed(seed, call_counter++);
        for (const auto& r : drawn) out.cert.origins.push_back(r.origin);
        Rng child(out.cert.rng_seed);
        OracleStats& stats = report.stats;
        auto zrl = zero_robust_loss(project(drawn, s), u, a, cfg, domain_size, child, stats);
        out.predictor = std::move(zrl.materialized);
        return out;
    };

    auto boost_one_round = [&] {
        detail::OuterWeak weak;
        for (std::size_t attempt = 0;; ++attempt) {
            if (attempt >= cfg.outer.max_weak_retries)
                throw WeakLearnerFailure("robustify: outer weak step missed the 1/3 target");
            std::vector<InflatedRecord> drawn;
            drawn.reserve(report.m0);
            for (std::size_t j = 0; j < report.m0; ++j) {
                if (cfg.use_sampling_oracle) {
                    drawn.push_back(
                        two_stage_sample(s, u, votes, schedule.alpha, rng, report.stats));
                } else {
                    drawn.push_back(d_t.records[rng.sample_weighted(d_t.weights)]);
                }
            }
            weak = run_weak_call(drawn);
            double err;
            if (cfg.use_sampling_oracle) {
                err = 0.0;
                for (const auto& [rec, p] : two_stage_law(s, u, votes, schedule.alpha))
                    if (weak.predictor(rec.z) != rec.y) err += p;
            } else {
                err = standard_error(weak.predictor, d_t);
            }
            if (err <= cfg.outer.weak_error_target) break;
            ++report.outer_weak_retries;
        }
        if (!cfg.use_sampling_oracle)
            d_t = update_distribution(d_t, weak.predictor, schedule.alpha).next;
        votes.push_back(std::move(weak.predictor));
        certs.push_back(std::move(weak.cert));
    };

    SparsifyConfig sp;
    sp.members = report.n_co;
    sp.max_retries = cfg.sparsify_max_retries;
    const auto robust_on_s = [&](const MajorityVote& f) { return robust_risk(f, s, u) == 0.0; };

    std::size_t target_rounds = schedule.rounds;
    SparsifyResult sparse;
    for (;;) {
        while (votes.size() < target_rounds) boost_one_round();
        const bool full_vote_ok = robust_on_s(MajorityVote(votes));
        if (full_vote_ok) {
            try {
                sparse = sparsify(votes, sp, robust_on_s, rng);
                break;
            } catch (const SparsifyFailure&) {
                if (target_rounds >= cap) throw;
            }
        } else if (target_rounds >= cap) {
            throw WeakLearnerFailure(
                "robustify: outer vote misses zero robust risk at the full schedule; "
                "instance not robustly realizable?");
        }
        target_rounds = std::min(cap, std::max<std::size_t>(target_rounds * 2, 2));
    }
    report.outer_rounds = votes.size();
    report.outer_sparsify_retries = sparse.retries;
    for (std::size_t idx : sparse.indices) report.certificate.members.push_back(certs[idx]);
    report.predictor = std::move(sparse.vote);
    report.empirical_robust_risk = robust_risk(report.predictor, s, u);
    return report;
}

// Replays one compression-certificate member and checks it reproduces the
// corresponding final-vote member bit-exactly.
inline bool replay_certificate_member(const Dataset& s, const Adversary& u, const PacLearner& a,
                                      const ReductionConfig& cfg, std::size_t domain_size,
                                      const CompressionMember& member,
                                      const Hypothesis& expected) {
    Dataset l;
    for (std::size_t origin : member.origins) l.push_back(s.at(origin));
    Rng child(member.rng_seed);
    OracleStats scratch;
    auto zrl = zero_robust_loss(l, u, a, cfg, domain_size, child, scratch);
    return zrl.materialized.label_bits() == expected.label_bits();
}

// ---------------------------------------------------------------------------
// Bound calculators (reporting only)

// (k ln m + ln(1/delta)) / (m - k)
inline double compression_bound(std::size_t m, std::size_t k, double delta) {
    if (m <= k) throw ContractError("compression_bound: need m > k");
    if (!(delta > 0.0 && delta <= 1.0)) throw ContractError("compression_bound: bad delta");
    return (static_cast<double>(k) * std::log(static_cast<double>(m)) + std::log(1.0 / delta)) /
           static_cast<double>(m - k);
}

// Unit-constant evaluation of the sample-complexity expression; log d* is
// clamped to >= 1 so small dual dimensions do not zero the leading term.
inline double sample_complexity_bound(int d, int d_star, double eps, double delta) {
    if (d < 1 || d_star < 1) throw ContractError("sample_complexity_bound: need d, d* >= 1");
    if (!(eps > 0.0 && eps < 1.0 && delta > 0.0 && delta < 1.0))
        throw ContractError("sample_complexity_bound: eps, delta must lie in (0,1)");
    const double logds = std::max(1.0, std::log2(static_cast<double>(d_star)));
    const double lead = static_cast<double>(d) * static_cast<double>(d_star) *
                        static_cast<double>(d_star) * logds * logds / eps;
    return lead * std::log(std::max(lead, std::exp(1.0))) + std::log(1.0 / delta) / eps;
}

}  // namespace robustboost
