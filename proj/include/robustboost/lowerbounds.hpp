// lowerbounds.hpp
//
// Executable versions of the two oracle-complexity lower-bound constructions:
// the PAC-learner construction (paired perturbation groups with coin-flipped
// labels) and the mistake-oracle construction (hidden balanced partition with
// a threshold ERM that reveals as little as possible).
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "adversary.hpp"
#include "core.hpp"
#include "errors.hpp"
#include "learners.hpp"
#include "rng.hpp"

namespace robustboost {

// ---------------------------------------------------------------------------
// PAC-learner lower bound

struct PacLBInstance {
    std::size_t m = 1;          // group size 2^m, |U| = 2^m
    double zexp = 10.0;
    double eps = 0.125;
    double eps_prime = 0.0625;  // eps / 2

    std::size_t z_size = 0;     // |Z| = 2^ceil(zexp * m); ids 0..z_size-1
    std::size_t group_size = 0; // 2^m
    std::size_t n_groups = 0;   // per sign
    std::size_t domain = 0;     // z_size + 2 * n_groups (only touched pairs exist)

    Hypothesis h_tilde;         // half +, half -, pairs labeled as h_star
    Hypothesis h_star;          // hidden target
    std::vector<Hypothesis> chain;  // h_1 .. h_T (h_1 = h_tilde)
    Adversary u;
    DiscreteDistribution d;     // uniform over the paired x points

    InstanceId x_plus(std::size_t group) const {
        return static_cast<InstanceId>(z_size + 2 * group);
    }
    InstanceId x_minus(std::size_t group) const {
        return static_cast<InstanceId>(z_size + 2 * group + 1);
    }
};

// Largest T for which the disagreement regions are guaranteed non-empty.
inline std::size_t pac_lb_max_queries(std::size_t m, double eps) {
    return static_cast<std::size_t>(std::floor(static_cast<double>(m) / std::log2(2.0 / eps)));
}

inline PacLBInstance build_pac_lb(std::size_t m, double zexp, double eps, std::uint64_t seed,
                                  std::size_t chain_length = 0,
                                  double guard = 1 << 22) {
    if (m < 1 || !(eps > 0.0 && eps < 1.0)) throw ContractError("build_pac_lb: bad parameters");
    PacLBInstance inst;
    inst.m = m;
    inst.zexp = zexp;
    inst.eps = eps;
    inst.eps_prime = eps / 2.0;

    const double zbits = std::ceil(zexp * static_cast<double>(m));
    if (std::pow(2.0, zbits) > guard) throw TooLarge("build_pac_lb: 2^(zexp*m) exceeds guard");
    inst.z_size = std::size_t{1} << static_cast<std::size_t>(zbits);
    inst.group_size = std::size_t{1} << m;
    if (inst.z_size < 2 * inst.group_size)
        throw ContractError("build_pac_lb: Z smaller than one group per sign");
    inst.n_groups = inst.z_size / 2 / inst.group_size;
    inst.domain = inst.z_size + 2 * inst.n_groups;

    const std::size_t half = inst.z_size / 2;
    auto group_base = [&](std::size_t i, bool positive) {
        return positive ? i * inst.group_size : half + i * inst.group_size;
    };

    // Paired-coin flip bookkeeping: per group, pick ceil(eps' * 2^m) pairs of
    // points; a fair coin decides which member of each pair gets flipped.
    const auto pairs = static_cast<std::size_t>(
        std::ceil(inst.eps_prime * static_cast<double>(inst.group_size)));
    if (2 * pairs > inst.group_size)
        throw ContractError("build_pac_lb: eps too large for the paired-coin process");

    Rng rng(seed);
    std::vector<std::uint8_t> star_bits(inst.domain);
    for (std::size_t z = 0; z < half; ++z) star_bits[z] = 1;
    std::vector<std::vector<InstanceId>> flipped_plus(inst.n_groups), flipped_minus(inst.n_groups);
    for (std::size_t i = 0; i < inst.n_groups; ++i) {
        for (bool positive : {true, false}) {
            std::vector<InstanceId> members(inst.group_size);
            for (std::size_t j = 0; j < inst.group_size; ++j)
                members[j] = static_cast<InstanceId>(group_base(i, positive) + j);
            rng.shuffle(members);
            auto& flipped = positive ? flipped_plus[i] : flipped_minus[i];
            for (std::size_t p = 0; p < pairs; ++p) {
                const InstanceId z = rng.coin() ? members[2 * p] : members[2 * p + 1];
                flipped.push_back(z);
                star_bits[z] ^= 1;
            }
        }
    }

    // Post-swap groups are the all-plus / all-minus 2^m-subsets that the
    // touched x pairs perturb into.
    std::map<InstanceId, std::vector<InstanceId>> sets;
    std::vector<Example> support;
    for (std::size_t i = 0; i < inst.n_groups; ++i) {
        std::vector<InstanceId> plus_set, minus_set;
        for (std::size_t j = 0; j < inst.group_size; ++j) {
            const auto zp = static_cast<InstanceId>(group_base(i, true) + j);
            const auto zm = static_cast<InstanceId>(group_base(i, false) + j);
            (star_bits[zp] ? plus_set : minus_set).push_back(zp);
            (star_bits[zm] ? plus_set : minus_set).push_back(zm);
        }
        sets[inst.x_plus(i)] = plus_set;
        sets[inst.x_minus(i)] = minus_set;
        star_bits[inst.x_plus(i)] = 1;
        star_bits[inst.x_minus(i)] = 0;
        support.push_back({inst.x_plus(i), Label::Plus});
        support.push_back({inst.x_minus(i), Label::Minus});
    }
    inst.u = Adversary::from_map(std::move(sets));
    inst.d = DiscreteDistribution::uniform(std::move(support));
    inst.h_star = Hypothesis::from_bits(star_bits);

    std::vector<std::uint8_t> tilde_bits = star_bits;
    for (std::size_t z = 0; z < inst.z_size; ++z) tilde_bits[z] = z < half;
    inst.h_tilde = Hypothesis::from_bits(tilde_bits);

    // Chain h_1 .. h_T: each step flips a ceil((1-eps') |G cap DIS|) fraction
    // of the remaining disagreement toward h_star, per group.
    if (chain_length == 0) chain_length = std::max<std::size_t>(1, pac_lb_max_queries(m, eps));
    std::vector<std::uint8_t> current = tilde_bits;
    inst.chain.push_back(inst.h_tilde);
    for (std::size_t t = 2; t <= chain_length; ++t) {
        for (std::size_t i = 0; i < inst.n_groups; ++i) {
            for (bool positive : {true, false}) {
                std::vector<InstanceId> dis;
                for (std::size_t j = 0; j < inst.group_size; ++j) {
                    const auto z = static_cast<InstanceId>(group_base(i, positive) + j);
                    if (current[z] != star_bits[z]) dis.push_back(z);
                }
                const auto flips = static_cast<std::size_t>(
                    std::ceil((1.0 - inst.eps_prime) * static_cast<double>(dis.size())));
                rng.shuffle(dis);
                for (std::size_t f = 0; f < flips; ++f) current[dis[f]] = star_bits[dis[f]];
            }
        }
        inst.chain.push_back(Hypothesis::from_bits(current));
    }
    return inst;
}

// Per-group disagreement size |G_i^{+-} cap DIS_t| for a chain element.
inline std::size_t pac_lb_min_group_disagreement(const PacLBInstance& inst, std::size_t t) {
    if (t == 0 || t > inst.chain.size()) throw ContractError("bad chain index");
    const std::size_t half = inst.z_size / 2;
    std::size_t lo = inst.group_size + 1;
    for (std::size_t i = 0; i < inst.n_groups; ++i) {
        for (bool positive : {true, false}) {
            const std::size_t base =
                positive ? i * inst.group_size : half + i * inst.group_size;
            std::size_t count = 0;
            for (std::size_t j = 0; j < inst.group_size; ++j) {
                const auto z = static_cast<InstanceId>(base + j);
                if (inst.chain[t - 1](z) != inst.h_star(z)) ++count;
            }
            lo = std::min(lo, count);
        }
    }
    return lo;
}

// The adversarially chosen PAC learner: returns h_s for the smallest s with
// err_P(h_s, h_star) <= eps, falling back to h_star itself.
inline Hypothesis pac_lb_learner(const PacLBInstance& inst,
                                 const std::vector<std::pair<InstanceId, double>>& p,
                                 double eps) {
    for (const auto& h : inst.chain) {
        double err = 0.0;
        for (const auto& [x, w] : p)
            if (h(x) != inst.h_star(x)) err += w;
        if (err <= eps) return h;
    }
    return inst.h_star;
}

struct PacLBContext {
    const PacLBInstance& inst;
    const Dataset& sample;  // training set S drawn from D_{h_star}
    // Budget-enforced oracle access to the learner; throws BudgetExceeded.
    std::function<Hypothesis(const std::vector<std::pair<InstanceId, double>>&)> call_learner;
    Rng& rng;
};

using PacLBStrategy = std::function<Hypothesis(PacLBContext&)>;

// Runs one trial: draw S, let the strategy build a predictor within its query
// budget, return the exact robust risk under D_{h_star}.
inline double run_pac_lb_trial(const PacLBInstance& inst, const PacLBStrategy& strategy,
                               std::size_t t_budget, std::size_t n_samples, Rng& rng,
                               OracleStats* stats = nullptr) {
    Dataset sample;
    for (std::size_t i = 0; i < n_samples; ++i) {
        const std::size_t pick = rng.sample_weighted(inst.d.probs);
        sample.push_back(inst.d.support[pick]);
    }
    std::size_t calls = 0;
    PacLBContext ctx{
        inst, sample,
        [&](const std::vector<std::pair<InstanceId, double>>& p) {
            if (calls >= t_budget)
                throw BudgetExceeded("pac-lb: learner query budget exhausted");
            ++calls;
            if (stats) ++stats->learner_calls;
            return pac_lb_learner(inst, p, inst.eps);
        },
        rng};
    const Hypothesis f = strategy(ctx);
    return robust_risk(f, inst.d, inst.u);
}

// Label everything like h_tilde, then overwrite every perturbation of a seen
// training example with its label. The best oracle-free baseline.
inline Hypothesis pac_lb_memorize_strategy(PacLBContext& ctx) {
    std::vector<std::uint8_t> bits = ctx.inst.h_tilde.label_bits();
    for (const auto& e : ctx.sample) {
        for (InstanceId z : ctx.inst.u.perturbations(e.x)) bits[z] = e.y == Label::Plus;
        bits[e.x] = e.y == Label::Plus;
    }
    return Hypothesis::from_bits(std::move(bits));
}

// Spends the whole budget probing the learner with the uniform distribution
// over Z, keeps the last answer, then memorizes the sample on top of it.
inline Hypothesis pac_lb_probe_strategy(PacLBContext& ctx, std::size_t budget) {
    std::vector<std::pair<InstanceId, double>> uniform_z;
    const double w = 1.0 / static_cast<double>(ctx.inst.z_size);
    for (std::size_t z = 0; z < ctx.inst.z_size; ++z)
        uniform_z.push_back({static_cast<InstanceId>(z), w});
    std::optional<Hypothesis> last;
    for (std::size_t q = 0; q < budget; ++q) last = ctx.call_learner(uniform_z);
    std::vector<std::uint8_t> bits =
        last ? last->label_bits() : ctx.inst.h_tilde.label_bits();
    for (const auto& e : ctx.sample) {
        for (InstanceId z : ctx.inst.u.perturbations(e.x)) bits[z] = e.y == Label::Plus;
        bits[e.x] = e.y == Label::Plus;
    }
    return Hypothesis::from_bits(std::move(bits));
}

// ---------------------------------------------------------------------------
// Mistake-oracle lower bound

// Instance ids: x0 = 0, x1 = 1, Z = {2 .. 2k+1}. The hidden balanced
// partition assigns each z a side; the embedding ranks U_b(x0) strictly below
// U_b(x1), with the anchors pinned to the extreme ranks (the worst case the
// probabilistic argument exhibits).
struct MistakeLBInstance {
    std::size_t k = 1;
    std::vector<std::uint8_t> side;   // side[z - 2] in {0, 1}
    std::vector<std::size_t> rank;    // rank[id] over all 2k+2 points
    Adversary u;
    Hypothesis c_b;                   // hidden concept (side 0 -> Minus)
    Dataset s;                        // {(x0, -1), (x1, +1)}

    std::size_t domain() const { return 2 * k + 2; }
};

inline constexpr InstanceId kMistakeLBX0 = 0;
inline constexpr InstanceId kMistakeLBX1 = 1;

inline MistakeLBInstance build_mistake_lb(std::size_t k, std::uint64_t seed) {
    if (k < 1) throw ContractError("build_mistake_lb: need k >= 1");
    MistakeLBInstance inst;
    inst.k = k;

    Rng rng(seed);
    std::vector<InstanceId> zs(2 * k);
    for (std::size_t i = 0; i < 2 * k; ++i) zs[i] = static_cast<InstanceId>(i + 2);
    rng.shuffle(zs);  // first k -> side 0, rest -> side 1

    inst.side.assign(2 * k, 1);
    std::vector<InstanceId> z0, z1;
    for (std::size_t i = 0; i < 2 * k; ++i) {
        if (i < k) {
            inst.side[zs[i] - 2] = 0;
            z0.push_back(zs[i]);
        } else {
            z1.push_back(zs[i]);
        }
    }

    // Ranks: x0 at 0, then a random order of Z_0, then Z_1, x1 on top.
    inst.rank.assign(inst.domain(), 0);
    rng.shuffle(z0);
    rng.shuffle(z1);
    inst.rank[kMistakeLBX0] = 0;
    for (std::size_t i = 0; i < k; ++i) inst.rank[z0[i]] = i + 1;
    for (std::size_t i = 0; i < k; ++i) inst.rank[z1[i]] = k + 1 + i;
    inst.rank[kMistakeLBX1] = 2 * k + 1;

    std::map<InstanceId, std::vector<InstanceId>> sets;
    sets[kMistakeLBX0] = z0;
    sets[kMistakeLBX0].push_back(kMistakeLBX0);
    sets[kMistakeLBX1] = z1;
    sets[kMistakeLBX1].push_back(kMistakeLBX1);
    for (InstanceId z = 2; z < inst.domain(); ++z) sets[z] = {z};
    inst.u = Adversary::from_map(std::move(sets));

    std::vector<std::uint8_t> bits(inst.domain(), 0);
    bits[kMistakeLBX1] = 1;
    for (InstanceId z = 2; z < inst.domain(); ++z) bits[z] = inst.side[z - 2];
    inst.c_b = Hypothesis::from_bits(std::move(bits));
    inst.s = {{kMistakeLBX0, Label::Minus}, {kMistakeLBX1, Label::Plus}};
    return inst;
}

// Threshold ERM with the construction's tie-break: among the error-minimizing
// thresholds pick the earliest one, i.e. the one labeling as few points
// negative as possible.
inline Hypothesis mistake_lb_erm(const MistakeLBInstance& inst, const Dataset& l) {
    const std::size_t n = inst.domain();
    std::size_t best_theta = 0;
    std::size_t best_errs = l.size() + 1;
    for (std::size_t theta = 0; theta <= n; ++theta) {
        std::size_t errs = 0;
        for (const auto& e : l) {
            const Label pred = inst.rank[e.x] >= theta ? Label::Plus : Label::Minus;
            if (pred != e.y) ++errs;
        }
        if (errs < best_errs) {
            best_errs = errs;
            best_theta = theta;
        }
    }
    std::vector<std::uint8_t> bits(n);
    for (InstanceId x = 0; x < n; ++x) bits[x] = inst.rank[x] >= best_theta;
    return Hypothesis::from_bits(std::move(bits));
}

// Information-minimizing mistake oracle for the construction: among the
// violating perturbations it returns the one with the lowest embedding rank,
// so the ERM's threshold can advance by at most one position per call.
inline MistakeOracleResult mistake_lb_oracle(const MistakeLBInstance& inst, const Hypothesis& f,
                                             const Example& e, OracleStats& stats) {
    ++stats.mistake_oracle_calls;
    std::optional<InstanceId> worst;
    for (InstanceId z : inst.u.perturbations(e.x)) {
        if (f(z) != e.y && (!worst || inst.rank[z] < inst.rank[*worst])) worst = z;
    }
    return {worst};
}

struct MistakeLBContext {
    const MistakeLBInstance& inst;
    const Dataset& sample;  // S = {(x0, -1), (x1, +1)}
    std::function<MistakeOracleResult(const Hypothesis&, const Example&)> call_oracle;
    std::function<Hypothesis(const Dataset&)> call_erm;  // not budget-limited
};

using MistakeLBStrategy = std::function<Hypothesis(MistakeLBContext&)>;

struct MistakeLBTrialResult {
    std::size_t remaining_mistakes = 0;  // Z points mislabeled by the final predictor
    bool robust_on_s = false;
    std::size_t oracle_calls = 0;
};

inline MistakeLBTrialResult run_mistake_lb_trial(const MistakeLBInstance& inst,
                                                 const MistakeLBStrategy& strategy,
                                                 std::size_t t_budget,
                                                 OracleStats* stats = nullptr) {
    OracleStats local;
    OracleStats& st = stats ? *stats : local;
    std::size_t calls = 0;
    MistakeLBContext ctx{
        inst, inst.s,
        [&](const Hypothesis& f, const Example& e) {
            if (calls >= t_budget)
                throw BudgetExceeded("mistake-lb: oracle query budget exhausted");
            ++calls;
            return mistake_lb_oracle(inst, f, e, st);
        },
        [&](const Dataset& l) { return mistake_lb_erm(inst, l); }};
    const Hypothesis f = strategy(ctx);

    MistakeLBTrialResult result;
    result.oracle_calls = calls;
    for (InstanceId z = 2; z < inst.domain(); ++z)
        if (f(z) != inst.c_b(z)) ++result.remaining_mistakes;
    result.robust_on_s = robust_risk(f, inst.s, inst.u) == 0.0;
    return result;
}

// Alternate certification of (x0, -1) and (x1, +1), feeding each revealed
// counterexample back into the ERM, until both certify or the budget runs out.
inline Hypothesis mistake_lb_greedy_strategy(MistakeLBContext& ctx) {
    Dataset l = ctx.sample;
    Hypothesis f = ctx.call_erm(l);
    for (;;) {
        bool progressed = false;
        for (const auto& e : ctx.sample) {
            MistakeOracleResult verdict;
            try {
                verdict = ctx.call_oracle(f, e);
            } catch (const BudgetExceeded&) {
                return f;
            }
            if (!verdict.robust()) {
                l.push_back({*verdict.counterexample, e.y});
                f = ctx.call_erm(l);
                progressed = true;
            }
        }
        if (!progressed) return f;  // both examples certified robust
    }
}

// Determines every point's side with one membership probe each (a predictor
// that is wrong only on the probed point), then fits the fully revealed data.
inline Hypothesis mistake_lb_probe_strategy(MistakeLBContext& ctx) {
    const std::size_t n = ctx.inst.domain();
    Dataset l = ctx.sample;
    for (InstanceId z = 2; z < n; ++z) {
        std::vector<std::uint8_t> bits(n, 1);
        bits[z] = 0;
        const Hypothesis probe = Hypothesis::from_bits(std::move(bits));
        MistakeOracleResult verdict;
        try {
            verdict = ctx.call_oracle(probe, {kMistakeLBX1, Label::Plus});
        } catch (const BudgetExceeded&) {
            return ctx.call_erm(l);
        }
        l.push_back({z, verdict.robust() ? Label::Minus : Label::Plus});
    }
    return ctx.call_erm(l);
}

}  // namespace robustboost
