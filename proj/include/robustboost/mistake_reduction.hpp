// mistake_reduction.hpp
//
// Robust learning from a conservative online learner plus a mistake oracle:
// certify each stream example, feed returned counterexamples back to the
// learner, halt after a long enough run of consecutive certifications.
#pragma once

#include <cmath>
#include <cstdint>
#include <functional>

#include "adversary.hpp"
#include "core.hpp"
#include "errors.hpp"
#include "learners.hpp"

namespace robustboost {

struct Alg3Config {
    double eps = 0.1;
    double delta = 0.05;

    // The union bound in the analysis runs over M_A + 1 predictors, so the
    // window length uses ln((M_A + 1)/delta) rather than the looser
    // ln(M_A/delta) of the headline statement.
    std::size_t run_length(std::size_t mistake_bound) const {
        check();
        return static_cast<std::size_t>(std::ceil(
            (1.0 / eps) * std::log((static_cast<double>(mistake_bound) + 1.0) / delta)));
    }

    std::size_t max_samples(std::size_t mistake_bound) const {
        check();
        return static_cast<std::size_t>(std::ceil(
            2.0 * (static_cast<double>(mistake_bound) / eps) *
            std::log((static_cast<double>(mistake_bound) + 1.0) / delta)));
    }

    void check() const {
        if (!(eps > 0.0 && eps < 1.0 && delta > 0.0 && delta < 1.0))
            throw ContractError("Alg3Config: eps and delta must lie in (0,1)");
    }
};

struct MistakeLearnReport {
    std::size_t samples = 0;
    std::size_t oracle_calls = 0;
    std::size_t updates = 0;
    bool halted = false;
    std::size_t window_len = 0;
};

// stream() yields the next i.i.d. example or throws StreamExhausted.
using ExampleStream = std::function<Example()>;

template <typename Learner>
std::pair<Hypothesis, MistakeLearnReport> robust_learn_mistake_oracle(
    const ExampleStream& stream, Learner& learner, const Adversary& u, const Alg3Config& cfg,
    OracleStats& stats) {
    const std::size_t bound = learner.mistake_bound();
    const std::size_t window = cfg.run_length(bound);
    const std::size_t budget = cfg.max_samples(bound);

    MistakeLearnReport report;
    std::size_t consecutive = 0;
    while (report.samples < budget) {
        const Example e = stream();
        ++report.samples;
        const auto current = [&learner](InstanceId z) { return learner.predict(z); };
        const auto verdict = mistake_oracle(current, e, u, stats);
        ++report.oracle_calls;
        if (verdict.robust()) {
            if (++consecutive >= window) {
                report.halted = true;
                report.window_len = consecutive;
                return {learner.snapshot(), report};
            }
        } else {
            consecutive = 0;
            learner.update(*verdict.counterexample, e.y);
            if (++report.updates > bound)
                throw MistakeBoundViolation(
                    "robust_learn_mistake_oracle: online learner exceeded its mistake bound");
        }
    }
    throw StreamExhausted("robust_learn_mistake_oracle: sample budget spent before halting");
}

}  // namespace robustboost
