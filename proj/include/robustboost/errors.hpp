// errors.hpp
#pragma once

#include <stdexcept>
#include <string>

namespace robustboost {

// Caller violated a documented precondition (unnormalized weights, bad range, ...).
struct ContractError : std::logic_error {
    using std::logic_error::logic_error;
};

// Two origins produce the same perturbation with conflicting labels; no concept
// can be robustly correct on both.
struct RealizabilityConflict : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// An online learner's version space became empty on a supposedly realizable stream.
struct RealizabilityViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The weak learner could not reach the target error within the retry budget.
struct WeakLearnerFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Sparsification retries exhausted without satisfying the success predicate.
struct SparsifyFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// An online learner exceeded its declared mistake bound.
struct MistakeBoundViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The example stream ran out before the halting condition was met.
struct StreamExhausted : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A lower-bound trial strategy exceeded its oracle-call budget.
struct BudgetExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// An experiment config failed schema validation.
struct SchemaError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A brute-force computation would exceed the combinatorial guard.
struct TooLarge : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace robustboost
