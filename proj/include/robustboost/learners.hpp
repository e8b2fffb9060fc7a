// learners.hpp
//
// Black-box learner contracts and concrete learners: brute-force ERM, the
// halving online learner, and the monotone-disjunction online learner.
#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include "core.hpp"
#include "errors.hpp"
#include "rng.hpp"

namespace robustboost {

// Finite hypothesis class with a fixed enumeration order.
struct FiniteClass {
    std::vector<Hypothesis> members;
    std::size_t domain_size = 0;

    static FiniteClass from_label_matrix(const std::vector<std::vector<int>>& rows) {
        FiniteClass c;
        for (const auto& row : rows) {
            std::vector<Label> labels(row.size());
            for (std::size_t i = 0; i < row.size(); ++i) labels[i] = label_from_sign(row[i]);
            c.members.push_back(Hypothesis::from_labels(labels));
            c.domain_size = row.size();
        }
        if (c.members.empty()) throw ContractError("FiniteClass: empty class");
        return c;
    }

    // Thresholds 1[x >= theta] mapped to +-1 over X = {0..domain-1},
    // theta in {0..domain}.
    static FiniteClass thresholds(std::size_t domain) {
        FiniteClass c;
        c.domain_size = domain;
        for (std::size_t theta = 0; theta <= domain; ++theta) {
            std::vector<std::uint8_t> bits(domain);
            for (std::size_t x = 0; x < domain; ++x) bits[x] = x >= theta;
            c.members.push_back(Hypothesis::from_bits(std::move(bits)));
        }
        return c;
    }
};

// A sample-consuming PAC learner: fit is deterministic given (sample, rng
// state). image_vc / image_dual_vc are declared complexities of im(A).
struct PacLearner {
    std::function<Hypothesis(const Dataset& sample, Rng& rng)> fit;
    int image_vc = 1;
    int image_dual_vc = 1;
};

inline std::size_t sample_error_count(const Hypothesis& h, const Dataset& sample) {
    std::size_t errs = 0;
    for (const auto& e : sample)
        if (h(e.x) != e.y) ++errs;
    return errs;
}

// First member (enumeration order) minimizing empirical 0-1 error.
inline Hypothesis erm_fit(const FiniteClass& c, const Dataset& sample) {
    if (c.members.empty()) throw ContractError("erm_fit: empty class");
    std::size_t best = 0;
    std::size_t best_errs = sample_error_count(c.members[0], sample);
    for (std::size_t i = 1; i < c.members.size() && best_errs > 0; ++i) {
        const std::size_t errs = sample_error_count(c.members[i], sample);
        if (errs < best_errs) {
            best = i;
            best_errs = errs;
        }
    }
    return c.members[best];
}

inline PacLearner erm_learner(FiniteClass c, int image_vc, int image_dual_vc) {
    PacLearner a;
    a.image_vc = image_vc;
    a.image_dual_vc = image_dual_vc;
    a.fit = [cls = std::move(c)](const Dataset& sample, Rng&) { return erm_fit(cls, sample); };
    return a;
}

// Conservative predict/update online learner with a declared mistake bound.
class OnlineLearner {
  public:
    virtual ~OnlineLearner() = default;
    virtual Label predict(InstanceId x) const = 0;
    virtual void update(InstanceId x, Label y) = 0;  // state changes only on a mistake
    virtual std::size_t mistake_bound() const = 0;
    virtual Hypothesis snapshot() const = 0;
};

// Version-space majority vote; on a mistake removes all inconsistent members.
// Mistake bound floor(log2 |C|).
class HalvingLearner final : public OnlineLearner {
  public:
    explicit HalvingLearner(FiniteClass c) : class_(std::move(c)) {
        alive_.assign(class_.members.size(), 1);
    }

    Label predict(InstanceId x) const override {
        int s = 0;
        for (std::size_t i = 0; i < alive_.size(); ++i)
            if (alive_[i]) s += sign_of(class_.members[i](x));
        return s >= 0 ? Label::Plus : Label::Minus;  // tie -> +1
    }

    void update(InstanceId x, Label y) override {
        if (predict(x) == y) return;
        std::size_t survivors = 0;
        for (std::size_t i = 0; i < alive_.size(); ++i) {
            if (alive_[i] && class_.members[i](x) != y) alive_[i] = 0;
            survivors += alive_[i];
        }
        if (survivors == 0)
            throw RealizabilityViolation("HalvingLearner: version space became empty");
    }

    std::size_t mistake_bound() const override {
        return static_cast<std::size_t>(std::floor(std::log2(
            static_cast<double>(class_.members.size()))));
    }

    Hypothesis snapshot() const override {
        std::vector<std::uint8_t> bits(class_.domain_size);
        for (InstanceId x = 0; x < class_.domain_size; ++x)
            bits[x] = predict(x) == Label::Plus;
        return Hypothesis::from_bits(std::move(bits));
    }

  private:
    FiniteClass class_;
    std::vector<std::uint8_t> alive_;
};

// Online learner for OR functions over {0,1}^n (instance id bits are the
// hypercube coordinates). Starts from the OR of all variables; a false
// positive eliminates every variable set in the example. Mistake bound n.
class DisjunctionLearner final : public OnlineLearner {
  public:
    explicit DisjunctionLearner(std::size_t n) : n_(n), vars_((n >= 32) ? ~0u : ((1u << n) - 1u)) {
        if (n == 0 || n > 31) throw ContractError("DisjunctionLearner: need 1 <= n <= 31");
    }

    Label predict(InstanceId x) const override {
        return (x & vars_) != 0 ? Label::Plus : Label::Minus;
    }

    void update(InstanceId x, Label y) override {
        if (predict(x) == y) return;
        if (y == Label::Minus) vars_ &= ~x;
        // A false negative cannot occur on a realizable stream; nothing sound
        // to eliminate, so stay conservative and keep the state.
    }

    std::size_t mistake_bound() const override { return n_; }

    std::uint32_t variable_set() const { return vars_; }

    Hypothesis snapshot() const override {
        std::vector<std::uint8_t> bits(std::size_t{1} << n_);
        for (std::size_t x = 0; x < bits.size(); ++x)
            bits[x] = (static_cast<std::uint32_t>(x) & vars_) != 0;
        return Hypothesis::from_bits(std::move(bits));
    }

  private:
    std::size_t n_;
    std::uint32_t vars_;
};

// Target OR over a variable mask, as a hypothesis on {0,1}^n.
inline Hypothesis disjunction_concept(std::size_t n, std::uint32_t mask) {
    std::vector<std::uint8_t> bits(std::size_t{1} << n);
    for (std::size_t x = 0; x < bits.size(); ++x)
        bits[x] = (static_cast<std::uint32_t>(x) & mask) != 0;
    return Hypothesis::from_bits(std::move(bits));
}

}  // namespace robustboost
