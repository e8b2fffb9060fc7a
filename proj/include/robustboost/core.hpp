// core.hpp
//
// Finite instance space, datasets, hypotheses, majority votes, and exact risk
// computations (standard 0-1 and robust 0-1). Everything is total over an
// indexed instance space so each quantity is exactly computable.
#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace robustboost {

using InstanceId = std::uint32_t;

enum class Label : std::int8_t { Minus = -1, Plus = 1 };

inline int sign_of(Label y) { return static_cast<int>(y); }

inline Label label_from_sign(int s) {
    if (s > 0) return Label::Plus;
    if (s < 0) return Label::Minus;
    throw ContractError("label_from_sign: zero sign has no label");
}

inline Label negate(Label y) { return y == Label::Plus ? Label::Minus : Label::Plus; }

struct Example {
    InstanceId x;
    Label y;
};

// Ordered, duplicates allowed; order matters for compression.
using Dataset = std::vector<Example>;

// One perturbation of one training example, with provenance.
struct InflatedRecord {
    InstanceId z;
    Label y;
    std::size_t origin;  // index into the source Dataset
};

inline constexpr double kNormalizationTol = 1e-9;

struct WeightedDataset {
    std::vector<InflatedRecord> records;
    std::vector<double> weights;

    void check_normalized() const {
        if (records.size() != weights.size())
            throw ContractError("WeightedDataset: records/weights length mismatch");
        double total = 0.0;
        for (double w : weights) {
            if (w < 0.0) throw ContractError("WeightedDataset: negative weight");
            total += w;
        }
        if (std::abs(total - 1.0) > kNormalizationTol)
            throw ContractError("WeightedDataset: weights do not sum to 1");
    }

    static WeightedDataset uniform(std::vector<InflatedRecord> recs) {
        if (recs.empty()) throw ContractError("WeightedDataset::uniform: empty records");
        WeightedDataset d;
        const double w = 1.0 / static_cast<double>(recs.size());
        d.weights.assign(recs.size(), w);
        d.records = std::move(recs);
        return d;
    }
};

struct DiscreteDistribution {
    std::vector<Example> support;
    std::vector<double> probs;

    void check_normalized() const {
        if (support.size() != probs.size())
            throw ContractError("DiscreteDistribution: support/probs length mismatch");
        double total = 0.0;
        for (double p : probs) {
            if (p < 0.0) throw ContractError("DiscreteDistribution: negative probability");
            total += p;
        }
        if (std::abs(total - 1.0) > kNormalizationTol)
            throw ContractError("DiscreteDistribution: probabilities do not sum to 1");
    }

    static DiscreteDistribution uniform(std::vector<Example> pts) {
        if (pts.empty()) throw ContractError("DiscreteDistribution::uniform: empty support");
        DiscreteDistribution d;
        const double p = 1.0 / static_cast<double>(pts.size());
        d.probs.assign(pts.size(), p);
        d.support = std::move(pts);
        return d;
    }
};

// A total +-1 predictor over a finite instance space, stored either as an
// explicit bit vector or as a named pure predicate (for lazily defined
// predictors over large spaces).
class Hypothesis {
  public:
    Hypothesis() = default;

    static Hypothesis from_bits(std::vector<std::uint8_t> plus_bits) {
        Hypothesis h;
        h.domain_ = plus_bits.size();
        h.bits_ = std::move(plus_bits);
        return h;
    }

    static Hypothesis from_labels(const std::vector<Label>& labels) {
        std::vector<std::uint8_t> bits(labels.size());
        for (std::size_t i = 0; i < labels.size(); ++i) bits[i] = labels[i] == Label::Plus;
        return from_bits(std::move(bits));
    }

    static Hypothesis constant(std::size_t domain_size, Label y) {
        return from_bits(std::vector<std::uint8_t>(domain_size, y == Label::Plus));
    }

    static Hypothesis lazy(std::size_t domain_size, std::string name,
                           std::function<Label(InstanceId)> fn) {
        Hypothesis h;
        h.domain_ = domain_size;
        h.name_ = std::move(name);
        h.fn_ = std::move(fn);
        return h;
    }

    std::size_t domain_size() const { return domain_; }
    const std::string& name() const { return name_; }

    Label operator()(InstanceId x) const {
        if (x >= domain_) throw ContractError("Hypothesis: instance id out of range");
        if (fn_) return fn_(x);
        return bits_[x] ? Label::Plus : Label::Minus;
    }

    std::vector<std::uint8_t> label_bits() const {
        if (!fn_) return bits_;
        std::vector<std::uint8_t> bits(domain_);
        for (InstanceId x = 0; x < domain_; ++x) bits[x] = fn_(x) == Label::Plus;
        return bits;
    }

  private:
    std::size_t domain_ = 0;
    std::vector<std::uint8_t> bits_;
    std::function<Label(InstanceId)> fn_;
    std::string name_;
};

// Majority vote over a non-empty member list; ties go to tie_label.
class MajorityVote {
  public:
    // Default state is an unusable placeholder (for report structs); every
    // query checks for it.
    MajorityVote() = default;

    explicit MajorityVote(std::vector<Hypothesis> members, Label tie_label = Label::Plus)
        : members_(std::move(members)), tie_label_(tie_label) {
        if (members_.empty()) throw ContractError("MajorityVote: empty member list");
    }

    const std::vector<Hypothesis>& members() const { return members_; }
    Label tie_label() const { return tie_label_; }

    int vote_sum(InstanceId x) const {
        if (members_.empty()) throw ContractError("MajorityVote: empty member list");
        int s = 0;
        for (const auto& h : members_) s += sign_of(h(x));
        return s;
    }

    Label operator()(InstanceId x) const {
        const int s = vote_sum(x);
        if (s == 0) return tie_label_;
        return label_from_sign(s);
    }

    // Fraction of members agreeing with label y at x.
    double agreement(InstanceId x, Label y) const {
        if (members_.empty()) throw ContractError("MajorityVote: empty member list");
        std::size_t agree = 0;
        for (const auto& h : members_)
            if (h(x) == y) ++agree;
        return static_cast<double>(agree) / static_cast<double>(members_.size());
    }

  private:
    std::vector<Hypothesis> members_;
    Label tie_label_ = Label::Plus;
};

// Either a single hypothesis or a majority vote, so risk operations accept both.
template <typename Predictor>
Label evaluate(const Predictor& f, InstanceId x) {
    return f(x);
}

template <typename Predictor>
double standard_error(const Predictor& f, const WeightedDataset& d) {
    d.check_normalized();
    double err = 0.0;
    for (std::size_t i = 0; i < d.records.size(); ++i)
        if (f(d.records[i].z) != d.records[i].y) err += d.weights[i];
    return err;
}

template <typename Predictor>
double standard_error(const Predictor& f, const DiscreteDistribution& d) {
    d.check_normalized();
    double err = 0.0;
    for (std::size_t i = 0; i < d.support.size(); ++i)
        if (f(d.support[i].x) != d.support[i].y) err += d.probs[i];
    return err;
}

}  // namespace robustboost
