// adversary.hpp
//
// Perturbation-set representations, dataset inflation with provenance, robust
// risk, the mistake oracle, and the energy-based sampling oracle.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "core.hpp"
#include "errors.hpp"
#include "rng.hpp"

namespace robustboost {

// U : X -> 2^X. Explicit adversaries store sorted perturbation sets per
// instance; lazy ones wrap a deterministic function plus a declared bound on
// set size (the bound is reporting-only). Instances without an entry map to
// the empty set. Membership of x in U(x) is never forced.
class Adversary {
  public:
    static Adversary from_map(std::map<InstanceId, std::vector<InstanceId>> sets) {
        Adversary u;
        std::size_t degree = 0;
        for (auto& [x, zs] : sets) {
            std::sort(zs.begin(), zs.end());
            zs.erase(std::unique(zs.begin(), zs.end()), zs.end());
            degree = std::max(degree, zs.size());
        }
        u.sets_ = std::move(sets);
        u.degree_bound_ = degree;
        return u;
    }

    static Adversary lazy(std::function<std::vector<InstanceId>(InstanceId)> fn,
                          std::size_t degree_bound) {
        Adversary u;
        u.fn_ = std::move(fn);
        u.degree_bound_ = degree_bound;
        return u;
    }

    // U where every point may only be replaced by itself.
    static Adversary identity() {
        return lazy([](InstanceId x) { return std::vector<InstanceId>{x}; }, 1);
    }

    std::vector<InstanceId> perturbations(InstanceId x) const {
        if (fn_) {
            auto zs = fn_(x);
            std::sort(zs.begin(), zs.end());
            return zs;
        }
        auto it = sets_.find(x);
        if (it == sets_.end()) return {};
        return it->second;
    }

    std::size_t degree_bound() const { return degree_bound_; }

  private:
    std::map<InstanceId, std::vector<InstanceId>> sets_;
    std::function<std::vector<InstanceId>(InstanceId)> fn_;
    std::size_t degree_bound_ = 0;
};

// The sup over an empty perturbation set is 0: points the adversary cannot
// touch are never robustly wrong.
template <typename Predictor>
int robust_loss(const Predictor& f, const Example& e, const Adversary& u) {
    for (InstanceId z : u.perturbations(e.x))
        if (f(z) != e.y) return 1;
    return 0;
}

template <typename Predictor>
double robust_risk(const Predictor& f, const Dataset& s, const Adversary& u) {
    if (s.empty()) return 0.0;
    double total = 0.0;
    for (const auto& e : s) total += robust_loss(f, e, u);
    return total / static_cast<double>(s.size());
}

template <typename Predictor>
double robust_risk(const Predictor& f, const DiscreteDistribution& d, const Adversary& u) {
    d.check_normalized();
    double total = 0.0;
    for (std::size_t i = 0; i < d.support.size(); ++i)
        if (robust_loss(f, d.support[i], u)) total += d.probs[i];
    return total;
}

// One record per (origin, perturbation) pair; origins are kept separate even
// for shared perturbations so the projection step stays well-defined.
inline std::vector<InflatedRecord> inflate(const Dataset& s, const Adversary& u) {
    std::vector<InflatedRecord> records;
    std::map<InstanceId, Label> seen;
    for (std::size_t i = 0; i < s.size(); ++i) {
        for (InstanceId z : u.perturbations(s[i].x)) {
            auto [it, inserted] = seen.emplace(z, s[i].y);
            if (!inserted && it->second != s[i].y)
                throw RealizabilityConflict(
                    "inflate: perturbation " + std::to_string(z) +
                    " carries conflicting labels across origins");
            records.push_back({z, s[i].y, i});
        }
    }
    return records;
}

struct OracleStats {
    std::uint64_t mistake_oracle_calls = 0;
    std::uint64_t learner_calls = 0;
    std::uint64_t sampler_calls = 0;
};

struct MistakeOracleResult {
    // Empty means the predictor is robust at the queried example; otherwise
    // the smallest violating perturbation id.
    std::optional<InstanceId> counterexample;

    bool robust() const { return !counterexample.has_value(); }
};

// Def-style mistake oracle: certifies robustness of f at (x, y), or returns
// the smallest z in U(x) with f(z) != y.
template <typename Predictor>
MistakeOracleResult mistake_oracle(const Predictor& f, const Example& e, const Adversary& u,
                                   OracleStats& stats) {
    ++stats.mistake_oracle_calls;
    for (InstanceId z : u.perturbations(e.x))  // sorted, so first hit is smallest
        if (f(z) != e.y) return {z};
    return {};
}

// E : X -> R, finite everywhere it is evaluated.
using EnergyFunction = std::function<double(InstanceId)>;

inline double log_sum_exp(const std::vector<double>& args) {
    if (args.empty()) throw ContractError("log_sum_exp: no arguments");
    const double m = *std::max_element(args.begin(), args.end());
    double sum = 0.0;
    for (double a : args) sum += std::exp(a - m);
    return m + std::log(sum);
}

// Exact law of the energy sampler over U(x): p(z) = exp(E(z)) / sum over U(x).
inline std::vector<std::pair<InstanceId, double>> perturbation_law(InstanceId x,
                                                                  const EnergyFunction& energy,
                                                                  const Adversary& u) {
    const auto zs = u.perturbations(x);
    if (zs.empty()) throw ContractError("perturbation_law: empty perturbation set");
    std::vector<double> energies(zs.size());
    for (std::size_t i = 0; i < zs.size(); ++i) energies[i] = energy(zs[i]);
    const double lse = log_sum_exp(energies);
    std::vector<std::pair<InstanceId, double>> law(zs.size());
    for (std::size_t i = 0; i < zs.size(); ++i) law[i] = {zs[i], std::exp(energies[i] - lse)};
    return law;
}

// Sampling-oracle part (a): draw z from U(x) with probability exp(E(z)),
// normalized over U(x) via log-sum-exp.
inline InstanceId sample_perturbation(InstanceId x, const EnergyFunction& energy,
                                      const Adversary& u, Rng& rng) {
    const auto law = perturbation_law(x, energy, u);
    std::vector<double> probs(law.size());
    for (std::size_t i = 0; i < law.size(); ++i) probs[i] = law[i].second;
    return law[rng.sample_weighted(probs)].first;
}

// Sampling-oracle part (b): Pr[z in U(x)] under p(z) ~ exp(E(z)) over a
// caller-declared active set whose partition function is z_global.
inline double perturbation_mass(InstanceId x, const EnergyFunction& energy, const Adversary& u,
                                double z_global) {
    if (!(z_global > 0.0)) throw ContractError("perturbation_mass: z_global must be positive");
    double mass = 0.0;
    for (InstanceId z : u.perturbations(x)) mass += std::exp(energy(z));
    return mass / z_global;
}

}  // namespace robustboost
