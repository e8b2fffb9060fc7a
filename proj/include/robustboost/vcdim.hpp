// vcdim.hpp
//
// Brute-force primal and dual VC dimension, convex-hull (majority-vote) class
// construction, and an empirical verifier for the dual-VC-of-convex-hull
// bound. Hard combinatorial guards raise TooLarge instead of truncating.
#pragma once

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <set>
#include <string>
#include <vector>

#include "core.hpp"
#include "errors.hpp"
#include "learners.hpp"

namespace robustboost {

inline double default_guard_limit() {
    if (const char* env = std::getenv("ROBUSTBOOST_GUARD_LIMIT")) {
        const double v = std::atof(env);
        if (v > 0.0) return v;
    }
    return 1e8;
}

namespace detail {

inline double binomial(std::size_t n, std::size_t k) {
    if (k > n) return 0.0;
    double r = 1.0;
    for (std::size_t i = 0; i < k; ++i)
        r = r * static_cast<double>(n - i) / static_cast<double>(i + 1);
    return r;
}

// Visit all k-subsets of {0..n-1}; stop early when the visitor returns true.
template <typename Visitor>
bool for_each_subset(std::size_t n, std::size_t k, Visitor&& visit) {
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    if (k > n) return false;
    for (;;) {
        if (visit(idx)) return true;
        std::size_t i = k;
        while (i > 0 && idx[i - 1] == n - k + (i - 1)) --i;
        if (i == 0) return false;
        ++idx[i - 1];
        for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

inline bool shatters_some_subset(const std::vector<std::vector<std::uint8_t>>& rows,
                                 std::size_t domain, std::size_t k) {
    if (k == 0) return true;
    if (k > 63) throw TooLarge("vc_dim: subset size beyond pattern-word capacity");
    return for_each_subset(domain, k, [&](const std::vector<std::size_t>& pts) {
        std::set<std::uint64_t> patterns;
        for (const auto& row : rows) {
            std::uint64_t p = 0;
            for (std::size_t j = 0; j < k; ++j) p = (p << 1) | row[pts[j]];
            patterns.insert(p);
            if (patterns.size() == (std::uint64_t{1} << k)) return true;
        }
        return false;
    });
}

inline std::size_t vc_of_matrix(const std::vector<std::vector<std::uint8_t>>& rows,
                                std::size_t domain, double guard) {
    std::size_t k = 0;
    while (k < domain) {
        // Shattering k+1 points needs 2^{k+1} distinct rows.
        if (std::pow(2.0, static_cast<double>(k + 1)) > static_cast<double>(rows.size())) break;
        const double cost = binomial(domain, k + 1) * std::pow(2.0, static_cast<double>(k + 1)) *
                            static_cast<double>(rows.size());
        if (cost > guard)
            throw TooLarge("vc_dim: exhaustive search cost " + std::to_string(cost) +
                           " exceeds guard");
        if (!shatters_some_subset(rows, domain, k + 1)) break;
        ++k;
    }
    return k;
}

}  // namespace detail

inline std::size_t vc_dim(const FiniteClass& c, double guard = default_guard_limit()) {
    std::vector<std::vector<std::uint8_t>> rows;
    rows.reserve(c.members.size());
    for (const auto& h : c.members) rows.push_back(h.label_bits());
    return detail::vc_of_matrix(rows, c.domain_size, guard);
}

// Transpose of the primal label matrix: one row per instance, one column per
// hypothesis.
inline FiniteClass dual_class(const FiniteClass& c) {
    FiniteClass dual;
    dual.domain_size = c.members.size();
    for (InstanceId x = 0; x < c.domain_size; ++x) {
        std::vector<std::uint8_t> bits(c.members.size());
        for (std::size_t j = 0; j < c.members.size(); ++j)
            bits[j] = c.members[j](x) == Label::Plus;
        dual.members.push_back(Hypothesis::from_bits(std::move(bits)));
    }
    return dual;
}

inline std::size_t dual_vc_dim(const FiniteClass& c, double guard = default_guard_limit()) {
    return vc_dim(dual_class(c), guard);
}

// co^k(H): all k-member majority votes (ties -> +1), deduplicated by label
// vector, enumeration order fixed by the tuple order.
inline FiniteClass convex_hull_class(const FiniteClass& h, std::size_t k,
                                     double guard = default_guard_limit()) {
    if (h.members.empty() || k == 0) throw ContractError("convex_hull_class: empty input");
    const double cost = std::pow(static_cast<double>(h.members.size()), static_cast<double>(k)) *
                        static_cast<double>(h.domain_size);
    if (cost > guard)
        throw TooLarge("convex_hull_class: enumeration cost exceeds guard");

    FiniteClass hull;
    hull.domain_size = h.domain_size;
    std::set<std::vector<std::uint8_t>> seen;
    std::vector<std::size_t> tuple(k, 0);
    for (;;) {
        std::vector<std::uint8_t> bits(h.domain_size);
        for (InstanceId x = 0; x < h.domain_size; ++x) {
            int s = 0;
            for (std::size_t j = 0; j < k; ++j) s += sign_of(h.members[tuple[j]](x));
            bits[x] = s >= 0;  // tie -> +1
        }
        if (seen.insert(bits).second)
            hull.members.push_back(Hypothesis::from_bits(std::move(bits)));
        std::size_t j = k;
        while (j > 0 && tuple[j - 1] == h.members.size() - 1) tuple[--j] = 0;
        if (j == 0) break;
        ++tuple[j - 1];
    }
    return hull;
}

struct HullLemmaReport {
    std::size_t base_dual_vc = 0;   // d* of H
    std::size_t measured = 0;       // vc*(co^k(H))
    std::size_t smallest_c = 0;     // smallest integer c certifying the bound
    bool bound_ok = false;          // measured <= c_max * max(1, d* ceil(log2(k+1)))
};

inline HullLemmaReport verify_convexhull_lemma(const FiniteClass& h, std::size_t k,
                                               std::size_t c_max = 4,
                                               double guard = default_guard_limit()) {
    HullLemmaReport report;
    report.base_dual_vc = dual_vc_dim(h, guard);
    report.measured = dual_vc_dim(convex_hull_class(h, k, guard), guard);
    const double unit = std::max<double>(
        1.0, static_cast<double>(report.base_dual_vc) *
                 std::ceil(std::log2(static_cast<double>(k + 1))));
    report.smallest_c =
        static_cast<std::size_t>(std::ceil(static_cast<double>(report.measured) / unit));
    if (report.measured == 0) report.smallest_c = 0;
    report.bound_ok = static_cast<double>(report.measured) <=
                      static_cast<double>(c_max) * unit;
    return report;
}

}  // namespace robustboost
