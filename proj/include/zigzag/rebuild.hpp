// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "zigzag/field.hpp"

namespace zigzag {

/// Reduced non-negative fraction.
struct Rational {
    std::uint64_t num = 0, den = 1;

    static Rational of(std::uint64_t num, std::uint64_t den) {
        if (den == 0) throw std::invalid_argument("rational: zero denominator");
        const std::uint64_t g = std::gcd(num, den);
        return {num / (g ? g : 1), den / (g ? g : 1)};
    }
    double value() const { return double(num) / double(den); }
    bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
};

/// One summand of a rebuild relation: coeff * (element at `row` of node `node`).
struct LinearTerm {
    std::uint32_t node = 0;  // 1-based, systematic nodes first, then parities
    std::uint32_t row = 0;
    FieldElem coeff = 0;
};

/// Recovers one element of the erased column as a linear combination of
/// surviving elements. No solving happens at execution time; plans carry
/// already-solved relations.
struct RebuildRelation {
    std::uint32_t target_row = 0;
    std::vector<LinearTerm> terms;
};

struct RebuildPlan {
    std::uint32_t erased_node = 0;
    std::uint32_t node_count = 0;
    std::uint32_t rows = 0;
    std::map<std::uint32_t, std::vector<std::uint32_t>> reads;  // surviving node -> sorted rows
    std::vector<RebuildRelation> recipe;
};

/// Per-node access counts and the resulting rebuilding ratio for one erasure.
struct AccessReport {
    std::uint32_t erased_node = 0;
    std::map<std::uint32_t, std::uint64_t> accessed;  // surviving node -> elements read
    std::uint64_t accessed_total = 0;
    std::uint64_t remaining = 0;
    Rational ratio;
};

inline AccessReport access_report(const RebuildPlan& plan) {
    AccessReport rep;
    rep.erased_node = plan.erased_node;
    for (const auto& [node, rows] : plan.reads) {
        rep.accessed[node] = rows.size();
        rep.accessed_total += rows.size();
    }
    rep.remaining = std::uint64_t(plan.node_count - 1) * plan.rows;
    rep.ratio = Rational::of(rep.accessed_total, rep.remaining);
    return rep;
}

/// Evaluates the plan against surviving data. `fetch(node, row)` must return
/// the stored element; the result is the erased column, ordered by row.
template <class Fetch>
std::vector<FieldElem> execute_plan(const Field& F, const RebuildPlan& plan, Fetch&& fetch) {
    std::vector<FieldElem> column(plan.rows, 0);
    std::vector<bool> seen(plan.rows, false);
    for (const auto& rel : plan.recipe) {
        if (rel.target_row >= plan.rows || seen[rel.target_row])
            throw std::logic_error("rebuild plan: bad or duplicate target row");
        seen[rel.target_row] = true;
        FieldElem acc = 0;
        for (const auto& t : rel.terms) acc = F.add(acc, F.mul(t.coeff, fetch(t.node, t.row)));
        column[rel.target_row] = acc;
    }
    for (bool s : seen)
        if (!s) throw std::logic_error("rebuild plan: incomplete recipe");
    return column;
}

namespace detail {

// Used by the plan builders: inserts rows into the per-node read sets and
// checks afterwards that every read is referenced and vice versa.
inline void finalize_plan_reads(RebuildPlan& plan) {
    std::map<std::uint32_t, std::vector<std::uint32_t>> referenced;
    for (const auto& rel : plan.recipe)
        for (const auto& t : rel.terms) referenced[t.node].push_back(t.row);
    for (auto& [node, rows] : referenced) {
        std::sort(rows.begin(), rows.end());
        rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
    }
    plan.reads = std::move(referenced);
}

}  // namespace detail

}  // namespace zigzag
