// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <random>
#include <vector>

#include "zigzag/field.hpp"
#include "zigzag/rebuild.hpp"

namespace testsupport {

inline std::vector<std::vector<zigzag::FieldElem>> random_info(const zigzag::Field& F,
                                                               std::uint32_t cols, std::uint32_t rows,
                                                               std::mt19937_64& rng) {
    std::vector<std::vector<zigzag::FieldElem>> info(cols, std::vector<zigzag::FieldElem>(rows));
    for (auto& col : info)
        for (auto& v : col) v = static_cast<zigzag::FieldElem>(rng() % F.order());
    return info;
}

/// Fetcher over a fully materialized codeword: systematic nodes first.
struct CodewordFetch {
    const std::vector<std::vector<zigzag::FieldElem>>& info;
    const std::vector<std::vector<zigzag::FieldElem>>& parities;
    std::uint32_t systematic;

    zigzag::FieldElem operator()(std::uint32_t node, std::uint32_t row) const {
        return node <= systematic ? info[node - 1][row] : parities[node - systematic - 1][row];
    }
};

/// Executes a rebuild plan against the codeword and returns the rebuilt column.
template <class Code>
std::vector<zigzag::FieldElem> rebuild_column(const Code& code,
                                              const std::vector<std::vector<zigzag::FieldElem>>& info,
                                              const std::vector<std::vector<zigzag::FieldElem>>& parities,
                                              const zigzag::RebuildPlan& plan) {
    CodewordFetch fetch{info, parities, code.systematic_count()};
    return zigzag::execute_plan(code.field(), plan, fetch);
}

}  // namespace testsupport
