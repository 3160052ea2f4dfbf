// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "zigzag/code_c1.hpp"
#include "zigzag/field.hpp"
#include "zigzag/hypercube.hpp"
#include "zigzag/matrix.hpp"

namespace zigzag {

inline constexpr std::uint64_t kMaxErasurePatterns = 10000;
inline constexpr std::uint32_t kMaxSolveDim = 4096;

/// Set of erased node indices (1-based, distinct, at most r of them).
struct ErasurePattern {
    std::vector<std::uint32_t> nodes;

    static ErasurePattern of(std::vector<std::uint32_t> nodes, std::uint32_t node_count,
                             std::uint32_t max_size) {
        std::sort(nodes.begin(), nodes.end());
        if (std::adjacent_find(nodes.begin(), nodes.end()) != nodes.end())
            throw std::invalid_argument("erasure pattern: duplicate node");
        if (nodes.size() > max_size) throw std::invalid_argument("erasure pattern: too many erasures");
        for (std::uint32_t n : nodes)
            if (n < 1 || n > node_count) throw std::invalid_argument("erasure pattern: node out of range");
        return {std::move(nodes)};
    }

    bool contains(std::uint32_t node) const {
        return std::binary_search(nodes.begin(), nodes.end(), node);
    }

    std::string str() const {
        std::string s = "{";
        for (std::size_t i = 0; i < nodes.size(); ++i)
            s += (i ? "," : "") + std::to_string(nodes[i]);
        return s + "}";
    }
};

/// Raised when an erasure pattern turns out to be undecodable.
class not_mds_error : public std::runtime_error {
  public:
    explicit not_mds_error(ErasurePattern pattern)
        : std::runtime_error("erasure pattern " + pattern.str() + " is not decodable"),
          pattern_(std::move(pattern)) {}
    const ErasurePattern& pattern() const { return pattern_; }

  private:
    ErasurePattern pattern_;
};

/// Raised when surviving columns are not consistent with any codeword.
class corruption_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline bool next_combination(std::vector<std::uint32_t>& idx, std::uint32_t n) {
    const std::uint32_t t = static_cast<std::uint32_t>(idx.size());
    for (std::uint32_t i = t; i-- > 0;) {
        if (idx[i] + (t - i) < n) {
            ++idx[i];
            for (std::uint32_t j = i + 1; j < t; ++j) idx[j] = idx[j - 1] + 1;
            return true;
        }
    }
    return false;
}

inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    std::uint64_t v = 1;
    for (std::uint64_t i = 1; i <= k; ++i) v = v * (n - k + i) / i;
    return v;
}

inline std::uint64_t mix_seed(std::uint64_t seed, const std::vector<std::uint32_t>& nodes) {
    std::uint64_t h = seed ^ 0xcbf29ce484222325ull;
    for (std::uint32_t n : nodes) {
        h ^= n;
        h *= 0x100000001b3ull;
    }
    return h;
}

}  // namespace detail

/// Recovers the full information array from the surviving columns.
///
/// `columns[i]` holds node i+1 (1-based ids); entries for erased nodes are
/// ignored. Contributions of the known systematic columns are eliminated and
/// the reduced system is solved by Gaussian elimination over the field, one
/// equation per element of as many surviving parities as there are erased
/// systematic columns. The remaining surviving columns then act as a
/// consistency check.
template <class Code>
std::vector<std::vector<FieldElem>> decode_erasures(const Code& code,
                                                    const std::vector<std::vector<FieldElem>>& columns,
                                                    const ErasurePattern& pattern) {
    const Field& F = code.field();
    const std::uint32_t p = code.rows(), q = code.systematic_count(), n = code.node_count();
    if (columns.size() != n) throw std::invalid_argument("decode: expected one column slot per node");
    if (pattern.nodes.size() > code.parity_count())
        throw std::invalid_argument("decode: more erasures than parity nodes");
    for (std::uint32_t node = 1; node <= n; ++node)
        if (!pattern.contains(node) && columns[node - 1].size() != p)
            throw std::invalid_argument("decode: surviving column has wrong length");

    std::vector<std::uint32_t> erased_sys;
    for (std::uint32_t node : pattern.nodes)
        if (node <= q) erased_sys.push_back(node);

    std::vector<std::vector<FieldElem>> info(q);
    for (std::uint32_t j = 1; j <= q; ++j)
        if (!pattern.contains(j)) info[j - 1] = columns[j - 1];

    if (!erased_sys.empty()) {
        const std::uint32_t t = static_cast<std::uint32_t>(erased_sys.size());
        std::vector<std::uint32_t> use_parities;
        for (std::uint32_t l = 0; l < code.parity_count() && use_parities.size() < t; ++l)
            if (!pattern.contains(q + 1 + l)) use_parities.push_back(l);
        if (use_parities.size() < t) throw std::invalid_argument("decode: not enough surviving parities");

        const std::uint64_t dim = std::uint64_t(t) * p;
        if (dim > kMaxSolveDim) throw std::length_error("decode: system exceeds solver dimension cap");
        Matrix M(static_cast<std::uint32_t>(dim), static_cast<std::uint32_t>(dim));
        std::vector<FieldElem> rhs(dim, 0);
        for (std::uint32_t u = 0; u < t; ++u) {
            const std::uint32_t l = use_parities[u];
            const auto& parity_col = columns[q + l];
            for (std::uint32_t y = 0; y < p; ++y) {
                const std::uint32_t eq = u * p + y;
                FieldElem b = parity_col[y];
                for (std::uint32_t j = 1; j <= q; ++j) {
                    const auto terms = code.parity_terms(l, y, j);
                    const auto it = std::find(erased_sys.begin(), erased_sys.end(), j);
                    if (it != erased_sys.end()) {
                        const std::uint32_t v = static_cast<std::uint32_t>(it - erased_sys.begin());
                        for (const auto& [x, w] : terms) {
                            auto& cell = M.at(eq, v * p + x);
                            cell = F.add(cell, w);
                        }
                    } else {
                        for (const auto& [x, w] : terms) b = F.sub(b, F.mul(w, info[j - 1][x]));
                    }
                }
                rhs[eq] = b;
            }
        }
        std::vector<FieldElem> solved;
        if (!gauss_solve(F, std::move(M), std::move(rhs), solved)) throw not_mds_error(pattern);
        for (std::uint32_t v = 0; v < t; ++v)
            info[erased_sys[v] - 1] =
                std::vector<FieldElem>(solved.begin() + std::size_t(v) * p, solved.begin() + std::size_t(v + 1) * p);
    }

    // Consistency: everything surviving must match a re-encode.
    const auto parities = code.encode(info);
    for (std::uint32_t l = 0; l < code.parity_count(); ++l)
        if (!pattern.contains(q + 1 + l) && parities[l] != columns[q + l])
            throw corruption_error("decode: surviving parity " + std::to_string(l) +
                                   " is inconsistent with the recovered information");
    return info;
}

struct MdsCheck {
    bool pass = true;
    std::uint64_t patterns_checked = 0;
    std::optional<ErasurePattern> failing;
};

/// Exhaustively tries every pattern of exactly r node erasures: encodes a
/// seeded random array, erases, decodes, and compares. A singular system or a
/// mismatch fails the check with the offending pattern. The per-pattern seed
/// depends only on the pattern itself, so the result is independent of
/// enumeration order.
template <class Code>
MdsCheck verify_mds(const Code& code, std::uint64_t seed = 0x5eed) {
    const Field& F = code.field();
    const std::uint32_t n = code.node_count(), q = code.systematic_count(), p = code.rows();
    const std::uint32_t r = code.parity_count();
    if (detail::binomial(n, r) > kMaxErasurePatterns)
        throw std::length_error("verify_mds: pattern count exceeds cap");

    MdsCheck result;
    std::vector<std::uint32_t> idx(r);
    for (std::uint32_t i = 0; i < r; ++i) idx[i] = i;
    do {
        std::vector<std::uint32_t> nodes(r);
        for (std::uint32_t i = 0; i < r; ++i) nodes[i] = idx[i] + 1;
        ErasurePattern pattern{nodes};
        std::mt19937_64 rng(detail::mix_seed(seed, nodes));
        std::vector<std::vector<FieldElem>> info(q, std::vector<FieldElem>(p));
        for (auto& col : info)
            for (auto& v : col) v = static_cast<FieldElem>(rng() % F.order());
        auto parities = code.encode(info);
        std::vector<std::vector<FieldElem>> columns(n);
        for (std::uint32_t j = 0; j < q; ++j) columns[j] = info[j];
        for (std::uint32_t l = 0; l < r; ++l) columns[q + l] = std::move(parities[l]);
        for (std::uint32_t node : nodes) columns[node - 1].clear();
        ++result.patterns_checked;
        try {
            const auto recovered = decode_erasures(code, columns, pattern);
            if (recovered != info) {
                result.pass = false;
                result.failing = pattern;
                return result;
            }
        } catch (const not_mds_error&) {
            result.pass = false;
            result.failing = pattern;
            return result;
        }
    } while (detail::next_combination(idx, n));
    return result;
}

struct SubblockCheck {
    bool pass = true;
    std::uint32_t t = 0;
    std::vector<std::uint32_t> power_rows;  // failing power subset (values in [0, r-1])
    std::vector<std::uint32_t> block_cols;  // failing block subset (1-based)
};

/// The sub-block invertibility criterion: for every t in [1, r], every
/// t-subset of powers {0..r-1} and every t-subset of the given blocks, the
/// stacked matrix [blocks[j]^i] must be invertible. Equivalent to the code
/// being MDS when the blocks are the small blocks of the construction.
inline SubblockCheck subblock_criterion(const Field& F, const std::vector<MonomialMatrix>& blocks,
                                        std::uint32_t r) {
    if (blocks.empty()) throw std::invalid_argument("subblock: no blocks");
    const std::uint32_t count = static_cast<std::uint32_t>(blocks.size());
    const std::uint32_t q = blocks[0].size();
    for (const auto& b : blocks)
        if (b.size() != q) throw std::invalid_argument("subblock: block sizes differ");

    std::vector<std::vector<MonomialMatrix>> powers(count);
    for (std::uint32_t j = 0; j < count; ++j) {
        powers[j].reserve(r);
        for (std::uint32_t i = 0; i < r; ++i) powers[j].push_back(mono_pow(F, blocks[j], i));
    }

    SubblockCheck result;
    for (std::uint32_t t = 1; t <= std::min(r, count); ++t) {
        std::vector<std::uint32_t> pr(t), bc(t);
        for (std::uint32_t i = 0; i < t; ++i) pr[i] = i;
        do {
            for (std::uint32_t i = 0; i < t; ++i) bc[i] = i;
            do {
                Matrix m(t * q, t * q);
                for (std::uint32_t u = 0; u < t; ++u)
                    for (std::uint32_t v = 0; v < t; ++v) {
                        const MonomialMatrix& cell = powers[bc[v]][pr[u]];
                        for (std::uint32_t c = 0; c < q; ++c)
                            m.at(u * q + cell.to_row[c], v * q + c) = cell.coeff[c];
                    }
                if (!invertible(F, std::move(m))) {
                    result.pass = false;
                    result.t = t;
                    result.power_rows = pr;
                    result.block_cols.resize(t);
                    for (std::uint32_t i = 0; i < t; ++i) result.block_cols[i] = bc[i] + 1;
                    return result;
                }
            } while (detail::next_combination(bc, count));
        } while (detail::next_combination(pr, r));
    }
    return result;
}

class search_failure : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct SearchResult {
    std::vector<FieldElem> lambda;
    std::uint64_t tries = 0;
};

/// Randomized coefficient assignment: samples nonzero lambda_j uniformly
/// until the sub-block criterion holds for the blocks lambda_j * p_j of the
/// (r, k) hypercube. Deterministic for a fixed seed.
inline SearchResult search_coefficients(std::uint32_t r, std::uint32_t k, const Field& F,
                                        std::uint64_t seed, std::uint64_t max_tries,
                                        std::uint64_t cap = kDefaultSizeCap) {
    if (F.order() < 3)
        throw search_failure("coefficient search: field has a single nonzero element; use a larger field");
    const WeightClassTable wct = weight_classes(r, k, cap);
    std::vector<MonomialMatrix> perms;
    perms.reserve(k);
    for (std::uint32_t j = 1; j <= k; ++j) {
        const SmallPerm sp = small_perm(wct, j);
        perms.push_back(MonomialMatrix::make(sp.perm, std::vector<FieldElem>(wct.q, 1)));
    }
    std::mt19937_64 rng(seed);
    for (std::uint64_t tries = 1; tries <= max_tries; ++tries) {
        std::vector<FieldElem> lambda(k);
        std::vector<MonomialMatrix> blocks;
        blocks.reserve(k);
        for (std::uint32_t j = 0; j < k; ++j) {
            lambda[j] = static_cast<FieldElem>(1 + rng() % (F.order() - 1));
            blocks.push_back(mono_scale(F, perms[j], lambda[j]));
        }
        if (subblock_criterion(F, blocks, r).pass) return {std::move(lambda), tries};
    }
    throw search_failure("coefficient search: no assignment found in " + std::to_string(max_tries) +
                         " tries; use a larger field");
}

struct EquivalenceCheck {
    bool pass = true;
    std::uint64_t trials_run = 0;
    std::vector<FieldElem> counterexample_lambda;
    bool mds = false, criterion = false;  // the two disagreeing verdicts
};

/// Cross-validates the sub-block criterion against exhaustive MDS
/// verification on `trials` random lambda assignments. Both sides are
/// computed independently; any disagreement is returned as a counterexample.
inline EquivalenceCheck lemma1_equivalence_check(std::uint32_t r, std::uint32_t k, const Field& F,
                                                 std::uint64_t trials, std::uint64_t seed,
                                                 std::uint64_t cap = kDefaultSizeCap) {
    const WeightClassTable wct = weight_classes(r, k, cap);
    std::vector<MonomialMatrix> perms;
    perms.reserve(k);
    for (std::uint32_t j = 1; j <= k; ++j) {
        const SmallPerm sp = small_perm(wct, j);
        perms.push_back(MonomialMatrix::make(sp.perm, std::vector<FieldElem>(wct.q, 1)));
    }
    std::mt19937_64 rng(seed);
    EquivalenceCheck result;
    for (std::uint64_t trial = 0; trial < trials; ++trial) {
        std::vector<FieldElem> lambda(k);
        std::vector<MonomialMatrix> blocks;
        blocks.reserve(k);
        for (std::uint32_t j = 0; j < k; ++j) {
            lambda[j] = static_cast<FieldElem>(1 + rng() % (F.order() - 1));
            blocks.push_back(mono_scale(F, perms[j], lambda[j]));
        }
        const bool criterion = subblock_criterion(F, blocks, r).pass;
        C1Params params;
        params.r = r;
        params.k = k;
        params.field = F;
        params.scheme = CoeffScheme::lambda;
        params.lambda = lambda;
        params.size_cap = cap;
        const bool mds = verify_mds(C1Code::build(params), rng()).pass;
        ++result.trials_run;
        if (criterion != mds) {
            result.pass = false;
            result.counterexample_lambda = lambda;
            result.mds = mds;
            result.criterion = criterion;
            return result;
        }
    }
    return result;
}

}  // namespace zigzag
