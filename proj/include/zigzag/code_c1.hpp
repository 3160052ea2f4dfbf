// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "zigzag/field.hpp"
#include "zigzag/hypercube.hpp"
#include "zigzag/matrix.hpp"
#include "zigzag/rebuild.hpp"

namespace zigzag {

/// How the nonzero entries of the parity permutation matrices are assigned.
enum class CoeffScheme {
    /// r=2 over GF(3) or r=3 over GF(4): entry c (primitive element) wherever
    /// the source column l satisfies l . (e_1+...+e_j) = 0 over Z_r, else 1.
    explicit_rule,
    /// Every entry of P_j equals lambda_j.
    lambda,
};

struct C1Params {
    std::uint32_t r = 0, k = 0;
    Field field;
    CoeffScheme scheme = CoeffScheme::explicit_rule;
    std::vector<FieldElem> lambda;  // k values, used by CoeffScheme::lambda
    std::uint64_t size_cap = kDefaultSizeCap;
};

/// Construction-1 code: k systematic nodes, r parity nodes, r^k rows.
/// Parity l applies the permutation powers P_1^l ... P_k^l; parity 0 is the
/// plain row sum. Rebuilding a systematic node touches 1/r of the surviving
/// data; rebuilding a parity node reads all information elements.
class C1Code {
  public:
    static C1Code build(const C1Params& params) {
        if (params.r < 2) throw std::invalid_argument("c1: need r >= 2");
        if (params.k < 2) throw std::invalid_argument("c1: need k >= 2");
        C1Code code(params);
        return code;
    }

    const C1Params& params() const { return params_; }
    const Field& field() const { return params_.field; }
    std::uint32_t rows() const { return p_; }
    std::uint32_t systematic_count() const { return params_.k; }
    std::uint32_t parity_count() const { return params_.r; }
    std::uint32_t node_count() const { return params_.k + params_.r; }

    /// P_j^l; j is 1-based, l in [0, r-1].
    const MonomialMatrix& perm_power(std::uint32_t j, std::uint32_t l) const {
        if (j < 1 || j > params_.k || l >= params_.r) throw std::out_of_range("c1: bad (j, l)");
        return powers_[j - 1][l];
    }

    /// Contributions of systematic column j to element `row` of parity l:
    /// exactly one (source row, coefficient) pair.
    std::vector<std::pair<std::uint32_t, FieldElem>> parity_terms(std::uint32_t l, std::uint32_t row,
                                                                  std::uint32_t j) const {
        const MonomialMatrix& m = perm_power(j, l);
        return {{m.src_col(row), m.row_coeff(row)}};
    }

    /// info is column-major: info[j-1] is systematic column j (p elements).
    /// Returns the r parity columns.
    std::vector<std::vector<FieldElem>> encode(const std::vector<std::vector<FieldElem>>& info) const {
        check_info(info);
        std::vector<std::vector<FieldElem>> parities(params_.r, std::vector<FieldElem>(p_, 0));
        const Field& F = params_.field;
        for (std::uint32_t l = 0; l < params_.r; ++l)
            for (std::uint32_t j = 0; j < params_.k; ++j) {
                const MonomialMatrix& m = powers_[j][l];
                for (std::uint32_t row = 0; row < p_; ++row) {
                    const FieldElem v = info[j][m.src_col(row)];
                    if (v) parities[l][row] = F.add(parities[l][row], F.mul(m.row_coeff(row), v));
                }
            }
        return parities;
    }

    /// Plan for an erased systematic column j: read rows Y_j from every
    /// surviving node; each unknown a_{i,j} is solved from the one parity
    /// element of parity l = (-i.e_j mod r) that contains it.
    RebuildPlan rebuild_systematic(std::uint32_t j) const {
        if (j < 1 || j > params_.k) throw std::out_of_range("c1: bad systematic index");
        const Field& F = params_.field;
        RebuildPlan plan;
        plan.erased_node = j;
        plan.node_count = node_count();
        plan.rows = p_;
        plan.recipe.reserve(p_);
        for (std::uint32_t i = 0; i < p_; ++i) {
            const std::uint32_t digit = digit_of(i, j);
            const std::uint32_t l = (params_.r - digit) % params_.r;
            const std::uint32_t t = static_cast<std::uint32_t>(apply_f(i, j, l, params_.r, params_.k,
                                                                       params_.size_cap));
            const FieldElem w = powers_[j - 1][l].row_coeff(t);
            const FieldElem winv = F.inv(w);
            RebuildRelation rel;
            rel.target_row = i;
            rel.terms.push_back({parity_node(l), t, winv});
            for (std::uint32_t jp = 1; jp <= params_.k; ++jp) {
                if (jp == j) continue;
                const MonomialMatrix& m = powers_[jp - 1][l];
                rel.terms.push_back({jp, m.src_col(t), F.neg(F.mul(winv, m.row_coeff(t)))});
            }
            plan.recipe.push_back(std::move(rel));
        }
        detail::finalize_plan_reads(plan);
        return plan;
    }

    /// Plan for an erased parity l: read every information element and
    /// re-encode. Nothing is read from the surviving parities.
    RebuildPlan rebuild_parity(std::uint32_t l) const {
        if (l >= params_.r) throw std::out_of_range("c1: bad parity index");
        RebuildPlan plan;
        plan.erased_node = parity_node(l);
        plan.node_count = node_count();
        plan.rows = p_;
        plan.recipe.reserve(p_);
        for (std::uint32_t t = 0; t < p_; ++t) {
            RebuildRelation rel;
            rel.target_row = t;
            for (std::uint32_t j = 1; j <= params_.k; ++j) {
                const MonomialMatrix& m = powers_[j - 1][l];
                rel.terms.push_back({j, m.src_col(t), m.row_coeff(t)});
            }
            plan.recipe.push_back(std::move(rel));
        }
        detail::finalize_plan_reads(plan);
        return plan;
    }

    RebuildPlan rebuild(std::uint32_t node) const {
        if (node < 1 || node > node_count()) throw std::out_of_range("c1: bad node index");
        return node <= params_.k ? rebuild_systematic(node) : rebuild_parity(node - params_.k - 1);
    }

    std::uint32_t parity_node(std::uint32_t l) const { return params_.k + 1 + l; }

  private:
    explicit C1Code(const C1Params& params) : params_(params) {
        const std::uint32_t r = params_.r, k = params_.k;
        p_ = static_cast<std::uint32_t>(detail::checked_pow(r, k, params_.size_cap));
        FieldElem c = 0;
        if (params_.scheme == CoeffScheme::explicit_rule) {
            const bool ok = (r == 2 && params_.field.order() == 3) ||
                            (r == 3 && params_.field.order() == 4);
            if (!ok)
                throw std::invalid_argument(
                    "c1: explicit coefficient rule needs r=2 over gf3 or r=3 over gf4; "
                    "use the lambda scheme otherwise");
            c = params_.field.primitive_element();
        } else {
            if (params_.lambda.size() != k) throw std::invalid_argument("c1: need k lambda values");
            for (FieldElem l : params_.lambda)
                if (l == 0 || l >= params_.field.order())
                    throw std::invalid_argument("c1: lambda values must be nonzero field elements");
        }
        powers_.resize(k);
        for (std::uint32_t j = 1; j <= k; ++j) {
            std::vector<std::uint32_t> to_row(p_);
            std::vector<FieldElem> coeff(p_);
            for (std::uint32_t l = 0; l < p_; ++l) {
                to_row[l] = static_cast<std::uint32_t>(apply_f(l, j, 1, r, k, params_.size_cap));
                if (params_.scheme == CoeffScheme::lambda) {
                    coeff[l] = params_.lambda[j - 1];
                } else {
                    coeff[l] = prefix_digit_sum(l, j) == 0 ? c : FieldElem(1);
                }
            }
            MonomialMatrix pj = MonomialMatrix::make(std::move(to_row), std::move(coeff));
            powers_[j - 1].reserve(r);
            for (std::uint32_t l = 0; l < r; ++l) powers_[j - 1].push_back(mono_pow(params_.field, pj, l));
        }
    }

    std::uint32_t digit_of(std::uint32_t x, std::uint32_t j) const {
        std::uint32_t place = 1;
        for (std::uint32_t i = 0; i < params_.k - j; ++i) place *= params_.r;
        return (x / place) % params_.r;
    }

    // l . (e_1 + ... + e_j) over Z_r.
    std::uint32_t prefix_digit_sum(std::uint32_t x, std::uint32_t j) const {
        std::uint32_t s = 0;
        for (std::uint32_t t = 1; t <= j; ++t) s += digit_of(x, t);
        return s % params_.r;
    }

    void check_info(const std::vector<std::vector<FieldElem>>& info) const {
        if (info.size() != params_.k) throw std::invalid_argument("c1: expected k information columns");
        for (const auto& col : info)
            if (col.size() != p_) throw std::invalid_argument("c1: information column has wrong length");
    }

    C1Params params_;
    std::uint32_t p_ = 0;
    std::vector<std::vector<MonomialMatrix>> powers_;  // [j-1][l] = P_j^l
};

}  // namespace zigzag
