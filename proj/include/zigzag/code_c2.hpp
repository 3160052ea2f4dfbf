// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "zigzag/decoder.hpp"
#include "zigzag/field.hpp"
#include "zigzag/hypercube.hpp"
#include "zigzag/matrix.hpp"
#include "zigzag/rebuild.hpp"

namespace zigzag {

struct C2Params {
    std::uint32_t r = 0, k = 0;  // k-1 systematic nodes, r parities, r^k rows
    Field field;
    FieldElem alpha = 0;  // any element outside {0, 1}
    CoeffScheme scheme = CoeffScheme::explicit_rule;
    std::vector<FieldElem> lambda;  // k-1 values, used by CoeffScheme::lambda
    std::uint64_t size_cap = kDefaultSizeCap;
};

/// The coefficient-modified small block p_j: the permutation x -> x+e_j-e_k
/// on X_0 with entry c at every column whose X_0 representative v satisfies
/// v . (e_1+...+e_j) = 0 over Z_r, and 1 elsewhere.
inline MonomialMatrix explicit_small_block(const Field& F, const WeightClassTable& wct,
                                           std::uint32_t j) {
    const FieldElem c = F.primitive_element();
    const SmallPerm sp = small_perm(wct, j);
    std::vector<FieldElem> coeff(wct.q);
    for (std::uint32_t s = 0; s < wct.q; ++s) {
        std::uint32_t sum = 0, rem = wct.classes[0][s];
        std::uint32_t pl = 1;
        for (std::uint32_t i = 1; i < wct.k; ++i) pl *= wct.r;  // place of digit 1
        for (std::uint32_t d = 1; d <= j; ++d) {
            sum += rem / pl;
            rem %= pl;
            pl /= wct.r;
        }
        coeff[s] = (sum % wct.r == 0) ? c : FieldElem(1);
    }
    return MonomialMatrix::make(sp.perm, std::move(coeff));
}

/// One generator block A_j^i as an r x r grid of q x q cells. Grid row x
/// holds p_j^{(x-i) mod r} at column i and beta * p_j^{(i-x) mod r} at
/// column x; the two coincide as the identity cell when x = i.
struct BigBlock {
    std::uint32_t source_col = 0;   // j, 1-based
    std::uint32_t parity_index = 0; // i
    std::uint32_t r = 0;
    std::uint32_t q = 0;
    std::vector<std::optional<MonomialMatrix>> cells;  // row-major r x r grid

    const std::optional<MonomialMatrix>& cell(std::uint32_t x, std::uint32_t y) const {
        return cells[std::size_t(x) * r + y];
    }
};

/// Construction-2 code: k-1 systematic nodes, r parity nodes, r^k rows.
/// Every node, systematic or parity, rebuilds with access ratio exactly 1/r.
///
/// Element rows are labelled by hypercube indices throughout the public
/// surface; the (X_0,...,X_{r-1}) storage order of the generator blocks is
/// internal.
class C2Code {
  public:
    /// Validates the MDS hypothesis: alpha outside {0,1} and the sub-block
    /// criterion for the small blocks. Rejects otherwise.
    static C2Code build(const C2Params& params) {
        C2Code code(params);
        if (params.alpha == 1)
            throw std::invalid_argument(
                "c2: alpha = 1 collapses the paired rebuild equations; pick alpha outside {0,1}");
        const SubblockCheck check = subblock_criterion(code.field(), code.small_blocks_, params.r);
        if (!check.pass)
            throw std::invalid_argument(
                "c2: small-block coefficients fail the sub-block invertibility criterion at t=" +
                std::to_string(check.t) + "; the code would not be MDS. Use the lambda scheme with "
                "searched coefficients (search_coefficients) instead");
        return code;
    }

    /// Builds without the MDS-hypothesis validation. Intended for studying
    /// degenerate parameter choices (for example alpha = 1) with verify_mds.
    static C2Code build_unchecked(const C2Params& params) { return C2Code(params); }

    const C2Params& params() const { return params_; }
    const Field& field() const { return params_.field; }
    std::uint32_t rows() const { return p_; }
    std::uint32_t systematic_count() const { return params_.k - 1; }
    std::uint32_t parity_count() const { return params_.r; }
    std::uint32_t node_count() const { return params_.k - 1 + params_.r; }
    std::uint32_t parity_node(std::uint32_t i) const { return params_.k + i; }
    const WeightClassTable& weight_table() const { return wct_; }

    /// The modified small block p_j (j in [1, k-1]) and its powers.
    const MonomialMatrix& small_block(std::uint32_t j) const {
        check_j(j);
        return small_blocks_[j - 1];
    }
    const MonomialMatrix& small_power(std::uint32_t j, std::uint32_t d) const {
        check_j(j);
        return small_powers_[j - 1][d % params_.r];
    }

    /// Coefficient multiplied onto the diagonal cell (x, x) of A^i.
    FieldElem beta(std::uint32_t x, std::uint32_t i) const {
        const std::uint32_t r = params_.r;
        const std::uint32_t d = (x + r - i) % r;
        const bool is_alpha = (d > 0 && 2 * d < r) || (2 * d == r && 2 * i < r);
        return is_alpha ? params_.alpha : FieldElem(1);
    }

    BigBlock build_block(std::uint32_t j, std::uint32_t i) const {
        check_j(j);
        if (i >= params_.r) throw std::out_of_range("c2: parity index out of range");
        const std::uint32_t r = params_.r;
        BigBlock b;
        b.source_col = j;
        b.parity_index = i;
        b.r = r;
        b.q = static_cast<std::uint32_t>(wct_.q);
        b.cells.resize(std::size_t(r) * r);
        for (std::uint32_t x = 0; x < r; ++x) {
            if (x == i) {
                b.cells[std::size_t(x) * r + i] = MonomialMatrix::identity(b.q);
                continue;
            }
            b.cells[std::size_t(x) * r + i] = small_power(j, (x + r - i) % r);
            b.cells[std::size_t(x) * r + x] =
                mono_scale(params_.field, small_power(j, (i + r - x) % r), beta(x, i));
        }
        return b;
    }

    /// Contributions of systematic column j to element `row` of parity i:
    /// at most two (source row, coefficient) pairs.
    std::vector<std::pair<std::uint32_t, FieldElem>> parity_terms(std::uint32_t i, std::uint32_t row,
                                                                  std::uint32_t j) const {
        check_j(j);
        const std::uint32_t r = params_.r;
        const std::uint32_t x = wct_.class_of[row], s = wct_.pos_of[row];
        if (x == i) return {{row, FieldElem(1)}};
        const MonomialMatrix& m1 = small_power(j, (x + r - i) % r);
        const MonomialMatrix& m2 = small_power(j, (i + r - x) % r);
        return {{wct_.classes[i][m1.src_col(s)], m1.row_coeff(s)},
                {wct_.classes[x][m2.src_col(s)], F().mul(beta(x, i), m2.row_coeff(s))}};
    }

    /// info is column-major with hypercube row labels: info[j-1][row].
    std::vector<std::vector<FieldElem>> encode(const std::vector<std::vector<FieldElem>>& info) const {
        check_info(info);
        const Field& F = params_.field;
        const std::uint32_t r = params_.r, q = static_cast<std::uint32_t>(wct_.q);
        std::vector<std::vector<FieldElem>> parities(r, std::vector<FieldElem>(p_, 0));
        for (std::uint32_t i = 0; i < r; ++i)
            for (std::uint32_t x = 0; x < r; ++x)
                for (std::uint32_t s = 0; s < q; ++s) {
                    const std::uint32_t out_row = wct_.classes[x][s];
                    FieldElem acc = 0;
                    for (std::uint32_t j = 1; j < params_.k; ++j) {
                        if (x == i) {
                            acc = F.add(acc, info[j - 1][wct_.classes[i][s]]);
                            continue;
                        }
                        const MonomialMatrix& m1 = small_power(j, (x + r - i) % r);
                        const MonomialMatrix& m2 = small_power(j, (i + r - x) % r);
                        acc = F.add(acc, F.mul(m1.row_coeff(s), info[j - 1][wct_.classes[i][m1.src_col(s)]]));
                        acc = F.add(acc, F.mul(F.mul(beta(x, i), m2.row_coeff(s)),
                                               info[j - 1][wct_.classes[x][m2.src_col(s)]]));
                    }
                    parities[i][out_row] = acc;
                }
        return parities;
    }

    /// Erased systematic column j: read rows Y_j from every surviving node.
    /// Unknowns in Y_j come from the row-sum cells; the rest are solved in
    /// pairs from the two parities whose rows coincide up to one alpha.
    RebuildPlan rebuild_systematic(std::uint32_t j) const {
        check_j(j);
        const Field& F = params_.field;
        const std::uint32_t r = params_.r, k = params_.k;
        const std::vector<std::uint32_t> Y = hyperplane(j, r, k, params_.size_cap);
        RebuildPlan plan;
        plan.erased_node = j;
        plan.node_count = node_count();
        plan.rows = p_;
        std::vector<bool> solved(p_, false);

        for (std::uint32_t l : Y) {
            RebuildRelation rel;
            rel.target_row = l;
            rel.terms.push_back({parity_node(wct_.class_of[l]), l, 1});
            for (std::uint32_t jp = 1; jp < k; ++jp)
                if (jp != j) rel.terms.push_back({jp, l, F.neg(1)});
            plan.recipe.push_back(std::move(rel));
            solved[l] = true;
        }

        for (std::uint32_t t = 1; 2 * t <= r; ++t) {
            for (std::uint32_t l : Y) {
                const std::uint32_t m1 = shift(l, j, r - t);                 // l - t*e_j
                const std::uint32_t m2 = shift(shift(l, j, t), k, r - t);    // l + t*(e_j - e_k)
                if (solved[m1] || solved[m2]) continue;
                const std::uint32_t ip = wct_.class_of[l];
                const std::uint32_t i = (ip + r - t) % r;
                const std::uint32_t l2 = shift(l, k, r - t);  // l - t*e_k, same position, class i
                const std::uint32_t s = wct_.pos_of[l];
                const FieldElem beta_a = beta(ip, i), beta_b = beta(i, ip);
                if (F.mul(beta_a, beta_b) != params_.alpha)
                    throw std::logic_error("c2: alpha placement violates the paired-row relation");
                const FieldElem b = small_power(j, t).row_coeff(s);
                const FieldElem c = small_power(j, r - t).row_coeff(s);
                // [b, beta_a*c; beta_b*b, c] * [x_m1, x_m2]^T = [RA, RB]^T
                const FieldElem det = F.mul(F.mul(b, c), F.sub(1, F.mul(beta_a, beta_b)));
                if (det == 0)
                    throw std::logic_error("c2: paired rebuild equations are dependent (alpha = 1?)");
                const FieldElem dinv = F.inv(det);
                const FieldElem inv00 = F.mul(dinv, c), inv01 = F.neg(F.mul(dinv, F.mul(beta_a, c)));
                const FieldElem inv10 = F.neg(F.mul(dinv, F.mul(beta_b, b))), inv11 = F.mul(dinv, b);

                // RA = parity i at row l minus known terms, RB likewise for
                // parity i' at row l2; fold everything into the two targets.
                std::map<std::pair<std::uint32_t, std::uint32_t>, FieldElem> acc1, acc2;
                auto add1 = [&](std::uint32_t node, std::uint32_t row, FieldElem w) {
                    auto& v = acc1[{node, row}];
                    v = F.add(v, w);
                };
                auto add2 = [&](std::uint32_t node, std::uint32_t row, FieldElem w) {
                    auto& v = acc2[{node, row}];
                    v = F.add(v, w);
                };
                add1(parity_node(i), l, inv00);
                add1(parity_node(ip), l2, inv01);
                add2(parity_node(i), l, inv10);
                add2(parity_node(ip), l2, inv11);
                for (std::uint32_t jp = 1; jp < k; ++jp) {
                    if (jp == j) continue;
                    const FieldElem bp = small_power(jp, t).row_coeff(s);
                    const FieldElem cp = small_power(jp, r - t).row_coeff(s);
                    const std::uint32_t la1 = shift(l, jp, r - t);               // l - t*e_jp
                    const std::uint32_t la2 = shift(shift(l, jp, t), k, r - t);  // l + t*(e_jp - e_k)
                    // RA knowns: bp * a[la1] + beta_a * cp * a[la2]
                    add1(jp, la1, F.neg(F.mul(inv00, bp)));
                    add1(jp, la2, F.neg(F.mul(inv00, F.mul(beta_a, cp))));
                    add2(jp, la1, F.neg(F.mul(inv10, bp)));
                    add2(jp, la2, F.neg(F.mul(inv10, F.mul(beta_a, cp))));
                    // RB knowns: cp * a[la2'] + beta_b * bp * a[la1] with
                    // la2' = l2 - (r-t)*e_jp = l + t*e_jp - t*e_k = la2.
                    add1(jp, la2, F.neg(F.mul(inv01, cp)));
                    add1(jp, la1, F.neg(F.mul(inv01, F.mul(beta_b, bp))));
                    add2(jp, la2, F.neg(F.mul(inv11, cp)));
                    add2(jp, la1, F.neg(F.mul(inv11, F.mul(beta_b, bp))));
                }
                RebuildRelation rel1, rel2;
                rel1.target_row = m1;
                rel2.target_row = m2;
                for (const auto& [key, w] : acc1)
                    if (w) rel1.terms.push_back({key.first, key.second, w});
                for (const auto& [key, w] : acc2)
                    if (w) rel2.terms.push_back({key.first, key.second, w});
                plan.recipe.push_back(std::move(rel1));
                plan.recipe.push_back(std::move(rel2));
                solved[m1] = solved[m2] = true;
            }
        }
        for (std::uint32_t x = 0; x < p_; ++x)
            if (!solved[x]) throw std::logic_error("c2: rebuild plan left an unknown unsolved");
        detail::finalize_plan_reads(plan);
        assert_reads(plan, Y);
        return plan;
    }

    /// Erased parity e: read rows X_e from every surviving node. Block-row e
    /// re-encodes directly; block-row i' combines the row of surviving parity
    /// i' at X_e with systematic data, scaled per the paired-row relation.
    RebuildPlan rebuild_parity(std::uint32_t e) const {
        if (e >= params_.r) throw std::out_of_range("c2: parity index out of range");
        const Field& F = params_.field;
        const std::uint32_t r = params_.r, k = params_.k, q = static_cast<std::uint32_t>(wct_.q);
        RebuildPlan plan;
        plan.erased_node = parity_node(e);
        plan.node_count = node_count();
        plan.rows = p_;
        for (std::uint32_t s = 0; s < q; ++s) {
            RebuildRelation rel;
            rel.target_row = wct_.classes[e][s];
            for (std::uint32_t j = 1; j < k; ++j) rel.terms.push_back({j, wct_.classes[e][s], 1});
            plan.recipe.push_back(std::move(rel));
        }
        const FieldElem one_minus_alpha = F.sub(1, params_.alpha);
        for (std::uint32_t ip = 0; ip < r; ++ip) {
            if (ip == e) continue;
            const FieldElem beta_target = beta(ip, e);
            if (F.mul(beta_target, beta(e, ip)) != params_.alpha)
                throw std::logic_error("c2: alpha placement violates the paired-row relation");
            const std::uint32_t d = (ip + r - e) % r;
            for (std::uint32_t s = 0; s < q; ++s) {
                RebuildRelation rel;
                rel.target_row = wct_.classes[ip][s];
                rel.terms.push_back({parity_node(ip), wct_.classes[e][s], beta_target});
                if (one_minus_alpha != 0)
                    for (std::uint32_t j = 1; j < k; ++j) {
                        const MonomialMatrix& m = small_power(j, d);
                        rel.terms.push_back({j, wct_.classes[e][m.src_col(s)],
                                             F.mul(one_minus_alpha, m.row_coeff(s))});
                    }
                plan.recipe.push_back(std::move(rel));
            }
        }
        detail::finalize_plan_reads(plan);
        assert_reads(plan, wct_.classes[e]);
        return plan;
    }

    RebuildPlan rebuild(std::uint32_t node) const {
        if (node < 1 || node > node_count()) throw std::out_of_range("c2: bad node index");
        return node < params_.k ? rebuild_systematic(node) : rebuild_parity(node - params_.k);
    }

  private:
    explicit C2Code(const C2Params& params) : params_(params) {
        const std::uint32_t r = params_.r, k = params_.k;
        if (r < 2) throw std::invalid_argument("c2: need r >= 2");
        if (k < 3) throw std::invalid_argument("c2: need k >= 3 (at least two systematic nodes)");
        if (params_.alpha == 0 || params_.alpha >= params_.field.order())
            throw std::invalid_argument("c2: alpha must be a nonzero field element");
        wct_ = weight_classes(r, k, params_.size_cap);
        p_ = static_cast<std::uint32_t>(wct_.p);
        if (params_.scheme == CoeffScheme::explicit_rule) {
            const bool ok = (r == 2 && params_.field.order() == 3) ||
                            (r == 3 && params_.field.order() == 4);
            if (!ok)
                throw std::invalid_argument(
                    "c2: explicit coefficient rule needs r=2 over gf3 or r=3 over gf4; "
                    "use the lambda scheme otherwise");
        } else {
            if (params_.lambda.size() != k - 1) throw std::invalid_argument("c2: need k-1 lambda values");
            for (FieldElem l : params_.lambda)
                if (l == 0 || l >= params_.field.order())
                    throw std::invalid_argument("c2: lambda values must be nonzero field elements");
        }
        const std::uint32_t q = static_cast<std::uint32_t>(wct_.q);
        small_blocks_.reserve(k - 1);
        small_powers_.resize(k - 1);
        for (std::uint32_t j = 1; j < k; ++j) {
            MonomialMatrix block =
                params_.scheme == CoeffScheme::lambda
                    ? MonomialMatrix::make(small_perm(wct_, j).perm,
                                           std::vector<FieldElem>(q, params_.lambda[j - 1]))
                    : explicit_small_block(params_.field, wct_, j);
            small_powers_[j - 1].reserve(r);
            for (std::uint32_t d = 0; d < r; ++d)
                small_powers_[j - 1].push_back(mono_pow(params_.field, block, d));
            small_blocks_.push_back(std::move(block));
        }
    }

    const Field& F() const { return params_.field; }

    void check_j(std::uint32_t j) const {
        if (j < 1 || j >= params_.k) throw std::out_of_range("c2: systematic index out of range");
    }

    // x + l*e_j over Z_r^k, as row labels.
    std::uint32_t shift(std::uint32_t x, std::uint32_t j, std::uint32_t l) const {
        return static_cast<std::uint32_t>(apply_f(x, j, l % params_.r, params_.r, params_.k,
                                                  params_.size_cap));
    }

    void check_info(const std::vector<std::vector<FieldElem>>& info) const {
        if (info.size() != params_.k - 1)
            throw std::invalid_argument("c2: expected k-1 information columns");
        for (const auto& col : info)
            if (col.size() != p_) throw std::invalid_argument("c2: information column has wrong length");
    }

    void assert_reads(const RebuildPlan& plan, const std::vector<std::uint32_t>& expected) const {
        std::vector<std::uint32_t> want(expected);
        std::sort(want.begin(), want.end());
        for (std::uint32_t node = 1; node <= node_count(); ++node) {
            if (node == plan.erased_node) continue;
            const auto it = plan.reads.find(node);
            if (it == plan.reads.end() || it->second != want)
                throw std::logic_error("c2: per-node access set deviates from the 1/r row set");
        }
    }

    C2Params params_;
    std::uint32_t p_ = 0;
    WeightClassTable wct_;
    std::vector<MonomialMatrix> small_blocks_;
    std::vector<std::vector<MonomialMatrix>> small_powers_;  // [j-1][d] = p_j^d
};

}  // namespace zigzag
