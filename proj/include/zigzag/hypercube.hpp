// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace zigzag {

/// Default bound on r^k; exhaustive verification stays tractable below it.
inline constexpr std::uint64_t kDefaultSizeCap = 1ull << 20;

/// An element of Z_r^k, carried both as an integer row index and as its
/// base-r digit vector. digits[0] is digit 1, the most significant one, so
/// the basis vector e_1 corresponds to the integer r^(k-1) and e_k to 1.
struct RVec {
    std::uint32_t radix = 0;
    std::vector<std::uint16_t> digits;

    std::uint32_t dim() const { return static_cast<std::uint32_t>(digits.size()); }
};

namespace detail {

inline std::uint64_t checked_pow(std::uint64_t r, std::uint32_t k, std::uint64_t cap) {
    std::uint64_t v = 1;
    for (std::uint32_t i = 0; i < k; ++i) {
        if (v > cap / r) throw std::length_error("hypercube: r^k exceeds size cap");
        v *= r;
    }
    return v;
}

inline void check_rk(std::uint32_t r, std::uint32_t k) {
    if (r < 2) throw std::invalid_argument("hypercube: need r >= 2");
    if (k < 2) throw std::invalid_argument("hypercube: need k >= 2");
}

}  // namespace detail

inline RVec int_to_vec(std::uint64_t x, std::uint32_t r, std::uint32_t k,
                       std::uint64_t cap = kDefaultSizeCap) {
    detail::check_rk(r, k);
    const std::uint64_t p = detail::checked_pow(r, k, cap);
    if (x >= p) throw std::out_of_range("int_to_vec: index out of range");
    RVec v;
    v.radix = r;
    v.digits.assign(k, 0);
    for (std::uint32_t j = k; j-- > 0;) {
        v.digits[j] = static_cast<std::uint16_t>(x % r);
        x /= r;
    }
    return v;
}

inline std::uint64_t vec_to_int(const RVec& v) {
    if (v.radix < 2 || v.digits.size() < 2) throw std::invalid_argument("vec_to_int: bad vector");
    std::uint64_t x = 0;
    for (std::uint16_t d : v.digits) {
        if (d >= v.radix) throw std::out_of_range("vec_to_int: digit out of range");
        x = x * v.radix + d;
    }
    return x;
}

/// The permutation f_j^l: x -> x + l*e_j (digitwise mod r). Columns j are
/// 1-based; l is a parity index in [0, r-1].
inline std::uint64_t apply_f(std::uint64_t x, std::uint32_t j, std::uint32_t l, std::uint32_t r,
                             std::uint32_t k, std::uint64_t cap = kDefaultSizeCap) {
    detail::check_rk(r, k);
    if (j < 1 || j > k) throw std::out_of_range("apply_f: column index out of range");
    if (l >= r) throw std::out_of_range("apply_f: parity index out of range");
    const std::uint64_t p = detail::checked_pow(r, k, cap);
    if (x >= p) throw std::out_of_range("apply_f: row index out of range");
    std::uint64_t place = 1;
    for (std::uint32_t i = 0; i < k - j; ++i) place *= r;
    const std::uint64_t d = (x / place) % r;
    return x - d * place + ((d + l) % r) * place;
}

/// Digit sum of x mod r, i.e. the index of the weight class containing x.
inline std::uint32_t weight_of(std::uint64_t x, std::uint32_t r) {
    std::uint64_t s = 0;
    while (x) {
        s += x % r;
        x /= r;
    }
    return static_cast<std::uint32_t>(s % r);
}

/// Row sets X_0,...,X_{r-1} by digit-sum class. X_0 is listed in ascending
/// order; X_i is defined positionally as X_0 + i*e_k, which is again
/// ascending because the first k-1 digits determine an X_0 element.
struct WeightClassTable {
    std::uint32_t r = 0, k = 0;
    std::uint64_t p = 0, q = 0;  // p = r^k, q = r^(k-1)
    std::vector<std::vector<std::uint32_t>> classes;
    std::vector<std::uint32_t> class_of;  // row -> i with row in X_i
    std::vector<std::uint32_t> pos_of;    // row -> position s with X_i[s] == row

    enum class Ordering { x0_ascending };
    Ordering ordering = Ordering::x0_ascending;

    std::uint32_t label(std::uint32_t cls, std::uint32_t pos) const { return classes[cls][pos]; }
};

inline WeightClassTable weight_classes(std::uint32_t r, std::uint32_t k,
                                       std::uint64_t cap = kDefaultSizeCap) {
    detail::check_rk(r, k);
    WeightClassTable t;
    t.r = r;
    t.k = k;
    t.p = detail::checked_pow(r, k, cap);
    t.q = t.p / r;
    t.classes.assign(r, {});
    for (auto& c : t.classes) c.reserve(t.q);
    for (std::uint64_t x = 0; x < t.p; ++x)
        if (weight_of(x, r) == 0) t.classes[0].push_back(static_cast<std::uint32_t>(x));
    for (std::uint32_t i = 1; i < r; ++i)
        for (std::uint32_t v : t.classes[0]) {
            const std::uint32_t last = v % r;
            t.classes[i].push_back(v - last + (last + i) % r);
        }
    t.class_of.assign(t.p, 0);
    t.pos_of.assign(t.p, 0);
    for (std::uint32_t i = 0; i < r; ++i)
        for (std::uint64_t s = 0; s < t.q; ++s) {
            t.class_of[t.classes[i][s]] = i;
            t.pos_of[t.classes[i][s]] = static_cast<std::uint32_t>(s);
        }
    return t;
}

/// Rows whose j-th base-r digit is zero, ascending. Rebuilding systematic
/// column j reads exactly these rows from every surviving node.
inline std::vector<std::uint32_t> hyperplane(std::uint32_t j, std::uint32_t r, std::uint32_t k,
                                             std::uint64_t cap = kDefaultSizeCap) {
    detail::check_rk(r, k);
    if (j < 1 || j > k) throw std::out_of_range("hyperplane: column index out of range");
    const std::uint64_t p = detail::checked_pow(r, k, cap);
    std::uint64_t place = 1;
    for (std::uint32_t i = 0; i < k - j; ++i) place *= r;
    std::vector<std::uint32_t> rows;
    rows.reserve(p / r);
    for (std::uint64_t x = 0; x < p; ++x)
        if ((x / place) % r == 0) rows.push_back(static_cast<std::uint32_t>(x));
    return rows;
}

/// The map x -> x + e_j - e_k on X_0, expressed as a permutation of positions
/// in the X_0 ordering. Its r-th functional power is the identity.
struct SmallPerm {
    std::uint32_t j = 0;
    std::vector<std::uint32_t> perm;  // position s -> position of X_0[s] + e_j - e_k
};

inline SmallPerm small_perm(const WeightClassTable& t, std::uint32_t j) {
    if (j < 1 || j > t.k) throw std::out_of_range("small_perm: column index out of range");
    SmallPerm sp;
    sp.j = j;
    sp.perm.resize(t.q);
    for (std::uint64_t s = 0; s < t.q; ++s) {
        std::uint64_t x = t.classes[0][s];
        x = apply_f(x, j, 1, t.r, t.k);            // + e_j
        x = apply_f(x, t.k, t.r - 1, t.r, t.k);    // - e_k
        sp.perm[s] = t.pos_of[x];
    }
    return sp;
}

inline SmallPerm small_perm(std::uint32_t j, std::uint32_t r, std::uint32_t k,
                            std::uint64_t cap = kDefaultSizeCap) {
    return small_perm(weight_classes(r, k, cap), j);
}

}  // namespace zigzag
