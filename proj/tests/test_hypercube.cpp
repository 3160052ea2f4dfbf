// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <set>

#include "zigzag/hypercube.hpp"

using namespace zigzag;

namespace {

// Digit-vector arithmetic written out independently of the library's
// integer-based shortcuts.
std::vector<std::uint32_t> digits_of(std::uint64_t x, std::uint32_t r, std::uint32_t k) {
    std::vector<std::uint32_t> d(k);
    for (std::uint32_t j = k; j-- > 0;) {
        d[j] = static_cast<std::uint32_t>(x % r);
        x /= r;
    }
    return d;
}

std::uint64_t from_digits(const std::vector<std::uint32_t>& d, std::uint32_t r) {
    std::uint64_t x = 0;
    for (std::uint32_t v : d) x = x * r + v;
    return x;
}

std::uint64_t add_unit(std::uint64_t x, std::uint32_t j, std::int32_t amount, std::uint32_t r,
                       std::uint32_t k) {
    auto d = digits_of(x, r, k);
    d[j - 1] = static_cast<std::uint32_t>(((std::int64_t(d[j - 1]) + amount) % r + r) % r);
    return from_digits(d, r);
}

}  // namespace

TEST_CASE("index/vector conversion") {
    const RVec v = int_to_vec(5, 2, 3);
    CHECK(v.digits == std::vector<std::uint16_t>{1, 0, 1});
    CHECK(vec_to_int(v) == 5);
    CHECK(int_to_vec(0, 3, 4).digits == std::vector<std::uint16_t>{0, 0, 0, 0});
    // e_1 carries the top place value: f_1^1 = (2, 3, 0, 1) for r=2, k=2.
    RVec e1;
    e1.radix = 2;
    e1.digits = {1, 0};
    CHECK(vec_to_int(e1) == 2);
    CHECK(apply_f(0, 1, 1, 2, 2) == 2);

    for (std::uint64_t x = 0; x < 81; ++x) CHECK(vec_to_int(int_to_vec(x, 3, 4)) == x);
    CHECK_THROWS_AS(int_to_vec(81, 3, 4), std::out_of_range);
    CHECK_THROWS_AS(int_to_vec(0, 2, 40), std::length_error);
}

TEST_CASE("apply_f matches the worked permutations") {
    // f_1^1 = (2, 3, 0, 1) and f_2^1 = (1, 0, 3, 2) for r=2, k=2.
    std::vector<std::uint64_t> f11, f21;
    for (std::uint64_t x = 0; x < 4; ++x) {
        f11.push_back(apply_f(x, 1, 1, 2, 2));
        f21.push_back(apply_f(x, 2, 1, 2, 2));
    }
    CHECK(f11 == std::vector<std::uint64_t>{2, 3, 0, 1});
    CHECK(f21 == std::vector<std::uint64_t>{1, 0, 3, 2});
    CHECK(apply_f(2, 2, 1, 2, 2) == 3);
    CHECK(apply_f(17, 3, 0, 3, 3) == 17);  // l = 0 is the identity
    CHECK_THROWS_AS(apply_f(0, 0, 1, 2, 2), std::out_of_range);
    CHECK_THROWS_AS(apply_f(0, 3, 1, 2, 2), std::out_of_range);
    CHECK_THROWS_AS(apply_f(0, 1, 2, 2, 2), std::out_of_range);
}

TEST_CASE("f_j is a bijection of order r that rotates the weight classes") {
    for (auto [r, k] : {std::pair<std::uint32_t, std::uint32_t>{2, 3}, {3, 2}, {3, 3}, {4, 2}}) {
        const std::uint64_t p = [&] {
            std::uint64_t v = 1;
            for (std::uint32_t i = 0; i < k; ++i) v *= r;
            return v;
        }();
        const WeightClassTable t = weight_classes(r, k);
        for (std::uint32_t j = 1; j <= k; ++j) {
            for (std::uint32_t l = 0; l < r; ++l) {
                std::set<std::uint64_t> image;
                for (std::uint64_t x = 0; x < p; ++x) image.insert(apply_f(x, j, l, r, k));
                REQUIRE(image.size() == p);
            }
            for (std::uint64_t x = 0; x < p; ++x) {
                std::uint64_t y = x;
                for (std::uint32_t i = 0; i < r; ++i) y = apply_f(y, j, 1, r, k);
                REQUIRE(y == x);
                // f_j maps X_i onto X_{i+1}.
                REQUIRE(t.class_of[apply_f(x, j, 1, r, k)] == (t.class_of[x] + 1) % r);
            }
        }
    }
}

TEST_CASE("weight classes match the worked example") {
    const WeightClassTable t = weight_classes(2, 3);
    CHECK(t.classes[0] == std::vector<std::uint32_t>{0, 3, 5, 6});
    // X_1 = X_0 + e_3, entry by entry.
    std::vector<std::uint32_t> x1;
    for (std::uint32_t v : t.classes[0])
        x1.push_back(static_cast<std::uint32_t>(add_unit(v, 3, 1, 2, 3)));
    CHECK(t.classes[1] == x1);
    CHECK(t.classes[1] == std::vector<std::uint32_t>{1, 2, 4, 7});

    const WeightClassTable t22 = weight_classes(2, 2);
    CHECK(t22.classes[0] == std::vector<std::uint32_t>{0, 3});
    CHECK(t22.classes[1] == std::vector<std::uint32_t>{1, 2});
}

TEST_CASE("weight classes partition the rows by digit sum") {
    for (auto [r, k] : {std::pair<std::uint32_t, std::uint32_t>{2, 4}, {3, 3}, {5, 2}}) {
        const WeightClassTable t = weight_classes(r, k);
        std::set<std::uint32_t> seen;
        for (std::uint32_t i = 0; i < r; ++i) {
            REQUIRE(t.classes[i].size() == t.q);
            REQUIRE(std::is_sorted(t.classes[i].begin(), t.classes[i].end()));
            for (std::uint64_t s = 0; s < t.q; ++s) {
                const std::uint32_t x = t.classes[i][s];
                seen.insert(x);
                const auto d = digits_of(x, r, k);
                std::uint32_t sum = 0;
                for (auto v : d) sum += v;
                REQUIRE(sum % r == i);
                REQUIRE(add_unit(t.classes[0][s], k, static_cast<std::int32_t>(i), r, k) == x);
                REQUIRE(t.class_of[x] == i);
                REQUIRE(t.pos_of[x] == s);
            }
        }
        REQUIRE(seen.size() == t.p);
    }
}

TEST_CASE("hyperplanes match the access sets of the examples") {
    CHECK(hyperplane(1, 2, 3) == std::vector<std::uint32_t>{0, 1, 2, 3});
    CHECK(hyperplane(1, 2, 2) == std::vector<std::uint32_t>{0, 1});
    // j = k selects rows whose last digit is 0.
    const auto yk = hyperplane(3, 3, 3);
    for (std::uint32_t x : yk) REQUIRE(x % 3 == 0);
    CHECK(yk.size() == 9);
    CHECK_THROWS_AS(hyperplane(0, 2, 3), std::out_of_range);
    CHECK_THROWS_AS(hyperplane(4, 2, 3), std::out_of_range);
}

TEST_CASE("hyperplane translates partition the rows and absorb j-free shifts") {
    for (auto [r, k] : {std::pair<std::uint32_t, std::uint32_t>{2, 3}, {3, 3}, {4, 2}}) {
        for (std::uint32_t j = 1; j <= k; ++j) {
            const auto y = hyperplane(j, r, k);
            std::set<std::uint64_t> all;
            for (std::uint32_t t = 0; t < r; ++t)
                for (std::uint32_t x : y) all.insert(add_unit(x, j, static_cast<std::int32_t>(t), r, k));
            std::uint64_t p = 1;
            for (std::uint32_t i = 0; i < k; ++i) p *= r;
            REQUIRE(all.size() == p);

            // Adding a vector maps Y_j onto itself exactly when the vector's
            // j-th digit is zero; the shifts i*(e_k - e_j') + s*e_k arising
            // in the rebuild argument are of that form for j != k, j' != j.
            const std::set<std::uint32_t> yset(y.begin(), y.end());
            for (std::uint32_t jp = 1; jp <= k; ++jp) {
                if (jp == j) continue;
                for (std::uint32_t i = 0; i < r; ++i)
                    for (std::uint32_t s = 0; s < r; ++s) {
                        std::uint64_t delta = add_unit(0, k, static_cast<std::int32_t>((i + s) % r), r, k);
                        delta = add_unit(delta, jp, -static_cast<std::int32_t>(i), r, k);
                        std::set<std::uint32_t> shifted;
                        for (std::uint32_t x : y) {
                            std::uint64_t v = add_unit(x, k, static_cast<std::int32_t>((i + s) % r), r, k);
                            v = add_unit(v, jp, -static_cast<std::int32_t>(i), r, k);
                            shifted.insert(static_cast<std::uint32_t>(v));
                        }
                        const bool j_digit_zero = digits_of(delta, r, k)[j - 1] == 0;
                        REQUIRE((shifted == yset) == j_digit_zero);
                        if (j < k) REQUIRE(j_digit_zero);
                    }
            }
        }
    }
}

TEST_CASE("small permutations") {
    const WeightClassTable t = weight_classes(2, 3);
    // j = k is the identity.
    CHECK(small_perm(t, 3).perm == std::vector<std::uint32_t>{0, 1, 2, 3});
    // j = 1 maps the X_0 positions of (0,3,5,6) to those of (5,6,0,3).
    std::vector<std::uint32_t> expected;
    for (std::uint32_t v : t.classes[0]) {
        std::uint64_t w = add_unit(v, 1, 1, 2, 3);
        w = add_unit(w, 3, -1, 2, 3);
        expected.push_back(t.pos_of[w]);
    }
    CHECK(small_perm(t, 1).perm == expected);
    CHECK(small_perm(1, 2, 3).perm == std::vector<std::uint32_t>{2, 3, 0, 1});

    for (auto [r, k] : {std::pair<std::uint32_t, std::uint32_t>{2, 3}, {3, 3}, {4, 2}, {5, 3}}) {
        const WeightClassTable wt = weight_classes(r, k);
        for (std::uint32_t j = 1; j <= k; ++j) {
            const SmallPerm sp = small_perm(wt, j);
            // r-th functional power is the identity.
            std::vector<std::uint32_t> v(sp.perm.size());
            for (std::uint32_t s = 0; s < v.size(); ++s) v[s] = s;
            for (std::uint32_t i = 0; i < r; ++i) {
                std::vector<std::uint32_t> next(v.size());
                for (std::uint32_t s = 0; s < v.size(); ++s) next[s] = sp.perm[v[s]];
                v = next;
            }
            for (std::uint32_t s = 0; s < v.size(); ++s) REQUIRE(v[s] == s);
        }
    }
    CHECK_THROWS_AS(small_perm(t, 0), std::out_of_range);
    CHECK_THROWS_AS(small_perm(t, 4), std::out_of_range);
}
