// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "zigzag/field.hpp"

using zigzag::Field;
using zigzag::FieldElem;

namespace {

// Reference arithmetic, independent of the table-backed implementation:
// plain modular arithmetic for GF(p), carryless multiply-and-reduce for
// GF(2^m).
FieldElem ref_mul(const Field& f, FieldElem a, FieldElem b) {
    if (f.degree() == 1) return static_cast<FieldElem>(std::uint32_t(a) * b % f.characteristic());
    std::uint32_t acc = 0, x = a;
    for (std::uint32_t y = b; y; y >>= 1) {
        if (y & 1u) acc ^= x;
        x <<= 1;
        if (x >> f.degree() & 1u) x ^= f.reduction_poly();
    }
    return static_cast<FieldElem>(acc);
}

FieldElem ref_add(const Field& f, FieldElem a, FieldElem b) {
    if (f.degree() == 1) return static_cast<FieldElem>((a + b) % f.characteristic());
    return static_cast<FieldElem>(a ^ b);
}

std::vector<Field> supported_fields() {
    return {Field(3), Field(2, 2), Field(2, 8), Field(13), Field(65521), Field(2, 16), Field(2, 4)};
}

}  // namespace

TEST_CASE("field arithmetic matches the worked examples") {
    const Field f3(3), f4(2, 2);
    CHECK(f3.add(1, 2) == 0);
    CHECK(f4.add(2, 3) == 1);
    CHECK(f3.mul(2, 2) == 1);
    CHECK(f4.mul(2, 2) == ref_mul(f4, 2, 2));
    CHECK(f4.mul(2, 2) == 3);
    CHECK(f3.inv(2) == 2);
    CHECK(f3.inv(1) == 1);
    CHECK(f4.inv(1) == 1);
    // Exhaustive search of the multiplication table for the inverse of 2.
    FieldElem inv2 = 0;
    for (FieldElem b = 1; b < 4; ++b)
        if (ref_mul(f4, 2, b) == 1) inv2 = b;
    CHECK(inv2 == 3);
    CHECK(f4.inv(2) == inv2);
}

TEST_CASE("additive and multiplicative identities") {
    std::mt19937_64 rng(7);
    for (const Field& f : supported_fields())
        for (int i = 0; i < 100; ++i) {
            const auto x = static_cast<FieldElem>(rng() % f.order());
            CHECK(f.add(x, 0) == x);
            CHECK(f.mul(x, 1) == x);
        }
}

TEST_CASE("field axioms hold on random triples") {
    std::mt19937_64 rng(42);
    for (const Field& f : supported_fields()) {
        for (int i = 0; i < 10000; ++i) {
            const auto a = static_cast<FieldElem>(rng() % f.order());
            const auto b = static_cast<FieldElem>(rng() % f.order());
            const auto c = static_cast<FieldElem>(rng() % f.order());
            REQUIRE(f.add(a, b) == ref_add(f, a, b));
            REQUIRE(f.mul(a, b) == ref_mul(f, a, b));
            REQUIRE(f.add(f.add(a, b), c) == f.add(a, f.add(b, c)));
            REQUIRE(f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c)));
            REQUIRE(f.add(a, b) == f.add(b, a));
            REQUIRE(f.mul(a, b) == f.mul(b, a));
            REQUIRE(f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c)));
            REQUIRE(f.sub(f.add(a, b), b) == a);
            if (b != 0) REQUIRE(f.mul(f.div(a, b), b) == a);
        }
    }
}

TEST_CASE("primitive elements generate the multiplicative group") {
    CHECK(Field(3).primitive_element() == 2);
    CHECK(Field(2, 2).primitive_element() == 2);

    const Field f256(2, 8);
    CHECK(f256.reduction_poly() == 0x11D);
    CHECK(f256.primitive_element() == 2);
    // Verify the order of 2 really is 255.
    FieldElem v = 1;
    int order = 0;
    do {
        v = ref_mul(f256, v, 2);
        ++order;
    } while (v != 1);
    CHECK(order == 255);

    for (const Field& f : supported_fields()) {
        const FieldElem g = f.primitive_element();
        const std::uint32_t n = f.order() - 1;
        CHECK(f.pow(g, n) == 1);
        for (std::uint32_t d = 1; d < n; ++d)
            if (n % d == 0) REQUIRE(f.pow(g, d) != 1);
        // Smallest-valued generator: nothing below g qualifies.
        for (FieldElem h = 2; h < g; ++h) {
            bool generates = true;
            for (std::uint32_t d = 1; d < n && generates; ++d)
                if (n % d == 0 && f.pow(h, d) == 1) generates = false;
            REQUIRE(!generates);
        }
    }
}

TEST_CASE("error paths") {
    const Field f3(3);
    CHECK_THROWS_AS(f3.add(3, 0), std::domain_error);
    CHECK_THROWS_AS(f3.mul(0, 5), std::domain_error);
    CHECK_THROWS_AS(f3.inv(0), std::domain_error);
    CHECK_THROWS_AS(f3.div(1, 0), std::domain_error);
    CHECK_THROWS_AS(Field(2).primitive_element(), std::domain_error);
    CHECK_THROWS_AS(Field(4), std::invalid_argument);              // not prime
    CHECK_THROWS_AS(Field(3, 2), std::invalid_argument);           // p odd with m > 1
    CHECK_THROWS_AS(Field(2, 3, 0x9), std::invalid_argument);      // x^3+1 reducible
    CHECK_THROWS_AS(Field(2, 4, 0x13 << 1), std::invalid_argument);  // degree 5, not 4
    CHECK_THROWS_AS(Field(2, 17), std::invalid_argument);
    CHECK_THROWS_AS(Field(65537), std::invalid_argument);
}

TEST_CASE("textual field specs round-trip") {
    CHECK(Field::parse("gf3") == Field(3));
    CHECK(Field::parse("gf4") == Field(2, 2));
    CHECK(Field::parse("gf2e8") == Field(2, 8));
    CHECK(Field::parse("gf2e8:11d") == Field(2, 8, 0x11D));
    CHECK(Field::parse("gfp:7") == Field(7));
    CHECK(Field::parse("gf2e4") == Field(2, 4, 0x13));
    CHECK_THROWS_AS(Field::parse("gf5x"), std::invalid_argument);
    for (const Field& f : supported_fields()) CHECK(Field::parse(f.name()) == f);
}
