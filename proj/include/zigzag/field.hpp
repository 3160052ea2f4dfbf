// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

namespace zigzag {

/// Value of a field element, an integer in [0, order). For GF(2^m) the base-2
/// digits of the value are the coefficients of the polynomial representation.
using FieldElem = std::uint16_t;

namespace detail {

inline bool is_prime_u32(std::uint32_t n) {
    if (n < 2) return false;
    for (std::uint32_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

inline int poly_degree(std::uint32_t poly) {
    int d = -1;
    while (poly) {
        ++d;
        poly >>= 1;
    }
    return d;
}

// Remainder of binary-polynomial division.
inline std::uint32_t poly_mod(std::uint32_t a, std::uint32_t m) {
    const int dm = poly_degree(m);
    for (int da = poly_degree(a); da >= dm; --da)
        if (a >> da & 1u) a ^= m << (da - dm);
    return a;
}

inline bool poly_irreducible(std::uint32_t poly) {
    const int d = poly_degree(poly);
    if (d < 1) return false;
    if ((poly & 1u) == 0) return false;  // divisible by x
    for (std::uint32_t f = 2; f < (1u << (d / 2 + 1)); ++f)
        if (poly_mod(poly, f) == 0 && poly_degree(f) >= 1 && f != poly) return false;
    return true;
}

// Common primitive polynomials for GF(2^m), indexed by m.
inline std::uint32_t default_poly(unsigned m) {
    static const std::uint32_t table[17] = {
        0,      0x3,    0x7,    0xB,    0x13,   0x25,   0x43,    0x89,  0x11D,
        0x211,  0x409,  0x805,  0x1053, 0x201B, 0x4443, 0x8003,  0x1100B};
    return m <= 16 ? table[m] : 0;
}

}  // namespace detail

/// A small finite field: GF(p) for prime p <= 2^16, or GF(2^m) for m <= 16.
///
/// Arithmetic goes through log/antilog tables built once at construction; the
/// results are identical to direct modular / polynomial arithmetic (the test
/// suite cross-checks against an independent reference).
class Field {
  public:
    /// Defaults to GF(2), the smallest field.
    Field() : Field(2) {}

    explicit Field(std::uint32_t p, std::uint32_t m = 1, std::uint32_t reduction_poly = 0)
        : p_(p), m_(m), poly_(reduction_poly) {
        if (m_ == 0) throw std::invalid_argument("field: degree m must be positive");
        if (!detail::is_prime_u32(p_)) throw std::invalid_argument("field: characteristic must be prime");
        if (m_ > 1) {
            if (p_ != 2) throw std::invalid_argument("field: extension fields supported only for p=2");
            if (m_ > 16) throw std::invalid_argument("field: GF(2^m) supported only for m <= 16");
            if (poly_ == 0) poly_ = detail::default_poly(m_);
            if (detail::poly_degree(poly_) != static_cast<int>(m_))
                throw std::invalid_argument("field: reduction polynomial must have degree m");
            if (!detail::poly_irreducible(poly_))
                throw std::invalid_argument("field: reduction polynomial is not irreducible");
        } else {
            if (p_ > 1u << 16) throw std::invalid_argument("field: GF(p) supported only for p <= 2^16");
            poly_ = 0;
        }
        order_ = 1;
        for (std::uint32_t i = 0; i < m_; ++i) order_ *= p_;
        if (order_ > 1u << 16) throw std::invalid_argument("field: order exceeds 2^16");
        if (order_ > 2) build_tables();
    }

    /// Parses the textual forms "gf3", "gf4", "gf2e8", "gfp:<p>",
    /// "gf2e<m>" and "gf2e<m>:<poly-hex>".
    static Field parse(const std::string& spec) {
        if (spec == "gf3") return Field(3);
        if (spec == "gf4") return Field(2, 2);
        if (spec.rfind("gfp:", 0) == 0) {
            return Field(static_cast<std::uint32_t>(std::stoul(spec.substr(4))));
        }
        if (spec.rfind("gf2e", 0) == 0) {
            const std::string rest = spec.substr(4);
            const auto colon = rest.find(':');
            const unsigned m = static_cast<unsigned>(std::stoul(rest.substr(0, colon)));
            std::uint32_t poly = 0;
            if (colon != std::string::npos)
                poly = static_cast<std::uint32_t>(std::stoul(rest.substr(colon + 1), nullptr, 16));
            return Field(2, m, poly);
        }
        throw std::invalid_argument("field: cannot parse spec '" + spec + "'");
    }

    std::string name() const {
        if (p_ == 3 && m_ == 1) return "gf3";
        if (p_ == 2 && m_ == 2 && poly_ == 0x7) return "gf4";
        if (m_ == 1) return "gfp:" + std::to_string(p_);
        std::string s = "gf2e" + std::to_string(m_);
        if (poly_ != detail::default_poly(m_)) {
            char buf[16];
            std::snprintf(buf, sizeof buf, ":%x", poly_);
            s += buf;
        }
        return s;
    }

    std::uint32_t characteristic() const { return p_; }
    std::uint32_t degree() const { return m_; }
    std::uint32_t reduction_poly() const { return poly_; }
    std::uint32_t order() const { return order_; }

    FieldElem add(FieldElem a, FieldElem b) const {
        check(a), check(b);
        return m_ == 1 ? static_cast<FieldElem>((a + b) % p_) : static_cast<FieldElem>(a ^ b);
    }

    FieldElem sub(FieldElem a, FieldElem b) const {
        check(a), check(b);
        return m_ == 1 ? static_cast<FieldElem>((a + order_ - b) % p_) : static_cast<FieldElem>(a ^ b);
    }

    FieldElem neg(FieldElem a) const { return sub(0, a); }

    FieldElem mul(FieldElem a, FieldElem b) const {
        check(a), check(b);
        if (a == 0 || b == 0) return 0;
        if (order_ == 2) return 1;
        return exp_[(log_[a] + log_[b]) % (order_ - 1)];
    }

    FieldElem inv(FieldElem a) const {
        check(a);
        if (a == 0) throw std::domain_error("field: division by zero");
        if (order_ == 2) return 1;
        return exp_[(order_ - 1 - log_[a]) % (order_ - 1)];
    }

    FieldElem div(FieldElem a, FieldElem b) const { return mul(a, inv(b)); }

    FieldElem pow(FieldElem a, std::uint64_t e) const {
        check(a);
        if (e == 0) return 1;
        if (a == 0) return 0;
        if (order_ == 2) return 1;
        const std::uint64_t n = order_ - 1;
        return exp_[static_cast<std::uint32_t>((log_[a] * (e % n)) % n)];
    }

    /// Smallest-valued generator of the multiplicative group. GF(2) has no
    /// generator distinct from 1 and is rejected.
    FieldElem primitive_element() const {
        if (order_ < 3) throw std::domain_error("field: GF(2) has no primitive element");
        return generator_;
    }

    bool operator==(const Field& o) const {
        return p_ == o.p_ && m_ == o.m_ && poly_ == o.poly_;
    }

  private:
    void check(FieldElem a) const {
        if (a >= order_) throw std::domain_error("field: value " + std::to_string(a) + " out of range");
    }

    // Table-free product, used only to bootstrap the tables.
    FieldElem raw_mul(FieldElem a, FieldElem b) const {
        if (m_ == 1) return static_cast<FieldElem>(std::uint32_t(a) * b % p_);
        std::uint32_t acc = 0, x = a;
        for (std::uint32_t y = b; y; y >>= 1) {
            if (y & 1u) acc ^= x;
            x <<= 1;
            if (x >> m_ & 1u) x ^= poly_;
        }
        return static_cast<FieldElem>(acc);
    }

    FieldElem raw_pow(FieldElem a, std::uint64_t e) const {
        FieldElem acc = 1;
        while (e) {
            if (e & 1) acc = raw_mul(acc, a);
            a = raw_mul(a, a);
            e >>= 1;
        }
        return acc;
    }

    void build_tables() {
        const std::uint32_t n = order_ - 1;
        std::vector<std::uint32_t> prime_factors;
        std::uint32_t rem = n;
        for (std::uint32_t d = 2; d * d <= rem; ++d)
            if (rem % d == 0) {
                prime_factors.push_back(d);
                while (rem % d == 0) rem /= d;
            }
        if (rem > 1) prime_factors.push_back(rem);

        generator_ = 0;
        for (std::uint32_t g = 2; g < order_; ++g) {
            bool ok = true;
            for (std::uint32_t q : prime_factors)
                if (raw_pow(static_cast<FieldElem>(g), n / q) == 1) {
                    ok = false;
                    break;
                }
            if (ok) {
                generator_ = static_cast<FieldElem>(g);
                break;
            }
        }
        if (generator_ == 0) throw std::logic_error("field: no generator found");

        exp_.resize(n);
        log_.assign(order_, 0);
        FieldElem v = 1;
        for (std::uint32_t i = 0; i < n; ++i) {
            exp_[i] = v;
            log_[v] = i;
            v = raw_mul(v, generator_);
        }
    }

    std::uint32_t p_, m_, poly_, order_;
    FieldElem generator_ = 1;
    std::vector<FieldElem> exp_;
    std::vector<std::uint32_t> log_;
};

}  // namespace zigzag
