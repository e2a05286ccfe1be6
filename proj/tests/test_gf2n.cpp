#include <catch2/catch_amalgamated.hpp>

#include <numeric>
#include <random>
#include <vector>

#include "psik/gf2n.hpp"

using psik::u128;
using psik::u64;

namespace {

// Schoolbook oracle: carryless product, then long division by the full
// modulus. Independent of the shift-reduce loop in the library.
u64 oracle_mul(u64 a, u64 b, int n, u64 coeffs) {
    u128 prod = 0;
    for (int i = 0; i < n; ++i)
        if ((b >> i) & 1) prod ^= (u128)a << i;
    const u128 modulus = ((u128)1 << n) | coeffs;
    for (int d = 2 * n - 2; d >= n; --d)
        if ((prod >> d) & 1) prod ^= modulus << (d - n);
    return static_cast<u64>(prod);
}

// Trial division by every polynomial of degree 1..n/2.
bool oracle_irreducible(int n, u64 coeffs) {
    const u128 f = ((u128)1 << n) | coeffs;
    for (int d = 1; d <= n / 2; ++d) {
        for (u64 g = 1ull << d; g < (1ull << (d + 1)); ++g) {
            u128 r = f;
            for (int shift = n - d; shift >= 0; --shift)
                if ((r >> (shift + d)) & 1) r ^= (u128)g << shift;
            if (r == 0) return false;
        }
    }
    return true;
}

// Multiplicative order of x modulo f by plain iteration.
u64 oracle_order_of_x(int n, u64 coeffs) {
    u64 w = 2, order = 1;
    while (w != 1) {
        w = oracle_mul(w, 2, n, coeffs);
        ++order;
    }
    return order;
}

}  // namespace

TEST_CASE("multiplication matches the schoolbook oracle") {
    std::mt19937_64 rng(20260815);
    for (int n : {3, 5, 8, 11, 16}) {
        psik::FieldPoly f = psik::find_primitive(n, 5);
        const u64 mask = psik::low_mask(n);
        for (int trial = 0; trial < 2000; ++trial) {
            u64 a = rng() & mask, b = rng() & mask;
            CAPTURE(n, a, b);
            REQUIRE(psik::gf_mul({n, a}, {n, b}, f).bits == oracle_mul(a, b, n, f.coeffs));
        }
        REQUIRE(psik::gf_mul({n, 0}, {n, mask}, f).bits == 0);
        REQUIRE(psik::gf_mul({n, 1}, {n, mask}, f).bits == mask);
        REQUIRE(psik::gf_mul({n, mask}, {n, mask}, f).bits == oracle_mul(mask, mask, n, f.coeffs));
    }
}

TEST_CASE("hand-checked products") {
    psik::FieldPoly f3 = psik::certify_primitive(3, 0b011);  // x^3 + x + 1
    // alpha * alpha^2 = alpha^3 = x + 1
    REQUIRE(psik::gf_mul(psik::gf_alpha(3), {3, 0b100}, f3).bits == 0b011);
    REQUIRE(psik::gf_pow(psik::gf_alpha(3), 7, f3) == psik::gf_one(3));

    psik::FieldPoly f36 = psik::certify_primitive(36, (1ull << 11) | 1);
    // alpha^25 * alpha^11 = alpha^36 = x^11 + 1
    psik::GFElement lhs =
        psik::gf_mul(psik::gf_pow(psik::gf_alpha(36), 25, f36), psik::gf_pow(psik::gf_alpha(36), 11, f36), f36);
    REQUIRE(lhs.bits == ((1ull << 11) | 1));
}

TEST_CASE("field axioms on random triples") {
    psik::FieldPoly f = psik::find_primitive(13, 5);
    std::mt19937_64 rng(7);
    const u64 mask = psik::low_mask(13);
    for (int trial = 0; trial < 500; ++trial) {
        psik::GFElement a{13, rng() & mask}, b{13, rng() & mask}, c{13, rng() & mask};
        REQUIRE(psik::gf_mul(a, b, f) == psik::gf_mul(b, a, f));
        REQUIRE(psik::gf_mul(psik::gf_mul(a, b, f), c, f) == psik::gf_mul(a, psik::gf_mul(b, c, f), f));
        REQUIRE(psik::gf_mul(a, psik::gf_add(b, c), f) ==
                psik::gf_add(psik::gf_mul(a, b, f), psik::gf_mul(a, c, f)));
    }
    REQUIRE_THROWS_AS(psik::gf_mul({12, 1}, {13, 1}, f), std::invalid_argument);
}

TEST_CASE("powers") {
    for (int n = 3; n <= 10; ++n) {
        psik::FieldPoly f = psik::find_primitive(n, 5);
        REQUIRE(psik::gf_pow(psik::gf_alpha(n), 0, f) == psik::gf_one(n));
        REQUIRE(psik::gf_pow(psik::gf_alpha(n), f.order(), f) == psik::gf_one(n));
        // against iterated multiplication
        psik::GFElement w = psik::gf_one(n);
        for (u64 e = 0; e < 40; ++e) {
            REQUIRE(psik::gf_pow(psik::gf_alpha(n), e, f) == w);
            w = psik::gf_mul(w, psik::gf_alpha(n), f);
        }
    }
}

TEST_CASE("irreducibility agrees with trial division") {
    for (int n = 2; n <= 10; ++n) {
        for (u64 coeffs = 1; coeffs < (1ull << n); coeffs += 2) {
            CAPTURE(n, coeffs);
            REQUIRE(psik::detail::is_irreducible_raw(n, coeffs) == oracle_irreducible(n, coeffs));
        }
        // even constant term is never irreducible here
        REQUIRE_FALSE(psik::detail::is_irreducible_raw(n, 2));
    }
}

TEST_CASE("primitivity means x has full order") {
    for (int n = 2; n <= 8; ++n) {
        auto factors = psik::factorize(psik::low_mask(n));
        for (u64 coeffs = 1; coeffs < (1ull << n); coeffs += 2) {
            if (!oracle_irreducible(n, coeffs)) continue;
            bool primitive = psik::detail::is_primitive_raw(n, coeffs, factors);
            CAPTURE(n, coeffs);
            REQUIRE(primitive == (oracle_order_of_x(n, coeffs) == psik::low_mask(n)));
        }
    }
}

TEST_CASE("certification failures carry their reason") {
    using Catch::Matchers::ContainsSubstring;
    REQUIRE_THROWS_WITH(psik::certify_primitive(psik::parse_poly("x^2 + 1")),
                        ContainsSubstring("reducible"));
    REQUIRE_THROWS_WITH(psik::certify_primitive(psik::parse_poly("x^4+x^3+x^2+x+1")),
                        ContainsSubstring("not primitive"));
    REQUIRE_THROWS_WITH(psik::certify_primitive(3, 0b010), ContainsSubstring("constant term"));
    REQUIRE_THROWS_WITH(psik::certify_primitive(3, 0b1011), ContainsSubstring("wider than degree"));
    REQUIRE_NOTHROW(psik::certify_primitive(2, 0b11));  // x^2 + x + 1
}

TEST_CASE("search is deterministic and finds the minimal tap sets") {
    psik::FieldPoly f3 = psik::find_primitive(3, 3);
    REQUIRE(f3.coeffs == 0b011);
    REQUIRE(f3.q_set == std::vector<int>{0});

    psik::FieldPoly f4 = psik::find_primitive(4, 3);
    REQUIRE(f4.coeffs == 0b0011);  // x^4 + x + 1

    psik::FieldPoly f36 = psik::find_primitive(36, 3);
    REQUIRE(psik::poly_to_text(f36) == "x^36 + x^11 + 1");
    REQUIRE(f36.q_set == std::vector<int>{10});

    REQUIRE(psik::find_primitive(17, 5) == psik::find_primitive(17, 5));
    // degree 8 admits no irreducible trinomial at all
    REQUIRE_THROWS_AS(psik::find_primitive(8, 3), psik::cap_error);
    REQUIRE_NOTHROW(psik::find_primitive(8, 5));
    REQUIRE_THROWS_AS(psik::find_primitive(8, 4), std::invalid_argument);
}

TEST_CASE("polynomial text and hex forms") {
    psik::RawPoly p = psik::parse_poly("x^27 + x^20 + x^13 + x^7 + 1");
    REQUIRE(p.n == 27);
    REQUIRE(p.coeffs == ((1ull << 20) | (1ull << 13) | (1ull << 7) | 1ull));
    REQUIRE(psik::poly_to_text(p) == "x^27 + x^20 + x^13 + x^7 + 1");

    REQUIRE(psik::poly_to_hex(psik::parse_poly("x^3+x+1")) == "0xb");
    REQUIRE(psik::parse_poly("0xB").coeffs == 0b011);
    REQUIRE(psik::parse_poly("0xB").n == 3);
    REQUIRE(psik::parse_poly(" x^2+ x +1 ").coeffs == 0b11);

    REQUIRE_THROWS_AS(psik::parse_poly(""), std::invalid_argument);
    REQUIRE_THROWS_AS(psik::parse_poly("x^2+x+"), std::invalid_argument);
    REQUIRE_THROWS_AS(psik::parse_poly("x^3+x+x"), std::invalid_argument);
    REQUIRE_THROWS_AS(psik::parse_poly("x+1"), std::invalid_argument);
    REQUIRE_THROWS_AS(psik::parse_poly("x^65+1"), std::invalid_argument);
    REQUIRE_THROWS_AS(psik::parse_poly("0x1"), std::invalid_argument);
    REQUIRE_THROWS_AS(psik::parse_poly("y^3+1"), std::invalid_argument);
}

TEST_CASE("companion matrix multiplies by alpha") {
    std::mt19937_64 rng(11);
    for (int n : {3, 8, 13}) {
        psik::FieldPoly f = psik::find_primitive(n, 5);
        psik::BinMatrix c = psik::companion_matrix(f);
        const u64 mask = psik::low_mask(n);
        for (int trial = 0; trial < 200; ++trial) {
            u64 g = rng() & mask;
            REQUIRE(psik::mat_vec(c, g) == oracle_mul(g, 2, n, f.coeffs));
        }

        psik::CompanionFactors parts = psik::companion_decompose(f);
        REQUIRE(psik::mat_mul(parts.perm, parts.upper) == c);
        for (int j = 0; j < n; ++j)
            REQUIRE(psik::mat_vec(parts.perm, 1ull << j) == (1ull << ((j + 1) % n)));
        for (int i = 0; i < n; ++i) {
            REQUIRE(parts.upper.get(i, i) == 1);
            for (int j = 0; j < i; ++j) REQUIRE(parts.upper.get(i, j) == 0);
        }
    }
}

TEST_CASE("frobenius matrix squares elements") {
    std::mt19937_64 rng(13);
    for (int n : {3, 5, 8, 12}) {
        psik::FieldPoly f = psik::find_primitive(n, 5);
        psik::BinMatrix fr = psik::frobenius_matrix(f);
        const u64 mask = psik::low_mask(n);
        for (int trial = 0; trial < 200; ++trial) {
            u64 g = rng() & mask;
            REQUIRE(psik::mat_vec(fr, g) == oracle_mul(g, g, n, f.coeffs));
        }
        // conjugation squares the companion matrix: F C = C^2 F
        psik::BinMatrix c = psik::companion_matrix(f);
        REQUIRE(psik::mat_mul(fr, c) == psik::mat_mul(psik::mat_mul(c, c), fr));
        REQUIRE(psik::mat_mul(fr, psik::mat_inverse(fr)).is_identity());
    }
}

TEST_CASE("matrix orders") {
    REQUIRE(psik::matrix_order(psik::BinMatrix::identity(5)) == 1);
    for (int n = 2; n <= 8; ++n) {
        psik::FieldPoly f = psik::find_primitive(n, 5);
        psik::BinMatrix c = psik::companion_matrix(f);
        REQUIRE(psik::matrix_order(c) == psik::low_mask(n));
        REQUIRE(psik::matrix_order(psik::frobenius_matrix(f)) == static_cast<u64>(n));
        if (n <= 6) {
            // brute force for the companion order
            psik::BinMatrix acc = c;
            u64 order = 1;
            while (!acc.is_identity()) {
                acc = psik::mat_mul(acc, c);
                ++order;
            }
            REQUIRE(order == psik::matrix_order(c));
        }
    }
    psik::BinMatrix z(3);
    REQUIRE_THROWS_AS(psik::matrix_order(z), std::invalid_argument);
}

TEST_CASE("integer helpers") {
    REQUIRE(psik::mod_inverse(2, 7) == 4);
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 200; ++trial) {
        u64 n = (rng() % 1000000) + 2;
        u64 a = rng() % n;
        if (a == 0 || std::gcd(a, n) != 1) continue;
        REQUIRE(psik::mulmod(a, psik::mod_inverse(a, n), n) == 1);
    }
    REQUIRE_THROWS_AS(psik::mod_inverse(6, 9), std::invalid_argument);
    REQUIRE_THROWS_AS(psik::mod_inverse(0, 7), std::invalid_argument);

    using fv = std::vector<std::pair<u64, int>>;
    REQUIRE(psik::factorize((1ull << 36) - 1) ==
            fv{{3, 3}, {5, 1}, {7, 1}, {13, 1}, {19, 1}, {37, 1}, {73, 1}, {109, 1}});
    REQUIRE(psik::factorize((1ull << 23) - 1) == fv{{47, 1}, {178481, 1}});
    REQUIRE(psik::factorize((1ull << 61) - 1) == fv{{(1ull << 61) - 1, 1}});
    REQUIRE(psik::factorize(1000000007ull * 1000000009ull) ==
            fv{{1000000007ull, 1}, {1000000009ull, 1}});
    REQUIRE(psik::factorize(1) == fv{});

    REQUIRE(psik::euler_phi(7) == 6);
    REQUIRE(psik::euler_phi(15) == 8);
    REQUIRE(psik::euler_phi(65535) == 32768);

    for (u64 v = 2; v < 2000; ++v) {
        bool prime = true;
        for (u64 d = 2; d * d <= v; ++d)
            if (v % d == 0) { prime = false; break; }
        REQUIRE(psik::is_prime(v) == prime);
    }
}

TEST_CASE("totient density check") {
    psik::TotientCheck tc = psik::totient_check(7);
    REQUIRE(tc.phi == 6);
    REQUIRE(tc.num == 6);
    REQUIRE(tc.den == 7);
    REQUIRE(tc.ratio == Catch::Approx(6.0 / 7.0));
    REQUIRE(tc.bound == Catch::Approx(0.1756837622178213));
    REQUIRE(tc.satisfied);
    REQUIRE_THROWS_AS(psik::totient_check(4), std::invalid_argument);

    const u64 modulus = (1ull << 20) - 1;
    psik::TotientCheck big = psik::totient_check(modulus);
    REQUIRE(std::gcd(big.num, big.den) == 1);
    REQUIRE((psik::u128)big.num * modulus == (psik::u128)big.phi * big.den);
    REQUIRE(static_cast<double>(big.num) / big.den > big.bound);
}

TEST_CASE("discrete log inverts exponentiation") {
    psik::FieldPoly f = psik::find_primitive(8, 5);
    psik::DlogTable table(f);
    u64 w = 1;
    for (u64 j = 0; j < f.order(); ++j) {
        REQUIRE(table.log_of({8, w}) == j);
        w = oracle_mul(w, 2, 8, f.coeffs);
    }
    REQUIRE_THROWS_AS(table.log_of({8, 0}), std::invalid_argument);
    REQUIRE_THROWS_AS(table.log_of({9, 1}), std::invalid_argument);
    REQUIRE(psik::discrete_log(psik::gf_alpha(8), f) == 1);

    psik::FieldPoly f29 = psik::certify_primitive(29, 0b101);  // x^29 + x^2 + 1
    REQUIRE_THROWS_AS(psik::DlogTable(f29), psik::cap_error);
}
