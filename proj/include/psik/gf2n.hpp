#pragma once

// GF(2^n) arithmetic over a monic primitive modulus f(x) = x^n + sum f_j x^j.
// Field elements are coefficient bit vectors: bit j holds the coefficient of
// alpha^j, where alpha is the class of x. Every module above this one relies
// on that bit order, including the basis-state encoding in the simulator.

#include <cctype>
#include <cstdint>
#include <string>
#include <vector>

#include "psik/binmat.hpp"
#include "psik/errors.hpp"
#include "psik/numtheory.hpp"

namespace psik {

// Parsed but not yet certified modulus: degree plus the low coefficient mask
// f_0..f_{n-1}. The x^n term is implicit.
struct RawPoly {
    int n = 0;
    u64 coeffs = 0;
};

struct GFElement {
    int n = 0;
    u64 bits = 0;

    bool operator==(const GFElement&) const = default;
    bool is_zero() const { return bits == 0; }
};

inline GFElement gf_zero(int n) { return {n, 0}; }
inline GFElement gf_one(int n) { return {n, 1}; }
inline GFElement gf_alpha(int n) { return {n, 2}; }

// A certified primitive modulus. Construct through certify_primitive,
// find_primitive or builtin_polynomial so the invariants actually hold.
struct FieldPoly {
    int n = 0;
    u64 coeffs = 0;            // f_0..f_{n-1}; f_n = 1 implicit
    std::vector<int> q_set;    // { j in [0, n-2] : f_{j+1} = 1 }, ascending

    u64 order() const { return low_mask(n); }  // 2^n - 1
    bool operator==(const FieldPoly& o) const { return n == o.n && coeffs == o.coeffs; }
};

namespace detail {

inline void check_degree(int n) {
    if (n < 2 || n > 64) throw std::invalid_argument("field degree must be in [2, 64]");
}

inline u64 gf_mul_raw(u64 a, u64 b, int n, u64 coeffs) {
    u64 r = 0;
    const u64 mask = low_mask(n);
    const u64 top = 1ull << (n - 1);
    while (b) {
        if (b & 1) r ^= a;
        b >>= 1;
        bool carry = a & top;
        a = (a << 1) & mask;
        if (carry) a ^= coeffs;
    }
    return r;
}

inline u64 gf_pow_raw(u64 g, u64 exp, int n, u64 coeffs) {
    u64 r = 1;
    while (exp) {
        if (exp & 1) r = gf_mul_raw(r, g, n, coeffs);
        g = gf_mul_raw(g, g, n, coeffs);
        exp >>= 1;
    }
    return r;
}

// Polynomial gcd over F2 on full masks (x^n term included), 128-bit so a
// degree-64 modulus fits.
inline u128 poly_gcd(u128 a, u128 b) {
    auto deg = [](u128 v) {
        int d = -1;
        while (v) { v >>= 1; ++d; }
        return d;
    };
    while (b) {
        int da = deg(a), db = deg(b);
        if (da < db) { std::swap(a, b); std::swap(da, db); }
        a ^= b << (da - db);
    }
    return a;
}

// No irreducible factor of degree <= n/2 exists iff gcd(x^(2^i) - x, f) = 1
// for i = 1..n/2, which for a degree-n polynomial means irreducible.
inline bool is_irreducible_raw(int n, u64 coeffs) {
    if ((coeffs & 1) == 0) return false;  // divisible by x
    const u128 full = ((u128)1 << n) | coeffs;
    u64 t = 2;  // x
    for (int i = 1; i <= n / 2; ++i) {
        t = gf_mul_raw(t, t, n, coeffs);
        if (poly_gcd((u128)(t ^ 2ull), full) != 1) return false;
    }
    return true;
}

inline bool is_primitive_raw(int n, u64 coeffs, const std::vector<std::pair<u64, int>>& order_factors) {
    if (!is_irreducible_raw(n, coeffs)) return false;
    const u64 group = low_mask(n);
    for (auto [p, e] : order_factors) {
        if (gf_pow_raw(2, group / p, n, coeffs) == 1) return false;
    }
    return true;
}

inline std::vector<int> q_set_of(int n, u64 coeffs) {
    std::vector<int> q;
    for (int j = 0; j + 1 <= n - 1; ++j)
        if ((coeffs >> (j + 1)) & 1) q.push_back(j);
    return q;
}

}  // namespace detail

inline GFElement gf_add(GFElement a, GFElement b) {
    if (a.n != b.n) throw std::invalid_argument("gf_add: degree mismatch");
    return {a.n, a.bits ^ b.bits};
}

inline GFElement gf_mul(GFElement a, GFElement b, const FieldPoly& f) {
    if (a.n != f.n || b.n != f.n) throw std::invalid_argument("gf_mul: element degree does not match field");
    return {f.n, detail::gf_mul_raw(a.bits, b.bits, f.n, f.coeffs)};
}

inline GFElement gf_pow(GFElement g, u64 exp, const FieldPoly& f) {
    if (g.n != f.n) throw std::invalid_argument("gf_pow: element degree does not match field");
    return {f.n, detail::gf_pow_raw(g.bits, exp, f.n, f.coeffs)};
}

// Certifies that x generates the full multiplicative group: f irreducible and
// x^((2^n-1)/p) != 1 for every prime p | 2^n - 1. Throws with a reason that
// distinguishes a reducible modulus from a merely non-primitive one.
inline FieldPoly certify_primitive(int n, u64 coeffs) {
    detail::check_degree(n);
    if (coeffs & ~low_mask(n))
        throw std::invalid_argument("certify_primitive: coefficient mask wider than degree");
    if ((coeffs & 1) == 0)
        throw std::invalid_argument("certify_primitive: reducible (constant term is zero)");
    if (!detail::is_irreducible_raw(n, coeffs))
        throw std::invalid_argument("certify_primitive: reducible modulus");
    auto factors = factorize(low_mask(n));
    for (auto [p, e] : factors) {
        if (detail::gf_pow_raw(2, low_mask(n) / p, n, coeffs) == 1)
            throw std::invalid_argument("certify_primitive: irreducible but not primitive (order of x < 2^n - 1)");
    }
    return FieldPoly{n, coeffs, detail::q_set_of(n, coeffs)};
}

inline FieldPoly certify_primitive(const RawPoly& p) { return certify_primitive(p.n, p.coeffs); }

// Deterministic search: trinomials x^n + x^k + 1 by ascending k, then (when
// the budget allows five terms) pentanomials by ascending coefficient mask.
// Returns the first hit; throws cap_error when the budget is exhausted.
inline FieldPoly find_primitive(int n, int max_terms = 5) {
    detail::check_degree(n);
    if (max_terms != 3 && max_terms != 5)
        throw std::invalid_argument("find_primitive: term budget must be 3 or 5");
    auto factors = factorize(low_mask(n));
    for (int k = 1; k <= n - 1; ++k) {
        u64 c = 1ull | (1ull << k);
        if (detail::is_primitive_raw(n, c, factors))
            return FieldPoly{n, c, detail::q_set_of(n, c)};
    }
    if (max_terms >= 5) {
        for (int l = 3; l <= n - 1; ++l)
            for (int j = 2; j < l; ++j)
                for (int i = 1; i < j; ++i) {
                    u64 c = 1ull | (1ull << i) | (1ull << j) | (1ull << l);
                    if (detail::is_primitive_raw(n, c, factors))
                        return FieldPoly{n, c, detail::q_set_of(n, c)};
                }
    }
    throw cap_error("find_primitive: no primitive polynomial of degree " + std::to_string(n) +
                    " within a " + std::to_string(max_terms) + "-term budget");
}

// --- text and hex forms ---------------------------------------------------
//
// Text: "x^27 + x^20 + x^13 + x^7 + 1", whitespace optional. Hex: the full
// coefficient mask including the x^n bit, e.g. x^3 + x + 1 -> 0xb.

inline RawPoly parse_poly(const std::string& text) {
    std::string s;
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
    if (s.empty()) throw std::invalid_argument("parse_poly: empty input");

    u128 full = 0;
    if (s.size() > 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X')) {
        for (std::size_t i = 2; i < s.size(); ++i) {
            char ch = s[i];
            int digit;
            if (ch >= '0' && ch <= '9') digit = ch - '0';
            else if (ch >= 'a' && ch <= 'f') digit = ch - 'a' + 10;
            else if (ch >= 'A' && ch <= 'F') digit = ch - 'A' + 10;
            else throw std::invalid_argument("parse_poly: bad hex digit '" + std::string(1, ch) + "'");
            if (full >> 124) throw std::invalid_argument("parse_poly: hex mask out of range");
            full = (full << 4) | digit;
        }
        if (full == 0) throw std::invalid_argument("parse_poly: zero polynomial");
    } else {
        std::size_t pos = 0;
        while (pos < s.size()) {
            std::size_t next = s.find('+', pos);
            std::string term = s.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
            pos = next == std::string::npos ? s.size() : next + 1;
            if (next != std::string::npos && pos == s.size())
                throw std::invalid_argument("parse_poly: trailing '+'");
            int deg;
            if (term == "1") {
                deg = 0;
            } else if (term == "x") {
                deg = 1;
            } else if (term.size() > 2 && term[0] == 'x' && term[1] == '^') {
                deg = 0;
                for (std::size_t i = 2; i < term.size(); ++i) {
                    if (!std::isdigit(static_cast<unsigned char>(term[i])))
                        throw std::invalid_argument("parse_poly: bad term '" + term + "'");
                    deg = deg * 10 + (term[i] - '0');
                    if (deg > 64) throw std::invalid_argument("parse_poly: degree above 64 in '" + term + "'");
                }
            } else {
                throw std::invalid_argument("parse_poly: bad term '" + term + "'");
            }
            if ((full >> deg) & 1)
                throw std::invalid_argument("parse_poly: duplicate term '" + term + "'");
            full |= (u128)1 << deg;
        }
    }

    int degree = -1;
    for (int d = 0; d <= 127; ++d)
        if ((full >> d) & 1) degree = d;
    if (degree < 2 || degree > 64)
        throw std::invalid_argument("parse_poly: degree must be in [2, 64]");
    return RawPoly{degree, static_cast<u64>(full & low_mask(degree))};
}

inline std::string poly_to_text(const RawPoly& p) {
    std::string out = "x^" + std::to_string(p.n);
    for (int d = p.n - 1; d >= 0; --d) {
        if ((p.coeffs >> d) & 1) {
            out += " + ";
            if (d == 0) out += "1";
            else if (d == 1) out += "x";
            else out += "x^" + std::to_string(d);
        }
    }
    return out;
}

inline std::string poly_to_hex(const RawPoly& p) {
    static const char* digits = "0123456789abcdef";
    u128 full = ((u128)1 << p.n) | p.coeffs;
    std::string out;
    while (full) {
        out.insert(out.begin(), digits[static_cast<int>(full & 0xf)]);
        full >>= 4;
    }
    return "0x" + out;
}

inline std::string poly_to_text(const FieldPoly& f) { return poly_to_text(RawPoly{f.n, f.coeffs}); }
inline std::string poly_to_hex(const FieldPoly& f) { return poly_to_hex(RawPoly{f.n, f.coeffs}); }

// --- matrices attached to a field -----------------------------------------

// Companion matrix of f: multiplication by alpha on coefficient vectors.
// Ones on the subdiagonal, f_0..f_{n-1} down the last column.
inline BinMatrix companion_matrix(const FieldPoly& f) {
    BinMatrix m(f.n);
    for (int i = 0; i < f.n; ++i) {
        if (i > 0) m.rows[i] |= 1ull << (i - 1);
        if ((f.coeffs >> i) & 1) m.rows[i] |= 1ull << (f.n - 1);
    }
    return m;
}

struct CompanionFactors {
    BinMatrix perm;   // cyclic shift e_j -> e_{j+1 mod n}
    BinMatrix upper;  // unit upper triangular, last column f_1..f_{n-1}, f_0
};

// companion = perm * upper. The upper factor is the CX fan (targets q_set,
// control n-1); the permutation is the qubit relabeling the shift network
// implements.
inline CompanionFactors companion_decompose(const FieldPoly& f) {
    CompanionFactors cf{BinMatrix(f.n), BinMatrix(f.n)};
    cf.perm.rows[0] = 1ull << (f.n - 1);
    for (int i = 1; i < f.n; ++i) cf.perm.rows[i] = 1ull << (i - 1);
    for (int i = 0; i < f.n - 1; ++i) {
        cf.upper.rows[i] = 1ull << i;
        if ((f.coeffs >> (i + 1)) & 1) cf.upper.rows[i] |= 1ull << (f.n - 1);
    }
    cf.upper.rows[f.n - 1] = 1ull << (f.n - 1);  // f_0 = 1
    return cf;
}

// Matrix of the Frobenius map g -> g^2: column j holds coeffs(alpha^(2j)).
inline BinMatrix frobenius_matrix(const FieldPoly& f) {
    BinMatrix m(f.n);
    for (int j = 0; j < f.n; ++j) {
        u64 sq = detail::gf_pow_raw(2, 2ull * j, f.n, f.coeffs);
        for (int i = 0; i < f.n; ++i)
            if ((sq >> i) & 1) m.rows[i] |= 1ull << j;
    }
    return m;
}

// Multiplicative order of an invertible matrix. When M^(2^n - 1) = I the
// order divides 2^n - 1 and is resolved from its prime factorization;
// otherwise plain iteration up to the cap.
inline u64 matrix_order(const BinMatrix& m, u64 iteration_cap = 1ull << 20) {
    if (!is_invertible(m)) throw std::invalid_argument("matrix_order: matrix is singular");
    if (m.is_identity()) return 1;
    const u64 group = low_mask(m.n);
    if (mat_pow(m, group).is_identity()) {
        u64 t = group;
        for (auto [p, e] : factorize(group)) {
            while (t % p == 0 && mat_pow(m, t / p).is_identity()) t /= p;
        }
        return t;
    }
    BinMatrix acc = m;
    for (u64 t = 1; t <= iteration_cap; ++t) {
        if (acc.is_identity()) return t;
        acc = mat_mul(acc, m);
    }
    throw cap_error("matrix_order: exceeded iteration cap");
}

// --- discrete log ----------------------------------------------------------

inline constexpr int kDlogTableCap = 28;

// Exponent table over the full orbit of alpha: table[bits(alpha^j)] = j.
// Memory is 4 bytes per field element, hence the degree cap.
class DlogTable {
  public:
    explicit DlogTable(const FieldPoly& f) : n_(f.n) {
        if (f.n > kDlogTableCap)
            throw cap_error("DlogTable: degree " + std::to_string(f.n) + " exceeds table cap " +
                            std::to_string(kDlogTableCap));
        table_.assign(low_mask(f.n) + 1, kUnset);
        u64 w = 1;
        for (u64 j = 0; j < f.order(); ++j) {
            table_[w] = static_cast<std::uint32_t>(j);
            w = detail::gf_mul_raw(w, 2, f.n, f.coeffs);
        }
    }

    u64 log_of(GFElement g) const {
        if (g.n != n_) throw std::invalid_argument("DlogTable: element degree mismatch");
        if (g.bits == 0) throw std::invalid_argument("DlogTable: zero has no discrete log");
        return table_[g.bits];
    }

    int degree() const { return n_; }

  private:
    static constexpr std::uint32_t kUnset = 0xffffffffu;
    int n_;
    std::vector<std::uint32_t> table_;
};

inline u64 discrete_log(GFElement g, const FieldPoly& f) { return DlogTable(f).log_of(g); }

}  // namespace psik
