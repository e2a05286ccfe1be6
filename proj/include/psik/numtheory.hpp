#pragma once

// Integer helpers for orders of 2^n - 1: deterministic primality testing,
// factorization (trial division then Pollard rho), modular inverses and the
// Euler-phi density check used to bound catalyst-preparation retries.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace psik {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

inline u64 mulmod(u64 a, u64 b, u64 m) {
    return static_cast<u64>((u128)a * b % m);
}

inline u64 powmod(u64 base, u64 exp, u64 m) {
    u64 r = 1 % m;
    base %= m;
    while (exp) {
        if (exp & 1) r = mulmod(r, base, m);
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    return r;
}

// Deterministic Miller-Rabin; the fixed witness set covers all 64-bit inputs.
inline bool is_prime(u64 n) {
    if (n < 2) return false;
    for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0) return n == p;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        u64 x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) { composite = false; break; }
        }
        if (composite) return false;
    }
    return true;
}

namespace detail {

// Pollard rho (Brent variant) with a fixed start/increment schedule so the
// same composite always splits the same way.
inline u64 pollard_rho(u64 n) {
    if ((n & 1) == 0) return 2;
    for (u64 c = 1;; ++c) {
        auto step = [&](u64 v) { return (mulmod(v, v, n) + c) % n; };
        u64 y = 2, d = 1, saved = 2;
        int power = 1, lam = 0;
        while (d == 1) {
            if (lam == power) { saved = y; power <<= 1; lam = 0; }
            // batch differences between gcd calls
            u64 prod = 1;
            int batch = std::min(64, power - lam);
            for (int i = 0; i < batch; ++i) {
                y = step(y);
                u64 diff = saved > y ? saved - y : y - saved;
                if (diff == 0) { d = n; break; }
                prod = mulmod(prod, diff, n);
            }
            lam += batch;
            if (d != n) d = std::gcd(prod, n);
        }
        if (d != n) return d;
        // cycle collapsed before a factor appeared; retry with the next c
    }
}

}  // namespace detail

// Prime factorization, sorted ascending, as (prime, exponent) pairs.
inline std::vector<std::pair<u64, int>> factorize(u64 n) {
    if (n == 0) throw std::invalid_argument("factorize: n must be positive");
    std::vector<u64> primes;
    for (u64 p = 2; p <= 1000000 && p * p <= n; p += (p == 2 ? 1 : 2)) {
        while (n % p == 0) { primes.push_back(p); n /= p; }
    }
    std::vector<u64> stack;
    if (n > 1) stack.push_back(n);
    while (!stack.empty()) {
        u64 m = stack.back();
        stack.pop_back();
        if (is_prime(m)) { primes.push_back(m); continue; }
        u64 d = detail::pollard_rho(m);
        stack.push_back(d);
        stack.push_back(m / d);
    }
    std::sort(primes.begin(), primes.end());
    std::vector<std::pair<u64, int>> out;
    for (u64 p : primes) {
        if (!out.empty() && out.back().first == p) {
            ++out.back().second;
        } else {
            out.push_back({p, 1});
        }
    }
    return out;
}

inline u64 euler_phi(u64 n) {
    u64 phi = n;
    for (auto [p, e] : factorize(n)) phi -= phi / p;
    return phi;
}

// Inverse of a modulo n; throws when gcd(a, n) != 1.
inline u64 mod_inverse(u64 a, u64 n) {
    if (n == 0) throw std::invalid_argument("mod_inverse: modulus must be positive");
    a %= n;
    __int128 t = 0, new_t = 1;
    u64 r = n, new_r = a;
    while (new_r != 0) {
        u64 q = r / new_r;
        __int128 tmp_t = t - (__int128)q * new_t;
        t = new_t;
        new_t = tmp_t;
        u64 tmp_r = r - q * new_r;
        r = new_r;
        new_r = tmp_r;
    }
    if (r != 1) throw std::invalid_argument("mod_inverse: argument not coprime to modulus");
    if (t < 0) t += n;
    return static_cast<u64>(t);
}

struct TotientCheck {
    u64 phi;        // phi(N)
    u64 num, den;   // phi(N)/N in lowest terms
    double ratio;   // num/den as a double, for reporting
    double bound;   // 1 / (e^gamma log log N + 3 / log log N)
    bool satisfied;
};

// Density of invertible residues mod N, compared against the classical lower
// bound 1 / (e^gamma log log N + 3 / log log N). The left side stays an exact
// rational; only the comparison against the transcendental bound uses floats.
inline TotientCheck totient_check(u64 n) {
    if (n < 5) throw std::invalid_argument("totient_check: requires N >= 5");
    TotientCheck r;
    r.phi = euler_phi(n);
    u64 g = std::gcd(r.phi, n);
    r.num = r.phi / g;
    r.den = n / g;
    r.ratio = static_cast<double>(r.num) / static_cast<double>(r.den);
    double ll = std::log(std::log(static_cast<double>(n)));
    r.bound = 1.0 / (std::exp(std::numbers::egamma) * ll + 3.0 / ll);
    r.satisfied = static_cast<long double>(r.num) >= (long double)r.bound * static_cast<long double>(r.den);
    return r;
}

}  // namespace psik
