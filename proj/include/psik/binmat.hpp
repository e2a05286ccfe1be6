#pragma once

// Dense square matrices over F2, one 64-bit row mask per row. Sized for
// n <= 64, which covers every field degree the library accepts.

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace psik {

inline std::uint64_t low_mask(int n) {
    return n >= 64 ? ~0ull : ((1ull << n) - 1);
}

struct BinMatrix {
    int n = 0;
    std::vector<std::uint64_t> rows;  // bit j of rows[i] is entry (i, j)

    BinMatrix() = default;
    explicit BinMatrix(int dim) : n(dim), rows(dim, 0) {
        if (dim < 1 || dim > 64) throw std::invalid_argument("BinMatrix: dimension must be in [1, 64]");
    }

    static BinMatrix identity(int dim) {
        BinMatrix m(dim);
        for (int i = 0; i < dim; ++i) m.rows[i] = 1ull << i;
        return m;
    }

    bool get(int i, int j) const { return (rows[i] >> j) & 1; }
    void set(int i, int j, bool v) {
        if (v) rows[i] |= 1ull << j;
        else rows[i] &= ~(1ull << j);
    }

    bool operator==(const BinMatrix& o) const { return n == o.n && rows == o.rows; }

    bool is_identity() const {
        for (int i = 0; i < n; ++i)
            if (rows[i] != (1ull << i)) return false;
        return true;
    }
};

inline std::uint64_t mat_vec(const BinMatrix& m, std::uint64_t v) {
    std::uint64_t out = 0;
    for (int i = 0; i < m.n; ++i)
        out |= static_cast<std::uint64_t>(std::popcount(m.rows[i] & v) & 1) << i;
    return out;
}

inline BinMatrix mat_mul(const BinMatrix& a, const BinMatrix& b) {
    if (a.n != b.n) throw std::invalid_argument("mat_mul: dimension mismatch");
    BinMatrix c(a.n);
    for (int i = 0; i < a.n; ++i) {
        std::uint64_t acc = 0, row = a.rows[i];
        while (row) {
            int j = std::countr_zero(row);
            row &= row - 1;
            acc ^= b.rows[j];
        }
        c.rows[i] = acc;
    }
    return c;
}

inline BinMatrix mat_pow(BinMatrix base, std::uint64_t exp) {
    BinMatrix r = BinMatrix::identity(base.n);
    while (exp) {
        if (exp & 1) r = mat_mul(r, base);
        base = mat_mul(base, base);
        exp >>= 1;
    }
    return r;
}

// Gauss-Jordan inverse; throws on singular input.
inline BinMatrix mat_inverse(const BinMatrix& m) {
    int n = m.n;
    std::vector<std::uint64_t> a = m.rows;
    std::vector<std::uint64_t> inv(n);
    for (int i = 0; i < n; ++i) inv[i] = 1ull << i;
    for (int col = 0; col < n; ++col) {
        int pivot = -1;
        for (int r = col; r < n; ++r) {
            if ((a[r] >> col) & 1) { pivot = r; break; }
        }
        if (pivot < 0) throw std::invalid_argument("mat_inverse: matrix is singular");
        std::swap(a[col], a[pivot]);
        std::swap(inv[col], inv[pivot]);
        for (int r = 0; r < n; ++r) {
            if (r != col && ((a[r] >> col) & 1)) {
                a[r] ^= a[col];
                inv[r] ^= inv[col];
            }
        }
    }
    BinMatrix out(n);
    out.rows = inv;
    return out;
}

inline bool is_invertible(const BinMatrix& m) {
    std::vector<std::uint64_t> a = m.rows;
    int rank = 0;
    for (int col = 0; col < m.n; ++col) {
        int pivot = -1;
        for (int r = rank; r < m.n; ++r) {
            if ((a[r] >> col) & 1) { pivot = r; break; }
        }
        if (pivot < 0) continue;
        std::swap(a[rank], a[pivot]);
        for (int r = 0; r < m.n; ++r)
            if (r != rank && ((a[r] >> col) & 1)) a[r] ^= a[rank];
        ++rank;
    }
    return rank == m.n;
}

}  // namespace psik
