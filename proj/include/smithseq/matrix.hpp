#pragma once

// Dense arbitrary-precision integer matrices and the exact kernel built on
// them: products, powers, compounds, entry gcd, entrywise p-adic valuation.
// Matrices are immutable values; every operation returns a fresh result.

#include "smithseq/numbers.hpp"

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace smithseq {

class IntMatrix {
public:
    IntMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), entries_(rows * cols) {
        if (rows == 0 || cols == 0) throw std::invalid_argument("IntMatrix: dimensions must be positive");
    }

    IntMatrix(std::size_t rows, std::size_t cols, std::vector<Int> entries)
        : rows_(rows), cols_(cols), entries_(std::move(entries)) {
        if (rows == 0 || cols == 0) throw std::invalid_argument("IntMatrix: dimensions must be positive");
        if (entries_.size() != rows * cols) throw std::invalid_argument("IntMatrix: entry count does not match dimensions");
    }

    static IntMatrix identity(std::size_t n) {
        IntMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
        return m;
    }

    static IntMatrix zero(std::size_t rows, std::size_t cols) { return IntMatrix(rows, cols); }

    static IntMatrix diagonal(const std::vector<Int>& d) {
        IntMatrix m(d.size(), d.size());
        for (std::size_t i = 0; i < d.size(); ++i) m.at(i, i) = d[i];
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }

    const Int& at(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }
    Int& at(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }

    const std::vector<Int>& entries() const { return entries_; }

    bool operator==(const IntMatrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && entries_ == o.entries_;
    }
    bool operator!=(const IntMatrix& o) const { return !(*this == o); }

    bool is_zero() const {
        for (const Int& e : entries_)
            if (e != 0) return false;
        return true;
    }

    std::string str() const {
        std::string out;
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t j = 0; j < cols_; ++j) {
                if (j) out += ' ';
                out += at(i, j).str();
            }
            out += '\n';
        }
        return out;
    }

private:
    std::size_t rows_, cols_;
    std::vector<Int> entries_;
};

inline IntMatrix mat_mul(const IntMatrix& a, const IntMatrix& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("mat_mul: inner dimensions do not match");
    IntMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const Int& aik = a.at(i, k);
            if (aik == 0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) c.at(i, j) += aik * b.at(k, j);
        }
    return c;
}

inline IntMatrix mat_add(const IntMatrix& a, const IntMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw std::invalid_argument("mat_add: dimensions do not match");
    IntMatrix c(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) c.at(i, j) = a.at(i, j) + b.at(i, j);
    return c;
}

inline IntMatrix mat_scale(const Int& c, const IntMatrix& a) {
    IntMatrix r(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) r.at(i, j) = c * a.at(i, j);
    return r;
}

// A^n by binary exponentiation; A^0 = I.
inline IntMatrix mat_pow(const IntMatrix& a, std::uint64_t n) {
    if (!a.is_square()) throw std::invalid_argument("mat_pow: matrix must be square");
    IntMatrix result = IntMatrix::identity(a.rows());
    IntMatrix base = a;
    while (n > 0) {
        if (n & 1) result = mat_mul(result, base);
        if (n >>= 1) base = mat_mul(base, base);
    }
    return result;
}

namespace detail {

// Laplace expansion along the first row; used for orders <= 3.
inline Int det_laplace(const IntMatrix& m) {
    std::size_t n = m.rows();
    if (n == 1) return m.at(0, 0);
    if (n == 2) return m.at(0, 0) * m.at(1, 1) - m.at(0, 1) * m.at(1, 0);
    Int det = 0;
    for (std::size_t j = 0; j < n; ++j) {
        if (m.at(0, j) == 0) continue;
        IntMatrix sub(n - 1, n - 1);
        for (std::size_t r = 1; r < n; ++r) {
            std::size_t cc = 0;
            for (std::size_t c = 0; c < n; ++c) {
                if (c == j) continue;
                sub.at(r - 1, cc++) = m.at(r, c);
            }
        }
        Int term = m.at(0, j) * det_laplace(sub);
        det += (j % 2 == 0) ? term : -term;
    }
    return det;
}

// Bareiss fraction-free elimination; all divisions are exact.
inline Int det_bareiss(IntMatrix m) {
    std::size_t n = m.rows();
    Int prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m.at(k, k) == 0) {
            std::size_t piv = k + 1;
            while (piv < n && m.at(piv, k) == 0) ++piv;
            if (piv == n) return 0;
            for (std::size_t j = 0; j < n; ++j) std::swap(m.at(k, j), m.at(piv, j));
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j)
                m.at(i, j) = (m.at(i, j) * m.at(k, k) - m.at(i, k) * m.at(k, j)) / prev;
        prev = m.at(k, k);
    }
    return sign > 0 ? m.at(n - 1, n - 1) : Int(-m.at(n - 1, n - 1));
}

// Enumerates r-subsets of {0..n-1} in lexicographic order.
inline std::vector<std::vector<std::size_t>> subsets_lex(std::size_t n, std::size_t r) {
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t> cur(r);
    for (std::size_t i = 0; i < r; ++i) cur[i] = i;
    while (true) {
        out.push_back(cur);
        std::size_t i = r;
        while (i > 0 && cur[i - 1] == n - r + i - 1) --i;
        if (i == 0) break;
        ++cur[i - 1];
        for (std::size_t j = i; j < r; ++j) cur[j] = cur[j - 1] + 1;
    }
    return out;
}

} // namespace detail

inline Int determinant(const IntMatrix& m) {
    if (!m.is_square()) throw std::invalid_argument("determinant: matrix must be square");
    if (m.rows() <= 3) return detail::det_laplace(m);
    return detail::det_bareiss(m);
}

// r-th compound matrix: entry (I, J) is det of the submatrix picked by the
// r-subsets I of rows and J of columns, both enumerated lexicographically.
inline IntMatrix compound(const IntMatrix& a, std::size_t r) {
    if (r < 1 || r > a.rows() || r > a.cols()) throw std::invalid_argument("compound: order out of range");
    auto row_sets = detail::subsets_lex(a.rows(), r);
    auto col_sets = detail::subsets_lex(a.cols(), r);
    IntMatrix c(row_sets.size(), col_sets.size());
    IntMatrix sub(r, r);
    for (std::size_t bi = 0; bi < row_sets.size(); ++bi)
        for (std::size_t bj = 0; bj < col_sets.size(); ++bj) {
            for (std::size_t i = 0; i < r; ++i)
                for (std::size_t j = 0; j < r; ++j) sub.at(i, j) = a.at(row_sets[bi][i], col_sets[bj][j]);
            c.at(bi, bj) = determinant(sub);
        }
    return c;
}

// gcd of all entries, normalized nonnegative; 0 only for the zero matrix.
inline Int content_gcd(const IntMatrix& m) {
    Int g = 0;
    for (const Int& e : m.entries()) {
        g = int_gcd(g, e);
        if (g == 1) break;
    }
    return g;
}

// Entrywise minimum of scalar p-adic valuations; infinity for the zero matrix.
inline Valuation mat_valuation(const IntMatrix& m, const Int& p) {
    require_prime(p, "mat_valuation");
    Valuation best = Valuation::infinity();
    for (const Int& e : m.entries()) {
        if (e == 0) continue;
        best = val_min(best, int_valuation(e, p));
        if (!best.infinite && best.value == 0) break;
    }
    return best;
}

// Coefficients c_0..c_m of det(xI - A), constant term first, monic.
// Faddeev-LeVerrier recurrence; the trace divisions are exact over Z.
inline std::vector<Int> characteristic_polynomial(const IntMatrix& a) {
    if (!a.is_square()) throw std::invalid_argument("characteristic_polynomial: matrix must be square");
    std::size_t n = a.rows();
    std::vector<Int> c(n + 1);
    c[n] = 1;
    IntMatrix m = IntMatrix::identity(n);
    for (std::size_t k = 1; k <= n; ++k) {
        IntMatrix am = mat_mul(a, m);
        Int tr = 0;
        for (std::size_t i = 0; i < n; ++i) tr += am.at(i, i);
        c[n - k] = exact_div(-tr, Int(k));
        if (k < n) {
            m = am;
            for (std::size_t i = 0; i < n; ++i) m.at(i, i) += c[n - k];
        }
    }
    return c;
}

inline bool is_nilpotent(const IntMatrix& a) {
    if (!a.is_square()) throw std::invalid_argument("is_nilpotent: matrix must be square");
    return mat_pow(a, a.rows()).is_zero();
}

} // namespace smithseq
