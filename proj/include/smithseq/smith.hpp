#pragma once

// Smith normal form over Z, determinantal divisors, the gcd-of-minors route
// as an independent cross-check, and per-prime localized forms.

#include "smithseq/matrix.hpp"
#include "smithseq/numbers.hpp"

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace smithseq {

// Invariant-factor chain d_1 | d_2 | ... with trailing zeros, all entries
// nonnegative. When witnesses are requested, U * diag * V = M with U, V
// unimodular.
struct SmithForm {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<Int> diag;  // length min(rows, cols)
    std::size_t rank = 0;
    std::optional<IntMatrix> u;
    std::optional<IntMatrix> v;

    bool operator==(const SmithForm& o) const { return diag == o.diag; }
};

// gamma_0 = 1, gamma_i = gcd of all i x i minors; zeros past the rank.
struct DeterminantalDivisors {
    std::vector<Int> gamma;  // gamma_0 .. gamma_m

    std::size_t rank() const {
        std::size_t r = 0;
        while (r + 1 < gamma.size() && gamma[r + 1] != 0) ++r;
        return r;
    }
};

namespace detail {

// g = gcd(a,b) >= 0 together with x, y such that x*a + y*b = g.
inline Int ext_gcd(Int a, Int b, Int& x, Int& y) {
    Int x0 = 1, y0 = 0, x1 = 0, y1 = 1;
    while (b != 0) {
        Int q = a / b;
        Int t = a - q * b; a = b; b = t;
        t = x0 - q * x1; x0 = x1; x1 = t;
        t = y0 - q * y1; y0 = y1; y1 = t;
    }
    if (a < 0) { a = -a; x0 = -x0; y0 = -y0; }
    x = x0;
    y = y0;
    return a;
}

// Elimination state for smith_form. S is reduced in place; when witnesses
// are tracked, every transformation keeps U * S * V equal to the input.
struct SnfWorking {
    IntMatrix s;
    std::optional<IntMatrix> u;  // accumulates inverses of the row ops
    std::optional<IntMatrix> v;  // accumulates inverses of the column ops

    explicit SnfWorking(const IntMatrix& m, bool witnesses)
        : s(m),
          u(witnesses ? std::optional<IntMatrix>(IntMatrix::identity(m.rows())) : std::nullopt),
          v(witnesses ? std::optional<IntMatrix>(IntMatrix::identity(m.cols())) : std::nullopt) {}

    void row_swap(std::size_t i, std::size_t j) {
        if (i == j) return;
        for (std::size_t c = 0; c < s.cols(); ++c) std::swap(s.at(i, c), s.at(j, c));
        if (u)
            for (std::size_t r = 0; r < u->rows(); ++r) std::swap(u->at(r, i), u->at(r, j));
    }

    void col_swap(std::size_t i, std::size_t j) {
        if (i == j) return;
        for (std::size_t r = 0; r < s.rows(); ++r) std::swap(s.at(r, i), s.at(r, j));
        if (v)
            for (std::size_t c = 0; c < v->cols(); ++c) std::swap(v->at(i, c), v->at(j, c));
    }

    // R_i -= q * R_j
    void row_submul(std::size_t i, std::size_t j, const Int& q) {
        if (q == 0) return;
        for (std::size_t c = 0; c < s.cols(); ++c) s.at(i, c) -= q * s.at(j, c);
        if (u)
            for (std::size_t r = 0; r < u->rows(); ++r) u->at(r, j) += q * u->at(r, i);
    }

    // C_i -= q * C_j
    void col_submul(std::size_t i, std::size_t j, const Int& q) {
        if (q == 0) return;
        for (std::size_t r = 0; r < s.rows(); ++r) s.at(r, i) -= q * s.at(r, j);
        if (v)
            for (std::size_t c = 0; c < v->cols(); ++c) v->at(j, c) += q * v->at(i, c);
    }

    void row_negate(std::size_t i) {
        for (std::size_t c = 0; c < s.cols(); ++c) s.at(i, c) = -s.at(i, c);
        if (u)
            for (std::size_t r = 0; r < u->rows(); ++r) u->at(r, i) = -u->at(r, i);
    }

    // Replaces the diagonal pair (a, b) at positions i < j by (gcd, lcm)
    // via a unimodular 2x2 transform on each side.
    void diagonal_pair_fix(std::size_t i, std::size_t j) {
        Int a = s.at(i, i), b = s.at(j, j);
        Int x, y;
        Int g = ext_gcd(a, b, x, y);
        Int ag = a / g, bg = b / g;

        // rows (i,j) <- [[x, y], [-bg, ag]] * rows
        for (std::size_t c = 0; c < s.cols(); ++c) {
            Int ri = s.at(i, c), rj = s.at(j, c);
            s.at(i, c) = x * ri + y * rj;
            s.at(j, c) = -bg * ri + ag * rj;
        }
        if (u)
            for (std::size_t r = 0; r < u->rows(); ++r) {
                Int ci = u->at(r, i), cj = u->at(r, j);
                u->at(r, i) = ag * ci + bg * cj;
                u->at(r, j) = -y * ci + x * cj;
            }

        // cols (i,j) <- cols * [[1, -y*bg], [1, x*ag]]
        for (std::size_t r = 0; r < s.rows(); ++r) {
            Int ci = s.at(r, i), cj = s.at(r, j);
            s.at(r, i) = ci + cj;
            s.at(r, j) = -y * bg * ci + x * ag * cj;
        }
        if (v)
            for (std::size_t c = 0; c < v->cols(); ++c) {
                Int ri = v->at(i, c), rj = v->at(j, c);
                v->at(i, c) = x * ag * ri + y * bg * rj;
                v->at(j, c) = -ri + rj;
            }
    }

    // Minimal |entry| pivot in S[t.., t..]; ties by value, then row, then
    // column index, so results are platform-independent.
    bool find_pivot(std::size_t t, std::size_t& pi, std::size_t& pj) const {
        bool found = false;
        Int best;
        for (std::size_t i = t; i < s.rows(); ++i)
            for (std::size_t j = t; j < s.cols(); ++j) {
                if (s.at(i, j) == 0) continue;
                Int a = int_abs(s.at(i, j));
                if (!found || a < best) {
                    best = a;
                    pi = i;
                    pj = j;
                    found = true;
                }
            }
        return found;
    }
};

} // namespace detail

// Smith normal form by minimal-pivot elimination, then a gcd/lcm fix-up of
// diagonal pairs to restore the divisibility chain.
inline SmithForm smith_form(const IntMatrix& m, bool with_witnesses = false) {
    detail::SnfWorking w(m, with_witnesses);
    std::size_t dim = std::min(m.rows(), m.cols());
    std::size_t rank = 0;

    for (std::size_t t = 0; t < dim; ++t) {
        std::size_t pi = 0, pj = 0;
        if (!w.find_pivot(t, pi, pj)) break;
        w.row_swap(t, pi);
        w.col_swap(t, pj);
        while (true) {
            bool clean = true;
            for (std::size_t i = t + 1; i < m.rows(); ++i) {
                if (w.s.at(i, t) == 0) continue;
                w.row_submul(i, t, w.s.at(i, t) / w.s.at(t, t));
                if (w.s.at(i, t) != 0) clean = false;  // remainder smaller than pivot
            }
            for (std::size_t j = t + 1; j < m.cols(); ++j) {
                if (w.s.at(t, j) == 0) continue;
                w.col_submul(j, t, w.s.at(t, j) / w.s.at(t, t));
                if (w.s.at(t, j) != 0) clean = false;
            }
            if (clean) break;
            if (!w.find_pivot(t, pi, pj)) throw std::logic_error("smith_form: pivot vanished");
            w.row_swap(t, pi);
            w.col_swap(t, pj);
        }
        if (w.s.at(t, t) < 0) w.row_negate(t);
        ++rank;
    }

    // One sweep suffices: after pass i, d_i divides every later entry, and
    // later gcd/lcm fixes keep multiples of d_i intact.
    for (std::size_t i = 0; i < rank; ++i)
        for (std::size_t j = i + 1; j < rank; ++j)
            if (w.s.at(j, j) % w.s.at(i, i) != 0) w.diagonal_pair_fix(i, j);

    SmithForm out;
    out.rows = m.rows();
    out.cols = m.cols();
    out.rank = rank;
    out.diag.resize(dim);
    for (std::size_t i = 0; i < dim; ++i) out.diag[i] = w.s.at(i, i);
    if (with_witnesses) {
        out.u = std::move(*w.u);
        out.v = std::move(*w.v);
    }
    return out;
}

// gamma_i = gcd of all i x i minors, computed through compound matrices.
inline DeterminantalDivisors determinantal_divisors(const IntMatrix& m) {
    if (!m.is_square()) throw std::invalid_argument("determinantal_divisors: matrix must be square");
    DeterminantalDivisors d;
    d.gamma.resize(m.rows() + 1);
    d.gamma[0] = 1;
    for (std::size_t r = 1; r <= m.rows(); ++r) {
        d.gamma[r] = content_gcd(compound(m, r));
        if (d.gamma[r] == 0) break;  // everything further is zero as well
    }
    return d;
}

// Invariant factors as ratios of consecutive determinantal divisors.
// Rejects inputs that cannot come from a genuine matrix.
inline SmithForm snf_from_divisors(const DeterminantalDivisors& g) {
    if (g.gamma.empty() || g.gamma[0] != 1)
        throw std::invalid_argument("snf_from_divisors: gamma_0 must be 1");
    SmithForm out;
    out.rows = out.cols = g.gamma.size() - 1;
    out.diag.resize(out.rows);
    bool seen_zero = false;
    for (std::size_t i = 1; i < g.gamma.size(); ++i) {
        if (g.gamma[i] == 0) {
            seen_zero = true;
            out.diag[i - 1] = 0;
            continue;
        }
        if (seen_zero || g.gamma[i] % g.gamma[i - 1] != 0)
            throw std::invalid_argument("snf_from_divisors: corrupted divisor chain");
        out.diag[i - 1] = g.gamma[i] / g.gamma[i - 1];
        ++out.rank;
    }
    for (std::size_t i = 1; i < out.rank; ++i)
        if (out.diag[i] % out.diag[i - 1] != 0)
            throw std::invalid_argument("snf_from_divisors: ratios break the divisibility chain");
    return out;
}

// Smith form over Z localized at p: the p-part of each invariant factor.
inline SmithForm local_smith(const IntMatrix& m, const Int& p) {
    require_prime(p, "local_smith");
    SmithForm global = smith_form(m);
    SmithForm out;
    out.rows = global.rows;
    out.cols = global.cols;
    out.rank = global.rank;
    out.diag.resize(global.diag.size());
    for (std::size_t i = 0; i < global.diag.size(); ++i) {
        if (global.diag[i] == 0) continue;
        Int rest = global.diag[i];
        std::int64_t e = remove_prime_power(rest, p);
        out.diag[i] = int_pow(p, static_cast<std::uint64_t>(e));
    }
    return out;
}

// Entrywise product of localized diagonals; zeros must line up.
inline SmithForm reconstruct_global(const std::vector<std::pair<Int, SmithForm>>& parts) {
    if (parts.empty()) throw std::invalid_argument("reconstruct_global: no localized parts");
    const SmithForm& first = parts[0].second;
    SmithForm out;
    out.rows = first.rows;
    out.cols = first.cols;
    out.rank = first.rank;
    out.diag.assign(first.diag.size(), 1);
    for (const auto& [p, part] : parts) {
        if (part.diag.size() != first.diag.size() || part.rank != first.rank)
            throw std::invalid_argument("reconstruct_global: mismatched sizes or ranks");
        for (std::size_t i = 0; i < out.diag.size(); ++i) out.diag[i] *= part.diag[i];
    }
    for (std::size_t i = first.rank; i < out.diag.size(); ++i) out.diag[i] = 0;
    return out;
}

} // namespace smithseq
