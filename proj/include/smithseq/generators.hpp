#pragma once

// Instance families with closed-form invariant-factor oracles, plus a
// reproducible random matrix source for property suites.

#include "smithseq/matrix.hpp"
#include "smithseq/numbers.hpp"
#include "smithseq/power_trace.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace smithseq {

// SplitMix64: a tiny fully specified generator, so seeded runs reproduce
// bit-for-bit on every platform. OS entropy is never used.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // Uniform in [0, bound) by rejection, so no modulo bias.
    std::uint64_t next_below(std::uint64_t bound) {
        std::uint64_t limit = ~0ull - ~0ull % bound;
        std::uint64_t r;
        do {
            r = next();
        } while (r >= limit);
        return r % bound;
    }

    // Uniform in [-bound, bound].
    std::int64_t next_signed(std::uint64_t bound) {
        return static_cast<std::int64_t>(next_below(2 * bound + 1)) - static_cast<std::int64_t>(bound);
    }

private:
    std::uint64_t state_;
};

// A matrix together with the closed form of its power Smith diagonals.
struct OracleInstance {
    IntMatrix matrix;
    std::function<std::vector<Int>(std::uint64_t)> oracle;  // n -> expected diag
    std::string family;
    std::map<std::string, std::string> params;
};

namespace detail {

// Sorting ascending is sorting into divisibility order for these families:
// every oracle value is a power of a single prime (or 1).
inline std::vector<Int> sorted_chain(std::vector<Int> v) {
    std::sort(v.begin(), v.end());
    return v;
}

} // namespace detail

// [[p,1],[0,p]] padded by an identity block. The quotient sequence of its
// Smith forms repeats with period exactly p.
inline OracleInstance jordan_example(const Int& p, std::size_t pad = 0) {
    require_prime(p, "jordan_example");
    IntMatrix m(2 + pad, 2 + pad);
    m.at(0, 0) = p;
    m.at(0, 1) = 1;
    m.at(1, 1) = p;
    for (std::size_t i = 2; i < m.rows(); ++i) m.at(i, i) = 1;

    auto oracle = [p, pad](std::uint64_t n) {
        std::vector<Int> diag(pad, Int(1));
        if (n == 0) {
            diag.push_back(1);
            diag.push_back(1);
        } else if (Int(n) % p == 0) {
            diag.push_back(int_pow(p, n));
            diag.push_back(int_pow(p, n));
        } else {
            diag.push_back(int_pow(p, n - 1));
            diag.push_back(int_pow(p, n + 1));
        }
        return detail::sorted_chain(std::move(diag));
    };
    return OracleInstance{std::move(m), std::move(oracle), "jordan",
                          {{"p", p.str()}, {"pad", std::to_string(pad)}}};
}

// Companion matrix of a monic polynomial c_0 + c_1 x + ... + x^d, with ones
// on the subdiagonal and the negated low coefficients in the last column.
inline IntMatrix companion_matrix(const std::vector<Int>& coeffs) {
    if (coeffs.size() < 2) throw std::invalid_argument("companion_matrix: degree must be at least 1");
    if (coeffs.back() != 1) throw std::invalid_argument("companion_matrix: polynomial must be monic");
    std::size_t d = coeffs.size() - 1;
    IntMatrix m(d, d);
    for (std::size_t i = 0; i + 1 < d; ++i) m.at(i + 1, i) = 1;
    for (std::size_t i = 0; i < d; ++i) m.at(i, d - 1) = -coeffs[i];
    return m;
}

// Companion block of x^{m-1} - 4^m joined with the 1x1 block (2). Its
// quotient sequence only settles into period m-1 after threshold m-1, and
// no period at all holds from the start.
inline OracleInstance delayed_period_example(std::size_t m) {
    if (m < 3) throw std::invalid_argument("delayed_period_example: size must be at least 3");
    std::vector<Int> poly(m, Int(0));
    poly[0] = -int_pow(Int(4), m);
    poly[m - 1] = 1;
    IntMatrix block = companion_matrix(poly);

    IntMatrix a(m, m);
    for (std::size_t i = 0; i + 1 < m; ++i)
        for (std::size_t j = 0; j + 1 < m; ++j) a.at(i, j) = block.at(i, j);
    a.at(m - 1, m - 1) = 2;

    auto oracle = [m](std::uint64_t n) {
        std::uint64_t k = n / (m - 1), r = n % (m - 1);
        std::vector<Int> diag;
        diag.push_back(int_pow(Int(2), n));
        for (std::uint64_t i = 0; i < r; ++i) diag.push_back(int_pow(Int(4), m * k + m));
        for (std::uint64_t i = 0; i < m - 1 - r; ++i) diag.push_back(int_pow(Int(4), m * k));
        return detail::sorted_chain(std::move(diag));
    };
    return OracleInstance{std::move(a), std::move(oracle), "delayed", {{"m", std::to_string(m)}}};
}

// Seeded dense matrix with entries uniform in [-bound, bound].
inline IntMatrix random_instance(std::size_t size, std::uint64_t entry_bound, std::uint64_t seed) {
    if (size < 1) throw std::invalid_argument("random_instance: size must be at least 1");
    if (entry_bound < 1) throw std::invalid_argument("random_instance: entry bound must be at least 1");
    SplitMix64 rng(seed);
    IntMatrix m(size, size);
    for (std::size_t i = 0; i < size; ++i)
        for (std::size_t j = 0; j < size; ++j) m.at(i, j) = rng.next_signed(entry_bound);
    return m;
}

// True when the computed Smith diagonals match the closed form at every
// sampled power.
inline bool oracle_matches_trace(const OracleInstance& inst, const PowerTrace& trace) {
    for (std::uint64_t n = 0; n <= trace.horizon; ++n)
        if (trace.smith_forms[n].diag != inst.oracle(n)) return false;
    return true;
}

// Upgrades a window-confirmed report once the closed form has certified the
// whole sampled trace.
template <typename T>
BasicPeriodReport<T> mark_oracle_exact(BasicPeriodReport<T> rep) {
    if (rep.status == PeriodStatus::CONFIRMED_WINDOW) rep.status = PeriodStatus::ORACLE_EXACT;
    return rep;
}

} // namespace smithseq
