#pragma once

// The power pipeline: Smith forms of A^n, the diagonal quotient sequence
// D_n with S_{n+1} = D_n S_n, the gcd ratio sequence, and the per-prime
// valuation decomposition nu_p(A^n) = a*n + h(n).

#include "smithseq/matrix.hpp"
#include "smithseq/numbers.hpp"
#include "smithseq/padic.hpp"
#include "smithseq/sequences.hpp"
#include "smithseq/smith.hpp"

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace smithseq {

struct PowerTrace {
    IntMatrix matrix;
    std::uint64_t horizon = 0;
    std::vector<SmithForm> smith_forms;          // S_0 .. S_horizon
    std::vector<std::vector<Int>> diag_quotients;  // D_0 .. D_{horizon-1}
};

using DiagPeriodReport = BasicPeriodReport<std::vector<Int>>;

// Smith forms of A^0..A^horizon plus the quotient diagonals. D_n[i] is
// S_{n+1}[i] / S_n[i] while S_n[i] != 0 and 0 once both vanish; a nonzero
// entry under a zero predecessor would contradict invariant-factor
// divisibility and is treated as an internal error.
inline PowerTrace trace_powers(const IntMatrix& a, std::uint64_t horizon) {
    if (!a.is_square()) throw std::invalid_argument("trace_powers: matrix must be square");
    if (horizon < 2) throw std::invalid_argument("trace_powers: horizon must be at least 2");

    PowerTrace t{a, horizon, {}, {}};
    t.smith_forms.reserve(horizon + 1);
    IntMatrix power = IntMatrix::identity(a.rows());
    t.smith_forms.push_back(smith_form(power));
    for (std::uint64_t n = 1; n <= horizon; ++n) {
        power = mat_mul(a, power);
        t.smith_forms.push_back(smith_form(power));
    }

    std::size_t m = a.rows();
    t.diag_quotients.reserve(horizon);
    for (std::uint64_t n = 0; n < horizon; ++n) {
        const auto& cur = t.smith_forms[n].diag;
        const auto& nxt = t.smith_forms[n + 1].diag;
        std::vector<Int> d(m);
        for (std::size_t i = 0; i < m; ++i) {
            if (cur[i] != 0) {
                if (nxt[i] % cur[i] != 0)
                    throw std::logic_error("trace_powers: consecutive invariant factors do not divide");
                d[i] = nxt[i] / cur[i];
            } else if (nxt[i] != 0) {
                throw std::logic_error("trace_powers: invariant factor reappeared after vanishing");
            }
        }
        t.diag_quotients.push_back(std::move(d));
    }
    return t;
}

// Detection on the vector sequence D_n. Each diagonal slot is detected on
// its own first; the combined period is a common multiple of the slot
// periods, and the final scan over whole diagonals reports the minimal
// (T, n0) that the window confirms.
inline DiagPeriodReport detect_dn_periodicity(const PowerTrace& t, std::size_t confirm_factor = 3) {
    DiagPeriodReport rep;
    const auto& rows = t.diag_quotients;
    if (rows.empty()) return rep;

    std::size_t m = t.matrix.rows();
    for (std::size_t i = 0; i < m; ++i) {
        std::vector<Int> slot;
        slot.reserve(rows.size());
        for (const auto& d : rows) slot.push_back(d[i]);
        if (!detail::scan_period(slot, confirm_factor).found) return rep;
    }

    auto scan = detail::scan_period(rows, confirm_factor);
    if (!scan.found) return rep;
    rep.n0 = static_cast<std::int64_t>(scan.offset);
    rep.period = scan.period;
    rep.confirmed_window = scan.confirmed;
    rep.status = PeriodStatus::CONFIRMED_WINDOW;
    rep.block.assign(rows.begin() + static_cast<std::ptrdiff_t>(scan.offset),
                     rows.begin() + static_cast<std::ptrdiff_t>(scan.offset + scan.period));
    return rep;
}

inline void require_not_nilpotent(const IntMatrix& a, const char* who) {
    if (is_nilpotent(a)) throw std::invalid_argument(std::string(who) + ": matrix is nilpotent");
}

// g(n) = gcd(A^{n+1}) / gcd(A^n) for n = 0..horizon-1; always a positive
// integer for non-nilpotent A.
inline FiniteSeq gcd_ratio_seq(const IntMatrix& a, std::uint64_t horizon) {
    if (!a.is_square()) throw std::invalid_argument("gcd_ratio_seq: matrix must be square");
    require_not_nilpotent(a, "gcd_ratio_seq");
    if (horizon < 1) throw std::invalid_argument("gcd_ratio_seq: horizon must be at least 1");

    std::vector<ExtRat> vals;
    vals.reserve(horizon);
    IntMatrix power = IntMatrix::identity(a.rows());
    Int prev = 1;  // gcd(A^0)
    for (std::uint64_t n = 1; n <= horizon; ++n) {
        power = mat_mul(a, power);
        Int cur = content_gcd(power);
        vals.emplace_back(Rat(exact_div(cur, prev)));
        prev = cur;
    }
    return FiniteSeq(0, std::move(vals));
}

// nu_p(A^n) for n = 0..horizon; finite throughout for non-nilpotent A.
inline FiniteSeq valuation_seq(const IntMatrix& a, const Int& p, std::uint64_t horizon) {
    if (!a.is_square()) throw std::invalid_argument("valuation_seq: matrix must be square");
    require_prime(p, "valuation_seq");
    require_not_nilpotent(a, "valuation_seq");

    std::vector<ExtRat> vals;
    vals.reserve(horizon + 1);
    IntMatrix power = IntMatrix::identity(a.rows());
    vals.push_back(ExtRat::from_valuation(mat_valuation(power, p)));
    for (std::uint64_t n = 1; n <= horizon; ++n) {
        power = mat_mul(a, power);
        vals.push_back(ExtRat::from_valuation(mat_valuation(power, p)));
    }
    return FiniteSeq(0, std::move(vals));
}

// Primes dividing the largest nonzero determinantal divisor of A (the
// product of its nonzero invariant factors), read off the first power.
// These are the primes that can show up in A's invariant-factor chain.
inline std::vector<Int> auto_primes(const IntMatrix& a) {
    SmithForm s = smith_form(a);
    Int g = 1;
    for (std::size_t i = 0; i < s.rank; ++i) g *= s.diag[i];
    if (g == 1) return {};
    return prime_divisors(g);
}

struct ValuationDecomposition {
    Int p;
    Rat slope;            // the linear growth rate a of nu_p(A^n)
    FiniteSeq h_samples;  // h(n) = nu_p(A^n) - a*n
    PeriodReport h_report;
};

// Splits nu_p(A^n) into a*n + h(n), taking a as the minimal finite Newton
// polygon slope of the characteristic polynomial and detecting h's period
// over the horizon.
inline ValuationDecomposition decompose_valuation(const IntMatrix& a, const Int& p,
                                                  std::uint64_t horizon,
                                                  std::size_t confirm_factor = 3) {
    FiniteSeq nu = valuation_seq(a, p, horizon);
    NewtonPolygon np = newton_polygon(characteristic_polynomial(a), p);
    Rat slope = np.min_finite_slope();

    std::vector<ExtRat> h;
    h.reserve(nu.size());
    for (std::size_t n = 0; n < nu.size(); ++n)
        h.emplace_back(Rat(nu.samples[n].value - slope * Rat(Int(n))));
    FiniteSeq h_seq(0, std::move(h));
    PeriodReport rep = detect_period(h_seq, confirm_factor);
    return ValuationDecomposition{p, std::move(slope), std::move(h_seq), std::move(rep)};
}

} // namespace smithseq
