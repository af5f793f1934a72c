#pragma once

// Newton polygons of integer polynomials, carry-counting binomial
// valuations, and the polynomial probe sequences used to bound valuation
// periods.

#include "smithseq/numbers.hpp"
#include "smithseq/sequences.hpp"

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace smithseq {

// Lower-hull data of {(i, nu_p(c_i)) : c_i != 0}. Slopes are the negated
// hull-segment slopes, i.e. the root valuations, listed with multiplicity
// in hull order (nonincreasing). Roots at zero are counted separately as
// infinite-valuation roots.
struct NewtonPolygon {
    Int p;
    std::vector<std::pair<std::size_t, std::int64_t>> points;  // (index, valuation)
    std::vector<std::pair<Rat, std::size_t>> slopes;           // (root valuation, multiplicity)
    std::size_t infinite_roots = 0;

    bool has_finite_slope() const { return !slopes.empty(); }
    Rat min_finite_slope() const {
        if (slopes.empty()) throw std::logic_error("NewtonPolygon: no finite slopes");
        return slopes.back().first;  // hull slopes increase, so valuations decrease
    }
};

// coeffs are c_0..c_m, constant term first; leading coefficient nonzero.
inline NewtonPolygon newton_polygon(const std::vector<Int>& coeffs, const Int& p) {
    require_prime(p, "newton_polygon");
    if (coeffs.empty() || coeffs.back() == 0)
        throw std::invalid_argument("newton_polygon: leading coefficient must be nonzero");

    NewtonPolygon np;
    np.p = p;
    std::size_t v0 = 0;
    while (coeffs[v0] == 0) ++v0;
    np.infinite_roots = v0;

    for (std::size_t i = v0; i < coeffs.size(); ++i) {
        if (coeffs[i] == 0) continue;
        np.points.emplace_back(i, int_valuation(coeffs[i], p).value);
    }

    // Monotone chain over points already sorted by index: keep vertices with
    // strictly increasing segment slopes, merging collinear runs.
    std::vector<std::pair<std::size_t, std::int64_t>> hull;
    for (const auto& pt : np.points) {
        while (hull.size() >= 2) {
            const auto& a = hull[hull.size() - 2];
            const auto& b = hull[hull.size() - 1];
            // slope(a,b) >= slope(b,pt) means b is not a lower-hull vertex
            std::int64_t lhs = (b.second - a.second) * static_cast<std::int64_t>(pt.first - b.first);
            std::int64_t rhs = (pt.second - b.second) * static_cast<std::int64_t>(b.first - a.first);
            if (lhs >= rhs)
                hull.pop_back();
            else
                break;
        }
        hull.push_back(pt);
    }

    for (std::size_t k = 0; k + 1 < hull.size(); ++k) {
        std::size_t run = hull[k + 1].first - hull[k].first;
        Rat seg_slope(Int(hull[k + 1].second - hull[k].second), Int(run));
        np.slopes.emplace_back(Rat(-seg_slope), run);
    }
    return np;
}

// nu_p(binomial(n, k)) as the number of carries when adding k and n-k in
// base p (Kummer), computed on digit lists rather than factorials.
inline std::uint64_t binom_valuation(std::uint64_t n, std::uint64_t k, const Int& p) {
    require_prime(p, "binom_valuation");
    if (k > n) throw std::invalid_argument("binom_valuation: k exceeds n");
    Int a = k, b = n - k;
    Int carry = 0;
    std::uint64_t carries = 0;
    while (a > 0 || b > 0 || carry > 0) {
        Int s = a % p + b % p + carry;
        if (s >= p) {
            carry = 1;
            ++carries;
        } else {
            carry = 0;
        }
        a /= p;
        b /= p;
    }
    return carries;
}

// Smallest M in N with nu_p(k) - k/e <= M for all k >= 1. Only k = p^t can
// attain the maximum for a given valuation t, and t - p^t/e decays once
// p^t(p-1) > e, so the search over t terminates.
inline std::uint64_t m_constant(std::uint64_t e, const Int& p) {
    require_prime(p, "m_constant");
    if (e == 0) throw std::invalid_argument("m_constant: ramification must be >= 1");
    Rat best(-1);
    Int pt = 1;  // p^t
    for (std::int64_t t = 0;; ++t) {
        Rat g = Rat(t) - Rat(pt, Int(e));
        if (t == 0 || g > best) best = g;
        if (pt * (p - 1) > e && g < best) break;
        pt *= p;
    }
    if (best < 0) return 0;
    Int m = rat_ceil(best);
    return static_cast<std::uint64_t>(m);
}

// A rational polynomial q (c_0 first), a cutoff c, and a prime: the probe
// sequence is f(n) = min{0, nu_p(q(n)) - c}.
struct PolyProbe {
    std::vector<Rat> q;
    Rat c;
    Int p;

    PolyProbe(std::vector<Rat> coeffs, Rat cutoff, Int prime)
        : q(std::move(coeffs)), c(std::move(cutoff)), p(std::move(prime)) {
        require_prime(p, "PolyProbe");
        bool all_zero = true;
        for (const Rat& v : q) all_zero = all_zero && v == 0;
        if (q.empty() || all_zero) throw std::invalid_argument("PolyProbe: polynomial must be nonzero");
    }

    Rat eval(const Int& n) const {
        Rat acc = 0;
        for (std::size_t i = q.size(); i-- > 0;) acc = acc * Rat(n) + q[i];
        return acc;
    }

    // lcm of the coefficient denominators: the scalar clearing q to Z[x].
    Int clearing_denominator() const {
        Int theta = 1;
        for (const Rat& v : q) theta = int_lcm(theta, denominator(v));
        return theta;
    }

    // D = max(0, ceil(c + nu_p(theta))); the probe period divides p^D.
    std::int64_t exponent_bound() const {
        Valuation vt = int_valuation(clearing_denominator(), p);
        Int d = rat_ceil(c + Rat(vt.value));
        if (d < 0) return 0;
        return static_cast<std::int64_t>(d);
    }
};

struct ProbeResult {
    FiniteSeq samples;
    PeriodReport report;
    Int theta;
    std::int64_t exponent_bound = 0;
    Int period_bound;          // p^exponent_bound
    bool divides_bound = false;
};

inline ProbeResult poly_probe_seq(const PolyProbe& probe, std::uint64_t horizon,
                                  std::size_t confirm_factor = 3) {
    std::vector<ExtRat> vals;
    vals.reserve(horizon + 1);
    for (std::uint64_t n = 0; n <= horizon; ++n) {
        Rat qn = probe.eval(Int(n));
        if (qn == 0) {
            vals.emplace_back(Rat(0));  // nu_p(0) = inf, so the min is 0
            continue;
        }
        Rat v = Rat(rat_valuation(qn, probe.p).value) - probe.c;
        vals.emplace_back(v < 0 ? v : Rat(0));
    }
    ProbeResult out{FiniteSeq(0, std::move(vals)), {}, probe.clearing_denominator(), probe.exponent_bound(), 0};
    out.period_bound = int_pow(probe.p, static_cast<std::uint64_t>(out.exponent_bound));
    out.report = detect_period(out.samples, confirm_factor);
    if (out.report.found()) out.divides_bound = out.period_bound % Int(out.report.period) == 0;
    return out;
}

// Candidate valuation-difference periods (p^f - 1) p^L, sorted and deduplicated.
inline std::vector<Int> period_candidates(const Int& p, std::uint64_t max_f, std::uint64_t max_l) {
    require_prime(p, "period_candidates");
    if (max_f < 1) throw std::invalid_argument("period_candidates: max_f must be >= 1");
    std::vector<Int> out;
    for (std::uint64_t f = 1; f <= max_f; ++f)
        for (std::uint64_t l = 0; l <= max_l; ++l)
            out.push_back((int_pow(p, f) - 1) * int_pow(p, l));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

} // namespace smithseq
