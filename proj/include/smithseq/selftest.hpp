#pragma once

// Built-in verification suites. Every suite checks exact identities; there
// are no tolerances anywhere. The CLI exposes them under `selftest`, and the
// acceptance test binary runs the same registry.

#include "smithseq/generators.hpp"
#include "smithseq/matrix.hpp"
#include "smithseq/numbers.hpp"
#include "smithseq/padic.hpp"
#include "smithseq/power_trace.hpp"
#include "smithseq/sequences.hpp"
#include "smithseq/smith.hpp"

#include <chrono>
#include <cstdint>
#include <functional>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace smithseq {

struct SuiteResult {
    std::string name;
    bool pass = true;
    std::string detail;  // first failure, or informational notes
    double millis = 0;
};

namespace selftest_detail {

struct Check {
    bool ok = true;
    std::string msg;
    std::string note;

    void require(bool cond, const std::string& what) {
        if (ok && !cond) {
            ok = false;
            msg = what;
        }
    }
};

inline std::string diag_str(const std::vector<Int>& d) {
    std::string s = "(";
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (i) s += ",";
        s += d[i].str();
    }
    return s + ")";
}

// Shared random pools. Seeds are fixed so every run examines the same
// instances on every platform.
inline std::vector<IntMatrix> mixed_size_pool() {
    std::vector<IntMatrix> pool;
    for (std::size_t i = 0; i < 200; ++i) pool.push_back(random_instance(1 + i % 5, 9, 1001 + i));
    return pool;
}

inline std::vector<IntMatrix> square4_pool() {
    std::vector<IntMatrix> pool;
    for (std::size_t i = 0; i < 50; ++i) pool.push_back(random_instance(4, 9, 2001 + i));
    return pool;
}

inline std::vector<IntMatrix> power_pool() {
    std::vector<IntMatrix> pool;
    for (std::size_t i = 0; i < 50; ++i) {
        std::uint64_t salt = 0;
        while (true) {
            IntMatrix m = random_instance(3 + i % 2, 9, 3001 + i + 100000 * salt);
            if (!is_nilpotent(m)) {
                pool.push_back(std::move(m));
                break;
            }
            ++salt;
        }
    }
    return pool;
}

inline SuiteResult suite_jordan() {
    Check c;
    for (int p : {2, 3, 5}) {
        OracleInstance inst = jordan_example(Int(p));
        PowerTrace trace = trace_powers(inst.matrix, 60);
        for (std::uint64_t n = 0; n <= 60 && c.ok; ++n)
            c.require(trace.smith_forms[n].diag == inst.oracle(n),
                      "p=" + std::to_string(p) + ": Smith diag of power " + std::to_string(n) +
                          " is " + diag_str(trace.smith_forms[n].diag) + ", closed form says " +
                          diag_str(inst.oracle(n)));
        DiagPeriodReport rep = detect_dn_periodicity(trace, 3);
        if (oracle_matches_trace(inst, trace)) rep = mark_oracle_exact(std::move(rep));
        c.require(rep.found() && rep.period == static_cast<std::uint64_t>(p),
                  "p=" + std::to_string(p) + ": expected quotient period " + std::to_string(p) +
                      ", detector returned " + std::to_string(rep.period));
    }
    return SuiteResult{"jordan", c.ok, c.msg};
}

inline SuiteResult suite_delayed() {
    Check c;
    for (std::size_t m : {3, 4, 5}) {
        OracleInstance inst = delayed_period_example(m);
        std::uint64_t horizon = 20 * (m - 1);
        PowerTrace trace = trace_powers(inst.matrix, horizon);
        for (std::uint64_t n = 0; n <= horizon && c.ok; ++n)
            c.require(trace.smith_forms[n].diag == inst.oracle(n),
                      "m=" + std::to_string(m) + ": Smith diag of power " + std::to_string(n) +
                          " deviates from the closed form");
        DiagPeriodReport rep = detect_dn_periodicity(trace, 3);
        c.require(rep.found() && rep.period == m - 1 && rep.n0 == static_cast<std::int64_t>(m - 1),
                  "m=" + std::to_string(m) + ": expected (n0,T)=(" + std::to_string(m - 1) + "," +
                      std::to_string(m - 1) + "), got (" + std::to_string(rep.n0) + "," +
                      std::to_string(rep.period) + ")");
        // No single period works from n = 0: exhibit a violation below the
        // threshold for every candidate T up to twice the eventual period.
        for (std::uint64_t t = 1; t <= 2 * (m - 1) && c.ok; ++t) {
            bool violated = false;
            for (std::uint64_t n = 0; n + 1 < m && n + t < trace.diag_quotients.size(); ++n)
                if (trace.diag_quotients[n + t] != trace.diag_quotients[n]) violated = true;
            c.require(violated, "m=" + std::to_string(m) + ": T=" + std::to_string(t) +
                                    " is never violated before the threshold");
        }
    }
    return SuiteResult{"delayed", c.ok, c.msg};
}

inline SuiteResult suite_divisor_ratio() {
    Check c;
    std::size_t i = 0;
    for (const IntMatrix& m : mixed_size_pool()) {
        SmithForm direct = smith_form(m);
        SmithForm via_minors = snf_from_divisors(determinantal_divisors(m));
        c.require(direct.diag == via_minors.diag,
                  "pool matrix " + std::to_string(i) + ": elimination gives " + diag_str(direct.diag) +
                      ", minor gcd ratios give " + diag_str(via_minors.diag));
        if (!c.ok) break;
        ++i;
    }
    return SuiteResult{"divisor-ratio", c.ok, c.msg};
}

inline SuiteResult suite_compound_power() {
    Check c;
    std::size_t i = 0;
    for (const IntMatrix& m : square4_pool()) {
        for (std::size_t r = 1; r <= 3 && c.ok; ++r) {
            IntMatrix cr = compound(m, r);
            for (std::uint64_t n = 0; n <= 6 && c.ok; ++n)
                c.require(compound(mat_pow(m, n), r) == mat_pow(cr, n),
                          "pool matrix " + std::to_string(i) + ": C_" + std::to_string(r) +
                              " does not commute with power " + std::to_string(n));
        }
        if (!c.ok) break;
        ++i;
    }
    return SuiteResult{"compound-power", c.ok, c.msg};
}

inline SuiteResult suite_localization() {
    Check c;
    std::size_t i = 0;
    for (const IntMatrix& m : mixed_size_pool()) {
        SmithForm global = smith_form(m);
        std::vector<Int> primes = auto_primes(m);
        if (primes.empty()) {
            for (std::size_t k = 0; k < global.diag.size() && c.ok; ++k)
                c.require(global.diag[k] == (k < global.rank ? 1 : 0),
                          "pool matrix " + std::to_string(i) + ": trivial divisor but nontrivial diagonal");
        } else {
            std::vector<std::pair<Int, SmithForm>> parts;
            for (const Int& p : primes) parts.emplace_back(p, local_smith(m, p));
            c.require(reconstruct_global(parts).diag == global.diag,
                      "pool matrix " + std::to_string(i) + ": product of localized forms misses the global form");
        }
        if (!c.ok) break;
        ++i;
    }
    return SuiteResult{"localization", c.ok, c.msg};
}

inline SuiteResult suite_quotient_period() {
    Check c;
    std::size_t i = 0;
    std::size_t doubled = 0;
    for (const IntMatrix& m : power_pool()) {
        DiagPeriodReport rep = detect_dn_periodicity(trace_powers(m, 200), 3);
        if (!rep.found()) {
            ++doubled;
            rep = detect_dn_periodicity(trace_powers(m, 400), 3);
        }
        c.require(rep.found(), "pool matrix " + std::to_string(i) +
                                   ": no confirmed quotient period within the doubled horizon");
        if (!c.ok) break;
        ++i;
    }
    SuiteResult r{"quotient-period", c.ok, c.msg};
    if (c.ok && doubled > 0) r.detail = std::to_string(doubled) + " instance(s) needed the doubled horizon";
    return r;
}

inline SuiteResult suite_slope() {
    Check c;
    std::size_t i = 0;
    std::size_t outside_candidates = 0, checked = 0;
    for (const IntMatrix& m : power_pool()) {
        for (const Int& p : auto_primes(m)) {
            std::uint64_t horizon = 200;
            ValuationDecomposition vd = decompose_valuation(m, p, horizon, 3);
            PeriodReport diff_rep = detect_period(vd.h_samples.first_differences(), 3);
            if (!vd.h_report.found() || !diff_rep.found()) {
                horizon = 400;
                vd = decompose_valuation(m, p, horizon, 3);
                diff_rep = detect_period(vd.h_samples.first_differences(), 3);
            }
            std::string where = "pool matrix " + std::to_string(i) + ", p=" + p.str();
            c.require(vd.h_report.found(),
                      where + ": h(n) = nu_p(A^n) - a*n shows no confirmed period, slope a=" + rat_str(vd.slope));
            c.require(diff_rep.found(), where + ": first differences of h show no confirmed period");
            if (!c.ok) break;

            // Boundedness in the strong sense: past n0 the whole range of h
            // is already attained inside one period block.
            Rat lo, hi, block_lo, block_hi;
            bool first = true;
            for (std::int64_t n = vd.h_report.n0; n <= vd.h_samples.end_index(); ++n) {
                const Rat& v = vd.h_samples.at_index(n).value;
                if (first || v < lo) lo = v;
                if (first || v > hi) hi = v;
                first = false;
            }
            block_lo = vd.h_report.block[0].value;
            block_hi = block_lo;
            for (const ExtRat& v : vd.h_report.block) {
                if (v.value < block_lo) block_lo = v.value;
                if (v.value > block_hi) block_hi = v.value;
            }
            c.require(lo == block_lo && hi == block_hi,
                      where + ": range of h beyond n0 is not attained within one period");

            // Soft diagnostic, reported but never asserted: does the
            // difference period divide some (p^f - 1) p^L candidate?
            ++checked;
            bool divides_some = false;
            for (const Int& cand : period_candidates(p, m.rows(), 8))
                if (cand % Int(diff_rep.period) == 0) divides_some = true;
            if (!divides_some) ++outside_candidates;
        }
        if (!c.ok) break;
        ++i;
    }
    SuiteResult r{"slope", c.ok, c.msg};
    if (c.ok)
        r.detail = std::to_string(checked - outside_candidates) + "/" + std::to_string(checked) +
                   " difference periods divide a (p^f-1)p^L candidate";
    return r;
}

inline SuiteResult suite_kummer() {
    Check c;
    for (int pi : {2, 3, 5}) {
        Int p(pi);
        for (std::uint64_t big_l = 1; big_l <= 6 && c.ok; ++big_l) {
            std::uint64_t n = static_cast<std::uint64_t>(int_pow(p, big_l));
            Int binom = 1;
            for (std::uint64_t k = 1; k <= n && c.ok; ++k) {
                binom = binom * Int(n - k + 1) / Int(k);
                std::uint64_t carries = binom_valuation(n, k, p);
                std::uint64_t expected = big_l - static_cast<std::uint64_t>(int_valuation(Int(k), p).value);
                std::string where = "p=" + std::to_string(pi) + ", L=" + std::to_string(big_l) +
                                    ", k=" + std::to_string(k);
                c.require(carries == expected, where + ": carry count " + std::to_string(carries) +
                                                   " differs from L - nu_p(k) = " + std::to_string(expected));
                c.require(Valuation::of(static_cast<std::int64_t>(carries)) == int_valuation(binom, p),
                          where + ": carry count differs from nu_p of the exact binomial");
            }
        }
    }
    return SuiteResult{"kummer", c.ok, c.msg};
}

inline SuiteResult suite_probe() {
    Check c;
    SplitMix64 rng(4001);
    for (std::size_t i = 0; i < 20 && c.ok; ++i) {
        std::size_t deg = rng.next_below(5);
        std::vector<Rat> coeffs(deg + 1);
        for (std::size_t j = 0; j <= deg; ++j) {
            std::int64_t num = rng.next_signed(20);
            if (j == deg)
                while (num == 0) num = rng.next_signed(20);
            std::uint64_t den = 1 + rng.next_below(20);
            coeffs[j] = Rat(Int(num), Int(den));
        }
        for (const Rat& cutoff : {Rat(0), Rat(1), Rat(3, 2)}) {
            for (int pi : {2, 3}) {
                PolyProbe probe(coeffs, cutoff, Int(pi));
                Int bound = int_pow(Int(pi), static_cast<std::uint64_t>(probe.exponent_bound()));
                ProbeResult res = poly_probe_seq(probe, 4 * static_cast<std::uint64_t>(bound), 3);
                std::string where = "poly " + std::to_string(i) + ", c=" + rat_str(cutoff) +
                                    ", p=" + std::to_string(pi);
                c.require(res.report.found(), where + ": probe sequence shows no confirmed period");
                c.require(!res.report.found() || res.divides_bound,
                          where + ": period " + std::to_string(res.report.period) +
                              " does not divide p^D = " + res.period_bound.str());
                if (!c.ok) break;
            }
            if (!c.ok) break;
        }
    }
    return SuiteResult{"probe", c.ok, c.msg};
}

// Eventually periodic input with the given construction period and
// threshold; values are small exact rationals.
inline FiniteSeq random_eventually_periodic(SplitMix64& rng, std::size_t period, std::size_t prefix,
                                            std::size_t len, bool nonzero, bool allow_infinity) {
    std::vector<ExtRat> block(period), head(prefix);
    auto draw = [&](bool in_block) {
        if (allow_infinity && rng.next_below(8) == 0 && in_block) return ExtRat::infinity();
        std::int64_t num = rng.next_signed(9);
        if (nonzero)
            while (num == 0) num = rng.next_signed(9);
        return ExtRat(Rat(Int(num), Int(1 + rng.next_below(4))));
    };
    for (auto& v : head) v = draw(false);
    for (auto& v : block) v = draw(true);
    std::vector<ExtRat> samples;
    samples.reserve(len);
    for (std::size_t n = 0; n < len; ++n)
        samples.push_back(n < prefix ? head[n] : block[(n - prefix) % period]);
    return FiniteSeq(0, std::move(samples));
}

inline SuiteResult suite_seq_algebra() {
    Check c;
    SplitMix64 rng(5001);

    // Closure of sum/product/min/quotient: the combined period divides the
    // lcm of the input construction periods.
    for (std::size_t i = 0; i < 100 && c.ok; ++i) {
        SeqOp op = static_cast<SeqOp>(i % 4);
        std::size_t k = op == SeqOp::QUOTIENT ? 2 : 2 + i % 2;
        std::vector<std::size_t> periods(k);
        std::size_t lcm_t = 1;
        for (auto& t : periods) {
            t = 1 + rng.next_below(6);
            lcm_t = static_cast<std::size_t>(int_lcm(Int(lcm_t), Int(t)).convert_to<std::uint64_t>());
        }
        std::size_t len = 5 + 10 * lcm_t + 8;
        std::vector<FiniteSeq> inputs;
        for (std::size_t j = 0; j < k; ++j)
            inputs.push_back(random_eventually_periodic(rng, periods[j], rng.next_below(5), len,
                                                        op == SeqOp::QUOTIENT && j == 1,
                                                        op == SeqOp::MIN));
        FiniteSeq combined = combine(inputs, op);
        PeriodReport rep = detect_period(combined, 3);
        c.require(rep.found(), "combine case " + std::to_string(i) + ": no confirmed period");
        c.require(!rep.found() || lcm_t % rep.period == 0,
                  "combine case " + std::to_string(i) + ": period " + std::to_string(rep.period) +
                      " does not divide lcm " + std::to_string(lcm_t));
    }

    // Minimum of sequences with eventually periodic first differences: the
    // output's differences settle into a period dividing the same lcm.
    for (std::size_t i = 0; i < 100 && c.ok; ++i) {
        std::size_t k = 2 + i % 2;
        std::size_t lcm_t = 1;
        std::vector<FiniteSeq> inputs;
        std::size_t len = 2500;
        for (std::size_t j = 0; j < k; ++j) {
            std::size_t period = 1 + rng.next_below(4);
            lcm_t = static_cast<std::size_t>(int_lcm(Int(lcm_t), Int(period)).convert_to<std::uint64_t>());
            std::size_t prefix = rng.next_below(4);
            std::vector<Rat> deltas(period + prefix);
            for (auto& d : deltas) d = Rat(rng.next_signed(2));
            std::vector<ExtRat> samples;
            samples.reserve(len);
            Rat acc(rng.next_signed(10));
            for (std::size_t n = 0; n < len; ++n) {
                samples.emplace_back(acc);
                const Rat& step = n < prefix ? deltas[n] : deltas[prefix + (n - prefix) % period];
                acc += step;
            }
            inputs.emplace_back(0, std::move(samples));
        }
        MinDiffResult res = min_of_difference_periodic(inputs, 3);
        c.require(lcm_t % res.diff_report.period == 0,
                  "difference-min case " + std::to_string(i) + ": difference period " +
                      std::to_string(res.diff_report.period) + " does not divide lcm " + std::to_string(lcm_t));
    }
    return SuiteResult{"seq-algebra", c.ok, c.msg};
}

} // namespace selftest_detail

inline const std::vector<std::pair<std::string, std::function<SuiteResult()>>>& selftest_suites() {
    static const std::vector<std::pair<std::string, std::function<SuiteResult()>>> suites = {
        {"jordan", selftest_detail::suite_jordan},
        {"delayed", selftest_detail::suite_delayed},
        {"divisor-ratio", selftest_detail::suite_divisor_ratio},
        {"compound-power", selftest_detail::suite_compound_power},
        {"localization", selftest_detail::suite_localization},
        {"quotient-period", selftest_detail::suite_quotient_period},
        {"slope", selftest_detail::suite_slope},
        {"kummer", selftest_detail::suite_kummer},
        {"probe", selftest_detail::suite_probe},
        {"seq-algebra", selftest_detail::suite_seq_algebra},
    };
    return suites;
}

inline bool is_selftest_suite(const std::string& name) {
    for (const auto& [n, fn] : selftest_suites())
        if (n == name) return true;
    return false;
}

// Runs the selected suites (all when the filter is empty), prints one
// pass/fail line each, and returns 0 only if everything passed.
inline int run_selftest(const std::vector<std::string>& filter, std::ostream& out) {
    bool all_pass = true;
    for (const auto& [name, fn] : selftest_suites()) {
        bool wanted = filter.empty();
        for (const std::string& f : filter) wanted = wanted || f == name;
        if (!wanted) continue;
        auto start = std::chrono::steady_clock::now();
        SuiteResult res = fn();
        auto stop = std::chrono::steady_clock::now();
        res.millis = std::chrono::duration<double, std::milli>(stop - start).count();
        std::ostringstream line;
        line << (res.pass ? "[PASS] " : "[FAIL] ") << std::left << std::setw(16) << res.name << " ("
             << std::fixed << std::setprecision(1) << res.millis << " ms)";
        if (!res.detail.empty()) line << " -- " << res.detail;
        out << line.str() << "\n";
        all_pass = all_pass && res.pass;
    }
    out << (all_pass ? "all suites passed" : "FAILURES above") << "\n";
    return all_pass ? 0 : 1;
}

} // namespace smithseq
