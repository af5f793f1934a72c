#pragma once

// Eventually periodic sequence toolkit: exact-rational finite sequences,
// pointwise combinators, and an empirical period detector that only reports
// a period after confirming it over a window of full repetitions.

#include "smithseq/numbers.hpp"

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace smithseq {

// Exact rational extended with +infinity (the valuation of zero).
struct ExtRat {
    Rat value;
    bool infinite = false;

    ExtRat() = default;
    ExtRat(Rat v) : value(std::move(v)) {}
    ExtRat(int v) : value(v) {}
    static ExtRat infinity() { return ExtRat{Rat(0), true}; }
    static ExtRat from_valuation(const Valuation& v) {
        return v.infinite ? infinity() : ExtRat(Rat(v.value));
    }

    bool operator==(const ExtRat& o) const {
        if (infinite || o.infinite) return infinite == o.infinite;
        return value == o.value;
    }
    bool operator!=(const ExtRat& o) const { return !(*this == o); }
    bool operator<(const ExtRat& o) const {
        if (infinite) return false;
        if (o.infinite) return true;
        return value < o.value;
    }

    bool finite() const { return !infinite; }
    std::string str() const { return infinite ? "inf" : rat_str(value); }

private:
    ExtRat(Rat v, bool inf) : value(std::move(v)), infinite(inf) {}
};

// Samples of a sequence on the contiguous index range
// [start_index, start_index + samples.size()).
struct FiniteSeq {
    std::int64_t start_index = 0;
    std::vector<ExtRat> samples;

    FiniteSeq() = default;
    FiniteSeq(std::int64_t start, std::vector<ExtRat> values)
        : start_index(start), samples(std::move(values)) {
        if (samples.empty()) throw std::invalid_argument("FiniteSeq: samples must be nonempty");
    }

    std::size_t size() const { return samples.size(); }
    std::int64_t end_index() const { return start_index + static_cast<std::int64_t>(samples.size()) - 1; }
    const ExtRat& at_index(std::int64_t n) const {
        if (n < start_index || n > end_index()) throw std::out_of_range("FiniteSeq: index outside sampled range");
        return samples[static_cast<std::size_t>(n - start_index)];
    }

    // f(n+1) - f(n); defined on one index fewer. Infinity poisons subtraction.
    FiniteSeq first_differences() const {
        if (samples.size() < 2) throw std::invalid_argument("first_differences: need at least two samples");
        std::vector<ExtRat> d;
        d.reserve(samples.size() - 1);
        for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
            if (samples[i].infinite || samples[i + 1].infinite)
                throw std::invalid_argument("first_differences: infinity has no difference");
            d.emplace_back(Rat(samples[i + 1].value - samples[i].value));
        }
        return FiniteSeq(start_index, std::move(d));
    }
};

enum class PeriodStatus { CONFIRMED_WINDOW, ORACLE_EXACT, NOT_FOUND };

inline std::string to_string(PeriodStatus s) {
    switch (s) {
        case PeriodStatus::CONFIRMED_WINDOW: return "CONFIRMED_WINDOW";
        case PeriodStatus::ORACLE_EXACT: return "ORACLE_EXACT";
        case PeriodStatus::NOT_FOUND: return "NOT_FOUND";
    }
    return "NOT_FOUND";
}

// Detection result for a sequence of values of type T (scalars here,
// diagonal vectors in the power-trace layer).
template <typename T>
struct BasicPeriodReport {
    std::int64_t n0 = 0;
    std::uint64_t period = 0;  // T >= 1 when found
    std::vector<T> block;      // the repeating values f(n0..n0+T-1)
    std::uint64_t confirmed_window = 0;
    PeriodStatus status = PeriodStatus::NOT_FOUND;

    bool found() const { return status != PeriodStatus::NOT_FOUND; }
};

using PeriodReport = BasicPeriodReport<ExtRat>;

namespace detail {

struct PeriodScan {
    bool found = false;
    std::size_t offset = 0;  // minimal n0 relative to the first sample
    std::size_t period = 0;
    std::size_t confirmed = 0;
};

// Minimal period first, then minimal threshold for that period. A candidate
// (T, n0) is accepted only when the window beyond n0 verifies at least
// `confirm` full repetitions of the block.
template <typename Value>
PeriodScan scan_period(const std::vector<Value>& v, std::size_t confirm) {
    if (v.empty()) throw std::invalid_argument("scan_period: empty input");
    if (confirm < 2) throw std::invalid_argument("scan_period: confirm factor must be >= 2");
    std::size_t len = v.size();
    for (std::size_t period = 1; (confirm + 1) * period <= len; ++period) {
        std::size_t offset = 0;
        for (std::size_t n = len - period; n-- > 0;) {
            if (!(v[n] == v[n + period])) {
                offset = n + 1;
                break;
            }
        }
        if (len - offset < (confirm + 1) * period) continue;
        std::size_t confirmed = (len - offset - period) / period;
        return PeriodScan{true, offset, period, confirmed};
    }
    return PeriodScan{};
}

} // namespace detail

// Empirical (n0, T) detection over the sampled horizon.
inline PeriodReport detect_period(const FiniteSeq& seq, std::size_t confirm_factor = 3) {
    auto scan = detail::scan_period(seq.samples, confirm_factor);
    PeriodReport rep;
    if (!scan.found) return rep;
    rep.n0 = seq.start_index + static_cast<std::int64_t>(scan.offset);
    rep.period = scan.period;
    rep.confirmed_window = scan.confirmed;
    rep.status = PeriodStatus::CONFIRMED_WINDOW;
    rep.block.assign(seq.samples.begin() + static_cast<std::ptrdiff_t>(scan.offset),
                     seq.samples.begin() + static_cast<std::ptrdiff_t>(scan.offset + scan.period));
    return rep;
}

enum class SeqOp { SUM, PRODUCT, MIN, QUOTIENT };

// Pointwise combination over a shared index range. Infinity participates in
// MIN as the maximal element but is rejected by the arithmetic ops.
inline FiniteSeq combine(const std::vector<FiniteSeq>& seqs, SeqOp op) {
    if (seqs.empty()) throw std::invalid_argument("combine: no input sequences");
    for (const FiniteSeq& s : seqs)
        if (s.start_index != seqs[0].start_index || s.size() != seqs[0].size())
            throw std::invalid_argument("combine: sequences must share one index range");
    if (op == SeqOp::QUOTIENT && seqs.size() != 2)
        throw std::invalid_argument("combine: QUOTIENT takes exactly two sequences");

    std::size_t len = seqs[0].size();
    std::vector<ExtRat> out;
    out.reserve(len);
    for (std::size_t i = 0; i < len; ++i) {
        if (op == SeqOp::MIN) {
            ExtRat best = seqs[0].samples[i];
            for (std::size_t k = 1; k < seqs.size(); ++k) best = std::min(best, seqs[k].samples[i]);
            out.push_back(best);
            continue;
        }
        for (const FiniteSeq& s : seqs)
            if (s.samples[i].infinite)
                throw std::invalid_argument("combine: infinity is only meaningful under MIN");
        switch (op) {
            case SeqOp::SUM: {
                Rat acc = 0;
                for (const FiniteSeq& s : seqs) acc += s.samples[i].value;
                out.emplace_back(acc);
                break;
            }
            case SeqOp::PRODUCT: {
                Rat acc = 1;
                for (const FiniteSeq& s : seqs) acc *= s.samples[i].value;
                out.emplace_back(acc);
                break;
            }
            case SeqOp::QUOTIENT: {
                const Rat& den = seqs[1].samples[i].value;
                if (den == 0)
                    throw std::invalid_argument("combine: QUOTIENT divisor is zero at index " +
                                                std::to_string(seqs[0].start_index + static_cast<std::int64_t>(i)));
                out.emplace_back(Rat(seqs[0].samples[i].value / den));
                break;
            }
            default: break;
        }
    }
    return FiniteSeq(seqs[0].start_index, std::move(out));
}

struct MinDiffResult {
    FiniteSeq min_seq;
    PeriodReport diff_report;  // detection on the first differences of min_seq
};

// Pointwise minimum of sequences whose first differences are eventually
// periodic; fails when the horizon is too short to confirm the output's
// difference period.
inline MinDiffResult min_of_difference_periodic(const std::vector<FiniteSeq>& seqs,
                                                std::size_t confirm_factor = 3) {
    FiniteSeq m = seqs.size() == 1 ? seqs[0] : combine(seqs, SeqOp::MIN);
    PeriodReport rep = detect_period(m.first_differences(), confirm_factor);
    if (!rep.found())
        throw std::invalid_argument("min_of_difference_periodic: horizon too short to confirm a difference period");
    return MinDiffResult{std::move(m), std::move(rep)};
}

} // namespace smithseq
