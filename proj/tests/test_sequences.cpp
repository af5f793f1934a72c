#include "smithseq/sequences.hpp"
#include "smithseq/generators.hpp"

#include <doctest.h>

#include <vector>

using namespace smithseq;

namespace {

FiniteSeq seq_of(std::int64_t start, std::vector<int> vals) {
    std::vector<ExtRat> s;
    for (int v : vals) s.emplace_back(Rat(v));
    return FiniteSeq(start, std::move(s));
}

FiniteSeq repeat_block(std::int64_t start, const std::vector<int>& block, std::size_t copies) {
    std::vector<int> vals;
    for (std::size_t i = 0; i < copies; ++i) vals.insert(vals.end(), block.begin(), block.end());
    return seq_of(start, vals);
}

} // namespace

TEST_CASE("ExtRat ordering treats infinity as maximal") {
    ExtRat inf = ExtRat::infinity();
    CHECK(ExtRat(Rat(5)) < inf);
    CHECK_FALSE(inf < ExtRat(Rat(5)));
    CHECK(inf == ExtRat::infinity());
    CHECK(ExtRat(Rat(1, 2)).str() == "1/2");
    CHECK(inf.str() == "inf");
}

TEST_CASE("FiniteSeq validates and indexes") {
    CHECK_THROWS_AS(FiniteSeq(0, {}), std::invalid_argument);
    FiniteSeq s = seq_of(3, {1, 2, 3});
    CHECK(s.end_index() == 5);
    CHECK(s.at_index(4) == ExtRat(Rat(2)));
    CHECK_THROWS_AS(s.at_index(6), std::out_of_range);
}

TEST_CASE("detect_period on simple shapes") {
    SUBCASE("constant sequence") {
        PeriodReport r = detect_period(seq_of(2, {5, 5, 5, 5, 5, 5, 5, 5}), 3);
        CHECK(r.found());
        CHECK(r.period == 1);
        CHECK(r.n0 == 2);
        CHECK(r.status == PeriodStatus::CONFIRMED_WINDOW);
        CHECK(r.confirmed_window == 7);
    }

    SUBCASE("one-off head before a 2-cycle") {
        PeriodReport r = detect_period(seq_of(0, {7, 1, 2, 1, 2, 1, 2, 1, 2, 1}), 3);
        CHECK(r.period == 2);
        CHECK(r.n0 == 1);
        CHECK(r.block == std::vector<ExtRat>{ExtRat(Rat(1)), ExtRat(Rat(2))});
    }

    SUBCASE("window too short reports NOT_FOUND") {
        PeriodReport r = detect_period(seq_of(0, {1, 2, 1, 2, 1}), 3);
        CHECK_FALSE(r.found());
        CHECK(r.status == PeriodStatus::NOT_FOUND);
    }

    SUBCASE("confirm factor below 2 is rejected") {
        CHECK_THROWS_AS(detect_period(seq_of(0, {1, 1, 1, 1}), 1), std::invalid_argument);
    }
}

TEST_CASE("detect_period reports the minimal period and threshold") {
    // 1,2,1,2 looks like period 4 too; the detector must say 2
    PeriodReport r = detect_period(repeat_block(0, {1, 2}, 8), 3);
    CHECK(r.period == 2);
    CHECK(r.n0 == 0);

    // alternating block with period 4 but componentwise period 2 noise
    PeriodReport r2 = detect_period(seq_of(0, {0, 1, 0, 2, 0, 1, 0, 2, 0, 1, 0, 2, 0, 1, 0, 2, 0, 1, 0, 2}), 3);
    CHECK(r2.period == 4);
}

TEST_CASE("detect_period is idempotent on its own block") {
    FiniteSeq s = seq_of(0, {9, 9, 4, 1, 3, 4, 1, 3, 4, 1, 3, 4, 1, 3, 4, 1, 3});
    PeriodReport r = detect_period(s, 3);
    REQUIRE(r.found());
    std::vector<int> block;
    for (const ExtRat& v : r.block) block.push_back(static_cast<int>(numerator(v.value)));
    PeriodReport again = detect_period(repeat_block(0, block, 6), 3);
    CHECK(again.period == r.period);
    CHECK(again.n0 == 0);
}

TEST_CASE("detector never reports a violated pair") {
    SplitMix64 rng(99);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<ExtRat> vals;
        std::size_t len = 12 + rng.next_below(30);
        for (std::size_t i = 0; i < len; ++i) vals.emplace_back(Rat(Int(rng.next_below(3))));
        FiniteSeq s(0, std::move(vals));
        PeriodReport r = detect_period(s, 2);
        if (!r.found()) continue;
        for (std::int64_t n = r.n0; n + static_cast<std::int64_t>(r.period) <= s.end_index(); ++n)
            CHECK(s.at_index(n) == s.at_index(n + static_cast<std::int64_t>(r.period)));
    }
}

TEST_CASE("combine: pointwise arithmetic") {
    FiniteSeq a = repeat_block(0, {1, 2}, 4);
    FiniteSeq b = repeat_block(0, {3, 3}, 4);
    CHECK(combine({a, b}, SeqOp::SUM).samples == repeat_block(0, {4, 5}, 4).samples);

    FiniteSeq n1 = repeat_block(0, {2, 4}, 4);
    FiniteSeq n2 = repeat_block(0, {2, 2}, 4);
    CHECK(combine({n1, n2}, SeqOp::QUOTIENT).samples == repeat_block(0, {1, 2}, 4).samples);

    SUBCASE("min of periods 2 and 3 has period dividing 6") {
        FiniteSeq p2 = repeat_block(0, {0, 5}, 18);
        FiniteSeq p3 = repeat_block(0, {4, 1, 6}, 12);
        PeriodReport r = detect_period(combine({p2, p3}, SeqOp::MIN), 3);
        REQUIRE(r.found());
        CHECK(6 % r.period == 0);
    }
}

TEST_CASE("combine input validation") {
    FiniteSeq a = repeat_block(0, {1, 2}, 4);
    FiniteSeq shifted = repeat_block(1, {1, 2}, 4);
    FiniteSeq shorter = repeat_block(0, {1, 2}, 3);
    CHECK_THROWS_AS(combine({a, shifted}, SeqOp::SUM), std::invalid_argument);
    CHECK_THROWS_AS(combine({a, shorter}, SeqOp::SUM), std::invalid_argument);
    CHECK_THROWS_AS(combine({a}, SeqOp::QUOTIENT), std::invalid_argument);
    CHECK_THROWS_AS(combine({}, SeqOp::SUM), std::invalid_argument);

    FiniteSeq zeroed = seq_of(0, {1, 0, 1, 0, 1, 0, 1, 0});
    CHECK_THROWS_AS(combine({a, zeroed}, SeqOp::QUOTIENT), std::invalid_argument);

    std::vector<ExtRat> with_inf = {ExtRat(Rat(1)), ExtRat::infinity(), ExtRat(Rat(1)), ExtRat(Rat(1)),
                                    ExtRat(Rat(1)), ExtRat(Rat(1)), ExtRat(Rat(1)), ExtRat(Rat(1))};
    FiniteSeq inf_seq(0, std::move(with_inf));
    CHECK_THROWS_AS(combine({a, inf_seq}, SeqOp::SUM), std::invalid_argument);
    CHECK_NOTHROW(combine({a, inf_seq}, SeqOp::MIN));
}

TEST_CASE("first differences") {
    FiniteSeq s = seq_of(0, {1, 4, 9, 16});
    CHECK(s.first_differences().samples == seq_of(0, {3, 5, 7}).samples);
    std::vector<ExtRat> with_inf = {ExtRat(Rat(1)), ExtRat::infinity()};
    CHECK_THROWS_AS(FiniteSeq(0, std::move(with_inf)).first_differences(), std::invalid_argument);
}

TEST_CASE("min_of_difference_periodic") {
    SUBCASE("ramp against a constant") {
        std::vector<ExtRat> ramp, flat;
        for (int n = 0; n < 120; ++n) {
            ramp.emplace_back(Rat(n));
            flat.emplace_back(Rat(50));
        }
        MinDiffResult res = min_of_difference_periodic({FiniteSeq(0, ramp), FiniteSeq(0, flat)}, 3);
        CHECK(res.diff_report.period == 1);
        CHECK(res.diff_report.n0 == 50);
        CHECK(res.min_seq.at_index(70) == ExtRat(Rat(50)));
    }

    SUBCASE("single input passes through") {
        FiniteSeq s = repeat_block(0, {1, 2}, 6);
        MinDiffResult res = min_of_difference_periodic({s}, 2);
        CHECK(res.min_seq.samples == s.samples);
    }

    SUBCASE("dominated ramp") {
        std::vector<ExtRat> slow, fast;
        for (int n = 0; n < 40; ++n) {
            slow.emplace_back(Rat(n));
            fast.emplace_back(Rat(2 * n));
        }
        MinDiffResult res = min_of_difference_periodic({FiniteSeq(0, slow), FiniteSeq(0, fast)}, 3);
        CHECK(res.diff_report.period == 1);
        CHECK(res.min_seq.at_index(17) == ExtRat(Rat(17)));
    }

    SUBCASE("too short to confirm") {
        FiniteSeq tiny = seq_of(0, {3, 1, 4, 1});
        CHECK_THROWS_AS(min_of_difference_periodic({tiny}, 3), std::invalid_argument);
    }
}

TEST_CASE("detect_period handles infinite values") {
    std::vector<ExtRat> vals;
    for (int n = 0; n < 16; ++n)
        vals.push_back(n % 2 == 0 ? ExtRat::infinity() : ExtRat(Rat(3)));
    PeriodReport r = detect_period(FiniteSeq(0, std::move(vals)), 3);
    REQUIRE(r.found());
    CHECK(r.period == 2);
    CHECK(r.block[0] == ExtRat::infinity());
}

TEST_CASE("combine PRODUCT multiplies pointwise") {
    FiniteSeq a = repeat_block(0, {2, 3}, 4);
    FiniteSeq b = repeat_block(0, {5, 7}, 4);
    CHECK(combine({a, b}, SeqOp::PRODUCT).samples == repeat_block(0, {10, 21}, 4).samples);
}

TEST_CASE("vector-valued period scan") {
    std::vector<std::vector<Int>> rows;
    for (int n = 0; n < 30; ++n) rows.push_back({Int(n % 2), Int(n % 3)});
    auto scan = detail::scan_period(rows, 3);
    REQUIRE(scan.found);
    CHECK(scan.period == 6);
    CHECK(scan.offset == 0);
}
