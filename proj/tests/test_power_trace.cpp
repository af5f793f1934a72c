#include "smithseq/power_trace.hpp"
#include "smithseq/generators.hpp"

#include <doctest.h>

#include <vector>

using namespace smithseq;

TEST_CASE("trace_powers basics") {
    CHECK_THROWS_AS(trace_powers(IntMatrix(2, 3), 5), std::invalid_argument);
    CHECK_THROWS_AS(trace_powers(IntMatrix::identity(2), 1), std::invalid_argument);

    SUBCASE("identity stays identity") {
        PowerTrace t = trace_powers(IntMatrix::identity(3), 6);
        for (const SmithForm& s : t.smith_forms) CHECK(s.diag == std::vector<Int>{Int(1), Int(1), Int(1)});
        for (const auto& d : t.diag_quotients) CHECK(d == std::vector<Int>{Int(1), Int(1), Int(1)});
    }

    SUBCASE("quotient diagonal for the 3-Jordan block") {
        PowerTrace t = trace_powers(IntMatrix(2, 2, {Int(3), Int(1), Int(0), Int(3)}), 8);
        CHECK(t.smith_forms[3].diag == std::vector<Int>{Int(27), Int(27)});
        CHECK(t.smith_forms[4].diag == std::vector<Int>{Int(27), Int(243)});
        CHECK(t.diag_quotients[3] == std::vector<Int>{Int(1), Int(9)});
    }

    SUBCASE("delayed family fifth power") {
        PowerTrace t = trace_powers(delayed_period_example(4).matrix, 6);
        CHECK(t.smith_forms[5].diag == std::vector<Int>{Int(32), Int(256), Int(65536), Int(65536)});
    }

    SUBCASE("reconstruction S_{n+1} = D_n S_n on random instances") {
        for (std::uint64_t seed = 500; seed < 506; ++seed) {
            PowerTrace t = trace_powers(random_instance(3, 9, seed), 10);
            for (std::uint64_t n = 0; n < t.horizon; ++n)
                for (std::size_t i = 0; i < 3; ++i) {
                    CHECK(t.diag_quotients[n][i] >= 0);
                    if (t.smith_forms[n].diag[i] != 0)
                        CHECK(t.smith_forms[n + 1].diag[i] ==
                              t.diag_quotients[n][i] * t.smith_forms[n].diag[i]);
                }
        }
    }

    SUBCASE("nilpotent input is allowed and ends in zeros") {
        IntMatrix shift(3, 3);
        shift.at(0, 1) = 2;
        shift.at(1, 2) = 3;
        PowerTrace t = trace_powers(shift, 6);
        CHECK(t.smith_forms[3].diag == std::vector<Int>{Int(0), Int(0), Int(0)});
        CHECK(t.diag_quotients[4] == std::vector<Int>{Int(0), Int(0), Int(0)});
        DiagPeriodReport rep = detect_dn_periodicity(t, 2);
        CHECK(rep.found());
        CHECK(rep.period == 1);
    }
}

TEST_CASE("quotient periodicity detection") {
    SUBCASE("jordan family has period p") {
        PowerTrace t = trace_powers(jordan_example(Int(2)).matrix, 40);
        DiagPeriodReport rep = detect_dn_periodicity(t, 3);
        REQUIRE(rep.found());
        CHECK(rep.period == 2);
    }

    SUBCASE("delayed family settles only after the threshold") {
        PowerTrace t = trace_powers(delayed_period_example(4).matrix, 60);
        DiagPeriodReport rep = detect_dn_periodicity(t, 3);
        REQUIRE(rep.found());
        CHECK(rep.period == 3);
        CHECK(rep.n0 == 3);
    }

    SUBCASE("diagonal matrix is constant from the start") {
        PowerTrace t = trace_powers(IntMatrix::diagonal({Int(2), Int(6)}), 20);
        DiagPeriodReport rep = detect_dn_periodicity(t, 3);
        REQUIRE(rep.found());
        CHECK(rep.period == 1);
        CHECK(rep.n0 == 0);
        CHECK(rep.block[0] == std::vector<Int>{Int(2), Int(6)});
    }
}

namespace {

// lcm of the detected periods of the p-parts of the quotient diagonals,
// over the automatically selected primes.
Int per_prime_period_lcm(const IntMatrix& a, const PowerTrace& t, std::size_t confirm) {
    Int l = 1;
    for (const Int& p : auto_primes(a)) {
        std::vector<std::vector<Int>> local_quotients;
        for (std::uint64_t n = 0; n < t.horizon; ++n) {
            std::vector<Int> q(a.rows());
            for (std::size_t i = 0; i < a.rows(); ++i) {
                if (t.diag_quotients[n][i] == 0) continue;  // q[i] stays 0
                Int rest = t.diag_quotients[n][i];
                std::int64_t e = remove_prime_power(rest, p);
                q[i] = int_pow(p, static_cast<std::uint64_t>(e));
            }
            local_quotients.push_back(std::move(q));
        }
        auto scan = detail::scan_period(local_quotients, confirm);
        REQUIRE(scan.found);
        l = int_lcm(l, Int(scan.period));
    }
    return l;
}

} // namespace

TEST_CASE("combined quotient period is the lcm of the per-prime periods") {
    SUBCASE("direct sum of Jordan-style blocks at 2 and 3") {
        // 2-part has period 2, 3-part has period 3; the quotient sequence of
        // the direct sum repeats with 6.
        IntMatrix a(4, 4);
        a.at(0, 0) = 2; a.at(0, 1) = 1; a.at(1, 1) = 2;
        a.at(2, 2) = 3; a.at(2, 3) = 1; a.at(3, 3) = 3;
        PowerTrace t = trace_powers(a, 50);
        DiagPeriodReport combined = detect_dn_periodicity(t, 3);
        REQUIRE(combined.found());
        Int expected = per_prime_period_lcm(a, t, 3);
        CHECK(Int(combined.period) == expected);
        CHECK(expected == 6);
    }

    SUBCASE("random instances") {
        for (std::uint64_t seed = 700; seed < 706; ++seed) {
            IntMatrix a = random_instance(3, 5, seed);
            if (is_nilpotent(a) || auto_primes(a).empty()) continue;
            PowerTrace t = trace_powers(a, 80);
            DiagPeriodReport combined = detect_dn_periodicity(t, 3);
            REQUIRE(combined.found());
            CHECK(Int(combined.period) == per_prime_period_lcm(a, t, 3));
        }
    }
}

TEST_CASE("gcd ratio sequence") {
    SUBCASE("jordan block at 3 follows the residue rule") {
        FiniteSeq g = gcd_ratio_seq(jordan_example(Int(3)).matrix, 15);
        for (std::size_t n = 0; n < g.size(); ++n) {
            Int expected = (n + 1) % 3 == 0 ? Int(9) : (n % 3 == 0 ? Int(1) : Int(3));
            CHECK(g.samples[n] == ExtRat(Rat(expected)));
        }
    }

    SUBCASE("scalar matrix is constant") {
        FiniteSeq g = gcd_ratio_seq(mat_scale(Int(2), IntMatrix::identity(3)), 10);
        for (const ExtRat& v : g.samples) CHECK(v == ExtRat(Rat(2)));
    }

    SUBCASE("delayed family jumps at the threshold") {
        FiniteSeq g = gcd_ratio_seq(delayed_period_example(4).matrix, 10);
        CHECK(g.samples[2] == ExtRat(Rat(8)));  // gcd goes 1 -> 8 entering n = 3
    }

    SUBCASE("nilpotent matrices are refused") {
        IntMatrix shift(2, 2);
        shift.at(0, 1) = 1;
        CHECK_THROWS_AS(gcd_ratio_seq(shift, 5), std::invalid_argument);
    }
}

TEST_CASE("valuation sequences") {
    SUBCASE("2-Jordan block closed form") {
        FiniteSeq nu = valuation_seq(IntMatrix(2, 2, {Int(2), Int(1), Int(0), Int(2)}), Int(2), 24);
        CHECK(nu.samples[0] == ExtRat(Rat(0)));
        for (std::int64_t n = 1; n <= 24; ++n) {
            std::int64_t low = int_valuation(Int(n), Int(2)).value;
            Rat expected(n - 1 + (low < 1 ? low : 1));
            CHECK(nu.at_index(n) == ExtRat(expected));
        }
    }

    SUBCASE("coprime diagonal stays at zero") {
        FiniteSeq nu = valuation_seq(IntMatrix::diagonal({Int(2), Int(3)}), Int(2), 12);
        for (const ExtRat& v : nu.samples) CHECK(v == ExtRat(Rat(0)));
    }

    SUBCASE("unimodular matrices have zero valuations") {
        IntMatrix r(2, 2, {Int(0), Int(1), Int(-1), Int(0)});
        FiniteSeq nu = valuation_seq(r, Int(3), 10);
        for (const ExtRat& v : nu.samples) CHECK(v == ExtRat(Rat(0)));
    }

    SUBCASE("first differences of the valuations settle into a period") {
        for (std::uint64_t seed = 600; seed < 605; ++seed) {
            IntMatrix a = random_instance(3, 9, seed);
            if (is_nilpotent(a)) continue;
            for (const Int& p : auto_primes(a)) {
                PeriodReport rep = detect_period(valuation_seq(a, p, 60).first_differences(), 3);
                CHECK(rep.found());
            }
        }
    }
}

TEST_CASE("valuation decomposition") {
    SUBCASE("2-Jordan block: slope 1, remainder of period 2") {
        ValuationDecomposition vd = decompose_valuation(IntMatrix(2, 2, {Int(2), Int(1), Int(0), Int(2)}),
                                                        Int(2), 40);
        CHECK(vd.slope == Rat(1));
        REQUIRE(vd.h_report.found());
        CHECK(vd.h_report.period == 2);
        CHECK(vd.h_samples.at_index(0) == ExtRat(Rat(0)));
        CHECK(vd.h_samples.at_index(1) == ExtRat(Rat(-1)));
        CHECK(vd.h_report.block == std::vector<ExtRat>{ExtRat(Rat(0)), ExtRat(Rat(-1))});
    }

    SUBCASE("mixed diagonal has slope 0") {
        ValuationDecomposition vd = decompose_valuation(IntMatrix::diagonal({Int(2), Int(3)}), Int(2), 20);
        CHECK(vd.slope == Rat(0));
        for (const ExtRat& v : vd.h_samples.samples) CHECK(v == ExtRat(Rat(0)));
    }

    SUBCASE("unimodular input is flat") {
        IntMatrix r(2, 2, {Int(0), Int(1), Int(-1), Int(0)});
        ValuationDecomposition vd = decompose_valuation(r, Int(2), 16);
        CHECK(vd.slope == Rat(0));
        for (const ExtRat& v : vd.h_samples.samples) CHECK(v == ExtRat(Rat(0)));
    }

    SUBCASE("exact reconstruction nu = a*n + h(n)") {
        for (std::uint64_t seed = 620; seed < 624; ++seed) {
            IntMatrix a = random_instance(3, 9, seed);
            if (is_nilpotent(a)) continue;
            for (const Int& p : auto_primes(a)) {
                ValuationDecomposition vd = decompose_valuation(a, p, 50);
                FiniteSeq nu = valuation_seq(a, p, 50);
                for (std::int64_t n = 0; n <= 50; ++n)
                    CHECK(Rat(vd.slope * Rat(Int(n)) + vd.h_samples.at_index(n).value) ==
                          nu.at_index(n).value);
            }
        }
    }

    SUBCASE("nilpotent matrices are refused") {
        IntMatrix shift(2, 2);
        shift.at(0, 1) = 1;
        CHECK_THROWS_AS(decompose_valuation(shift, Int(2), 10), std::invalid_argument);
        CHECK_THROWS_AS(valuation_seq(shift, Int(2), 10), std::invalid_argument);
    }
}

TEST_CASE("auto prime selection") {
    CHECK(auto_primes(jordan_example(Int(3)).matrix) == std::vector<Int>{Int(3)});
    CHECK(auto_primes(delayed_period_example(4).matrix) == std::vector<Int>{Int(2)});
    IntMatrix r(2, 2, {Int(0), Int(1), Int(-1), Int(0)});
    CHECK(auto_primes(r).empty());
    CHECK(auto_primes(IntMatrix::diagonal({Int(6), Int(6)})) == std::vector<Int>{Int(2), Int(3)});
}
