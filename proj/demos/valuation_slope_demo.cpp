// Splits nu_p(A^n) into the Newton-polygon slope part a*n plus a bounded
// eventually periodic remainder h(n).

#include "smithseq/power_trace.hpp"

#include <iostream>

using namespace smithseq;

int main() {
    IntMatrix a(2, 2, {Int(2), Int(1), Int(0), Int(2)});
    std::cout << "A =\n" << a.str() << "\n";

    ValuationDecomposition vd = decompose_valuation(a, Int(2), 24);
    std::cout << "nu_2(A^n) = a*n + h(n) with a = " << rat_str(vd.slope) << "\n";
    for (std::int64_t n = 0; n <= vd.h_samples.end_index(); ++n)
        std::cout << "n=" << n << "  h(n) = " << vd.h_samples.at_index(n).str() << "\n";
    std::cout << "\nh has period " << vd.h_report.period << " from n0=" << vd.h_report.n0 << "\n";
}
