// Traces the Smith forms of the powers of a 2x2 Jordan-style block and
// prints the quotient diagonals D_n with the detected period.

#include "smithseq/generators.hpp"
#include "smithseq/power_trace.hpp"

#include <iostream>

using namespace smithseq;

int main() {
    OracleInstance inst = jordan_example(Int(3));
    std::cout << "A =\n" << inst.matrix.str() << "\n";

    PowerTrace trace = trace_powers(inst.matrix, 15);
    for (std::uint64_t n = 0; n < trace.horizon; ++n) {
        std::cout << "n=" << n << "  S_n = (";
        for (std::size_t i = 0; i < trace.smith_forms[n].diag.size(); ++i)
            std::cout << (i ? "," : "") << trace.smith_forms[n].diag[i];
        std::cout << ")  D_n = (";
        for (std::size_t i = 0; i < trace.diag_quotients[n].size(); ++i)
            std::cout << (i ? "," : "") << trace.diag_quotients[n][i];
        std::cout << ")\n";
    }

    DiagPeriodReport rep = detect_dn_periodicity(trace);
    std::cout << "\ndetected period T=" << rep.period << " from n0=" << rep.n0 << " ("
              << to_string(rep.status) << ", " << rep.confirmed_window << " repetitions confirmed)\n";
}
