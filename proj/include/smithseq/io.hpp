#pragma once

// File formats and JSON serialization. The matrix text format is
//   line 1: "rows cols", then one line of decimal entries per row;
// the JSON alternative encodes big integers as decimal strings.

#include "smithseq/matrix.hpp"
#include "smithseq/numbers.hpp"
#include "smithseq/padic.hpp"
#include "smithseq/power_trace.hpp"
#include "smithseq/sequences.hpp"
#include "smithseq/smith.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace smithseq {

using json = nlohmann::json;

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline IntMatrix matrix_from_text(std::istream& in) {
    std::string line;
    std::size_t lineno = 0;
    std::size_t rows = 0, cols = 0;

    auto next_line = [&](std::string& out) {
        while (std::getline(in, line)) {
            ++lineno;
            if (line.find_first_not_of(" \t\r") != std::string::npos) {
                out = line;
                return true;
            }
        }
        return false;
    };

    std::string header;
    if (!next_line(header)) throw ParseError("line 1: missing \"rows cols\" header");
    {
        std::istringstream hs(header);
        long long r = 0, c = 0;
        if (!(hs >> r >> c) || r < 1 || c < 1)
            throw ParseError("line " + std::to_string(lineno) + ": header must be two positive integers");
        std::string extra;
        if (hs >> extra) throw ParseError("line " + std::to_string(lineno) + ": unexpected token '" + extra + "'");
        rows = static_cast<std::size_t>(r);
        cols = static_cast<std::size_t>(c);
    }

    std::vector<Int> entries;
    entries.reserve(rows * cols);
    for (std::size_t i = 0; i < rows; ++i) {
        std::string rowline;
        if (!next_line(rowline))
            throw ParseError("line " + std::to_string(lineno + 1) + ": expected row " + std::to_string(i + 1) +
                             " of " + std::to_string(rows));
        std::istringstream rs(rowline);
        std::string tok;
        std::size_t got = 0;
        while (rs >> tok) {
            try {
                entries.push_back(parse_int(tok));
            } catch (const std::exception&) {
                throw ParseError("line " + std::to_string(lineno) + ": bad integer '" + tok + "'");
            }
            ++got;
        }
        if (got != cols)
            throw ParseError("line " + std::to_string(lineno) + ": expected " + std::to_string(cols) +
                             " entries, found " + std::to_string(got));
    }
    return IntMatrix(rows, cols, std::move(entries));
}

inline Int int_from_json(const json& v) {
    if (v.is_string()) return parse_int(v.get<std::string>());
    if (v.is_number_integer()) return Int(v.get<long long>());
    throw ParseError("matrix entries must be decimal strings or integers");
}

inline IntMatrix matrix_from_json(const json& j) {
    if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("entries"))
        throw ParseError("matrix JSON needs \"rows\", \"cols\" and \"entries\"");
    std::size_t rows = j.at("rows").get<std::size_t>();
    std::size_t cols = j.at("cols").get<std::size_t>();
    const json& e = j.at("entries");
    if (!e.is_array() || e.size() != rows) throw ParseError("\"entries\" must hold one array per row");
    std::vector<Int> entries;
    entries.reserve(rows * cols);
    for (const json& row : e) {
        if (!row.is_array() || row.size() != cols) throw ParseError("every row must hold \"cols\" entries");
        for (const json& v : row) entries.push_back(int_from_json(v));
    }
    return IntMatrix(rows, cols, std::move(entries));
}

inline json matrix_to_json(const IntMatrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m.at(i, j).str());
        rows.push_back(std::move(row));
    }
    return json{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", std::move(rows)}};
}

// Sniffs JSON by a leading '{'; anything else is parsed as the text format.
inline IntMatrix load_matrix_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open matrix file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    std::string content = buf.str();
    auto first = content.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && content[first] == '{') {
        json j = json::parse(content, nullptr, true, true);
        return matrix_from_json(j);
    }
    std::istringstream text(content);
    return matrix_from_text(text);
}

inline json smith_to_json(const SmithForm& s) {
    json diag = json::array();
    for (const Int& d : s.diag) diag.push_back(d.str());
    json out{{"diag", std::move(diag)}, {"rank", s.rank}};
    if (s.u) out["u"] = matrix_to_json(*s.u)["entries"];
    if (s.v) out["v"] = matrix_to_json(*s.v)["entries"];
    return out;
}

inline json period_report_to_json(const PeriodReport& r) {
    json block = json::array();
    for (const ExtRat& v : r.block) block.push_back(v.str());
    return json{{"n0", r.n0},
                {"T", r.period},
                {"block", std::move(block)},
                {"confirmed_window", r.confirmed_window},
                {"status", to_string(r.status)}};
}

inline json period_report_to_json(const DiagPeriodReport& r) {
    json block = json::array();
    for (const std::vector<Int>& d : r.block) {
        json row = json::array();
        for (const Int& v : d) row.push_back(v.str());
        block.push_back(std::move(row));
    }
    return json{{"n0", r.n0},
                {"T", r.period},
                {"block", std::move(block)},
                {"confirmed_window", r.confirmed_window},
                {"status", to_string(r.status)}};
}

inline json finite_seq_to_json(const FiniteSeq& s) {
    json vals = json::array();
    for (const ExtRat& v : s.samples) vals.push_back(v.str());
    return json{{"start", s.start_index}, {"values", std::move(vals)}};
}

inline json newton_to_json(const NewtonPolygon& np) {
    json points = json::array();
    for (const auto& [i, v] : np.points) points.push_back(json::array({i, v}));
    json slopes = json::array();
    for (const auto& [slope, mult] : np.slopes)
        slopes.push_back(json{{"slope", rat_str(slope)}, {"multiplicity", mult}});
    return json{{"p", np.p.str()},
                {"points", std::move(points)},
                {"slopes", std::move(slopes)},
                {"infinite_roots", np.infinite_roots}};
}

inline json trace_report_to_json(const PowerTrace& t, const DiagPeriodReport& period,
                                 const std::vector<ValuationDecomposition>& per_prime) {
    json smith = json::array();
    for (const SmithForm& s : t.smith_forms) {
        json diag = json::array();
        for (const Int& d : s.diag) diag.push_back(d.str());
        smith.push_back(std::move(diag));
    }
    json quotients = json::array();
    for (const auto& d : t.diag_quotients) {
        json row = json::array();
        for (const Int& v : d) row.push_back(v.str());
        quotients.push_back(std::move(row));
    }
    json primes = json::array();
    for (const ValuationDecomposition& vd : per_prime)
        primes.push_back(json{{"p", vd.p.str()},
                              {"a", rat_str(vd.slope)},
                              {"h_period", period_report_to_json(vd.h_report)}});
    return json{{"matrix", matrix_to_json(t.matrix)},
                {"horizon", t.horizon},
                {"smith", std::move(smith)},
                {"D", std::move(quotients)},
                {"period", period_report_to_json(period)},
                {"per_prime", std::move(primes)}};
}

// CSV with one row per n: the Smith diagonal, the quotient diagonal (empty
// on the last row, where no successor exists), then nu_p per prime column.
inline std::string trace_report_to_csv(const PowerTrace& t,
                                       const std::vector<std::pair<Int, FiniteSeq>>& valuations) {
    std::size_t m = t.matrix.rows();
    std::string out = "n";
    for (std::size_t i = 1; i <= m; ++i) out += ",S_" + std::to_string(i);
    for (std::size_t i = 1; i <= m; ++i) out += ",D_" + std::to_string(i);
    for (const auto& [p, seq] : valuations) out += ",nu_" + p.str();
    out += '\n';
    for (std::uint64_t n = 0; n <= t.horizon; ++n) {
        out += std::to_string(n);
        for (const Int& d : t.smith_forms[n].diag) out += "," + d.str();
        for (std::size_t i = 0; i < m; ++i)
            out += n < t.horizon ? "," + t.diag_quotients[n][i].str() : ",";
        for (const auto& [p, seq] : valuations) out += "," + seq.samples[n].str();
        out += '\n';
    }
    return out;
}

} // namespace smithseq
