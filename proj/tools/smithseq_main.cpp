// smithseq command line: Smith forms of integer matrix powers, quotient
// period detection, per-prime valuation analysis, and the built-in
// verification suites.
//
// Exit codes: 0 success, 1 suite or internal assertion failure, 2 usage or
// parse error.

#include "smithseq/generators.hpp"
#include "smithseq/io.hpp"
#include "smithseq/padic.hpp"
#include "smithseq/power_trace.hpp"
#include "smithseq/selftest.hpp"
#include "smithseq/sequences.hpp"
#include "smithseq/smith.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace {

using namespace smithseq;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SourceOpts {
    std::string matrix_file;
    std::string family;
    std::vector<std::string> params;
    std::uint64_t seed = 1;
};

struct OutputOpts {
    std::string format = "json";
    std::string out_path;
};

void add_source_options(CLI::App* cmd, SourceOpts& src) {
    cmd->add_option("--matrix", src.matrix_file, "matrix file (text or JSON format)");
    cmd->add_option("--family", src.family, "named instance family: jordan | delayed | random");
    cmd->add_option("--param", src.params, "family parameter as key=value (repeatable)");
    cmd->add_option("--seed", src.seed, "seed for the random family");
}

void add_output_options(CLI::App* cmd, OutputOpts& out) {
    cmd->add_option("--format", out.format, "output format: json | csv")
        ->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--out", out.out_path, "write output to this path instead of stdout");
}

std::map<std::string, std::string> parse_params(const std::vector<std::string>& kvs) {
    std::map<std::string, std::string> out;
    for (const std::string& kv : kvs) {
        auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0) throw UsageError("--param expects key=value, got '" + kv + "'");
        out[kv.substr(0, eq)] = kv.substr(eq + 1);
    }
    return out;
}

std::uint64_t param_u64(const std::map<std::string, std::string>& params, const std::string& key,
                        std::optional<std::uint64_t> fallback = std::nullopt) {
    auto it = params.find(key);
    if (it == params.end()) {
        if (fallback) return *fallback;
        throw UsageError("family parameter '" + key + "' is required");
    }
    try {
        return std::stoull(it->second);
    } catch (const std::exception&) {
        throw UsageError("family parameter '" + key + "' must be a nonnegative integer");
    }
}

struct ResolvedSource {
    IntMatrix matrix;
    std::optional<OracleInstance> instance;  // set for families with a closed form
};

ResolvedSource build_family(const SourceOpts& src) {
    auto params = parse_params(src.params);
    if (src.family == "jordan") {
        Int p = parse_int(params.count("p") ? params.at("p") : "2");
        OracleInstance inst = jordan_example(p, param_u64(params, "pad", 0));
        return ResolvedSource{inst.matrix, std::move(inst)};
    }
    if (src.family == "delayed") {
        OracleInstance inst = delayed_period_example(param_u64(params, "m", 4));
        return ResolvedSource{inst.matrix, std::move(inst)};
    }
    if (src.family == "random") {
        std::uint64_t seed = params.count("seed") ? param_u64(params, "seed") : src.seed;
        return ResolvedSource{random_instance(param_u64(params, "m", 4), param_u64(params, "bound", 9), seed),
                              std::nullopt};
    }
    throw UsageError("unknown family '" + src.family + "' (expected jordan, delayed or random)");
}

ResolvedSource resolve_source(const SourceOpts& src) {
    if (!src.matrix_file.empty() && !src.family.empty())
        throw UsageError("--matrix and --family are mutually exclusive");
    if (!src.matrix_file.empty()) return ResolvedSource{load_matrix_file(src.matrix_file), std::nullopt};
    if (!src.family.empty()) return build_family(src);
    throw UsageError("a matrix source is required: --matrix FILE or --family NAME");
}

IntMatrix resolve_matrix(const SourceOpts& src) { return resolve_source(src).matrix; }

std::vector<std::string> split_commas(const std::string& list) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (pos <= list.size()) {
        auto comma = list.find(',', pos);
        out.push_back(list.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

std::vector<Int> parse_prime_list(const std::string& list) {
    std::vector<Int> primes;
    for (const std::string& tok : split_commas(list)) {
        if (tok.empty()) continue;
        Int p = parse_int(tok);
        if (!is_prime(p)) throw UsageError("'" + tok + "' is not prime");
        primes.push_back(p);
    }
    if (primes.empty()) throw UsageError("--primes needs a nonempty comma-separated list");
    return primes;
}

// "auto" resolves to the primes dividing the largest nonzero determinantal
// divisor of the input; an explicit list is validated for primality.
std::vector<Int> resolve_primes(const std::string& primes_spec, const IntMatrix& m) {
    if (primes_spec == "auto") return auto_primes(m);
    return parse_prime_list(primes_spec);
}

std::vector<Rat> parse_rat_list(const std::string& list) {
    std::vector<Rat> out;
    for (const std::string& tok : split_commas(list)) out.push_back(parse_rat(tok));
    return out;
}

void emit(const OutputOpts& opts, const std::string& payload) {
    if (opts.out_path.empty()) {
        std::cout << payload;
        return;
    }
    std::ofstream f(opts.out_path);
    if (!f) throw UsageError("cannot open output path: " + opts.out_path);
    f << payload;
}

void require_json_only(const OutputOpts& opts, const char* cmd) {
    if (opts.format != "json") throw UsageError(std::string(cmd) + " only supports --format json");
}

int cmd_snf(const SourceOpts& src, const OutputOpts& out, bool witnesses) {
    require_json_only(out, "snf");
    SmithForm s = smith_form(resolve_matrix(src), witnesses);
    emit(out, smith_to_json(s).dump(2) + "\n");
    return 0;
}

int cmd_trace(const SourceOpts& src, const OutputOpts& out, std::uint64_t horizon,
              const std::string& primes_spec, std::size_t confirm) {
    ResolvedSource source = resolve_source(src);
    const IntMatrix& m = source.matrix;
    PowerTrace trace = trace_powers(m, horizon);
    DiagPeriodReport period = detect_dn_periodicity(trace, confirm);
    if (source.instance && oracle_matches_trace(*source.instance, trace))
        period = mark_oracle_exact(std::move(period));

    bool nilpotent = is_nilpotent(m);
    std::vector<Int> primes = nilpotent ? std::vector<Int>{} : resolve_primes(primes_spec, m);
    if (nilpotent) std::cerr << "note: input is nilpotent; per-prime sections omitted\n";

    if (out.format == "csv") {
        std::vector<std::pair<Int, FiniteSeq>> vals;
        for (const Int& p : primes) vals.emplace_back(p, valuation_seq(m, p, horizon));
        emit(out, trace_report_to_csv(trace, vals));
        return 0;
    }
    std::vector<ValuationDecomposition> per_prime;
    for (const Int& p : primes) per_prime.push_back(decompose_valuation(m, p, horizon, confirm));
    emit(out, trace_report_to_json(trace, period, per_prime).dump(2) + "\n");
    return 0;
}

int cmd_gcd_seq(const SourceOpts& src, const OutputOpts& out, std::uint64_t horizon, std::size_t confirm) {
    FiniteSeq g = gcd_ratio_seq(resolve_matrix(src), horizon);
    PeriodReport rep = detect_period(g, confirm);
    if (out.format == "csv") {
        std::string csv = "n,g\n";
        for (std::size_t n = 0; n < g.size(); ++n)
            csv += std::to_string(n) + "," + g.samples[n].str() + "\n";
        emit(out, csv);
        return 0;
    }
    json j{{"horizon", horizon}, {"g", finite_seq_to_json(g)["values"]}, {"period", period_report_to_json(rep)}};
    emit(out, j.dump(2) + "\n");
    return 0;
}

int cmd_valuation(const SourceOpts& src, const OutputOpts& out, std::uint64_t horizon,
                  const std::string& primes_spec, std::size_t confirm) {
    IntMatrix m = resolve_matrix(src);
    std::vector<Int> primes = resolve_primes(primes_spec, m);
    if (primes.empty()) throw UsageError("no primes divide the invariant factors; pass an explicit list");

    std::vector<std::pair<Int, FiniteSeq>> vals;
    for (const Int& p : primes) vals.emplace_back(p, valuation_seq(m, p, horizon));
    if (out.format == "csv") {
        std::string csv = "n";
        for (const auto& [p, seq] : vals) csv += ",nu_" + p.str();
        csv += "\n";
        for (std::uint64_t n = 0; n <= horizon; ++n) {
            csv += std::to_string(n);
            for (const auto& [p, seq] : vals) csv += "," + seq.samples[n].str();
            csv += "\n";
        }
        emit(out, csv);
        return 0;
    }
    json per = json::array();
    for (const auto& [p, seq] : vals) {
        ValuationDecomposition vd = decompose_valuation(m, p, horizon, confirm);
        per.push_back(json{{"p", p.str()},
                           {"a", rat_str(vd.slope)},
                           {"values", finite_seq_to_json(seq)["values"]},
                           {"h_period", period_report_to_json(vd.h_report)}});
    }
    emit(out, json{{"horizon", horizon}, {"per_prime", per}}.dump(2) + "\n");
    return 0;
}

int cmd_newton(const OutputOpts& out, const std::string& coeffs_spec, const std::string& primes_spec) {
    require_json_only(out, "newton");
    if (primes_spec == "auto") throw UsageError("newton needs an explicit prime list");
    std::vector<Int> coeffs;
    for (const Rat& r : parse_rat_list(coeffs_spec)) {
        if (denominator(r) != 1) throw UsageError("newton expects integer coefficients");
        coeffs.push_back(numerator(r));
    }
    json polys = json::array();
    for (const Int& p : parse_prime_list(primes_spec)) polys.push_back(newton_to_json(newton_polygon(coeffs, p)));
    json coeff_json = json::array();
    for (const Int& c : coeffs) coeff_json.push_back(c.str());
    emit(out, json{{"coeffs", coeff_json}, {"polygons", polys}}.dump(2) + "\n");
    return 0;
}

int cmd_probe(const OutputOpts& out, const std::string& coeffs_spec, const std::string& cutoff_spec,
              const std::string& primes_spec, std::uint64_t horizon, std::size_t confirm) {
    require_json_only(out, "probe");
    if (primes_spec == "auto") throw UsageError("probe needs an explicit prime list");
    std::vector<Rat> coeffs = parse_rat_list(coeffs_spec);
    Rat cutoff = parse_rat(cutoff_spec);
    json probes = json::array();
    for (const Int& p : parse_prime_list(primes_spec)) {
        PolyProbe probe(coeffs, cutoff, p);
        std::uint64_t h = horizon;
        if (h == 0) {
            Int bound = int_pow(p, static_cast<std::uint64_t>(probe.exponent_bound()));
            h = 4 * bound.convert_to<std::uint64_t>();
        }
        ProbeResult res = poly_probe_seq(probe, h, confirm);
        probes.push_back(json{{"p", p.str()},
                              {"c", rat_str(cutoff)},
                              {"theta", res.theta.str()},
                              {"D", res.exponent_bound},
                              {"period_bound", res.period_bound.str()},
                              {"period", period_report_to_json(res.report)},
                              {"divides_bound", res.divides_bound},
                              {"values", finite_seq_to_json(res.samples)["values"]}});
    }
    emit(out, json{{"probes", probes}}.dump(2) + "\n");
    return 0;
}

int cmd_candidates(const OutputOpts& out, const std::string& primes_spec, std::uint64_t max_f,
                   std::uint64_t max_l) {
    require_json_only(out, "candidates");
    if (primes_spec == "auto") throw UsageError("candidates needs an explicit prime list");
    json all = json::array();
    for (const Int& p : parse_prime_list(primes_spec)) {
        json vals = json::array();
        for (const Int& t : period_candidates(p, max_f, max_l)) vals.push_back(t.str());
        all.push_back(json{{"p", p.str()}, {"values", vals}});
    }
    emit(out, json{{"candidates", all}}.dump(2) + "\n");
    return 0;
}

int cmd_generate(const SourceOpts& src, const OutputOpts& out) {
    require_json_only(out, "generate");
    if (src.family.empty()) throw UsageError("generate needs --family");
    auto params = parse_params(src.params);
    json meta;
    IntMatrix m(1, 1);
    if (src.family == "jordan") {
        Int p = parse_int(params.count("p") ? params.at("p") : "2");
        std::uint64_t pad = param_u64(params, "pad", 0);
        OracleInstance inst = jordan_example(p, pad);
        m = inst.matrix;
        meta = json{{"p", p.str()}, {"pad", pad}};
    } else if (src.family == "delayed") {
        std::uint64_t size = param_u64(params, "m", 4);
        OracleInstance inst = delayed_period_example(size);
        m = inst.matrix;
        meta = json{{"m", size}};
    } else if (src.family == "random") {
        std::uint64_t size = param_u64(params, "m", 4);
        std::uint64_t bound = param_u64(params, "bound", 9);
        std::uint64_t seed = params.count("seed") ? param_u64(params, "seed") : src.seed;
        m = random_instance(size, bound, seed);
        meta = json{{"m", size}, {"bound", bound}, {"seed", seed}};
    } else {
        throw UsageError("unknown family '" + src.family + "' (expected jordan, delayed or random)");
    }
    emit(out, json{{"family", src.family}, {"params", meta}, {"matrix", matrix_to_json(m)}}.dump(2) + "\n");
    return 0;
}

int cmd_selftest(const std::vector<std::string>& suites) {
    for (const std::string& s : suites)
        if (!is_selftest_suite(s)) throw UsageError("unknown suite '" + s + "'");
    return run_selftest(suites, std::cout);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Smith forms of integer matrix powers and their eventual periodicity"};
    app.require_subcommand(1);

    SourceOpts src;
    OutputOpts out;
    std::uint64_t horizon = 40;
    std::string primes_spec = "auto";
    std::size_t confirm = 3;
    bool witnesses = false;
    std::string coeffs_spec, cutoff_spec = "0";
    std::uint64_t probe_horizon = 0;  // 0 = derive from the period bound
    std::uint64_t max_f = 2, max_l = 3;
    std::vector<std::string> suites;

    CLI::App* snf = app.add_subcommand("snf", "Smith normal form of a matrix");
    add_source_options(snf, src);
    add_output_options(snf, out);
    snf->add_flag("--witnesses", witnesses, "include unimodular factors U and V");

    CLI::App* trace = app.add_subcommand("trace", "Smith forms of A^0..A^N and the quotient periodicity");
    add_source_options(trace, src);
    add_output_options(trace, out);
    trace->add_option("--horizon", horizon, "largest power to analyze (>= 2)");
    trace->add_option("--primes", primes_spec, "'auto' or comma-separated primes");
    trace->add_option("--confirm", confirm, "confirmation factor for period detection (>= 2)");

    CLI::App* gcd_seq = app.add_subcommand("gcd-seq", "entry-gcd ratio sequence g(n)");
    add_source_options(gcd_seq, src);
    add_output_options(gcd_seq, out);
    gcd_seq->add_option("--horizon", horizon, "number of ratios to compute");
    gcd_seq->add_option("--confirm", confirm, "confirmation factor (>= 2)");

    CLI::App* valuation = app.add_subcommand("valuation", "per-prime valuations of A^n with slope split");
    add_source_options(valuation, src);
    add_output_options(valuation, out);
    valuation->add_option("--horizon", horizon, "largest power to analyze");
    valuation->add_option("--primes", primes_spec, "'auto' or comma-separated primes");
    valuation->add_option("--confirm", confirm, "confirmation factor (>= 2)");

    CLI::App* newton = app.add_subcommand("newton", "Newton polygon of an integer polynomial");
    add_output_options(newton, out);
    newton->add_option("--coeffs", coeffs_spec, "coefficients c_0,..,c_m (constant term first)")->required();
    newton->add_option("--primes", primes_spec, "comma-separated primes");

    CLI::App* probe = app.add_subcommand("probe", "period of min{0, nu_p(q(n)) - c} for rational q");
    add_output_options(probe, out);
    probe->add_option("--coeffs", coeffs_spec, "rational coefficients c_0,..,c_m (a or a/b)")->required();
    probe->add_option("--c", cutoff_spec, "rational cutoff c");
    probe->add_option("--primes", primes_spec, "comma-separated primes");
    probe->add_option("--horizon", probe_horizon, "samples to take (default 4x the period bound)");
    probe->add_option("--confirm", confirm, "confirmation factor (>= 2)");

    CLI::App* candidates = app.add_subcommand("candidates", "candidate periods (p^f - 1) p^L");
    add_output_options(candidates, out);
    candidates->add_option("--primes", primes_spec, "comma-separated primes");
    candidates->add_option("--max-f", max_f, "largest inertia exponent f");
    candidates->add_option("--max-l", max_l, "largest power exponent L");

    CLI::App* generate = app.add_subcommand("generate", "emit a named instance as JSON");
    add_source_options(generate, src);
    add_output_options(generate, out);

    CLI::App* selftest = app.add_subcommand("selftest", "run the built-in verification suites");
    selftest->add_option("--suite", suites, "run only the named suite (repeatable)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*snf) return cmd_snf(src, out, witnesses);
        if (*trace) {
            if (horizon < 2) throw UsageError("horizon too small; need at least 2");
            if (confirm < 2) throw UsageError("confirm factor must be at least 2");
            return cmd_trace(src, out, horizon, primes_spec, confirm);
        }
        if (*gcd_seq) {
            if (horizon < 2) throw UsageError("horizon too small; need at least 2");
            return cmd_gcd_seq(src, out, horizon, confirm);
        }
        if (*valuation) {
            if (horizon < 2) throw UsageError("horizon too small; need at least 2");
            return cmd_valuation(src, out, horizon, primes_spec, confirm);
        }
        if (*newton) return cmd_newton(out, coeffs_spec, primes_spec == "auto" ? "2" : primes_spec);
        if (*probe) return cmd_probe(out, coeffs_spec, cutoff_spec, primes_spec == "auto" ? "2" : primes_spec,
                                     probe_horizon, confirm);
        if (*candidates) return cmd_candidates(out, primes_spec == "auto" ? "2" : primes_spec, max_f, max_l);
        if (*generate) return cmd_generate(src, out);
        if (*selftest) return cmd_selftest(suites);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
