// End-to-end checks of the command line binary: spawns the real executable
// and inspects exit codes, stdout and stderr.

#include <doctest.h>
#include <json.hpp>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

RunResult run_cli(const std::string& args) {
    static int counter = 0;
    std::string err_path = "/tmp/smithseq_cli_err_" + std::to_string(counter++);
    std::string cmd = std::string(SMITHSEQ_CLI_PATH) + " " + args + " 2>" + err_path;

    RunResult res;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buf{};
    std::size_t got;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) res.out.append(buf.data(), got);
    int status = pclose(pipe);
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;

    std::ifstream err(err_path);
    std::stringstream ss;
    ss << err.rdbuf();
    res.err = ss.str();
    std::remove(err_path.c_str());
    return res;
}

std::string data_file(const std::string& name) { return std::string(SMITHSEQ_DATA_DIR) + "/" + name; }

} // namespace

TEST_CASE("snf of the identity file") {
    RunResult r = run_cli("snf --matrix " + data_file("identity3.txt"));
    CHECK(r.exit_code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["diag"] == nlohmann::json::array({"1", "1", "1"}));
    CHECK(j["rank"] == 3);
}

TEST_CASE("snf of the 4x4 companion-plus-scalar matrix") {
    RunResult r = run_cli("snf --matrix " + data_file("delayed4.txt"));
    CHECK(r.exit_code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["diag"] == nlohmann::json::array({"1", "1", "2", "256"}));
}

TEST_CASE("snf with witnesses") {
    RunResult r = run_cli("snf --matrix " + data_file("delayed4.txt") + " --witnesses");
    CHECK(r.exit_code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j.contains("u"));
    CHECK(j.contains("v"));
}

TEST_CASE("malformed matrix file fails with a line diagnostic") {
    RunResult r = run_cli("snf --matrix " + data_file("malformed.txt"));
    CHECK(r.exit_code == 2);
    CHECK(r.out.empty());
    CHECK(r.err.find("line 3") != std::string::npos);
}

TEST_CASE("missing source is a usage error") {
    RunResult r = run_cli("snf");
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("--matrix") != std::string::npos);
}

TEST_CASE("trace of the jordan family") {
    RunResult r = run_cli("trace --family jordan --param p=2 --horizon 40");
    CHECK(r.exit_code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["period"]["T"] == 2);
    // the closed form certifies the whole sampled window
    CHECK(j["period"]["status"] == "ORACLE_EXACT");
    CHECK(j["per_prime"].size() == 1);
    CHECK(j["per_prime"][0]["p"] == "2");
    CHECK(j["smith"].size() == 41);
}

TEST_CASE("trace of a plain file reports window confirmation only") {
    RunResult r = run_cli("trace --matrix " + data_file("delayed4.txt") + " --horizon 30");
    CHECK(r.exit_code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["period"]["status"] == "CONFIRMED_WINDOW");
}

TEST_CASE("trace of the delayed family finds threshold and period m-1") {
    RunResult r = run_cli("trace --family delayed --param m=4 --horizon 60");
    CHECK(r.exit_code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["period"]["T"] == 3);
    CHECK(j["period"]["n0"] == 3);
}

TEST_CASE("trace output is byte-identical across runs") {
    std::string args = "trace --family jordan --param p=3 --horizon 30";
    RunResult a = run_cli(args);
    RunResult b = run_cli(args);
    CHECK(a.exit_code == 0);
    CHECK(a.out == b.out);
}

TEST_CASE("trace rejects a too-small horizon") {
    RunResult r = run_cli("trace --family jordan --param p=2 --horizon 1");
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("horizon") != std::string::npos);
}

TEST_CASE("trace of a nilpotent matrix omits the per-prime analysis") {
    RunResult r = run_cli("trace --matrix " + data_file("nilpotent2.txt") + " --horizon 10");
    CHECK(r.exit_code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["per_prime"].empty());
    CHECK(r.err.find("nilpotent") != std::string::npos);
}

TEST_CASE("trace CSV has the documented columns") {
    RunResult r = run_cli("trace --family jordan --param p=2 --horizon 6 --format csv");
    CHECK(r.exit_code == 0);
    std::istringstream lines(r.out);
    std::string header;
    std::getline(lines, header);
    CHECK(header == "n,S_1,S_2,D_1,D_2,nu_2");
}

TEST_CASE("gcd-seq reports the ratio sequence and its period") {
    RunResult r = run_cli("gcd-seq --family jordan --param p=3 --horizon 24");
    CHECK(r.exit_code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["g"][0] == "1");
    CHECK(j["g"][1] == "3");
    CHECK(j["g"][2] == "9");
    CHECK(j["period"]["T"] == 3);

    SUBCASE("csv variant") {
        RunResult c = run_cli("gcd-seq --family jordan --param p=3 --horizon 12 --format csv");
        CHECK(c.exit_code == 0);
        CHECK(c.out.rfind("n,g\n0,1\n1,3\n2,9\n", 0) == 0);
    }
}

TEST_CASE("valuation splits nu_p into slope and remainder") {
    RunResult r = run_cli("valuation --family jordan --param p=2 --horizon 24 --primes 2");
    CHECK(r.exit_code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["per_prime"][0]["a"] == "1");
    CHECK(j["per_prime"][0]["h_period"]["T"] == 2);
    // nu_2(A^n) = n - 1 + min(1, nu_2(n)) for this block
    CHECK(j["per_prime"][0]["values"][1] == "0");
    CHECK(j["per_prime"][0]["values"][2] == "2");
}

TEST_CASE("valuation rejects nilpotent input") {
    RunResult r = run_cli("valuation --matrix " + data_file("nilpotent2.txt") + " --primes 2");
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("nilpotent") != std::string::npos);
}

TEST_CASE("newton polygon command") {
    RunResult r = run_cli("newton --coeffs 6,-5,1 --primes 2,3");
    CHECK(r.exit_code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["polygons"].size() == 2);
    CHECK(j["polygons"][0]["slopes"][0]["slope"] == "1");
    CHECK(j["polygons"][0]["slopes"][1]["slope"] == "0");

    RunResult bad = run_cli("newton --coeffs 1,2/3 --primes 2");
    CHECK(bad.exit_code == 2);
}

TEST_CASE("probe command bounds the detected period") {
    RunResult r = run_cli("probe --coeffs 0,-1/2,1/2 --c 2 --primes 2");
    CHECK(r.exit_code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["probes"][0]["theta"] == "2");
    CHECK(j["probes"][0]["D"] == 3);
    CHECK(j["probes"][0]["divides_bound"] == true);
}

TEST_CASE("candidates command") {
    RunResult r = run_cli("candidates --primes 2 --max-f 2 --max-l 1");
    CHECK(r.exit_code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["candidates"][0]["values"] == nlohmann::json::array({"1", "2", "3", "6"}));
}

TEST_CASE("generate emits a reproducible instance") {
    RunResult a = run_cli("generate --family random --param m=3 --param bound=5 --param seed=7");
    RunResult b = run_cli("generate --family random --param m=3 --param bound=5 --param seed=7");
    CHECK(a.exit_code == 0);
    CHECK(a.out == b.out);
    auto j = nlohmann::json::parse(a.out);
    CHECK(j["family"] == "random");
    CHECK(j["matrix"]["rows"] == 3);

    RunResult d = run_cli("generate --family delayed --param m=4");
    auto jd = nlohmann::json::parse(d.out);
    CHECK(jd["matrix"]["entries"][0][2] == "256");

    RunResult unknown = run_cli("generate --family nosuch");
    CHECK(unknown.exit_code == 2);
}

TEST_CASE("output lands in --out when requested") {
    std::string path = "/tmp/smithseq_cli_out.json";
    RunResult r = run_cli("snf --matrix " + data_file("identity3.txt") + " --out " + path);
    CHECK(r.exit_code == 0);
    CHECK(r.out.empty());
    std::ifstream f(path);
    auto j = nlohmann::json::parse(f);
    CHECK(j["rank"] == 3);
    std::remove(path.c_str());
}

TEST_CASE("selftest filtering") {
    RunResult r = run_cli("selftest --suite kummer");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("[PASS] kummer") != std::string::npos);
    CHECK(r.out.find("jordan") == std::string::npos);

    RunResult unknown = run_cli("selftest --suite nosuchsuite");
    CHECK(unknown.exit_code == 2);
    CHECK(unknown.err.find("nosuchsuite") != std::string::npos);
}

TEST_CASE("unknown subcommand is a usage error") {
    RunResult r = run_cli("frobnicate");
    CHECK(r.exit_code == 2);
}
