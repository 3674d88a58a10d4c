#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sys/wait.h>

#include "qtime/config.hpp"

using namespace qtime;
using namespace qtime::cli;

namespace {

namespace fs = std::filesystem;

struct Outcome {
    int code;
    std::string out;
    std::string diag;
};

Outcome invoke(const std::vector<std::string>& args) {
    std::ostringstream out, diag;
    const int code = main_entry(args, out, diag);
    return {code, out.str(), diag.str()};
}

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / "qtime_test_cli";
    fs::create_directories(dir);
    return dir / name;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

void spit(const fs::path& p, const std::string& text) {
    std::ofstream(p, std::ios::binary) << text;
}

std::vector<std::string> data_lines(const std::string& csv) {
    std::vector<std::string> rows;
    std::istringstream in(csv);
    for (std::string line; std::getline(in, line);) {
        if (!line.empty() && line[0] != '#') rows.push_back(line);
    }
    return rows;
}

} // namespace

TEST_CASE("parse arrival flags") {
    const auto c = parse({"arrival", "--k0", "1", "--sigma-p", "0.05", "--x0", "10", "--L", "10", "--m", "1"});
    CHECK(c.command == "arrival");
    CHECK(*c.k0 == 1.0);
    CHECK(*c.sigma_p == 0.05);
    CHECK(*c.x0 == 10.0);
    CHECK(*c.L == 10.0);
    CHECK(c.m == 1.0);
    CHECK(parse({"arrival", "--k0=1", "--sigma-p=0.05", "--x0=10", "--L=10"}) == c);
}

TEST_CASE("rejections name the key") {
    const auto r = invoke({"scatter", "--barrier", "square:1.5,2", "--m", "1", "--kmin", "0.1", "--kmax", "1", "--count", "3"});
    CHECK(r.code == 2);
    CHECK(r.diag.find("--barrier") != std::string::npos);
    CHECK(std::count(r.diag.begin(), r.diag.end(), '\n') == 1);
    CHECK_THROWS_AS(parse({"scatter", "--barrier", "square:1.5,2", "--m", "1"}), ConfigError);

    try {
        parse({"arrival", "--k0", "1x"});
        FAIL("accepted a malformed number");
    } catch (const ConfigError& e) {
        CHECK(e.key() == "k0");
    }
    try {
        parse({"arrival", "--bogus", "1"});
        FAIL("accepted an unknown key");
    } catch (const ConfigError& e) {
        CHECK(e.key() == "bogus");
    }
    CHECK_THROWS_AS(parse({"hartmann", "--alpha", "flat"}), ConfigError);
    CHECK_THROWS_AS(parse({"arrival", "--k0", "1", "--k0", "2"}), ConfigError);
    CHECK_THROWS_AS(parse({"teleport"}), InputError);
    CHECK(invoke({}).code == 2);
    CHECK(invoke({"help"}).code == 0);
}

TEST_CASE("flags override the config file") {
    const auto file = scratch("precedence.cfg");
    spit(file, "# packet\nk0=1\nsigma-p=0.05\nx0=10\nL=10\n");
    const auto c = parse({"arrival", "--config", file.string(), "--L", "20"});
    CHECK(*c.L == 20.0);
    CHECK(*c.k0 == 1.0);
    CHECK(*parse({"arrival", "--config", file.string()}).L == 10.0);
    spit(file, "k0=1\nwarp=9\n");
    CHECK_THROWS_AS(parse({"arrival", "--config", file.string()}), ConfigError);
}

TEST_CASE("emit round trip") {
    const std::vector<std::vector<std::string>> cases = {
        {"scatter", "--barrier", "pw:1,0.3;0.5,0;2,0.7", "--kmin", "0.05", "--kmax", "2", "--count", "40", "--m", "1.3"},
        {"arrival", "--k0", "0.7", "--sigma-p", "0.0140000000001", "--x0", "3", "--L", "50", "--barrier", "square:0.5,2",
         "--alpha", "gauss:0.7,0.1", "--tmin", "10", "--tmax", "400", "--nt", "1000", "--nk", "512"},
        {"delay", "--barrier", "square:0.5,2", "--kmin", "0.1", "--kmax", "0.9", "--count", "9"},
        {"delay", "--barrier", "square:0.5,2", "--k0", "0.4", "--sigma-p", "0.008", "--x0", "1", "--L", "200", "--method", "empirical"},
        {"hartmann", "--V0", "0.5", "--k", "0.5", "--d-list", "0.5:20:40"},
        {"causality", "--k0", "0.5", "--sigma-p", "0.01", "--x0", "200", "--L", "80", "--barrier", "square:0.5,2"},
        {"analogue", "--stack", "pw:1,2.25;0.5,-3", "--omega-min", "0.2", "--omega-max", "2", "--count", "5"},
        {"analogue", "--map-from", "0.5,2,1,0.1", "--omega-min", "0.2", "--omega-max", "2", "--count", "5"},
    };
    for (const auto& args : cases) {
        const auto c = parse(args);
        CHECK(parse_config_text(emit(c)) == c);
    }
}

TEST_CASE("output independent of thread count") {
    const std::vector<std::string> base = {"arrival", "--k0", "0.5", "--sigma-p", "0.02", "--x0", "5", "--L", "40",
                                           "--barrier", "square:0.5,2", "--nk", "512", "--nt", "800"};
    auto one = base, four = base;
    one.insert(one.end(), {"--threads", "1"});
    four.insert(four.end(), {"--threads", "4"});
    const auto a = invoke(one), b = invoke(four);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out == invoke(one).out);
    CHECK(a.out.find('\r') == std::string::npos);
}

TEST_CASE("hartmann rows") {
    const auto r = invoke({"hartmann", "--V0", "0.5", "--k", "0.5", "--d-list", "0.5:20:40"});
    REQUIRE(r.code == 0);
    const auto rows = data_lines(r.out);
    REQUIRE(rows.size() == 41);
    CHECK(rows.front() == "d,t_d,tau");
    double prev = 0.0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double d = std::stod(rows[i].substr(0, rows[i].find(',')));
        CHECK(d > prev);
        prev = d;
    }
}

TEST_CASE("causality verdict") {
    const auto r = invoke({"causality", "--k0", "0.5", "--sigma-p", "0.01", "--x0", "200", "--L", "80", "--barrier", "square:0.5,2"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("# verdict: Δs² > 0: no superluminal signal") != std::string::npos);
    CHECK(r.diag.find("Δs² > 0: no superluminal signal") != std::string::npos);
}

TEST_CASE("outputs re-run from their own header") {
    const auto first = scratch("first.csv");
    const auto second = scratch("second.csv");
    REQUIRE(invoke({"scatter", "--barrier", "pw:1,0.3;0.5,0.6", "--kmin", "0.1", "--kmax", "1.5", "--count", "7", "--out",
                    first.string()}).code == 0);
    const auto text = slurp(first);
    CHECK(text.rfind("# meta: tool=qtime\n# meta: version=0.1.0\n", 0) == 0);
    REQUIRE(invoke({"scatter", "--config", first.string(), "--out", second.string()}).code == 0);
    CHECK(slurp(second) == text);
}

TEST_CASE("numerical failure exit code") {
    const auto r = invoke({"arrival", "--k0", "1", "--sigma-p", "0.05", "--x0", "10", "--L", "10", "--nk", "16", "--tmin", "0",
                           "--tmax", "5000", "--nt", "100"});
    CHECK(r.code == 3);
    CHECK(r.out.empty());
}

TEST_CASE("binary exit codes") {
    const std::string cli = QTIME_CLI_PATH;
    CHECK(std::system((cli + " scatter --barrier square:0.5,2 --kmin 0.1 --kmax 1 --count 3 > /dev/null").c_str()) == 0);
    CHECK(WEXITSTATUS(std::system((cli + " scatter --barrier square:1.5,2 --m 1 2> /dev/null").c_str())) == 2);
}
