#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fixtures.hpp"
#include "tsagent/adapters/adapters.hpp"
#include "tsagent/cli/cli.hpp"

using tsagent::cli::run;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result invoke(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

std::size_t lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

const std::string kAir = fixtures::data_path("air_passengers.csv").string();

}  // namespace

TEST_CASE("features") {
    const auto r = invoke({"features", "--input", kAir});
    CHECK(r.code == 0);
    CHECK(lines(r.out) == 2);
    CHECK(r.out.find("0.9654") != std::string::npos);
}

TEST_CASE("forecast") {
    const auto r = invoke({"forecast", "--input", kAir, "--models", "seasonalnaive,theta", "--h", "12"});
    CHECK(r.code == 0);
    CHECK(lines(r.out) == 25);
    CHECK(r.out.find("1961-01-01") != std::string::npos);
    const auto no_q = invoke({"forecast", "--input", kAir, "--h", "3", "--levels", "none"});
    CHECK(no_q.code == 0);
    CHECK(no_q.out.find("q10") == std::string::npos);
}

TEST_CASE("crossval and evaluate") {
    const auto cv = invoke({"crossval", "--input", kAir, "--models", "naive", "--h", "12", "--windows", "2"});
    CHECK(cv.code == 0);
    CHECK(lines(cv.out) == 25);
    const auto ev = invoke({"evaluate", "--input", kAir, "--models", "naive,seasonalnaive", "--h", "12", "--windows", "2"});
    CHECK(ev.code == 0);
    REQUIRE(lines(ev.out) == 3);
    const auto second_line = ev.out.substr(ev.out.find('\n') + 1);
    CHECK(second_line.rfind("1,seasonalnaive", 0) == 0);
}

TEST_CASE("agent") {
    const auto path = std::filesystem::temp_directory_path() / "tsagent_cli_report.txt";
    const auto r = invoke({"agent", "--input", kAir, "--h", "12", "--query",
                           "How many passengers in the next 12 months?", "--report", path.string(), "--jobs", "1"});
    CHECK(r.code == 0);
    CHECK(lines(r.out) == 13);
    std::ifstream in(path);
    const std::string report((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(report.find("Approximately") != std::string::npos);
    CHECK(report.find("autoets") != std::string::npos);
    std::filesystem::remove(path);

    const auto no_key = invoke({"agent", "--input", kAir, "--mode", "llm", "--llm", "local:x", "--endpoint",
                                    "http://127.0.0.1:9", "--credential-env", "TSAGENT_CLI_TEST_UNSET_VAR"});
    CHECK(no_key.code == 1);
    CHECK(no_key.err.find("error: config:") != std::string::npos);
}

TEST_CASE("exit codes") {
    CHECK(invoke({}).code == 2);
    CHECK(invoke({"forecast", "--input", kAir, "--bogus"}).code == 2);
    CHECK(invoke({"forecast", "--input", kAir, "--h", "abc"}).code == 2);
    const auto missing = invoke({"forecast", "--input", "/nonexistent.csv"});
    CHECK(missing.code == 1);
    CHECK(missing.err.rfind("error: ", 0) == 0);
    const auto unknown = invoke({"forecast", "--input", kAir, "--models", "prophet"});
    CHECK(unknown.code == 1);
    CHECK(unknown.err.find("invalid-argument") != std::string::npos);
    CHECK(invoke({"--help"}).code == 0);
    auto stub = tsagent::adapters::serve_stub("127.0.0.1:0");
    const auto busy = invoke({"serve-stub", "--bind", "127.0.0.1:" + std::to_string(stub->port())});
    CHECK(busy.code == 1);
    CHECK(busy.err.find("bind") != std::string::npos);
}

TEST_CASE("forecast through an adapter") {
    auto stub = tsagent::adapters::serve_stub("127.0.0.1:0");
    const auto remote = invoke({"forecast", "--input", kAir, "--models", "adapter:" + stub->base_url(), "--h", "12"});
    const auto local = invoke({"forecast", "--input", kAir, "--models", "seasonalnaive", "--h", "12"});
    CHECK(remote.code == 0);
    CHECK(lines(remote.out) == lines(local.out));
    CHECK(stub->forecast_requests() == 1);
}
