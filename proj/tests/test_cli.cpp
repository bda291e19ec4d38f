#include <unistd.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "pdcp/datagen.hpp"
#include "pdcp/ingest.hpp"
#include "pdcp/permutation.hpp"
#include "pdcp/report.hpp"
#include "pdcp/scan.hpp"

namespace fs = std::filesystem;

namespace {

std::string cli_path() {
    const char* env = std::getenv("PDCP_CLI");
    REQUIRE_MESSAGE(env != nullptr, "PDCP_CLI must point at the built binary");
    return env;
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("pdcp_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

int run(const std::string& cmd) { return std::system((cmd + " >/dev/null 2>&1").c_str()); }

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

}  // namespace

TEST_CASE("simulate then detect matches the library computation exactly") {
    TempDir tmp;
    const std::string cli = cli_path();
    const fs::path csv = tmp.path / "ex1.csv";
    const fs::path meta = tmp.path / "ex1.meta.json";
    const fs::path report = tmp.path / "report.json";

    REQUIRE(run(cli + " simulate --example 1 --seed 11 --out " + csv.string() + " --meta-out " +
                meta.string()) == 0);
    const auto meta_json = nlohmann::json::parse(slurp(meta));
    CHECK(meta_json.at("n") == 50);
    CHECK(meta_json.at("tau") == nlohmann::json::array({25}));

    REQUIRE(run(cli + " detect --input " + csv.string() +
                " --distance l2 --alpha 0.05 --permutations 99 --seed 4 --out " + report.string()) == 0);
    const auto report_json = nlohmann::json::parse(slurp(report));

    // library-level recomputation must agree bit for bit
    const auto data = pdcp::load_matrix_csv(csv);
    const auto D = pdcp::pairwise_matrix(data, pdcp::DistanceSpec{});
    const auto cand = pdcp::CandidateSet::from_delta(data.n, pdcp::CandidateSet::default_delta(data.n));
    const auto scan_result = pdcp::scan(D, cand);
    pdcp::PermutationConfig cfg;
    cfg.replicates = 99;
    cfg.seed = 4;
    const auto outcome = pdcp::permutation_test(D, cand, cfg);

    CHECK(report_json.at("t_hat").get<std::size_t>() == scan_result.t_hat);
    CHECK(report_json.at("s_hat").get<double>() == scan_result.s_hat);
    CHECK(report_json.at("p_value").get<double>() == outcome.p_value);
    CHECK(report_json.at("reject").get<bool>() == outcome.reject);
}

TEST_CASE("constant input never rejects") {
    TempDir tmp;
    const std::string cli = cli_path();
    const fs::path csv = tmp.path / "const.csv";
    {
        std::ofstream os(csv);
        for (int i = 0; i < 12; ++i) os << "1,1,1\n";
    }
    const fs::path report = tmp.path / "report.json";
    REQUIRE(run(cli_path() + std::string(" detect --input ") + csv.string() +
                " --permutations 99 --out " + report.string()) == 0);
    const auto j = nlohmann::json::parse(slurp(report));
    CHECK(j.at("reject") == false);
    CHECK(j.at("p_value") == 1.0);
}

TEST_CASE("operational failures exit nonzero and name the stage") {
    TempDir tmp;
    const std::string cli = cli_path();
    const fs::path ragged = tmp.path / "ragged.csv";
    {
        std::ofstream os(ragged);
        os << "1,2\n3\n";
    }
    const fs::path err = tmp.path / "err.txt";
    const int code = std::system(
        (cli + " detect --input " + ragged.string() + " 2> " + err.string() + " >/dev/null").c_str());
    CHECK(code != 0);
    const std::string message = slurp(err);
    CHECK(message.find("load-input") != std::string::npos);
    CHECK(message.find("line 2") != std::string::npos);

    // too-small n for any candidate split
    const fs::path tiny = tmp.path / "tiny.csv";
    {
        std::ofstream os(tiny);
        os << "1\n2\n3\n";
    }
    CHECK(run(cli + " detect --input " + tiny.string()) != 0);

    // n=5 with a delta that would leave no candidate splits
    const fs::path five = tmp.path / "five.csv";
    {
        std::ofstream os(five);
        os << "1\n5\n2\n4\n3\n";
    }
    CHECK(run(cli + " detect --input " + five.string() + " --delta 0.7") != 0);
    CHECK(run(cli + " detect --input " + five.string() + " --permutations 49") == 0);
}

TEST_CASE("reports are byte-identical across thread counts") {
    TempDir tmp;
    const std::string cli = cli_path();
    const fs::path csv = tmp.path / "ex2.csv";
    REQUIRE(run(cli + " simulate --example 2 --seed 21 --out " + csv.string()) == 0);
    std::string first;
    for (int threads : {1, 4}) {
        const fs::path report = tmp.path / ("report_t" + std::to_string(threads) + ".json");
        REQUIRE(run(cli + " detect --input " + csv.string() + " --permutations 99 --seed 5 --threads " +
                    std::to_string(threads) + " --out " + report.string()) == 0);
        const std::string body = slurp(report);
        if (first.empty())
            first = body;
        else
            CHECK(body == first);
    }
}

TEST_CASE("detect-multi emits locations and a points CSV") {
    TempDir tmp;
    const std::string cli = cli_path();
    const fs::path csv = tmp.path / "ex14.csv";
    REQUIRE(run(cli + " simulate --example 14 --seed 31 --out " + csv.string()) == 0);
    const fs::path report = tmp.path / "multi.json";
    const fs::path points = tmp.path / "points.csv";
    REQUIRE(run(cli + " detect-multi --input " + csv.string() +
                " --distance exp --permutations 99 --seed 31 --out " + report.string() +
                " --points-out " + points.string()) == 0);
    const auto j = nlohmann::json::parse(slurp(report));
    CHECK(j.at("method") == "multi");
    CHECK(j.at("change_points").is_array());
    const std::string pts = slurp(points);
    CHECK(pts.rfind("location,p_value,depth", 0) == 0);
}

TEST_CASE("returns subcommand converts prices and lists dropped assets") {
    TempDir tmp;
    const std::string cli = cli_path();
    const fs::path prices = tmp.path / "prices.csv";
    {
        std::ofstream os(prices);
        os << "a,b\n100,5\n110,NA\n99,6\n";
    }
    const fs::path out = tmp.path / "returns.csv";
    const fs::path drops = tmp.path / "dropped.txt";
    REQUIRE(run(cli + " returns --input " + prices.string() + " --out " + out.string() +
                " --drop-list " + drops.string()) == 0);
    std::istringstream is(slurp(out));
    const auto m = pdcp::parse_matrix_csv(is, "returns");
    CHECK(m.n == 2);
    CHECK(m.d == 1);
    CHECK(m.at(0, 0) == 110.0 / 100.0 - 1.0);
    CHECK(slurp(drops) == "b\n");
}

TEST_CASE("bench smoke run emits well-formed CSV") {
    TempDir tmp;
    const std::string cli = cli_path();
    const fs::path out = tmp.path / "bench.csv";
    const fs::path json_out = tmp.path / "bench.json";
    REQUIRE(run(cli + " bench --example 2 --reps 1 --permutations 49 --seed 8 --out " + out.string() +
                " --json-out " + json_out.string()) == 0);
    const std::string csv = slurp(out);
    CHECK(csv.rfind("distance,example,d,n,tau,reps,detected,", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);  // header + one row
    const auto j = nlohmann::json::parse(slurp(json_out));
    REQUIRE(j.is_array());
    CHECK(j.size() == 1);
    CHECK(j[0].at("reps") == 1);
}
