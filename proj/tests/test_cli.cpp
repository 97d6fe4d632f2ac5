#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "nkgeo/nkgeo.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct RunResult {
    int exit_code;
    std::string output;
};

std::string temp_path(const std::string& tag) {
    static int counter = 0;
    return (fs::temp_directory_path() /
            ("nkgeo_cli_" + std::to_string(::getpid()) + "_" + tag + std::to_string(counter++)))
        .string();
}

RunResult run_cli(const std::string& args) {
    const std::string path = temp_path("out");
    const std::string cmd = std::string(NKGEO_CLI_PATH) + " " + args + " >" + path + " 2>&1";
    const int raw = std::system(cmd.c_str());
    const int code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    std::ifstream f(path);
    std::stringstream ss;
    ss << f.rdbuf();
    fs::remove(path);
    return {code, ss.str()};
}

std::vector<std::vector<double>> parse_csv(const std::string& text, std::string* header = nullptr) {
    std::vector<std::vector<double>> rows;
    std::stringstream ss(text);
    std::string line;
    bool first = true;
    while (std::getline(ss, line)) {
        if (line.empty()) continue;
        if (first) {
            if (header) *header = line;
            first = false;
            continue;
        }
        std::vector<double> row;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) row.push_back(std::strtod(cell.c_str(), nullptr));
        rows.push_back(std::move(row));
    }
    return rows;
}

constexpr double kTwoPi = 2.0 * std::numbers::pi;

}  // namespace

TEST_CASE("sample emits the Case1 trajectory on the grid") {
    const auto res = run_cli("sample --velocity 0,1,0,0,0,-1,0,0 --t-end 6.283185307179586 --samples 5");
    REQUIRE(res.exit_code == 0);
    std::string header;
    const auto rows = parse_csv(res.output, &header);
    CHECK(header == "t,x0,x1,x2,x3,y0,y1,y2,y3");
    REQUIRE(rows.size() == 5);
    // first row is the start point
    CHECK(rows[0][0] == 0.0);
    CHECK(rows[0][1] == 1.0);
    CHECK(rows[0][5] == 1.0);
    // row at t = pi is (-1, -1)
    const auto& mid = rows[2];
    CHECK(std::abs(mid[1] + 1.0) < 1e-12);
    CHECK(std::abs(mid[2]) < 1e-12);
    CHECK(std::abs(mid[5] + 1.0) < 1e-12);
    for (const auto& row : rows) REQUIRE(row.size() == 9);
}

TEST_CASE("sample CSV round-trips doubles exactly") {
    using namespace nkgeo;
    const std::string out = temp_path("csv");
    const auto res = run_cli("sample --velocity 0,1,1,0,0,0,-1,0 --t-end 3.5 --samples 7 --out " + out);
    REQUIRE(res.exit_code == 0);

    std::ifstream f(out);
    std::stringstream ss;
    ss << f.rdbuf();
    fs::remove(out);
    const auto rows = parse_csv(ss.str());
    REQUIRE(rows.size() == 7);

    // recompute with the library; parsed values must match bit for bit
    const NKPoint start = NKPoint::origin();
    const NKTangent vel{start, Quat{0, 1, 1, 0}, Quat{0, 0, -1, 0}};
    const GeodesicCurve curve = make_geodesic(start, vel);
    for (int i = 0; i < 7; ++i) {
        const double t = 3.5 * static_cast<double>(i) / 6.0;
        REQUIRE(rows[static_cast<size_t>(i)][0] == t);
        const auto comp = point_components(eval(curve, t));
        for (size_t c = 0; c < 8; ++c) REQUIRE(rows[static_cast<size_t>(i)][c + 1] == comp[c]);
    }
}

TEST_CASE("sample with oracle columns keeps the deviation small") {
    const auto res = run_cli(
        "sample --velocity 0,1,1,0,0,0,-1,0 --t-end 5 --samples 11 --oracle --step 0.001");
    REQUIRE(res.exit_code == 0);
    std::string header;
    const auto rows = parse_csv(res.output, &header);
    CHECK(header == "t,x0,x1,x2,x3,y0,y1,y2,y3,ox0,ox1,ox2,ox3,oy0,oy1,oy2,oy3,dev");
    REQUIRE(rows.size() == 11);
    for (const auto& row : rows) {
        REQUIRE(row.size() == 18);
        CHECK(row.back() < 1e-6);
    }
}

TEST_CASE("sample json format") {
    const auto res = run_cli("sample --velocity 0,1,0,0,0,-1,0,0 --samples 3 --t-end 1 --format json");
    REQUIRE(res.exit_code == 0);
    const json j = json::parse(res.output);
    CHECK(j["case"] == "Case1");
    REQUIRE(j["samples"].size() == 3);
    CHECK(j["samples"][0]["t"] == 0.0);
    CHECK(j["samples"][0]["x"][0] == 1.0);
}

TEST_CASE("classify reports the case and the property flags") {
    auto res = run_cli("classify --velocity 0,1,0,0,0,-1,0,0");
    REQUIRE(res.exit_code == 0);
    CHECK(res.output.find("case: Case1") != std::string::npos);
    CHECK(res.output.find("euclidean-coincident: true") != std::string::npos);
    CHECK(res.output.find("p-eigenvector: -1") != std::string::npos);

    res = run_cli("classify --velocity 0,1,1,0,0,0,-1,0");
    REQUIRE(res.exit_code == 0);
    CHECK(res.output.find("case: Case3") != std::string::npos);
    CHECK(res.output.find("euclidean-coincident: false") != std::string::npos);

    res = run_cli("classify --velocity 0,0,0,0,0,0,0,0");
    REQUIRE(res.exit_code == 0);
    CHECK(res.output.find("case: Constant") != std::string::npos);

    res = run_cli("classify --velocity 0,1,1,0,0,0,-1,0 --format json");
    REQUIRE(res.exit_code == 0);
    const json j = json::parse(res.output);
    CHECK(j["case"] == "Case3");
    CHECK(j["constants"]["d1"] == 1.0);
    CHECK(j["p_eigenvector"] == "Neither");
}

TEST_CASE("closedness verdicts") {
    // a/a~ = 2 closes after 2 pi
    auto res = run_cli("closedness --velocity 0,2,0,0,0,1,0,0");
    REQUIRE(res.exit_code == 0);
    CHECK(res.output.find("closed: true") != std::string::npos);
    REQUIRE(res.output.find("period: ") != std::string::npos);
    const double period =
        std::strtod(res.output.c_str() + res.output.find("period: ") + 8, nullptr);
    CHECK(std::abs(period - kTwoPi) < 1e-9);

    // sqrt(2) ratio is open at cap 1e4
    res = run_cli(
        "closedness --velocity 0,1.4142135623730951,0,0,0,1,0,0 --max-denominator 10000");
    REQUIRE(res.exit_code == 0);
    CHECK(res.output.find("closed: false") != std::string::npos);

    res = run_cli("closedness --velocity 0,2,0,0,0,1,0,0 --format json");
    REQUIRE(res.exit_code == 0);
    const json j = json::parse(res.output);
    CHECK(j["closed"] == true);
    CHECK(j["ratio_x"]["num"] == 2);
    CHECK(j["ratio_x"]["den"] == 1);
}

TEST_CASE("verify identities suite passes and is machine readable") {
    const auto res = run_cli("verify --only identities --format json --seed 7");
    REQUIRE(res.exit_code == 0);
    const json j = json::parse(res.output);
    CHECK(j["pass"] == true);
    REQUIRE(!j["checks"].empty());
    for (const auto& c : j["checks"]) CHECK(c["pass"] == true);
}

TEST_CASE("identities subcommand is the identity suite") {
    const auto res = run_cli("identities");
    REQUIRE(res.exit_code == 0);
    CHECK(res.output.find("PJ = -JP") != std::string::npos);
    CHECK(res.output.find("checks passed") != std::string::npos);
}

TEST_CASE("an injected J sign bug fails verification loudly") {
    const auto res = run_cli("verify --only identities --inject-j-sign-bug --format json");
    CHECK(res.exit_code == 1);
    const json j = json::parse(res.output);
    CHECK(j["pass"] == false);
    bool pj_named = false;
    for (const auto& c : j["checks"])
        if (c["name"] == "PJ = -JP" && c["pass"] == false) pj_named = true;
    CHECK(pj_named);
}

TEST_CASE("invalid input exits with code 2") {
    CHECK(run_cli("sample --velocity 0,1,0,0,0,nope,0,0").exit_code == 2);
    CHECK(run_cli("sample --velocity 0,1,0,0").exit_code == 2);
    CHECK(run_cli("sample --velocity 0,1,0,0,0,1,0,0 --samples 1").exit_code == 2);
    CHECK(run_cli("sample --velocity 0,1,0,0,0,1,0,0 --t-end -1").exit_code == 2);
    // non-tangent velocity at (1,1): real parts present
    CHECK(run_cli("classify --velocity 1,0,0,0,0,1,0,0").exit_code == 2);
    // start off the unit sphere
    CHECK(run_cli("classify --start 2,0,0,0,1,0,0,0 --velocity 0,1,0,0,0,1,0,0").exit_code == 2);
    CHECK(run_cli("verify --only nonsense").exit_code == 2);
}

TEST_CASE("unwritable output path exits with code 3") {
    CHECK(run_cli("classify --velocity 0,1,0,0,0,-1,0,0 --out /nonexistent-dir/x.json").exit_code ==
          3);
}

TEST_CASE("output files are written") {
    const std::string out = temp_path("json");
    const auto res = run_cli("classify --velocity 0,1,0,0,0,-1,0,0 --format json --out " + out);
    REQUIRE(res.exit_code == 0);
    std::ifstream f(out);
    REQUIRE(f.good());
    json j;
    f >> j;
    fs::remove(out);
    CHECK(j["case"] == "Case1");
}
