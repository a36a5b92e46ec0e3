#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include <cqed/scattering.hpp>

#include "commands.hpp"

using namespace cqed;
using namespace cqed::app;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        std::random_device rd;
        path = fs::temp_directory_path() / ("cqed_cli_" + std::to_string(rd()) + std::to_string(rd()));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    fs::path write(const std::string& name, const std::string& text) const {
        std::ofstream(path / name, std::ios::binary) << text;
        return path / name;
    }
};

struct Result {
    int code;
    std::string out, err;
};

Result run(std::vector<std::string> args) {
    args.insert(args.begin(), "cqed");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run_cli(int(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(f), {}};
}

std::vector<std::vector<double>> read_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<double> r;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) r.push_back(std::stod(cell));
        rows.push_back(r);
    }
    return rows;
}

const char* kTwoEmitters = R"({
  "system": {"omega_c": 0.0, "kappa_b": 0.5, "kappa_c": 0.5,
             "emitters": [{"omega": 0.3, "gamma": 0.02, "g": 0.3}, {"omega": -0.2, "gamma": 0.02, "g": 0.25}]},
  "grid": {"omega_min": -1.0, "omega_max": 1.0, "points": 20},
  "tau": {"omega_L": 0.4, "tau_max": 5.0, "points": 11}
})";

} // namespace

TEST_SUITE("cli") {

TEST_CASE("empty emitter list gives a flat g2 column") {
    TempDir t;
    const auto cfg = t.write("bare.json", R"({"system": {"omega_c": 0, "kappa_b": 0.5, "kappa_c": 0.5, "emitters": []}, "grid": {"omega_min": -1, "omega_max": 1, "points": 11}})");
    const Result r = run({"spectrum", "--config", cfg.string(), "--out", (t.path / "s.csv").string()});
    REQUIRE(r.code == kExitOk);
    const std::string text = slurp(t.path / "s.csv");
    CHECK(text.rfind("omega_L,T,g2_0\n", 0) == 0);
    const auto rows = read_csv(text);
    CHECK(rows.size() == 11);
    for (const auto& row : rows) CHECK(row[2] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("config errors exit with code 2 and write nothing") {
    TempDir t;
    const fs::path out = t.path / "o.csv";
    SUBCASE("malformed JSON") {
        const auto cfg = t.write("bad.json", "{\"system\": ");
        CHECK(run({"spectrum", "--config", cfg.string(), "--out", out.string()}).code == kExitConfig);
    }
    SUBCASE("unknown field") {
        const auto cfg = t.write("bad.json", R"({"system": {"omega_c": 0, "kappa_b": 0.5, "kappa_c": 0.5, "emitters": []}, "colour": "blue"})");
        CHECK(run({"spectrum", "--config", cfg.string(), "--out", out.string()}).code == kExitConfig);
    }
    SUBCASE("unknown nested field") {
        const auto cfg = t.write("bad.json", R"({"system": {"omega_c": 0, "kappa_b": 0.5, "kappa_c": 0.5, "emitters": [{"omega": 0, "gamma": 0, "g": 0, "x": 1}]}})");
        CHECK(run({"spectrum", "--config", cfg.string(), "--out", out.string()}).code == kExitConfig);
    }
    SUBCASE("decreasing grid") {
        const auto cfg = t.write("bad.json", R"({"system": {"omega_c": 0, "kappa_b": 0.5, "kappa_c": 0.5, "emitters": []}, "grid": {"omega_min": 1, "omega_max": -1, "points": 5}})");
        CHECK(run({"spectrum", "--config", cfg.string(), "--out", out.string()}).code == kExitConfig);
    }
    SUBCASE("missing file") {
        CHECK(run({"spectrum", "--config", (t.path / "none.json").string(), "--out", out.string()}).code == kExitConfig);
    }
    SUBCASE("missing section") {
        const auto cfg = t.write("bad.json", R"({"system": {"omega_c": 0, "kappa_b": 0.5, "kappa_c": 0.5, "emitters": []}})");
        CHECK(run({"g2tau", "--config", cfg.string(), "--out", out.string()}).code == kExitConfig);
    }
    SUBCASE("bad flag") {
        const auto cfg = t.write("ok.json", kTwoEmitters);
        CHECK(run({"spectrum", "--config", cfg.string(), "--format", "xml"}).code == kExitConfig);
    }
    SUBCASE("unwritable output") {
        const auto cfg = t.write("ok.json", kTwoEmitters);
        CHECK(run({"spectrum", "--config", cfg.string(), "--out", (t.path / "no" / "dir.csv").string()}).code ==
              kExitConfig);
    }
    CHECK_FALSE(fs::exists(out));
}

TEST_CASE("exact transmission zero exits with code 3") {
    TempDir t;
    const auto cfg = t.write("zero.json", R"({"system": {"omega_c": 0, "kappa_b": 0.5, "kappa_c": 0.5, "emitters": [{"omega": 0.8, "gamma": 0.0, "g": 0.2}]},
                                              "grid": {"omega_min": 0.0, "omega_max": 1.6, "points": 3}})");
    const Result r = run({"spectrum", "--config", cfg.string(), "--out", (t.path / "o.csv").string()});
    CHECK(r.code == kExitNumerical);
    CHECK(r.err.find("0.8") != std::string::npos);
    CHECK_FALSE(fs::exists(t.path / "o.csv"));
}

TEST_CASE("validate") {
    TempDir t;
    SUBCASE("bare cavity") {
        const auto cfg = t.write("bare.json", R"({"system": {"omega_c": 0, "kappa_b": 0.5, "kappa_c": 0.5, "emitters": []}, "grid": {"omega_min": -1, "omega_max": 1, "points": 5},
                                                  "tau": {"omega_L": 0.2, "tau_max": 3, "points": 4}})");
        const Result r = run({"validate", "--config", cfg.string(), "--format", "json", "--out", (t.path / "v.json").string()});
        REQUIRE(r.code == kExitOk);
        const auto j = nlohmann::json::parse(slurp(t.path / "v.json"));
        CHECK(j["max_rel_dev_T"].get<double>() < 1e-6);
        CHECK(j["max_rel_dev_g2_0"].get<double>() < 1e-6);
        CHECK(j["max_rel_dev_g2_tau"].get<double>() < 1e-6);
    }
    SUBCASE("small two-emitter system passes and a corrupted path breaches") {
        const auto cfg = t.write("two.json", kTwoEmitters);
        CHECK(run({"validate", "--config", cfg.string(), "--out", (t.path / "v.csv").string()}).code == kExitOk);
        const Result bad = run({"validate", "--config", cfg.string(), "--test-corrupt-kappa-c", "1.3"});
        CHECK(bad.code == kExitValidation);
        CHECK(bad.err.find("breach at omega_L=") != std::string::npos);
    }
}

TEST_CASE("g2tau first row equals the spectrum") {
    TempDir t;
    const auto cfg = t.write("two.json", R"({
      "system": {"omega_c": 0, "kappa_b": 0.5, "kappa_c": 0.5, "emitters": [{"omega": 0.3, "gamma": 0.02, "g": 0.3}]},
      "grid": {"omega_min": 0.4, "omega_max": 0.6, "points": 2},
      "tau": {"omega_L": 0.4, "tau_max": 4000.0, "points": 5}})");
    REQUIRE(run({"spectrum", "--config", cfg.string(), "--out", (t.path / "s.csv").string()}).code == 0);
    const Result r = run({"g2tau", "--config", cfg.string(), "--out", (t.path / "g.csv").string()});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("settling_time=") != std::string::npos);
    const auto s = read_csv(slurp(t.path / "s.csv"));
    const auto g = read_csv(slurp(t.path / "g.csv"));
    CHECK(slurp(t.path / "g.csv").rfind("tau,g2\n", 0) == 0);
    CHECK(g.front()[0] == 0.0);
    CHECK(g.front()[1] == doctest::Approx(s.front()[2]).epsilon(1e-10));
    CHECK(g.back()[1] == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("identical N sweeps write one file per N") {
    TempDir t;
    const auto cfg = t.write("sweep.json", R"({
      "system": {"omega_c": 0, "kappa_b": 0.5, "kappa_c": 0.5, "identical": {"n": [1, 2, 4], "omega_e": 0.8, "gamma": 0.01, "g": 0.2}},
      "grid": {"omega_min": -1.5, "omega_max": 1.5, "points": 301}})");
    REQUIRE(run({"spectrum", "--config", cfg.string(), "--out", (t.path / "s.csv").string()}).code == 0);
    for (int n : {1, 2, 4}) CHECK(fs::exists(t.path / ("s_N" + std::to_string(n) + ".csv")));
    const Result lim = run({"identical-limits", "--config", cfg.string(), "--format", "json"});
    CHECK(lim.code == 0);
    CHECK(lim.out.find("subradiant_lambda") != std::string::npos);
}

TEST_CASE("outputs are byte identical and JSON round trips") {
    TempDir t;
    const auto cfg = t.write("two.json", kTwoEmitters);
    for (const char* fmt : {"csv", "json"}) {
        const std::string a = (t.path / (std::string("a.") + fmt)).string(), b = (t.path / (std::string("b.") + fmt)).string();
        REQUIRE(run({"spectrum", "--config", cfg.string(), "--format", fmt, "--out", a, "--threads", "1"}).code == 0);
        REQUIRE(run({"spectrum", "--config", cfg.string(), "--format", fmt, "--out", b, "--threads", "3"}).code == 0);
        CHECK(slurp(a) == slurp(b));
    }
    const auto j = nlohmann::json::parse(slurp(t.path / "a.json"));
    SystemParams p;
    p.emitters = {{0.3, 0.02, 0.3}, {-0.2, 0.02, 0.25}};
    const ScatteringModel m(p);
    const auto grid = j["omega_L"].get<std::vector<double>>();
    const auto tt = j["T"].get<std::vector<double>>();
    const auto gg = j["g2_0"].get<std::vector<double>>();
    REQUIRE(grid.size() == 20);
    for (std::size_t k = 0; k < grid.size(); ++k) {
        CHECK(tt[k] == m.transmission(grid[k]));
        CHECK(gg[k] == m.g2_zero(grid[k]).value);
    }
    // CSV values parse back exactly
    const auto rows = read_csv(slurp(t.path / "a.csv"));
    for (std::size_t k = 0; k < rows.size(); ++k) {
        CHECK(rows[k][0] == grid[k]);
        CHECK(rows[k][1] == tt[k]);
    }
}

TEST_CASE("contributions columns") {
    TempDir t;
    const auto cfg = t.write("two.json", kTwoEmitters);
    const Result r = run({"spectrum", "--config", cfg.string(), "--contributions"});
    REQUIRE(r.code == 0);
    const std::string header = r.out.substr(0, r.out.find('\n'));
    CHECK(header.find("_abs") != std::string::npos);
    CHECK(header.find("_arg") != std::string::npos);
}

TEST_CASE("monte carlo and bench commands") {
    TempDir t;
    const auto cfg = t.write("mc.json", R"({"mc": {"runs": 4, "n": 2, "sigma_inhom": 0.1, "g": 0.3, "gamma": 0.02,
                                                   "omega_min": -1.0, "omega_max": 1.0, "seed": 5}})");
    const fs::path a = t.path / "a.json", b = t.path / "b.json";
    REQUIRE(run({"mc", "--config", cfg.string(), "--format", "json", "--out", a.string()}).code == 0);
    REQUIRE(run({"mc", "--config", cfg.string(), "--format", "json", "--out", b.string(), "--threads", "2"}).code == 0);
    CHECK(slurp(a) == slurp(b));
    const auto j = nlohmann::json::parse(slurp(a));
    CHECK(j["provenance"]["seed"].get<std::uint64_t>() == 5);
    REQUIRE(run({"mc", "--config", cfg.string(), "--format", "json", "--out", b.string(), "--seed", "6"}).code == 0);
    CHECK(nlohmann::json::parse(slurp(b))["provenance"]["seed"].get<std::uint64_t>() == 6);

    const auto bc = t.write("bench.json", R"({"bench": {"n_list": [2, 4, 8], "repeats": 1, "fit_min": 2, "fit_max": 8}, "seed": 3})");
    const Result r = run({"bench", "--config", bc.string(), "--format", "json"});
    REQUIRE(r.code == 0);
    const auto bj = nlohmann::json::parse(r.out);
    CHECK(bj.contains("exponent_transmission"));
    CHECK(bj["rows"].size() == 3);
    CHECK(loglog_slope({1, 2, 4}, {3, 12, 48}) == doctest::Approx(2.0));
}

} // TEST_SUITE
