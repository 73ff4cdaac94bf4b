#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "loctime/brownian.hpp"
#include "loctime/commands.hpp"
#include "loctime/config.hpp"
#include "loctime/error.hpp"
#include "loctime/io.hpp"
#include "loctime/scheme.hpp"

using namespace loctime;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("loctime_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& file) {
    std::ifstream in(file, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

std::string parse_error_key(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ParseError& e) {
        return e.key();
    }
    return "<no error>";
}

int run_binary(const std::string& args) {
    const char* bin = std::getenv("LOCTIME_BIN");
    REQUIRE(bin != nullptr);
    const std::string cmd = std::string(bin) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void write_file(const fs::path& file, const std::string& text) {
    std::ofstream out(file);
    out << text;
}

}  // namespace

TEST_CASE("parse_config accepts a full path config") {
    const auto c = parse_config(
        R"({"command":"path","seed":1,"T":1,"dt":0.001,"n0":64,"sigma":{"kind":"affine","intercept":1,"slope":1},"x0":0})");
    CHECK(c.command == Command::path);
    CHECK(c.seed == 1);
    CHECK(c.n0 == 64);
    CHECK(c.grid_dt == 0.001);
    CHECK(c.echo["master_seed"] == 1);
    CHECK_FALSE(c.echo.contains("workers"));
}

TEST_CASE("parse_config errors name the offending key") {
    CHECK(parse_error_key(R"({"command":"determinacy","p":1.5,"lambda":[1]})") == "lambda");
    CHECK(parse_error_key(R"({"command":"determinacy","seed":1,"p":1.5,"lambda":[1],"compare_laplace":false})") ==
          "<no error>");
    CHECK(parse_error_key(R"({"command":"path"})") == "seed");
    CHECK(parse_error_key(R"({"seed":1})") == "command");
    CHECK(parse_error_key(R"({"command":"path","seed":1,"bogus":2})") == "bogus");
    CHECK(parse_error_key(R"({"command":"path","seed":1,"dt":"small"})") == "dt");
    CHECK(parse_error_key(R"({"command":"path","seed":1,"T":1,"dt":2})") == "dt");
    CHECK(parse_error_key(R"({"command":"path","seed":1,"n0":0})") == "n0");
    CHECK(parse_error_key(R"({"command":"path","seed":1,"x0":-1})") == "x0");
    CHECK(parse_error_key(R"({"command":"path","seed":1,"sigma":{"kind":"power","p":0.5}})") == "sigma");
    CHECK(parse_error_key(R"({"command":"path","seed":1,"sigma":{"kind":"truncated_power","p":0.5,"delta":0}})") ==
          "sigma");
    CHECK(parse_error_key(R"({"command":"path","seed":1,"sigma":{"kind":"affine","intercept":1,"slope":1,"x":1}})") ==
          "sigma.x");
    CHECK(parse_error_key(R"({"command":"path","seed":1,"sigma":{"kind":"cubic"}})") == "sigma.kind");
    CHECK(parse_error_key(R"({"command":"path","seed":1,"lambda":[1,-2]})") == "lambda[1]");
    CHECK(parse_error_key(R"({"command":"walk","seed":1})") == "command");
    CHECK(parse_error_key(R"({"command":"path","seed":1,"driver":{"kind":"linear","slope":-2,"c":1}})") == "driver.c");
    CHECK(parse_error_key("{not json") == "");
}

TEST_CASE("make_noise kinds") {
    CHECK(make_noise(nlohmann::json::parse(R"({"kind":"constant","c":2})"))(5.0) == 2.0);
    CHECK(make_noise(nlohmann::json::parse(R"({"kind":"power","p":2})"))(0.5) == doctest::Approx(0.25));
    const auto t = make_noise(nlohmann::json::parse(R"({"kind":"tabulated","knots":[[0,1],[1,2]]})"));
    CHECK(t.lipschitz() == 1.0);
    CHECK(t.lower_bound() == 1.0);
}

TEST_CASE("csv round trips are bit-exact") {
    const auto dir = scratch("csv");
    const auto f = std::make_shared<const PiecewiseLinearPath>(sample_brownian({1, 1e-3, 1.0, 0}, 0));
    write_knots_csv(*f, dir / "f.csv");
    CHECK(read_knots_csv(dir / "f.csv") == *f);
    CHECK(slurp(dir / "f.csv").rfind("t,value\n", 0) == 0);

    const auto s = construct_by_hitting(f, NoiseCoefficient::affine(1.0, 1.0), 64, 0.0);
    write_path_csv(s, dir / "p.csv");
    CHECK(slurp(dir / "p.csv").rfind("t,x,L,Y\n", 0) == 0);
    const auto table = read_path_csv(dir / "p.csv");
    REQUIRE(table.t.size() >= s.x.size());
    for (std::size_t k = 0; k < table.t.size(); ++k) {
        CHECK(table.x[k] == s.x(table.t[k]));
        CHECK(table.L[k] == s.L(table.t[k]));
    }
    for (std::size_t k = 0; k < s.x.size(); ++k)
        CHECK(std::binary_search(table.t.begin(), table.t.end(), s.x.time(k)));

    write_file(dir / "bad.csv", "t,x,L\n0,0,0\n");
    CHECK_THROWS_AS(read_path_csv(dir / "bad.csv"), ParseError);
    CHECK_THROWS_AS(read_knots_csv(dir / "missing.csv"), IoError);
    CHECK_THROWS_AS(write_text("x", dir / "no" / "such" / "dir" / "f.txt"), IoError);
}

TEST_CASE("empty-event solution still covers the driver knots") {
    const auto dir = scratch("noevent");
    auto f = std::make_shared<const PiecewiseLinearPath>(std::vector<double>{0.0, 0.5, 1.0},
                                                         std::vector<double>{0.0, 0.2, 0.1});
    const auto s = construct_by_hitting(f, NoiseCoefficient::constant(1.0), 4, 0.0);
    CHECK(s.event_times.empty());
    write_path_csv(s, dir / "p.csv");
    CHECK(read_path_csv(dir / "p.csv").t == std::vector<double>{0.0, 0.5, 1.0});
}

TEST_CASE("tau csv marks censored rows") {
    const auto dir = scratch("tau");
    std::vector<TauSample> v(2);
    v[0].tau = 1.5;
    v[0].L_at_T = 1.0;
    v[1].path_index = 1;
    v[1].L_at_T = 0.25;
    write_tau_csv(v, dir / "tau.csv");
    const auto text = slurp(dir / "tau.csv");
    CHECK(text.rfind("path_index,method,tau,censored,L_at_T\n", 0) == 0);
    CHECK(text.find("1,direct,inf,1,0.25") != std::string::npos);
}

TEST_CASE("command run: converge on the deterministic oracle") {
    const auto dir = scratch("converge");
    const auto cfg = parse_config(
        R"({"command":"converge","seed":1,"T":2,"dt":0.5,"n0":16,"tol":0.001,"driver":{"kind":"linear","slope":-1}})");
    std::ostringstream log;
    const auto r = run_command(cfg, dir, log);
    CHECK(r.exit_code == 0);
    const auto text = slurp(dir / "convergence.txt");
    CHECK(text.find("converged: true") != std::string::npos);
    CHECK(text.find("levels: 16 32") != std::string::npos);
}

TEST_CASE("command run: determinacy report") {
    const auto dir = scratch("det");
    const auto cfg = parse_config(
        R"({"command":"determinacy","seed":3,"T":50,"dt":0.01,"refine_depth":1,"p":0,"num_paths":500,"scheme_paths":5})");
    std::ostringstream log;
    const auto r = run_command(cfg, dir, log);
    CHECK(r.exit_code == 0);
    const auto j = nlohmann::json::parse(slurp(dir / "report.json"));
    CHECK(j["master_seed"] == 3);
    CHECK(j["laplace"].size() == 4);
    CHECK(j["ks_distance"].is_number());
    CHECK(j["config"]["num_paths"] == 500);
    CHECK(j["failures"].empty());
}

TEST_CASE("binary: usage, errors and reproducible outputs") {
    const auto dir = scratch("bin");
    write_file(dir / "path.json", R"({"command":"path","seed":5,"T":1,"dt":0.001,"n0":64})");
    write_file(dir / "bad.json", R"({"command":"path","seed":5,"wat":1})");
    write_file(dir / "det.json",
               R"({"command":"determinacy","seed":5,"T":20,"dt":0.01,"p":0.5,"num_paths":200,"scheme_paths":3,"workers":1})");
    write_file(dir / "det4.json",
               R"({"command":"determinacy","seed":5,"T":20,"dt":0.01,"p":0.5,"num_paths":200,"scheme_paths":3,"workers":4})");

    CHECK(run_binary("") != 0);
    CHECK(run_binary("path") != 0);
    CHECK(run_binary("path --config " + (dir / "missing.json").string()) != 0);
    CHECK(run_binary("path --config " + (dir / "bad.json").string() + " --out " + (dir / "x").string()) == 2);
    CHECK(run_binary("converge --config " + (dir / "path.json").string() + " --out " + (dir / "x").string()) == 2);

    CHECK(run_binary("path --config " + (dir / "path.json").string() + " --out " + (dir / "a").string()) == 0);
    CHECK(run_binary("path --config " + (dir / "path.json").string() + " --out " + (dir / "b").string()) == 0);
    for (const char* f : {"driver.csv", "path.csv", "reflected.csv"}) {
        CHECK(fs::exists(dir / "a" / f));
        CHECK(slurp(dir / "a" / f) == slurp(dir / "b" / f));
    }
    CHECK(slurp(dir / "a" / "reflected.csv").rfind("t,Y,L,QV,Sigma2Int,Lambda0\n", 0) == 0);

    CHECK(run_binary("determinacy --config " + (dir / "det.json").string() + " --out " + (dir / "d1").string()) == 0);
    CHECK(run_binary("determinacy --config " + (dir / "det4.json").string() + " --out " + (dir / "d4").string()) == 0);
    CHECK(slurp(dir / "d1" / "tau.csv") == slurp(dir / "d4" / "tau.csv"));
    CHECK(slurp(dir / "d1" / "report.json") == slurp(dir / "d4" / "report.json"));

    // unwritable output directory
    write_file(dir / "blocker", "x");
    CHECK(run_binary("path --config " + (dir / "path.json").string() + " --out " + (dir / "blocker" / "sub").string()) == 1);
}

TEST_CASE("binary: checks command passes on a correct build") {
    const auto dir = scratch("checks");
    write_file(dir / "c.json", R"({"command":"checks","seed":11})");
    CHECK(run_binary("checks --config " + (dir / "c.json").string()) == 0);
}
