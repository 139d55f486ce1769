// End-to-end tests of the command-line front end: spawns the real binary,
// checks artifacts, schemas, determinism and exit codes.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>
#include <sys/wait.h>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::string cli = BRAGGSIM_CLI_PATH;

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

fs::path scratch_dir() {
    static const fs::path dir = [] {
        auto d = fs::temp_directory_path() /
                 ("braggsim_cli_tests_" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

RunResult run(const std::string& args, const std::string& env_prefix = "") {
    const auto out_file = scratch_dir() / "stdout.txt";
    const auto err_file = scratch_dir() / "stderr.txt";
    const std::string cmd = env_prefix + cli + " " + args + " > " + out_file.string() + " 2> " +
                            err_file.string();
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out_file);
    r.err = slurp(err_file);
    return r;
}

std::vector<std::vector<double>> parse_csv(const fs::path& p, std::string* header = nullptr) {
    std::ifstream in(p);
    REQUIRE(in.good());
    std::string line;
    std::getline(in, line);
    if (header) *header = line;
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        std::vector<double> row;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) row.push_back(std::strtod(cell.c_str(), nullptr));
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

TEST_CASE("conserved atoms at alternating phases give even frequencies only") {
    const auto dir = scratch_dir() / "sf2_even";
    const auto r = run("spectrum --state sf2 --atoms 18 --sites 2 --spacing 1/4 --outdir " +
                       dir.string() + " --output s");
    REQUIRE(r.exit_code == 0);
    std::string header;
    const auto rows = parse_csv(dir / "s.csv", &header);
    CHECK(header == "omega,probability");
    REQUIRE(rows.size() == 10);  // 0, 2, ..., 18
    double mass = 0.0;
    for (const auto& row : rows) {
        const double omega = row[0];
        CHECK(omega == doctest::Approx(std::round(omega)).epsilon(1e-12));
        CHECK(std::llround(omega) % 2 == 0);
        mass += row[1];
    }
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fs::exists(dir / "s.json"));
    CHECK(fs::exists(dir / "s.manifest.json"));
}

TEST_CASE("checkerboard wells beat as sin^2(18 t)") {
    const auto dir = scratch_dir() / "mott_beat";
    const auto r = run(
        "intensity --state mott --occupations 9,9 --spacing 1/2 --t-max 1 --steps 100 "
        "--outdir " +
        dir.string() + " --output i");
    REQUIRE(r.exit_code == 0);
    std::string header;
    const auto rows = parse_csv(dir / "i.csv", &header);
    CHECK(header == "t,intensity");
    REQUIRE(rows.size() == 101);
    for (const auto& row : rows) {
        const double expect = std::pow(std::sin(18.0 * row[0]), 2);
        REQUIRE(row[1] == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("analytic collapse summary for coherent wells") {
    const auto dir = scratch_dir() / "collapse";
    const auto r = run("collapse --state sf1 --mean-n 18 --sites 2 --spacing 1/2 --outdir " +
                       dir.string() + " --output c");
    REQUIRE(r.exit_code == 0);
    const auto j = json::parse(slurp(dir / "c.json"));
    CHECK(j["collapse_rate"].get<double>() ==
          doctest::Approx(2.0 * std::sqrt(18.0)).epsilon(1e-9));
    CHECK(j["revival_time"].get<double>() == doctest::Approx(std::numbers::pi).epsilon(1e-12));
}

TEST_CASE("reruns are byte-identical") {
    const auto dir1 = scratch_dir() / "rerun_a";
    const auto dir2 = scratch_dir() / "rerun_b";
    const std::string args =
        "spectrum --state sf1 --mean-n 10 --sites 10 --spacing 1/10 --method sampled "
        "--samples 20000 --seed 9 --output x --outdir ";
    REQUIRE(run(args + dir1.string()).exit_code == 0);
    REQUIRE(run(args + dir2.string()).exit_code == 0);
    const auto a = slurp(dir1 / "x.csv");
    CHECK(a == slurp(dir2 / "x.csv"));
    CHECK_FALSE(a.empty());
    CHECK(slurp(dir1 / "x.json") == slurp(dir2 / "x.json"));
}

TEST_CASE("validation failures name the offending field and exit 2") {
    const auto r = run("spectrum --state sf1 --sites 2 --spacing 1/2");
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("mean-n") != std::string::npos);

    const auto sites = run(
        "photon-stats --state mott --occupations 1,1,1 --spacing 1/4 --photons 2");
    CHECK(sites.exit_code == 2);
    CHECK(sites.err.find("sites") != std::string::npos);

    const auto parse_fail = run("spectrum --state sf2 --atoms 18 --spacing nonsense");
    CHECK(parse_fail.exit_code == 2);
    CHECK(parse_fail.err.find("spacing") != std::string::npos);

    const auto unknown = run("spectrum --no-such-flag");
    CHECK(unknown.exit_code == 2);
}

TEST_CASE("enumeration budget overruns exit 3 with a sampling hint") {
    const auto r = run(
        "spectrum --state sf1 --mean-n 30 --sites 10 --spacing 0.17 --budget 1000");
    CHECK(r.exit_code == 3);
    CHECK(r.err.find("sampled") != std::string::npos);
}

TEST_CASE("the default output directory comes from the environment") {
    const auto dir = scratch_dir() / "from_env";
    fs::create_directories(dir);
    const auto r = run("collapse --state sf2 --atoms 18 --sites 2 --spacing 1/4 --output env_c",
                       "BRAGGSIM_OUTDIR=" + dir.string() + " ");
    REQUIRE(r.exit_code == 0);
    CHECK(fs::exists(dir / "env_c.json"));
    CHECK(fs::exists(dir / "env_c.manifest.json"));
}

TEST_CASE("law artifacts declare discrete vs continuous columns") {
    const auto dir = scratch_dir() / "laws";
    REQUIRE(run("laws --law even-odd --state-kind sf2 --atoms 20 --outdir " + dir.string() +
                " --output eo")
                .exit_code == 0);
    std::string header;
    parse_csv(dir / "eo.csv", &header);
    CHECK(header == "x,probability");

    REQUIRE(run("laws --law rayleigh --mean-n 10 --outdir " + dir.string() + " --output ray")
                .exit_code == 0);
    parse_csv(dir / "ray.csv", &header);
    CHECK(header == "x,density");
}

TEST_CASE("photon statistics artifacts use the long CSV form") {
    const auto dir = scratch_dir() / "photon";
    const auto r = run(
        "photon-stats --state sf2 --atoms 18 --sites 2 --spacing 1/4 --photons 10 "
        "--times 0.7853981633974483,1.5707963267948966 --outdir " +
        dir.string() + " --output p");
    REQUIRE(r.exit_code == 0);
    std::string header;
    const auto rows = parse_csv(dir / "p.csv", &header);
    CHECK(header == "t,n_minus_k,probability");
    CHECK(rows.size() == 22);  // 2 times x 11 outcomes
    const auto manifest = json::parse(slurp(dir / "p.manifest.json"));
    CHECK(manifest["command"] == "photon-stats");
    CHECK(manifest.contains("version"));
    CHECK(manifest.contains("wall_time_seconds"));
}

TEST_CASE("spacing sweeps emit long-format csv") {
    const auto dir = scratch_dir() / "sweep";
    const auto r = run(
        "spectrum --state sf2 --atoms 4 --sites 2 --sweep-start 0.05 --sweep-stop 0.45 "
        "--sweep-points 9 --outdir " +
        dir.string() + " --output sw");
    REQUIRE(r.exit_code == 0);
    std::string header;
    const auto rows = parse_csv(dir / "sw.csv", &header);
    CHECK(header == "spacing,omega,probability");
    CHECK(rows.size() >= 9);
    CHECK(rows.front()[0] == doctest::Approx(0.05));
    CHECK(rows.back()[0] == doctest::Approx(0.45));
}
