#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#ifndef HAWKES_CLI_PATH
#error "HAWKES_CLI_PATH must point at the CLI binary"
#endif

namespace fs = std::filesystem;

namespace {

const fs::path& work_dir() {
    static const fs::path dir = [] {
        auto d = fs::temp_directory_path() / "hawkes_cli_test";
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

fs::path write_file(const std::string& name, const std::string& body) {
    const auto path = work_dir() / name;
    std::ofstream out(path);
    out << body;
    return path;
}

int run(const std::string& args) {
    const std::string cmd = std::string(HAWKES_CLI_PATH) + " " + args;
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::vector<std::string>> read_csv(const fs::path& path) {
    std::ifstream in(path);
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            cells.push_back(cell);
        }
        rows.push_back(std::move(cells));
    }
    return rows;
}

fs::path exp_kernel() {
    static const auto path =
        write_file("exp.json", R"({"type":"exponential","alpha":1.0,"beta":2.0})");
    return path;
}

fs::path poisson_kernel() {
    static const auto path =
        write_file("zero.json", R"({"type":"tabulated","step":1.0,"values":[0.0,0.0]})");
    return path;
}

} // namespace

TEST_CASE("malformed input exits with code 2") {
    const auto broken = write_file("broken.json", "{not json");
    CHECK(run("moments --kernel " + broken.string() + " --t 1 2>/dev/null") == 2);
    const auto unknown = write_file("unknown.json", R"({"type":"wavelet","alpha":1.0})");
    CHECK(run("moments --kernel " + unknown.string() + " --t 1 2>/dev/null") == 2);
    CHECK(run("moments --kernel " + (work_dir() / "missing.json").string() +
              " --t 1 2>/dev/null") == 2);
}

TEST_CASE("unstable kernel exits with code 3") {
    const auto unstable =
        write_file("unstable.json", R"({"type":"exponential","alpha":3.0,"beta":2.0})");
    CHECK(run("moments --kernel " + unstable.string() + " --t 1 2>/dev/null") == 3);
}

TEST_CASE("resolvent table export") {
    const auto out = work_dir() / "resolvent.csv";
    REQUIRE(run("resolvent --kernel " + exp_kernel().string() + " --horizon 10 --out " +
                out.string()) == 0);
    const auto rows = read_csv(out);
    REQUIRE(rows.size() > 2);
    CHECK(rows[0] == std::vector<std::string>{"t", "psi", "cum"});
    CHECK(std::stod(rows[1][0]) == doctest::Approx(0.0));
    CHECK(std::stod(rows[1][1]) == doctest::Approx(1.0)); // Psi(0) = alpha
    // long-horizon mass: ||Psi||_1 = 1 for alpha/beta = 1/2
    CHECK(std::stod(rows.back()[2]) == doctest::Approx(1.0).epsilon(1e-3));
    // Psi(1) = e^{-1} at the node t = 1
    bool found = false;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (std::abs(std::stod(rows[i][0]) - 1.0) < 1e-9) {
            CHECK(std::stod(rows[i][1]) == doctest::Approx(std::exp(-1.0)).epsilon(1e-5));
            found = true;
        }
    }
    CHECK(found);
}

TEST_CASE("moment evaluation on stdout") {
    const auto out = work_dir() / "moment.txt";
    REQUIRE(run("moments --kernel " + exp_kernel().string() +
                " --quantity cov_intensity --s 1 --t 1 > " + out.string()) == 0);
    const auto rows = read_csv(out);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0][0] == "cov_intensity");
    CHECK(std::stod(rows[0][3]) == doctest::Approx(0.6321205588285576).epsilon(1e-5));
}

TEST_CASE("surface export is symmetric") {
    const auto out = work_dir() / "surface.csv";
    REQUIRE(run("surface --kernel " + exp_kernel().string() +
                " --quantity cov_count --s-list 0.5,1.0 --t-list 0.5,1.0 --out " +
                out.string()) == 0);
    const auto rows = read_csv(out);
    REQUIRE(rows.size() == 5);
    CHECK(std::stod(rows[2][2]) == doctest::Approx(std::stod(rows[3][2])).epsilon(1e-12));
}

TEST_CASE("simulation output is reproducible byte for byte") {
    const auto out1 = work_dir() / "sim1.csv";
    const auto out2 = work_dir() / "sim2.csv";
    const std::string base = "simulate --kernel " + exp_kernel().string() +
                             " --horizon 2 --paths 20 --seed 7 --out ";
    REQUIRE(run(base + out1.string()) == 0);
    REQUIRE(run(base + out2.string()) == 0);
    const auto body = slurp(out1);
    CHECK(body == slurp(out2));
    CHECK(body.rfind("path_id,event_time,forced\n", 0) == 0);

    const auto out3 = work_dir() / "sim3.csv";
    REQUIRE(run("simulate --kernel " + exp_kernel().string() +
                " --horizon 2 --paths 20 --seed 8 --out " + out3.string()) == 0);
    CHECK(body != slurp(out3));
}

TEST_CASE("forced atoms are flagged in the export") {
    const auto out = work_dir() / "forced.csv";
    REQUIRE(run("simulate --kernel " + exp_kernel().string() +
                " --horizon 2 --paths 5 --seed 3 --forced 0.5 --out " + out.string()) == 0);
    const auto rows = read_csv(out);
    int forced_rows = 0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i][2] == "1") {
            ++forced_rows;
            CHECK(std::stod(rows[i][1]) == doctest::Approx(0.5));
        }
    }
    CHECK(forced_rows == 5);
}

TEST_CASE("validate passes for the Poisson special case") {
    const auto out = work_dir() / "validate.csv";
    REQUIRE(run("validate --kernel " + poisson_kernel().string() +
                " --s 0.5 --t 1 --paths 2000 --seed 5 --out " + out.string() +
                " > /dev/null") == 0);
    const auto rows = read_csv(out);
    REQUIRE(rows.size() == 7); // header + six quantities
    CHECK(rows[0].back() == "abs_z");
    for (std::size_t i = 1; i < rows.size(); ++i) {
        CHECK(std::stod(rows[i].back()) <= 4.0);
    }
}

TEST_CASE("chaos subcommand reports value and bound") {
    const auto out = work_dir() / "chaos.txt";
    REQUIRE(run("chaos --kernel " + exp_kernel().string() + " --t 1 --order 8 > " +
                out.string()) == 0);
    const auto rows = read_csv(out);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0][0] == "value");
    CHECK(std::stod(rows[0][1]) ==
          doctest::Approx(1.0 + std::exp(-1.0)).epsilon(1e-2));
    CHECK(rows[1][0] == "truncation_bound");
    CHECK(std::stod(rows[1][1]) == doctest::Approx(std::pow(0.5, 9.0) / 0.5).epsilon(1e-12));
}
