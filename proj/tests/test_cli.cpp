#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace {

std::string binary_path() {
    const char* bin = std::getenv("CREDINET_BIN");
    REQUIRE(bin != nullptr);
    return bin;
}

std::filesystem::path temp_file(const std::string& stem) {
    static int counter = 0;
    return std::filesystem::temp_directory_path() /
           ("credinet_cli_" + stem + "_" + std::to_string(++counter) + ".txt");
}

int run_cli(const std::string& args, std::string* output = nullptr) {
    const auto tmp = temp_file("out");
    const std::string cmd =
        '"' + binary_path() + "\" " + args + " >" + tmp.string() + " 2>&1";
    const int raw = std::system(cmd.c_str());
    REQUIRE(raw != -1);
    if (output) {
        std::ifstream in(tmp);
        std::ostringstream ss;
        ss << in.rdbuf();
        *output = ss.str();
    }
    std::filesystem::remove(tmp);
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

struct Csv {
    std::vector<std::string> comments;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.push_back("");
    return cells;
}

Csv parse_csv(const std::string& text) {
    Csv csv;
    std::istringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            csv.comments.push_back(line);
        } else if (csv.header.empty()) {
            csv.header = split(line);
        } else {
            csv.rows.push_back(split(line));
        }
    }
    return csv;
}

}  // namespace

TEST_CASE("version and usage errors") {
    std::string out;
    CHECK(run_cli("--version", &out) == 0);
    CHECK(out.find("credinet 0.1.0") != std::string::npos);

    CHECK(run_cli("", nullptr) == 1);                       // missing subcommand
    CHECK(run_cli("simulate --no-such-flag", nullptr) == 1);
    CHECK(run_cli("sweep --direction sideways", nullptr) == 1);
    CHECK(run_cli("simulate --lambda=-0.5", nullptr) == 1);  // validation error
    CHECK(run_cli("frobnicate", nullptr) == 1);
}

TEST_CASE("simulate emits one summary row and is byte-reproducible") {
    const std::string args =
        "simulate --n 20 --lambda 0.5 --c 0.3 --t-max 20 --burn-in 5 --seed 42";
    std::string a, b;
    CHECK(run_cli(args, &a) == 0);
    CHECK(run_cli(args, &b) == 0);
    CHECK(a == b);

    Csv csv = parse_csv(a);
    REQUIRE(csv.header.size() == 8);
    CHECK(csv.header[0] == "c");
    CHECK(csv.header[4] == "rho_mean");
    CHECK(csv.comments.size() == 2);
    REQUIRE(csv.rows.size() == 1);
    const double rho = std::stod(csv.rows[0][4]);
    CHECK(rho > 0.5);
    CHECK(rho < 4.0);
    // sample interval defaults to 1/nu = 0.5: instants 5, 5.5, ..., 19.5
    CHECK(csv.rows[0][7] == "30");
}

TEST_CASE("sweep row counts and direction labels") {
    const std::string common =
        "sweep --n 20 --lambda 0.5 --c-from 0.2 --c-to 0.8 --steps 4 "
        "--t-max 5 --burn-in 1 --seed 7 ";
    std::string out;
    REQUIRE(run_cli(common + "--direction both", &out) == 0);
    Csv csv = parse_csv(out);
    REQUIRE(csv.header.size() == 8);
    CHECK(csv.header[4] == "direction");
    REQUIRE(csv.rows.size() == 8);
    for (int i = 0; i < 4; ++i) CHECK(csv.rows[i][4] == "up");
    for (int i = 4; i < 8; ++i) CHECK(csv.rows[i][4] == "down");
    CHECK(std::stod(csv.rows[0][0]) == doctest::Approx(0.2));
    CHECK(std::stod(csv.rows[3][0]) == doctest::Approx(0.8));
    CHECK(std::stod(csv.rows[4][0]) == doctest::Approx(0.8));
    CHECK(std::stod(csv.rows[7][0]) == doctest::Approx(0.2));

    REQUIRE(run_cli(common + "--direction down", &out) == 0);
    Csv down = parse_csv(out);
    REQUIRE(down.rows.size() == 4);
    CHECK(std::stod(down.rows[0][0]) == doctest::Approx(0.8));
    CHECK(std::stod(down.rows[3][0]) == doctest::Approx(0.2));
}

TEST_CASE("mean-field fixed points through the CLI") {
    std::string out;
    REQUIRE(run_cli("mean-field --lambda 0.05 --c 0.1", &out) == 0);
    Csv one = parse_csv(out);
    REQUIRE(one.rows.size() == 1);
    CHECK(one.rows[0][2] == "gaussian");
    CHECK(std::stod(one.rows[0][3]) < 1e-5);
    CHECK(one.rows[0][5] == "1");  // stable

    REQUIRE(run_cli("mean-field --lambda 0.01 --c 0.6", &out) == 0);
    Csv three = parse_csv(out);
    REQUIRE(three.rows.size() == 3);
    CHECK(three.rows[0][5] == "1");
    CHECK(three.rows[1][5] == "0");
    CHECK(three.rows[2][5] == "1");

    REQUIRE(run_cli("mean-field --lambda 0.05 --c 0.1 --rhs poisson", &out) == 0);
    CHECK(parse_csv(out).rows.size() == 1);
}

TEST_CASE("master-eq solve, dump, and the non-convergence exit code") {
    const auto dump = temp_file("dump");
    std::string out;
    REQUIRE(run_cli("master-eq --lambda 0.5 --c 0.9 --dump " + dump.string(), &out) == 0);
    Csv csv = parse_csv(out);
    REQUIRE(csv.rows.size() == 1);
    CHECK(csv.rows[0][4] == "dense");
    const double rho = std::stod(csv.rows[0][5]);
    CHECK(rho > 0.0);
    CHECK(rho < 2.0);

    std::ifstream dumped(dump);
    std::string first;
    std::getline(dumped, first);
    CHECK(first == "ell,b,probability");
    std::filesystem::remove(dump);

    CHECK(run_cli("master-eq --lambda 0.5 --c 0.9 --max-iter 1", &out) == 2);
    CHECK(out.find("numerical failure") != std::string::npos);
}

TEST_CASE("config file sets defaults, flags override") {
    const auto cfg = temp_file("cfg");
    {
        std::ofstream f(cfg);
        f << "[simulate]\nlambda = 0.5\nc = 0.3\nn = 20\n";
    }
    std::string out;
    REQUIRE(run_cli("simulate --config " + cfg.string() +
                        " --t-max 10 --burn-in 2 --c 0.4",
                    &out) == 0);
    Csv csv = parse_csv(out);
    REQUIRE(csv.rows.size() == 1);
    CHECK(std::stod(csv.rows[0][0]) == doctest::Approx(0.4));  // flag wins
    CHECK(std::stod(csv.rows[0][1]) == doctest::Approx(0.5));  // from the file
    std::filesystem::remove(cfg);
}

TEST_CASE("--out writes the same bytes as stdout") {
    const auto path = temp_file("csv");
    std::string streamed;
    REQUIRE(run_cli("simulate --n 20 --lambda 0.5 --t-max 10 --burn-in 2 --seed 3",
                    &streamed) == 0);
    REQUIRE(run_cli("simulate --n 20 --lambda 0.5 --t-max 10 --burn-in 2 --seed 3 "
                    "--out " + path.string(), nullptr) == 0);
    std::ifstream in(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    CHECK(ss.str() == streamed);
    std::filesystem::remove(path);
}
