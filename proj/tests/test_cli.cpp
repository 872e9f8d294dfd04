// End-to-end tests of the command-line tool: spawns the real binary and
// checks output documents and the exit-code contract (0 ok, 1 validation
// failure, 2 non-convergence, 3 bad input).
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

using nlohmann::json;

namespace {

struct RunResult {
    int code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

RunResult run(const std::string& args) {
    static int serial = 0;
    const std::string out = "cli_stdout_" + std::to_string(++serial) + ".tmp";
    const std::string err = "cli_stderr_" + std::to_string(serial) + ".tmp";
    const std::string cmd = std::string(CLI_PATH) + " " + args + " >" + out + " 2>" + err;
    const int raw = std::system(cmd.c_str());
    RunResult r;
    r.code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    std::remove(out.c_str());
    std::remove(err.c_str());
    return r;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string tok;
    for (char ch : s) {
        if (ch == sep) {
            out.push_back(tok);
            tok.clear();
        } else {
            tok += ch;
        }
    }
    out.push_back(tok);
    return out;
}

// column -> values, parsed from the %.12g CSV
std::vector<double> csv_column(const std::string& csv, const std::string& column) {
    const std::vector<std::string> lines = split(csv, '\n');
    REQUIRE(lines.size() >= 2);
    const std::vector<std::string> header = split(lines[0], ',');
    size_t idx = header.size();
    for (size_t i = 0; i < header.size(); ++i)
        if (header[i] == column) idx = i;
    REQUIRE(idx < header.size());
    std::vector<double> values;
    for (size_t li = 1; li < lines.size(); ++li) {
        if (lines[li].empty()) continue;
        const std::vector<std::string> cells = split(lines[li], ',');
        REQUIRE(cells.size() == header.size());
        values.push_back(std::strtod(cells[idx].c_str(), nullptr));
    }
    return values;
}

}  // namespace

TEST_CASE("solve: baseline scheme against a stronger eavesdropper is zero") {
    const RunResult r = run("solve --scheme receiver_only --gamma-m 1 --gamma-e 2 --pbar 10");
    CHECK(r.code == 0);
    const json j = json::parse(r.out);
    CHECK(j["rate"] == 0.0);
    CHECK(j["realized_power"] == 10.0);
    CHECK(j["clamped"] == true);
    CHECK(j["unit"] == "nats");
}

TEST_CASE("solve: on/off with tau 0 transmits constantly at pbar") {
    const RunResult r = run("solve --scheme onoff --tau 0 --pbar 1 --gamma-m 1 --gamma-e 1");
    CHECK(r.code == 0);
    const json j = json::parse(r.out);
    CHECK(j["p_const"] == 1.0);
    CHECK(j["tau"] == 0.0);
    CHECK(j["rate"].get<double>() > 0.2);
}

TEST_CASE("solve: full CSI meets the average power constraint") {
    const RunResult r = run("solve --scheme full_csi --gamma-m 1 --gamma-e 1 --pbar 1");
    CHECK(r.code == 0);
    const json j = json::parse(r.out);
    CHECK(std::fabs(j["realized_power"].get<double>() - 1.0) <= 1e-4);
    CHECK(j["converged"] == true);
    CHECK(j["rate"].get<double>() == doctest::Approx(0.367242060078773).epsilon(1e-6));
}

TEST_CASE("solve: unit conversion and flag validation") {
    const RunResult nats = run("solve --scheme onoff --pbar 1");
    const RunResult bits = run("solve --scheme onoff --pbar 1 --unit bits");
    REQUIRE(nats.code == 0);
    REQUIRE(bits.code == 0);
    const double r_nats = json::parse(nats.out)["rate"].get<double>();
    const double r_bits = json::parse(bits.out)["rate"].get<double>();
    CHECK(r_bits == doctest::Approx(r_nats / std::log(2.0)).epsilon(1e-14));

    CHECK(run("solve --scheme no_such --pbar 1").code == 3);
    CHECK(run("solve --pbar 1").code == 3);                          // --scheme required
    CHECK(run("solve --scheme onoff --pbar -2").code == 3);          // positive check
    CHECK(run("solve --scheme full_csi --pbar 1 --tau 1").code == 3);  // tau is on/off only
    CHECK(run("bogus_subcommand").code == 3);
    CHECK(run("--help").code == 0);
}

TEST_CASE("sweep: deterministic CSV with the documented schema") {
    const std::string args =
        "sweep --gamma-m 1 --gamma-e 2 --pbar-db-range 0:10:5 --jobs 2 --out sweep_a.csv";
    REQUIRE(run(args).code == 0);
    REQUIRE(run("sweep --gamma-m 1 --gamma-e 2 --pbar-db-range 0:10:5 --jobs 2 "
                "--out sweep_b.csv")
                .code == 0);
    const std::string a = slurp("sweep_a.csv");
    const std::string b = slurp("sweep_b.csv");
    std::remove("sweep_a.csv");
    std::remove("sweep_b.csv");
    REQUIRE(!a.empty());
    CHECK(a == b);
    CHECK(a.rfind("pbar_db,", 0) == 0);

    // gamma_e > gamma_m: the no-CSI baseline is identically zero while the
    // main-CSI scheme stays strictly positive at every budget here.
    for (double v : csv_column(a, "receiver_only")) CHECK(v == 0.0);
    for (double v : csv_column(a, "main_csi")) CHECK(v > 0.0);
    const std::vector<double> db = csv_column(a, "pbar_db");
    REQUIRE(db.size() == 3);
    CHECK(db.front() == 0.0);
    CHECK(db.back() == 10.0);

    CHECK(run("sweep --pbar-db-range 10:0:2").code == 3);
    CHECK(run("sweep --pbar-db-range 0:10:0").code == 3);
    CHECK(run("sweep --pbar-db-range nonsense").code == 3);
    CHECK(run("sweep --schemes onoff,bogus").code == 3);
    CHECK(run("sweep --out /no/such/dir/f.csv").code == 3);
}

TEST_CASE("validate: corrupted tolerance fails before any computation") {
    {
        std::ofstream f("bad_tol.conf");
        f << "quad_rel_tol = 10\n";
    }
    const RunResult r = run("validate --config bad_tol.conf");
    std::remove("bad_tol.conf");
    CHECK(r.code == 3);
    CHECK(r.err.find("quad_rel_tol") != std::string::npos);
    CHECK(r.out.empty());  // no check ever started

    CHECK(run("validate --config missing.conf").code == 3);
}
