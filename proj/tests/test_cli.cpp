// End-to-end checks of the CLI binary (path passed as the test argument) plus
// unit checks of the CSV/JSON emitters.
#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "qcb/emit.hpp"

namespace {

std::string g_cli;

int run_cmd(const std::string& cmd) {
    const int rc = std::system(cmd.c_str());
    if (rc == -1) return -1;
    return WEXITSTATUS(rc);
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("emit: empty table is header-only CSV; INF sentinel cells") {
    qcb::Table t;
    t.columns = {"x", "bound"};
    CHECK(qcb::to_csv(t) == "x,bound\n");

    t.rows.push_back({qcb::Cell(0.5), qcb::Cell::inf()});
    t.rows.push_back({qcb::Cell(1.0), qcb::Cell(2.25)});
    const std::string csv = qcb::to_csv(t);
    CHECK(csv == "x,bound\n0.5,INF\n1,2.25\n");

    const auto j = qcb::to_json("sweep", {{"channel", "additive-noise"}}, t);
    CHECK(j["data"][0]["bound"] == "INF");
    CHECK(j["meta"]["command"] == "sweep");
}

TEST_CASE("emit: JSON round-trips doubles bit-exactly") {
    qcb::Table t;
    t.columns = {"v"};
    const double vals[] = {1.0 / 3.0, 0.1, 2.642672226066251, 1e-300, 6.02214076e23};
    for (double v : vals) t.rows.push_back({qcb::Cell(v)});
    const std::string dumped = qcb::to_json("bound", {}, t).dump();
    const auto parsed = nlohmann::json::parse(dumped);
    for (std::size_t i = 0; i < std::size(vals); ++i) {
        CHECK(parsed["data"][i]["v"].get<double>() == vals[i]);
    }
}

TEST_CASE("cli: bound pure-loss eta=0.5 prints capacity 1") {
    REQUIRE_FALSE(g_cli.empty());
    const int rc = run_cmd("\"" + g_cli + "\" bound --channel pure-loss --eta 0.5 --format json --out cli_bound.json");
    REQUIRE(rc == 0);
    const auto j = nlohmann::json::parse(read_file("cli_bound.json"));
    CHECK(j["data"][0]["value"].get<double>() == 1.0);
    CHECK(j["data"][0]["kind"] == "capacity");
    CHECK(j["data"][0]["hierarchy"] == "Q2=D2=K=P2");
}

TEST_CASE("cli: strong-converse distillable example value") {
    const int rc = run_cmd("\"" + g_cli +
                           "\" strong-converse --channel pure-loss --eta 0.5 --n 100 --eps 0.01 "
                           "--variant distillable --format json --out cli_sc.json");
    REQUIRE(rc == 0);
    const auto j = nlohmann::json::parse(read_file("cli_sc.json"));
    CHECK(j["data"][0]["value"].get<double>() == doctest::Approx(1.02642672226066).epsilon(1e-10));
}

TEST_CASE("cli: corrected pipeline emits the INF sentinel at small mu") {
    const int rc = run_cmd("\"" + g_cli +
                           "\" strong-converse --channel pure-loss --eta 0.5 --n 100000 --eps 0.01 "
                           "--corrected --mu 1.0 --energy 10 --format json --out cli_inf.json");
    REQUIRE(rc == 0);
    const auto j = nlohmann::json::parse(read_file("cli_inf.json"));
    CHECK(j["data"][0]["value"] == "INF");
    CHECK(j["data"][0]["eps_composed"].get<double>() == 1.0);
}

TEST_CASE("cli: help exits 0; missing subcommand is a usage error") {
    CHECK(run_cmd("\"" + g_cli + "\" --help > /dev/null") == 0);
    CHECK(run_cmd("\"" + g_cli + "\" bound --help > /dev/null") == 0);
    CHECK(run_cmd("\"" + g_cli + "\" 2> /dev/null") == 2);
}

TEST_CASE("cli: qkd-thresholds JSON carries meta and numeric rows") {
    const int rc = run_cmd("\"" + g_cli + "\" qkd-thresholds --db 5:15:3 --format json --out cli_qkd.json");
    REQUIRE(rc == 0);
    const auto j = nlohmann::json::parse(read_file("cli_qkd.json"));
    CHECK(j["meta"]["command"] == "qkd-thresholds");
    REQUIRE(j["data"].size() == 3);
    CHECK(j["data"][0]["loss_db"].get<double>() == 5.0);
    CHECK(j["data"][0]["eps_ub"].get<double>() == 1.0);
    CHECK(j["data"][0]["eps_lb"].get<double>() > j["data"][2]["eps_lb"].get<double>());
}

TEST_CASE("cli: exit code 2 on unknown channel, 3 on domain errors, 4 on unwritable path") {
    CHECK(run_cmd("\"" + g_cli + "\" bound --channel warp-drive --eta 0.5 2> /dev/null") == 2);
    CHECK(run_cmd("\"" + g_cli + "\" bound --channel thermal-loss --eta 1.5 2> /dev/null") == 3);
    CHECK(run_cmd("\"" + g_cli + "\" capacity --channel thermal-loss --eta 0.5 --nbar 0.2 2> /dev/null") ==
          3);
    CHECK(run_cmd("\"" + g_cli +
                  "\" bound --channel pure-loss --eta 0.5 --out /nonexistent-dir/x.csv 2> /dev/null") == 4);
}

TEST_CASE("cli: sweep CSV has the swept parameter first and INF cells where exact") {
    const int rc = run_cmd("\"" + g_cli +
                           "\" sweep --channel additive-noise --sweep-param xi --grid 0:1:3 "
                           "--out cli_sweep.csv");
    REQUIRE(rc == 0);
    const std::string csv = read_file("cli_sweep.csv");
    CHECK(csv.rfind("xi,additive-noise-flux,kind\n", 0) == 0);
    CHECK(csv.find("0,INF,weak") != std::string::npos);   // xi = 0 is the identity
    CHECK(csv.find("1,0,weak") != std::string::npos);     // xi = 1 boundary clamps to 0
}

TEST_CASE("cli: qkd-thresholds deterministic bytes and row count") {
    const std::string base = "\"" + g_cli + "\" qkd-thresholds --db 0:30:13 --out ";
    REQUIRE(run_cmd(base + "cli_qkd1.csv") == 0);
    REQUIRE(run_cmd(base + "cli_qkd2.csv") == 0);
    const std::string a = read_file("cli_qkd1.csv");
    CHECK(a == read_file("cli_qkd2.csv"));
    CHECK(std::count(a.begin(), a.end(), '\n') == 14);
    CHECK(a.rfind("loss_db,eps_ub,eps_lb,eps_trusted_inf,eps_noswitching,eps_twoway_coherent,"
                  "eps_twoway_thermal\n", 0) == 0);
}

TEST_CASE("cli: sim-error convergence matrix CSV") {
    const int rc = run_cmd("\"" + g_cli +
                           "\" sim-error --channel identity --mu-grid 1:1000:4 --input-grid 0.5:1e6:4 "
                           "--out cli_mat.csv");
    REQUIRE(rc == 0);
    const std::string csv = read_file("cli_mat.csv");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);  // header + 4 mu rows
    CHECK(csv.rfind("mu,infid_mu_in_0.5,", 0) == 0);
    CHECK(run_cmd("\"" + g_cli + "\" sim-error --channel identity --mu-grid 1:10:1 "
                  "--input-grid 1:10:2 2> /dev/null") == 2);  // steps < 2 is a usage error
}

TEST_CASE("cli: sim-error emits the budget row") {
    const int rc = run_cmd("\"" + g_cli +
                           "\" sim-error --channel pure-loss --eta 0.5 --mu 1000 --energy 10 --n 100 "
                           "--eps 0.01 --format json --out cli_sim.json");
    REQUIRE(rc == 0);
    const auto j = nlohmann::json::parse(read_file("cli_sim.json"));
    CHECK(j["data"][0]["delta"].get<double>() == doctest::Approx(0.104736).epsilon(1e-4));
    CHECK(j["data"][0]["eps_tp"].get<double>() <= 1.0);
}

TEST_CASE("cli: config file provides defaults, flags override") {
    {
        std::ofstream cfg("cli_cfg.ini");
        cfg << "bound.eta=0.75\n";
    }
    REQUIRE(run_cmd("\"" + g_cli +
                    "\" --config cli_cfg.ini bound --channel pure-loss --format json --out cli_cfg1.json") ==
            0);
    const auto j1 = nlohmann::json::parse(read_file("cli_cfg1.json"));
    CHECK(j1["data"][0]["value"].get<double>() == doctest::Approx(2.0).epsilon(1e-12));

    REQUIRE(run_cmd("\"" + g_cli +
                    "\" --config cli_cfg.ini bound --channel pure-loss --eta 0.5 --format json "
                    "--out cli_cfg2.json") == 0);
    const auto j2 = nlohmann::json::parse(read_file("cli_cfg2.json"));
    CHECK(j2["data"][0]["value"].get<double>() == 1.0);
}

int main(int argc, char** argv) {
    doctest::Context ctx;
    // last non-doctest argument is the CLI path (wired in by ctest)
    if (argc > 1 && argv[argc - 1][0] != '-') {
        g_cli = argv[argc - 1];
        --argc;
    }
    ctx.applyCommandLine(argc, argv);
    return ctx.run();
}
