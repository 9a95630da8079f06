#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/stat.h>
#include <sys/wait.h>

using nlohmann::json;

static int run(const std::string& args) {
    const std::string cmd = std::string(GHL_TOOL_PATH) + " " + args;
    const int rc = std::system(cmd.c_str());
    if (rc == -1) return -1;
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -2;
}

static std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

static bool exists(const std::string& p) {
    struct stat st;
    return ::stat(p.c_str(), &st) == 0;
}

static int data_rows(const std::string& csv) {
    int lines = 0;
    for (char ch : csv)
        if (ch == '\n') ++lines;
    return lines - 1;  // minus header
}

static std::string write_cfg(const std::string& name, const std::string& body) {
    std::ofstream out(name, std::ios::binary);
    out << body;
    return name;
}

static const std::string kRefCfg = std::string(GHL_CONFIG_DIR) + "/reference.cfg";

TEST_CASE("surface subcommand writes the period data") {
    REQUIRE(run("surface --config " + kRefCfg + " --out cli_surface >/dev/null 2>&1") == 0);
    const json j = json::parse(slurp("cli_surface/surface.json"));
    CHECK(std::fabs(j["A"][0][0].get<double>() - 0.8379870648) < 1e-6);
    CHECK(std::fabs(j["A"][1][0].get<double>()) < 1e-9);
    CHECK(j.contains("im_tau"));
    CHECK(j.contains("delta"));
    CHECK(j.contains("Omega"));
    CHECK(std::fabs(j["u_infinity"][0].get<double>() - 1.0 / 6) < 1e-9);
}

TEST_CASE("theta scan is deterministic") {
    REQUIRE(run("theta --out cli_theta_a >/dev/null 2>&1") == 0);
    REQUIRE(run("theta --out cli_theta_b >/dev/null 2>&1") == 0);
    const std::string a = slurp("cli_theta_a/theta_scan.csv");
    REQUIRE(!a.empty());
    CHECK(a == slurp("cli_theta_b/theta_scan.csv"));
    CHECK(a.rfind("kappa,abs_theta,is_root\n", 0) == 0);
}

TEST_CASE("stability runs reproduce bytes for a fixed seed") {
    REQUIRE(run("stability --out cli_stab_a >/dev/null 2>&1") == 0);
    REQUIRE(run("stability --out cli_stab_b >/dev/null 2>&1") == 0);
    REQUIRE(run("stability --out cli_stab_c --seed 123 >/dev/null 2>&1") == 0);
    const std::string a = slurp("cli_stab_a/stability.csv");
    REQUIRE(!a.empty());
    CHECK(a == slurp("cli_stab_b/stability.csv"));
    CHECK(a != slurp("cli_stab_c/stability.csv"));
}

TEST_CASE("continue honours its own flags") {
    REQUIRE(run("continue --out cli_cont --points 6 --nmax 4 --phantom-degree 1 "
                ">/dev/null 2>&1") == 0);
    const std::string csv = slurp("cli_cont/recovery.csv");
    REQUIRE(!csv.empty());
    CHECK(csv.rfind("z,recovered,truth,abs_err,tail_bound\n", 0) == 0);
    CHECK(data_rows(csv) == 6);
}

TEST_CASE("all writes every artifact and the summary verdicts") {
    REQUIRE(run("all --config " + kRefCfg + " --out cli_all > cli_all_stdout.txt 2>&1") == 0);
    for (const char* f : {"theta_scan.csv", "spectrum.csv", "asymptotics.csv",
                          "continuation.csv", "recovery.csv", "instability.csv",
                          "stability.csv", "surface.json", "summary.json"})
        CHECK(exists(std::string("cli_all/") + f));

    const json s = json::parse(slurp("cli_all/summary.json"));
    CHECK(s.contains("provenance"));
    CHECK(s["provenance"].contains("version"));
    CHECK(s["provenance"].contains("config_hash"));
    CHECK(s["provenance"].contains("seed"));
    for (int i = 1; i <= 12; ++i) {
        char key[16];
        std::snprintf(key, sizeof(key), "criterion_%02d", i);
        REQUIRE(s.contains(key));
        CHECK(s[key].contains("pass"));
        CHECK(s[key].contains("detail"));
    }
    CHECK(s["all_acceptable"].is_boolean());
    CHECK(data_rows(slurp("cli_all/recovery.csv")) == 10);

    const std::string log = slurp("cli_all_stdout.txt");
    CHECK(log.find("criterion_01") != std::string::npos);
    CHECK(log.find("criterion_12") != std::string::npos);
}

TEST_CASE("configuration errors exit with code 2") {
    const std::string bad_endpoints = write_cfg(
        "cli_bad_endpoints.cfg", "endpoints = -3, -2, -2, 1, 2, 3\n");
    CHECK(run("surface --config " + bad_endpoints +
              " --out cli_err >/dev/null 2>cli_err_a.txt") == 2);
    const std::string msg = slurp("cli_err_a.txt");
    CHECK(msg.find("a[2]") != std::string::npos);
    CHECK(msg.find("a[3]") != std::string::npos);

    const std::string bad_key = write_cfg("cli_bad_key.cfg", "bogus = 1\n");
    CHECK(run("surface --config " + bad_key + " --out cli_err >/dev/null 2>cli_err_b.txt") == 2);
    const std::string msg_b = slurp("cli_err_b.txt");
    CHECK(msg_b.find("unknown key") != std::string::npos);
    CHECK(msg_b.find("line 1") != std::string::npos);

    const std::string bad_val = write_cfg("cli_bad_val.cfg", "nq = banana\n");
    CHECK(run("surface --config " + bad_val + " --out cli_err >/dev/null 2>&1") == 2);

    CHECK(run("surface --config cli_no_such_file.cfg --out cli_err >/dev/null 2>&1") == 2);
    CHECK(run(">/dev/null 2>&1") == 2);  // missing subcommand
    CHECK(run("--help >/dev/null 2>&1") == 0);
}

TEST_CASE("independent subcommands can run concurrently") {
    const int rc = std::system((std::string(GHL_TOOL_PATH) +
                                " surface --out cli_par_a >/dev/null 2>&1 & " +
                                GHL_TOOL_PATH + " surface --out cli_par_b >/dev/null 2>&1 & wait")
                                   .c_str());
    CHECK(rc == 0);
    CHECK(exists("cli_par_a/surface.json"));
    CHECK(exists("cli_par_b/surface.json"));
    CHECK(slurp("cli_par_a/surface.json") == slurp("cli_par_b/surface.json"));
}
