#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "facmech/rational.hpp"

namespace fs = std::filesystem;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

const fs::path& work_dir() {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / "facmech-cli-tests";
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

RunResult run_cli(const std::string& args) {
    static int counter = 0;
    const fs::path out = work_dir() / ("out" + std::to_string(counter) + ".txt");
    const fs::path err = work_dir() / ("err" + std::to_string(counter) + ".txt");
    ++counter;
    const std::string cmd = std::string(FACMECH_CLI_PATH) + " " + args + " >" + out.string() +
                            " 2>" + err.string();
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

fs::path write_doc(const std::string& name, const std::string& content) {
    const fs::path p = work_dir() / name;
    std::ofstream f(p, std::ios::binary);
    f << content;
    return p;
}

} // namespace

TEST_CASE("run reports exact ratios for the fixture instances") {
    auto r = run_cli("run --mechanism median2 --fixture median-tight?eps=1/1000 --objective sc");
    REQUIRE(r.exit_code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["ratio"] == "1498/501"); // (3 - 4eps) / (1 + 2eps), canonical form
    CHECK(j["sc"]["exact"] == "749/250");
    CHECK(j["opt_sc"]["exact"] == "501/500");

    auto r2 = run_cli(
        "run --mechanism vote-for-priority --fixture vfp-example?eps=1/1000 --objective mc");
    REQUIRE(r2.exit_code == 0);
    const auto j2 = nlohmann::json::parse(r2.out);
    CHECK(j2["ratio"] == "3001/1001"); // (3 + eps) / (1 + eps)
    CHECK(j2["solution"]["c1"] == 1);
    CHECK(j2["solution"]["c2"] == 0);
}

TEST_CASE("run exits 1 on bad documents and 2 on domain mismatches") {
    const fs::path no_approval = write_doc("bad_approval.json",
        R"({"version":1,"candidates":["0","1"],"agents":[{"x":"0","p1":false,"p2":false}]})");
    auto r = run_cli("run --mechanism pmm --instance " + no_approval.string() + " --objective sc");
    CHECK(r.exit_code == 1);

    const fs::path bad_q = write_doc("bad_q.json",
        R"({"version":1,"candidates":["0","1/-2"],"agents":[{"x":"0","p1":true,"p2":true}]})");
    CHECK(run_cli("run --mechanism pmm --instance " + bad_q.string() + " --objective sc")
              .exit_code == 1);

    const fs::path one_slot = write_doc("one_slot.json",
        R"({"version":1,"candidates":["0"],"agents":[{"x":"0","p1":true,"p2":true}]})");
    CHECK(run_cli("run --mechanism pmm --instance " + one_slot.string() + " --objective sc")
              .exit_code == 1);

    CHECK(run_cli("run --mechanism pmm --instance /no/such/file.json --objective sc").exit_code ==
          1);

    // Heterogeneous instance handed to a homogeneous-only mechanism.
    const fs::path hetero = write_doc("hetero.json",
        R"({"version":1,"candidates":["0","1"],"agents":[{"x":"0","p1":true,"p2":false},{"x":"1","p1":true,"p2":true}]})");
    auto dom = run_cli("run --mechanism median2 --instance " + hetero.string() + " --objective sc");
    CHECK(dom.exit_code == 2);
    CHECK(dom.err.find("homogeneous") != std::string::npos);

    CHECK(run_cli("run --mechanism alpha-stat --alpha 2/3 --fixture median-tight --objective sc")
              .exit_code == 1); // alpha out of [0, 1/2]

    // Neither --instance nor --fixture.
    CHECK(run_cli("run --mechanism pmm --objective sc").exit_code == 1);
    CHECK(run_cli("run --mechanism pmm --fixture vfp-example --objective nonsense").exit_code ==
          1);
}

TEST_CASE("opt reports the brute-force optimum with its tie-break documented") {
    auto r = run_cli("opt --fixture mc-general-lower-i2?eps=1/1000 --objective mc");
    REQUIRE(r.exit_code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["value"]["exact"] == "1001/1000");
    CHECK(j["solution"]["coord1"]["exact"] == "-1");
    CHECK(j["solution"]["coord2"]["exact"] == "1");
    CHECK(j["tie_break"] == "lexicographic (c1, c2)");

    // Duplicate-slot instance attains optimum zero.
    const fs::path dup = write_doc("dup.json",
        R"({"version":1,"candidates":["0","0","5"],"agents":[{"x":"0","p1":true,"p2":true}]})");
    auto r2 = run_cli("opt --instance " + dup.string() + " --objective sc");
    REQUIRE(r2.exit_code == 0);
    CHECK(nlohmann::json::parse(r2.out)["value"]["exact"] == "0");
}

TEST_CASE("fuzz-sp honors the exit-code contract") {
    // Strategyproof on its domain: zero violations, exit 0.
    auto ok = run_cli("fuzz-sp --mechanism vote-for-priority --generator singleton-prefs "
                      "--trials 120 --seed 1");
    REQUIRE(ok.exit_code == 0);
    CHECK(nlohmann::json::parse(ok.out)["violations"] == 0);

    // The negative control must be flagged, with CSV rows.
    const fs::path csv = work_dir() / "violations.csv";
    auto bad = run_cli("fuzz-sp --mechanism broken-mean --generator uniform-general "
                       "--trials 200 --seed 1 --out " + csv.string());
    CHECK(bad.exit_code == 3);
    const auto bj = nlohmann::json::parse(bad.out);
    CHECK(bj["violations"].get<std::size_t>() >= 1);
    const std::string csv_text = slurp(csv);
    CHECK(csv_text.rfind("trial,agent,true_x,misreport,true_cost,dev_cost,slots_before,"
                         "slots_after\n", 0) == 0);
    CHECK(std::count(csv_text.begin(), csv_text.end(), '\n') >= 2);

    // Vacuous run: exit 0 and a header-only CSV.
    const fs::path empty_csv = work_dir() / "empty.csv";
    auto vac = run_cli("fuzz-sp --mechanism pmm --generator uniform-general --trials 0 --seed 1 "
                       "--out " + empty_csv.string());
    CHECK(vac.exit_code == 0);
    CHECK(slurp(empty_csv) ==
          "trial,agent,true_x,misreport,true_cost,dev_cost,slots_before,slots_after\n");

    // Generator/mechanism mismatch: configuration error before any trial.
    auto mismatch = run_cli("fuzz-sp --mechanism median2 --generator singleton-prefs "
                            "--trials 10 --seed 1");
    CHECK(mismatch.exit_code == 1);
}

TEST_CASE("sweep emits a deterministic report and per-trial CSV") {
    const fs::path csv1 = work_dir() / "sweep1.csv";
    const fs::path csv2 = work_dir() / "sweep2.csv";
    const std::string args = "sweep --mechanism leftmost-priority --objective mc "
                             "--generator 'uniform-homogeneous?n=6&m=5' --trials 150 --seed 3 ";
    auto a = run_cli(args + "--out " + csv1.string());
    auto b = run_cli(args + "--out " + csv2.string());
    REQUIRE(a.exit_code == 0);
    // Byte-identical stdout report and CSV across repeated seeded runs.
    CHECK(a.out == b.out);
    CHECK(slurp(csv1) == slurp(csv2));

    const auto j = nlohmann::json::parse(a.out);
    CHECK(j["trials"] == 150);
    CHECK(j["max_defined"] == true);
    // Homogeneous leftmost-priority stays within its factor-2 guarantee.
    const facmech::Rat max_ratio =
        facmech::Rat::parse(j["max_ratio"]["ratio"]["exact"].get<std::string>());
    CHECK(max_ratio <= facmech::Rat(2));
    CHECK(j["missing_side_trials"] == 0);

    const std::string csv_text = slurp(csv1);
    CHECK(csv_text.rfind("trial,n,m,mech_value,opt_value,ratio,is_infinite\n", 0) == 0);
    CHECK(std::count(csv_text.begin(), csv_text.end(), '\n') == 151);
}

TEST_CASE("paper-suite writes the fixture-by-mechanism table") {
    const fs::path dir = work_dir() / "suite";
    auto r = run_cli("paper-suite --eps-list 1/100 --n 200 --out " + dir.string());
    REQUIRE(r.exit_code == 0);
    const std::string csv = slurp(dir / "paper_suite.csv");
    CHECK(csv.rfind("fixture,mechanism,objective,eps,", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 16); // header + 15 rows
    CHECK(csv.find("median-tight") != std::string::npos);
    CHECK(csv.find("naive-median-f1") != std::string::npos);

    // Out-of-range eps is rejected up front.
    CHECK(run_cli("paper-suite --eps-list 1/2 --out " + dir.string()).exit_code == 1);
}
