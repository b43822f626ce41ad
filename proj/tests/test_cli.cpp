#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "masmc/cli.hpp"

namespace fs = std::filesystem;

namespace {

struct CliResult {
    int code;
    std::string out;
    std::string err;
};

CliResult run_cli(std::vector<std::string> args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = masmc::cli::dispatch(std::move(args), out, err);
    return {code, out.str(), err.str()};
}

fs::path write_temp(const std::string& stem, const std::string& text) {
    const fs::path path = fs::temp_directory_path() / stem;
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    f << text;
    return path;
}

std::string read_file(const fs::path& path) {
    std::ifstream f(path, std::ios::binary);
    std::ostringstream buf;
    buf << f.rdbuf();
    return buf.str();
}

const std::string kDemo = R"(parties: 3
inputs: 10, 20, 30
function: sum
fragments_r: 3
decision_makers_m: 3
agents_p: 5
agents_selected_k: 5
threshold: third
seed: 42
)";

} // namespace

TEST_CASE("run: all-honest demo accepts with full support") {
    const auto scn = write_temp("masmc_cli_demo.scn", kDemo);
    const CliResult r = run_cli({"run", scn.string()});
    CHECK(r.code == 0);
    CHECK(r.out == "ACCEPTED value=60 support=5/5\n");
}

TEST_CASE("run: writes the transcript when asked") {
    const auto scn = write_temp("masmc_cli_demo2.scn", kDemo);
    const auto transcript = fs::temp_directory_path() / "masmc_cli_demo2.transcript";
    const CliResult r =
        run_cli({"run", scn.string(), "--transcript", transcript.string()});
    CHECK(r.code == 0);
    const std::string text = read_file(transcript);
    CHECK(text.find("task_begin") != std::string::npos);
    CHECK(text.find("outcome status=ACCEPTED") != std::string::npos);
    fs::remove(transcript);
}

TEST_CASE("run: --seed overrides the file seed deterministically") {
    const auto scn = write_temp("masmc_cli_demo3.scn", kDemo);
    const CliResult a = run_cli({"run", scn.string(), "--seed", "7"});
    const CliResult b = run_cli({"run", scn.string(), "--seed", "7"});
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
}

TEST_CASE("run: ambiguous votes exit 2") {
    const std::string split_vote = R"(parties: 1
inputs: 10
function: sum
fragments_r: 1
decision_makers_m: 1
agents_p: 4
agents_selected_k: 4
threshold: third
seed: 1
malicious: 2:constant:99, 3:constant:99
)";
    const auto scn = write_temp("masmc_cli_tie.scn", split_vote);
    const CliResult r = run_cli({"run", scn.string()});
    CHECK(r.code == 2);
    CHECK(r.out == "REJECTED AMBIGUOUS\n");
}

TEST_CASE("run: malformed scenario exits 1 and names the line") {
    const auto scn = write_temp("masmc_cli_bad.scn", kDemo + "bogus_key: 1\n");
    const CliResult r = run_cli({"run", scn.string()});
    CHECK(r.code == 1);
    CHECK(r.out.empty());
    CHECK(r.err.find(":10: unknown key 'bogus_key'") != std::string::npos);
}

TEST_CASE("run: missing file exits 1") {
    const CliResult r = run_cli({"run", "/nonexistent/masmc.scn"});
    CHECK(r.code == 1);
    CHECK(r.err.find("cannot open") != std::string::npos);
}

TEST_CASE("probe eq1: sweep passes and writes csv") {
    const auto csv_path = fs::temp_directory_path() / "masmc_cli_fig2.csv";
    const CliResult r = run_cli({"probe", "eq1", "--r", "1..8", "--trials", "20000",
                                 "--seed", "7", "--csv", csv_path.string()});
    CHECK(r.code == 0);
    CHECK(r.out.find("series: p_fragment_capture\n") != std::string::npos);
    CHECK(r.out.find("rows_ok: 8/8\n") != std::string::npos);
    const std::string csv = read_file(csv_path);
    CHECK(csv.starts_with("x,p_closed,p_mc,stderr\n"));
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 9);
    fs::remove(csv_path);
}

TEST_CASE("probe eq3: m sweep at fixed p") {
    const CliResult r =
        run_cli({"probe", "eq3", "--m", "2..6", "--p", "10", "--trials", "20000"});
    CHECK(r.code == 0);
    CHECK(r.out.find("series: p_wrong_agent(p=10)\n") != std::string::npos);
    CHECK(r.out.find("rows_ok: 5/5\n") != std::string::npos);
}

TEST_CASE("probe: zero in the range exits 1") {
    const CliResult r = run_cli({"probe", "eq1", "--r", "0..5"});
    CHECK(r.code == 1);
    CHECK(r.err.find("range") != std::string::npos);
}

TEST_CASE("probe: mismatched options exit 1") {
    CHECK(run_cli({"probe", "eq1", "--m", "1..5"}).code == 1);
    CHECK(run_cli({"probe", "eq2", "--r", "1..5"}).code == 1);
    CHECK(run_cli({"probe", "eq3", "--m", "1..5"}).code == 1); // missing --p
    CHECK(run_cli({"probe", "eq9", "--r", "1..5"}).code == 1);
}

TEST_CASE("probe runs are byte-identical") {
    const std::vector<std::string> args = {"probe", "eq2", "--m", "1..6",
                                           "--trials", "20000", "--seed", "11"};
    const CliResult a = run_cli(args);
    const CliResult b = run_cli(args);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
}

TEST_CASE("figures writes both csv files") {
    const fs::path dir = fs::temp_directory_path() / "masmc_cli_figs";
    fs::create_directories(dir);
    const CliResult r =
        run_cli({"figures", "--out", dir.string(), "--trials", "5000", "--seed", "7"});
    CHECK(r.code == 0);
    CHECK(fs::exists(dir / "fig2.csv"));
    CHECK(fs::exists(dir / "fig3.csv"));
    const std::string fig2 = read_file(dir / "fig2.csv");
    CHECK(std::count(fig2.begin(), fig2.end(), '\n') == 21); // header + 20 rows
    fs::remove_all(dir);
}

TEST_CASE("selfcheck passes on a healthy build") {
    const CliResult a = run_cli({"selfcheck"});
    CHECK(a.code == 0);
    CHECK(a.out.find("PASS share_round_trip\n") != std::string::npos);
    CHECK(a.out.find("FAIL") == std::string::npos);

    const CliResult b = run_cli({"selfcheck"});
    CHECK(a.out == b.out); // identical output bytes
}

TEST_CASE("unknown subcommand exits 1") {
    const CliResult r = run_cli({"explode"});
    CHECK(r.code == 1);
    CHECK_FALSE(r.err.empty());
}

TEST_CASE("help exits 0") {
    const CliResult r = run_cli({"--help"});
    CHECK(r.code == 0);
    CHECK(r.out.find("masmc") != std::string::npos);
}
