// Runs the dsq binary and compares its output with the files in golden/.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

struct Run {
    std::string out;
    int code = -1;
};

Run run(const std::string& args) {
    const std::string cmd = std::string(DSQ_CLI) + " " + args + " 2>/dev/null";
    Run r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buf;
    while (std::size_t n = std::fread(buf.data(), 1, buf.size(), pipe)) r.out.append(buf.data(), n);
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string golden(const char* name) {
    std::ifstream in(std::filesystem::path(DSQ_GOLDEN_DIR) / name);
    REQUIRE(in);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

// Drops the last tab-separated field of every line (wall-clock seconds).
std::string without_timing(const std::string& text) {
    std::istringstream in(text);
    std::string line, out;
    while (std::getline(in, line)) out += line.substr(0, line.rfind('\t')) + '\n';
    return out;
}

const std::string& tb_dir() {
    static const std::string dir = [] {
        const auto d = std::filesystem::temp_directory_path() / "dsq_cli_test_tb";
        std::filesystem::remove_all(d);
        const Run r = run("--tb-dir " + d.string() + " solve 2");
        REQUIRE(r.code == 0);
        return d.string();
    }();
    return dir;
}

std::string with_tb(const std::string& args) { return "--tb-dir " + tb_dir() + " " + args; }

}  // namespace

TEST_CASE("perft") {
    const Run r = run("perft 4");
    CHECK(r.code == 0);
    CHECK(without_timing(r.out) == golden("perft4.txt"));
}

TEST_CASE("solve, stats and verify") {
    const Run s = run(with_tb("stats 2"));
    CHECK(s.code == 0);
    CHECK(s.out == golden("stats2.txt"));
    const Run v = run(with_tb("verify 2"));
    CHECK(v.code == 0);
    CHECK(v.out == golden("verify2.txt"));
}

TEST_CASE("probe") {
    const Run r = run(with_tb("probe \"t6/7/T6/7/7/7/7/7/7 w\""));
    CHECK(r.code == 0);
    CHECK(r.out == golden("probe_fig_b.txt"));
    const Run m = run(with_tb("probe --machine \"7/7/3e3/7/7/7/3E3/7/7 w\""));
    CHECK(m.out.rfind("LOSS\t12\t", 0) == 0);
    CHECK(run(with_tb("probe --machine \"d6/7/7/7/7/7/5C1/7/7 w\"")).out.rfind("DRAW", 0) == 0);
}

TEST_CASE("features and mining") {
    CHECK(run("features \"7/7/3e3/7/7/7/3E3/7/7 w\"").out == golden("features_fig_a.txt"));
    CHECK(run(with_tb("mine L_e --fixture lion")).out == golden("mine_lion.txt"));
    CHECK(run(with_tb("mine E_e --fixture equal")).out == golden("mine_equal.txt"));
    const Run c = run(with_tb("classify \"7/7/3e3/7/6L/7/7/7/7 w\" --fixture lion"));
    CHECK(c.code == 0);
    CHECK_FALSE(c.out.empty());
}

TEST_CASE("search") {
    const Run r = run("search 2 --no-repetition");
    CHECK(r.code == 0);
    CHECK(r.out.find('\t') != std::string::npos);
}

TEST_CASE("exit codes") {
    CHECK(run("").code == 2);
    CHECK(run("bogus").code == 2);
    CHECK(run("perft -1").code == 2);
    CHECK(run("probe \"xx\"").code == 3);
    CHECK(run("--set foo=1 perft 1").code == 3);
    CHECK(run("--tb-dir /nonexistent/dsq probe \"t6/7/T6/7/7/7/7/7/7 w\"").code == 4);
    CHECK(run("--config /nonexistent/dsq.conf perft 1").code == 4);
}
