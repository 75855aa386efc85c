#include "dsq/config.hpp"
#include "dsq/errors.hpp"
#include "dsq/search.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>

using namespace dsq;

TEST_CASE("config defaults") {
    const Config c;
    CHECK(c.flags == RuleFlags{});
    CHECK(c.zobrist_seed == Zobrist::kDefaultSeed);
    CHECK(c.threads == 1);
    CHECK(c.eval == "default");
    CHECK(config_keys().size() == 8);
}

TEST_CASE("config text") {
    Config c;
    c.merge_text("# rules\nwater_rat_captures_elephant = yes\n  threads=4  # comment\n\ntb_dir = /tmp/tb\n"
                 "zobrist_seed = 0x10\neval = material\n");
    CHECK(c.flags.water_rat_captures_elephant);
    CHECK(c.threads == 4);
    CHECK(c.tb_dir == "/tmp/tb");
    CHECK(c.zobrist_seed == 16);
    CHECK(c.eval == "material");

    Config round;
    round.merge_text(c.to_text());
    CHECK(round.to_text() == c.to_text());
}

TEST_CASE("config errors") {
    Config c;
    CHECK_THROWS_AS(c.merge_text("colour = white\n"), ParseError);
    CHECK_THROWS_AS(c.merge_text("threads = 0\n"), ParseError);
    CHECK_THROWS_AS(c.merge_text("threads = four\n"), ParseError);
    CHECK_THROWS_AS(c.merge_text("eval = clever\n"), ParseError);
    CHECK_THROWS_AS(c.merge_text("water_rat_captures_land_rat = maybe\n"), ParseError);
    try {
        c.merge_text("threads = 2\njust words\n");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.offset() == 12);
    }
    CHECK_THROWS_AS(c.merge_file("/nonexistent/dsq.conf"), Error);
}

TEST_CASE("later settings win") {
    const auto dir = std::filesystem::temp_directory_path() / "dsq_config_test";
    std::filesystem::create_directories(dir);
    const auto file = dir / "a.conf";
    std::ofstream(file) << "threads = 3\ntt_size = 1024\n";
    Config c;
    c.merge_file(file);
    CHECK(c.threads == 3);
    c.set("threads", "5");
    CHECK(c.threads == 5);
    CHECK(c.tt_size == 1024);
    std::filesystem::remove_all(dir);
}
