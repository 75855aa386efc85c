#include "dsq/errors.hpp"
#include "dsq/rules.hpp"

#include <doctest.h>

#include <random>
#include <set>

using namespace dsq;

namespace {

Square at(const char* name) { return *Square::parse(name); }

Position board(const char* text) { return parse_position(text); }

bool has_move(const Position& pos, const char* text, const RuleFlags& flags = {}) {
    try {
        parse_move(pos, text, flags);
        return true;
    } catch (const Error&) {
        return false;
    }
}

// Random legal playout of up to `plies` moves.
Position playout(std::mt19937_64& rng, int plies) {
    Position pos = Position::initial();
    for (int i = 0; i < plies; ++i) {
        const MoveList moves = legal_moves(pos);
        if (moves.empty()) break;
        pos = apply_unchecked(pos, moves[rng() % moves.size()]);
    }
    return pos;
}

}  // namespace

TEST_CASE("squares and terrain") {
    CHECK(at("a1").index() == 0);
    CHECK(at("g9").index() == 62);
    CHECK(at("d1") == sq::d1);
    CHECK(at("c3").to_string() == "c3");
    CHECK_FALSE(Square::parse("h1"));
    CHECK_FALSE(Square::parse("a0"));
    CHECK_FALSE(Square::parse("a10"));
    CHECK(at("b2").mirrored() == at("b8"));

    int water = 0;
    for (int i = 0; i < Square::kCount; ++i) water += is_water(Square::from_index(i));
    CHECK(water == 12);
    for (const char* w : {"b4", "c5", "e6", "f4"}) CHECK(is_water(at(w)));
    for (const char* l : {"a4", "d5", "g6", "b3", "b7"}) CHECK_FALSE(is_water(at(l)));

    CHECK(terrain_at(sq::d1) == Terrain::WhiteDen);
    CHECK(terrain_at(sq::d9) == Terrain::BlackDen);
    // Traps around the white den weaken Black.
    CHECK(is_trap_against(at("d2"), Color::Black));
    CHECK_FALSE(is_trap_against(at("d2"), Color::White));
    CHECK(is_trap_against(at("e9"), Color::White));
    CHECK(manhattan(at("a1"), at("g9")) == 14);
}

TEST_CASE("initial position and text form") {
    const Position p = Position::initial();
    CHECK(to_text(p) == "l5t/1d3c1/r1p1w1e/7/7/7/E1W1P1R/1C3D1/T5L w");
    CHECK(board("l5t/1d3c1/r1p1w1e/7/7/7/E1W1P1R/1C3D1/T5L w") == p);
    CHECK(p.total() == 16);
    CHECK(*p.square_of(Color::White, PieceKind::Elephant) == at("a3"));
    CHECK(*p.square_of(Color::Black, PieceKind::Elephant) == at("g7"));
    CHECK(legal_moves(p).size() == 24);
    // The start is symmetric under the rank mirror with colors swapped.
    CHECK(p.mirrored().mirrored() == p);
}

TEST_CASE("position parse errors carry offsets") {
    auto offset_of = [](const char* text) -> long {
        try {
            parse_position(text);
        } catch (const ParseError& e) {
            return static_cast<long>(e.offset());
        }
        return -1;
    };
    CHECK(offset_of("x6/7/7/7/7/7/7/7/7 w") == 0);
    CHECK(offset_of("8/7/7/7/7/7/7/7/7 w") >= 0);
    CHECK(offset_of("7/7/7/7/7/7/7/7 w") >= 0);
    CHECK(offset_of("7/7/7/7/7/7/7/7/7 x") >= 0);
    CHECK(offset_of("E6/E6/7/7/7/7/7/7/7 w") >= 0);  // two white elephants
    CHECK(offset_of("7/7/7/7/7/7/7/7/6E w") == -1);
    CHECK_THROWS_AS(validate(board("7/7/7/7/1E5/7/7/7/7 w")), Error);  // elephant in water
}

TEST_CASE("move rules") {
    SUBCASE("own den is forbidden, enemy den wins") {
        const Position p = board("6e/7/7/7/7/7/7/3E3/7 w");
        CHECK_FALSE(has_move(p, "Ed1"));
        const Position q = board("7/3E3/7/7/7/7/7/7/e6 w");
        const Position after = apply_move(q, parse_move(q, "Ed9"));
        CHECK(winner(after) == Color::White);
        CHECK(terminal_state(after) == Outcome::WhiteWins);
        CHECK(legal_moves(after).empty());
    }
    SUBCASE("only rats swim") {
        const Position p = board("6e/7/7/7/7/7/1R1E3/7/7 w");
        CHECK(has_move(p, "Rb4"));
        CHECK(has_move(p, "Ed4"));
        const Position q = board("6e/7/7/7/7/7/1C5/7/7 w");
        CHECK_FALSE(has_move(q, "Cb4"));
    }
    SUBCASE("leaps") {
        const Position p = board("6e/7/7/7/L6/7/7/7/7 w");
        CHECK(has_move(p, "Ld5"));
        const Position t = board("6e/7/7/7/7/7/1T5/7/7 w");
        CHECK(has_move(t, "Tb7"));
        // A rat in the water blocks the leap.
        const Position blocked = board("7/7/7/7/1r5/7/1T5/7/7 w");
        CHECK_FALSE(has_move(blocked, "Tb7"));
        const Position blocked_h = board("7/7/7/7/L1r4/7/7/7/7 w");
        CHECK_FALSE(has_move(blocked_h, "Ld5"));
        // Elephants do not leap.
        CHECK_FALSE(has_move(board("6e/7/7/7/7/7/1E5/7/7 w"), "Eb7"));
    }
    SUBCASE("captures by strength") {
        CHECK(has_move(board("7/7/7/7/7/7/7/1l5/1T5 b"), "lxb1"));  // black lion takes tiger
        CHECK_FALSE(has_move(board("7/7/7/7/7/7/7/1t5/1L5 b"), "txb1"));
        CHECK(has_move(board("7/7/7/7/7/7/7/1d5/1D5 b"), "dxb1"));  // equal strength
        // Rat takes elephant, elephant takes rat.
        CHECK(has_move(board("7/7/7/7/7/7/7/1r5/1E5 b"), "rxb1"));
        CHECK(has_move(board("7/7/7/7/7/7/7/1e5/1R5 b"), "exb1"));
        // The elephant cannot take a rat sitting in the water.
        CHECK_FALSE(has_move(board("7/7/7/7/7/Er5/7/7/7 w"), "Exb4"));
    }
    SUBCASE("traps") {
        // A black elephant on a white trap falls to the white cat.
        const Position p = board("7/7/7/7/7/7/7/2Ce3/7 w");
        CHECK(has_move(p, "Cxd2"));
        CHECK_FALSE(has_move(board("7/7/7/7/7/7/2e4/2C4/7 w"), "Cxc3"));
        // A white piece on a white trap keeps its strength.
        const Position r = board("7/7/7/7/7/7/7/2cE3/7 b");
        CHECK_FALSE(has_move(r, "cxd2"));
    }
    SUBCASE("rat across the water edge") {
        // White rat on b4 (water) and black rat on a4 (land).
        const Position p = board("7/7/7/7/7/rR5/7/7/7 w");
        RuleFlags f;
        CHECK(has_move(p, "Rxa4", f));
        f.water_rat_captures_land_rat = false;
        CHECK_FALSE(has_move(p, "Rxa4", f));
        const Position q = board("7/7/7/7/7/Rr5/7/7/7 w");
        RuleFlags g;
        CHECK(has_move(q, "Rxb4", g));
        g.land_rat_captures_water_rat = false;
        CHECK_FALSE(has_move(q, "Rxb4", g));
        // Water rat on the elephant is off by default.
        const Position e = board("7/7/7/7/7/eR5/7/7/7 w");
        CHECK_FALSE(has_move(e, "Rxa4"));
        RuleFlags h;
        h.water_rat_captures_elephant = true;
        CHECK(has_move(e, "Rxa4", h));
    }
    SUBCASE("illegal moves are rejected") {
        const Position p = Position::initial();
        CHECK_THROWS_AS(apply_move(p, Move{at("a1"), at("a3")}), Error);
        CHECK_THROWS_AS(parse_move(p, "Ea9"), Error);
        CHECK_THROWS_AS(parse_move(p, "ea4"), Error);  // not Black's turn
    }
}

TEST_CASE("rule flag word round-trips") {
    for (std::uint16_t w = 0; w < 8; ++w) CHECK(RuleFlags::from_word(w).word() == w);
    CHECK(RuleFlags{}.word() == 3);
}

TEST_CASE("perft small depths") {
    const Position p = Position::initial();
    CHECK(perft(p, 0) == 1);
    CHECK(perft(p, 1) == 24);
    CHECK(perft(p, 2) == 576);
    CHECK(perft(p, 3) == 12240);
    CHECK(perft(p, 4) == 260100);
    PerftOptions plain;
    plain.repetition_leaves = false;
    // Repetitions can first occur at ply 4.
    CHECK(perft(p, 3, {}, plain) == 12240);
    CHECK(perft(p, 4, {}, plain) >= perft(p, 4));
}

TEST_CASE("repetition on the line") {
    const Position p = Position::initial();
    const Position a = apply_unchecked(p, parse_move(p, "Ea4"));
    const Position b = apply_unchecked(a, parse_move(a, "eg6"));
    const Position c = apply_unchecked(b, parse_move(b, "Ea3"));
    const Position d = apply_unchecked(c, parse_move(c, "eg7"));
    const std::vector<Position> line = {p, a, b, c};
    CHECK(d == p);
    CHECK(repeats_on_line(d, line));
    CHECK_FALSE(repeats_on_line(c, std::vector<Position>{p, a, b}));
}

TEST_CASE("mirror equivariance of move generation") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 300; ++i) {
        const Position pos = playout(rng, static_cast<int>(rng() % 40));
        if (winner(pos)) continue;
        const Position m = pos.mirrored();
        const MoveList a = legal_moves(pos);
        const MoveList b = legal_moves(m);
        REQUIRE(a.size() == b.size());
        std::set<std::pair<int, int>> mirrored_moves;
        for (const Move& mv : b) mirrored_moves.insert({mv.from.mirrored().index(), mv.to.mirrored().index()});
        for (const Move& mv : a) CHECK(mirrored_moves.count({mv.from.index(), mv.to.index()}) == 1);
    }
}

TEST_CASE("text round-trips over random playouts") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 200; ++i) {
        const Position pos = playout(rng, static_cast<int>(rng() % 60));
        CHECK(parse_position(to_text(pos)) == pos);
        for (const Move& m : legal_moves(pos)) CHECK(parse_move(pos, move_to_text(pos, m)) == m);
    }
}

TEST_CASE("stalemate is a draw") {
    // White rat boxed in by a black wolf and cat with no way to capture.
    const Position p = board("7/7/7/7/7/7/7/c6/Rw5 w");
    CHECK(legal_moves(p).empty());
    CHECK(terminal_state(p) == Outcome::DrawStalemate);
}
