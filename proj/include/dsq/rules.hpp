#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace dsq {

enum class Color : std::uint8_t { White = 0, Black = 1 };

constexpr Color opposite(Color c) { return c == Color::White ? Color::Black : Color::White; }
constexpr int color_index(Color c) { return static_cast<int>(c); }

// Numeric value is the capture strength.
enum class PieceKind : std::uint8_t { Rat = 1, Cat, Wolf, Dog, Panther, Tiger, Lion, Elephant };

constexpr int strength(PieceKind k) { return static_cast<int>(k); }
constexpr PieceKind kind_from_strength(int s) { return static_cast<PieceKind>(s); }
constexpr bool can_leap(PieceKind k) { return k == PieceKind::Tiger || k == PieceKind::Lion; }

inline constexpr std::array<PieceKind, 8> kAllKinds = {
    PieceKind::Rat, PieceKind::Cat,   PieceKind::Wolf, PieceKind::Dog,
    PieceKind::Panther, PieceKind::Tiger, PieceKind::Lion, PieceKind::Elephant};

struct Piece {
    Color color;
    PieceKind kind;

    bool operator==(const Piece&) const = default;
};

// R C W D P T L E, uppercase for White.
char piece_letter(Piece p);
std::optional<Piece> piece_from_letter(char c);

class Square {
public:
    static constexpr int kFiles = 7;
    static constexpr int kRanks = 9;
    static constexpr int kCount = kFiles * kRanks;

    constexpr Square() = default;
    // file 0..6 (a..g), rank 0..8 (1..9)
    constexpr Square(int file, int rank) : index_(static_cast<std::uint8_t>(rank * kFiles + file)) {}

    static constexpr Square from_index(int index) { return Square(index % kFiles, index / kFiles); }
    static constexpr bool on_board(int file, int rank) {
        return file >= 0 && file < kFiles && rank >= 0 && rank < kRanks;
    }

    constexpr int file() const { return index_ % kFiles; }
    constexpr int rank() const { return index_ / kFiles; }
    constexpr int index() const { return index_; }

    // Rank mirror r -> 10 - r in 1-based ranks.
    constexpr Square mirrored() const { return Square(file(), kRanks - 1 - rank()); }

    static std::optional<Square> parse(std::string_view text);
    std::string to_string() const;

    constexpr auto operator<=>(const Square&) const = default;

private:
    std::uint8_t index_ = 0;
};

constexpr int manhattan(Square a, Square b) {
    const int df = a.file() - b.file();
    const int dr = a.rank() - b.rank();
    return (df < 0 ? -df : df) + (dr < 0 ? -dr : dr);
}

namespace sq {
inline constexpr Square d1{3, 0};
inline constexpr Square d9{3, 8};
inline constexpr Square c1{2, 0}, e1{4, 0}, d2{3, 1};
inline constexpr Square c9{2, 8}, e9{4, 8}, d8{3, 7};
}  // namespace sq

enum class Terrain : std::uint8_t { Land, Water, WhiteDen, BlackDen, WhiteTrap, BlackTrap };

// WhiteTrap squares surround the white den and nullify black pieces standing on them.
Terrain terrain_at(Square s);
bool is_water(Square s);
constexpr Square den_of(Color c) { return c == Color::White ? sq::d1 : sq::d9; }
// True when s is a trap that weakens pieces of color `victim`.
bool is_trap_against(Square s, Color victim);
std::string_view terrain_name(Terrain t);

// Rat capture clauses across the water/land boundary. Rat-vs-rat inside the
// water is always legal.
struct RuleFlags {
    bool water_rat_captures_land_rat = true;
    bool land_rat_captures_water_rat = true;
    bool water_rat_captures_elephant = false;

    std::uint16_t word() const;
    static RuleFlags from_word(std::uint16_t word);

    bool operator==(const RuleFlags&) const = default;
};

struct Move {
    Square from;
    Square to;
    bool capture = false;
    bool leap = false;

    bool operator==(const Move&) const = default;
};

class MoveList {
public:
    static constexpr std::size_t kCapacity = 48;

    void push(const Move& m) { moves_[size_++] = m; }
    std::size_t size() const { return size_; }
    bool empty() const { return size_ == 0; }
    const Move& operator[](std::size_t i) const { return moves_[i]; }
    Move& operator[](std::size_t i) { return moves_[i]; }
    const Move* begin() const { return moves_.data(); }
    const Move* end() const { return moves_.data() + size_; }
    Move* begin() { return moves_.data(); }
    Move* end() { return moves_.data() + size_; }

private:
    std::array<Move, kCapacity> moves_{};
    std::size_t size_ = 0;
};

class Position {
public:
    Position() { where_.fill(kNone); }

    static Position initial();

    std::optional<Piece> at(Square s) const;
    std::optional<Square> square_of(Color c, PieceKind k) const;
    bool empty(Square s) const { return cells_[s.index()] == 0; }

    // Throws Validation when the square is taken or the side already holds that kind.
    void put(Piece p, Square s);
    void remove(Square s);

    Color side_to_move() const { return side_; }
    void set_side_to_move(Color c) { side_ = c; }

    int count(Color c) const { return counts_[color_index(c)]; }
    int total() const { return counts_[0] + counts_[1]; }

    // Rank mirror, colors swapped, side to move swapped.
    Position mirrored() const;

    // Low-level cell code: 0 empty, otherwise kind + 8 * color.
    std::uint8_t cell(Square s) const { return cells_[s.index()]; }
    static constexpr std::uint8_t code(Piece p) {
        return static_cast<std::uint8_t>(strength(p.kind) + 8 * color_index(p.color));
    }
    static constexpr Piece decode(std::uint8_t code) {
        return Piece{code > 8 ? Color::Black : Color::White, kind_from_strength(code > 8 ? code - 8 : code)};
    }

    // Moves the piece on `from` to `to`, removing whatever stands on `to`.
    void relocate(Square from, Square to);

    bool operator==(const Position& other) const {
        return cells_ == other.cells_ && side_ == other.side_;
    }

private:
    static constexpr std::int8_t kNone = -1;

    int slot(Color c, PieceKind k) const { return color_index(c) * 8 + strength(k) - 1; }

    std::array<std::uint8_t, Square::kCount> cells_{};
    std::array<std::int8_t, 16> where_{};
    std::array<std::uint8_t, 2> counts_{};
    Color side_ = Color::White;
};

// Throws Validation for a non-rat on water or a piece on its own den.
void validate(const Position& pos);

// Capture legality for an attacker moving from `from` onto a defender at `to`.
// A defender on one of the attacker's traps has effective strength zero; the
// rat may take the elephant; rat clauses across the water edge follow `flags`.
bool can_capture(Piece attacker, Square from, Piece defender, Square to, const RuleFlags& flags = {});

enum class Outcome : std::uint8_t { NonTerminal, WhiteWins, BlackWins, DrawStalemate };

// Den occupation or elimination, ignoring stalemate.
std::optional<Color> winner(const Position& pos);

// Validates, then generates. Terminal positions yield no moves.
MoveList legal_moves(const Position& pos, const RuleFlags& flags = {});

// Assumes a valid position. Used on hot paths.
void generate_moves(const Position& pos, const RuleFlags& flags, MoveList& out);

// Throws IllegalMove unless `m` is one of legal_moves(pos).
Position apply_move(const Position& pos, const Move& m, const RuleFlags& flags = {});
Position apply_unchecked(const Position& pos, const Move& m);

Outcome terminal_state(const Position& pos, const RuleFlags& flags = {});

struct PerftOptions {
    // A node repeating a position earlier on the current line (root included)
    // is a leaf. This is the convention of the published leaf counts.
    bool repetition_leaves = true;
};

// Leaf count of the depth-limited tree. Terminal nodes count as one leaf.
std::uint64_t perft(const Position& pos, int depth, const RuleFlags& flags = {}, PerftOptions options = {});

// True when `pos` equals an entry of `line` with the same side to move.
// `line` holds ancestors, oldest first.
bool repeats_on_line(const Position& pos, std::span<const Position> line);

// Leap target reachable from a square, with the water squares it crosses.
struct Leap {
    Square to;
    std::array<Square, 3> over{};
    int over_count = 0;
};
std::span<const Leap> leaps_from(Square s);

// Text formats ------------------------------------------------------------

// Ranks 9..1 separated by '/', files a..g, digit runs for empties, then " w"/" b".
std::string to_text(const Position& pos);
Position parse_position(std::string_view text);

// Piece letter, 'x' on captures, destination: "Ta6", "Txb1".
std::string move_to_text(const Position& before, const Move& m);
Move parse_move(const Position& pos, std::string_view text, const RuleFlags& flags = {});

}  // namespace dsq
