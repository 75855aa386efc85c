#include "dsq/rules.hpp"

#include "dsq/errors.hpp"

#include <cctype>
#include <vector>

namespace dsq {

namespace {

constexpr std::string_view kLetters = "RCWDPTLE";

struct LeapTable {
    std::array<std::array<Leap, 2>, Square::kCount> leaps{};
    std::array<int, Square::kCount> count{};

    LeapTable() {
        auto add = [&](Square from, Square to, std::initializer_list<Square> over) {
            Leap& l = leaps[from.index()][count[from.index()]++];
            l.to = to;
            for (Square s : over) l.over[l.over_count++] = s;
        };
        // Horizontal leaps across ranks 4-6.
        for (int r = 3; r <= 5; ++r) {
            add(Square(0, r), Square(3, r), {Square(1, r), Square(2, r)});
            add(Square(3, r), Square(0, r), {Square(2, r), Square(1, r)});
            add(Square(3, r), Square(6, r), {Square(4, r), Square(5, r)});
            add(Square(6, r), Square(3, r), {Square(5, r), Square(4, r)});
        }
        // Vertical leaps from rank 3 to rank 7 and back.
        for (int f : {1, 2, 4, 5}) {
            add(Square(f, 2), Square(f, 6), {Square(f, 3), Square(f, 4), Square(f, 5)});
            add(Square(f, 6), Square(f, 2), {Square(f, 5), Square(f, 4), Square(f, 3)});
        }
    }
};

const LeapTable& leap_table() {
    static const LeapTable table;
    return table;
}

struct TerrainTable {
    std::array<Terrain, Square::kCount> kinds{};

    TerrainTable() {
        kinds.fill(Terrain::Land);
        for (int r = 3; r <= 5; ++r)
            for (int f : {1, 2, 4, 5}) kinds[Square(f, r).index()] = Terrain::Water;
        kinds[sq::d1.index()] = Terrain::WhiteDen;
        kinds[sq::d9.index()] = Terrain::BlackDen;
        for (Square s : {sq::c1, sq::d2, sq::e1}) kinds[s.index()] = Terrain::WhiteTrap;
        for (Square s : {sq::c9, sq::d8, sq::e9}) kinds[s.index()] = Terrain::BlackTrap;
    }
};

const TerrainTable& terrain_table() {
    static const TerrainTable table;
    return table;
}

constexpr std::array<std::array<int, 2>, 4> kDirections = {{{0, 1}, {0, -1}, {-1, 0}, {1, 0}}};

}  // namespace

char piece_letter(Piece p) {
    const char c = kLetters[static_cast<std::size_t>(strength(p.kind) - 1)];
    return p.color == Color::White ? c : static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
}

std::optional<Piece> piece_from_letter(char c) {
    const char upper = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    const auto pos = kLetters.find(upper);
    if (pos == std::string_view::npos) return std::nullopt;
    return Piece{c == upper ? Color::White : Color::Black, kind_from_strength(static_cast<int>(pos) + 1)};
}

std::optional<Square> Square::parse(std::string_view text) {
    if (text.size() != 2) return std::nullopt;
    const int file = text[0] - 'a';
    const int rank = text[1] - '1';
    if (!on_board(file, rank)) return std::nullopt;
    return Square(file, rank);
}

std::string Square::to_string() const {
    return {static_cast<char>('a' + file()), static_cast<char>('1' + rank())};
}

Terrain terrain_at(Square s) { return terrain_table().kinds[s.index()]; }

bool is_water(Square s) { return terrain_at(s) == Terrain::Water; }

bool is_trap_against(Square s, Color victim) {
    const Terrain t = terrain_at(s);
    return victim == Color::Black ? t == Terrain::WhiteTrap : t == Terrain::BlackTrap;
}

std::string_view terrain_name(Terrain t) {
    switch (t) {
        case Terrain::Land: return "Land";
        case Terrain::Water: return "Water";
        case Terrain::WhiteDen: return "WhiteDen";
        case Terrain::BlackDen: return "BlackDen";
        case Terrain::WhiteTrap: return "WhiteTrap";
        case Terrain::BlackTrap: return "BlackTrap";
    }
    return "?";
}

std::uint16_t RuleFlags::word() const {
    return static_cast<std::uint16_t>((water_rat_captures_land_rat ? 1u : 0u) |
                                      (land_rat_captures_water_rat ? 2u : 0u) |
                                      (water_rat_captures_elephant ? 4u : 0u));
}

RuleFlags RuleFlags::from_word(std::uint16_t word) {
    RuleFlags f;
    f.water_rat_captures_land_rat = (word & 1u) != 0;
    f.land_rat_captures_water_rat = (word & 2u) != 0;
    f.water_rat_captures_elephant = (word & 4u) != 0;
    return f;
}

std::span<const Leap> leaps_from(Square s) {
    const auto& t = leap_table();
    return {t.leaps[s.index()].data(), static_cast<std::size_t>(t.count[s.index()])};
}

// Position -----------------------------------------------------------------

Position Position::initial() {
    Position p;
    auto w = [&](PieceKind k, int f, int r) { p.put({Color::White, k}, Square(f, r)); };
    w(PieceKind::Tiger, 0, 0);
    w(PieceKind::Cat, 1, 1);
    w(PieceKind::Elephant, 0, 2);
    w(PieceKind::Wolf, 2, 2);
    w(PieceKind::Panther, 4, 2);
    w(PieceKind::Dog, 5, 1);
    w(PieceKind::Rat, 6, 2);
    w(PieceKind::Lion, 6, 0);
    // Black is the rank mirror with files reversed.
    for (PieceKind k : kAllKinds) {
        const Square s = *p.square_of(Color::White, k);
        p.put({Color::Black, k}, Square(Square::kFiles - 1 - s.file(), Square::kRanks - 1 - s.rank()));
    }
    return p;
}

std::optional<Piece> Position::at(Square s) const {
    const std::uint8_t c = cells_[s.index()];
    if (c == 0) return std::nullopt;
    return decode(c);
}

std::optional<Square> Position::square_of(Color c, PieceKind k) const {
    const std::int8_t w = where_[slot(c, k)];
    if (w == kNone) return std::nullopt;
    return Square::from_index(w);
}

void Position::put(Piece p, Square s) {
    if (cells_[s.index()] != 0) throw Error(ErrorKind::Validation, "square " + s.to_string() + " is occupied");
    if (where_[slot(p.color, p.kind)] != kNone)
        throw Error(ErrorKind::Validation, std::string("duplicate piece ") + piece_letter(p));
    cells_[s.index()] = code(p);
    where_[slot(p.color, p.kind)] = static_cast<std::int8_t>(s.index());
    ++counts_[color_index(p.color)];
}

void Position::remove(Square s) {
    const std::uint8_t c = cells_[s.index()];
    if (c == 0) return;
    const Piece p = decode(c);
    cells_[s.index()] = 0;
    where_[slot(p.color, p.kind)] = kNone;
    --counts_[color_index(p.color)];
}

void Position::relocate(Square from, Square to) {
    remove(to);
    const std::uint8_t c = cells_[from.index()];
    const Piece p = decode(c);
    cells_[from.index()] = 0;
    cells_[to.index()] = c;
    where_[slot(p.color, p.kind)] = static_cast<std::int8_t>(to.index());
}

Position Position::mirrored() const {
    Position m;
    for (int i = 0; i < Square::kCount; ++i) {
        if (cells_[i] == 0) continue;
        const Piece p = decode(cells_[i]);
        m.put({opposite(p.color), p.kind}, Square::from_index(i).mirrored());
    }
    m.side_ = opposite(side_);
    return m;
}

void validate(const Position& pos) {
    for (int i = 0; i < Square::kCount; ++i) {
        const Square s = Square::from_index(i);
        const auto p = pos.at(s);
        if (!p) continue;
        if (p->kind != PieceKind::Rat && is_water(s))
            throw Error(ErrorKind::Validation, std::string(1, piece_letter(*p)) + " on water at " + s.to_string());
        if (s == den_of(p->color))
            throw Error(ErrorKind::Validation, std::string(1, piece_letter(*p)) + " on its own den");
    }
}

bool can_capture(Piece attacker, Square from, Piece defender, Square to, const RuleFlags& flags) {
    if (attacker.color == defender.color) return false;
    if (attacker.kind == PieceKind::Rat) {
        const bool from_water = is_water(from);
        if (from_water != is_water(to)) {
            if (defender.kind == PieceKind::Rat)
                return from_water ? flags.water_rat_captures_land_rat : flags.land_rat_captures_water_rat;
            if (defender.kind == PieceKind::Elephant) return flags.water_rat_captures_elephant;
        }
    }
    if (is_trap_against(to, defender.color)) return true;
    if (attacker.kind == PieceKind::Rat && defender.kind == PieceKind::Elephant) return true;
    return strength(attacker.kind) >= strength(defender.kind);
}

std::optional<Color> winner(const Position& pos) {
    if (pos.count(Color::Black) == 0) return Color::White;
    if (pos.count(Color::White) == 0) return Color::Black;
    const std::uint8_t on_black_den = pos.cell(sq::d9);
    if (on_black_den != 0 && on_black_den <= 8) return Color::White;
    const std::uint8_t on_white_den = pos.cell(sq::d1);
    if (on_white_den > 8) return Color::Black;
    return std::nullopt;
}

void generate_moves(const Position& pos, const RuleFlags& flags, MoveList& out) {
    if (winner(pos)) return;
    const Color us = pos.side_to_move();
    const Square own_den = den_of(us);
    for (PieceKind k : kAllKinds) {
        const auto from_opt = pos.square_of(us, k);
        if (!from_opt) continue;
        const Square from = *from_opt;
        const Piece mover{us, k};
        auto consider = [&](Square to, bool leap) {
            const std::uint8_t target = pos.cell(to);
            if (target == 0) {
                out.push({from, to, false, leap});
                return;
            }
            const Piece victim = Position::decode(target);
            if (victim.color == us) return;
            if (can_capture(mover, from, victim, to, flags)) out.push({from, to, true, leap});
        };
        for (const auto& d : kDirections) {
            const int f = from.file() + d[0];
            const int r = from.rank() + d[1];
            if (!Square::on_board(f, r)) continue;
            const Square to(f, r);
            if (to == own_den) continue;
            if (k != PieceKind::Rat && is_water(to)) continue;
            consider(to, false);
        }
        if (can_leap(k)) {
            for (const Leap& l : leaps_from(from)) {
                bool blocked = false;
                for (int i = 0; i < l.over_count; ++i) blocked = blocked || !pos.empty(l.over[i]);
                if (!blocked) consider(l.to, true);
            }
        }
    }
}

MoveList legal_moves(const Position& pos, const RuleFlags& flags) {
    validate(pos);
    MoveList list;
    generate_moves(pos, flags, list);
    return list;
}

Position apply_unchecked(const Position& pos, const Move& m) {
    Position next = pos;
    next.relocate(m.from, m.to);
    next.set_side_to_move(opposite(pos.side_to_move()));
    return next;
}

Position apply_move(const Position& pos, const Move& m, const RuleFlags& flags) {
    for (const Move& legal : legal_moves(pos, flags))
        if (legal == m) return apply_unchecked(pos, m);
    throw Error(ErrorKind::IllegalMove, "illegal move " + m.from.to_string() + "-" + m.to.to_string());
}

Outcome terminal_state(const Position& pos, const RuleFlags& flags) {
    if (const auto w = winner(pos)) return *w == Color::White ? Outcome::WhiteWins : Outcome::BlackWins;
    MoveList list;
    generate_moves(pos, flags, list);
    return list.empty() ? Outcome::DrawStalemate : Outcome::NonTerminal;
}

bool repeats_on_line(const Position& pos, std::span<const Position> line) {
    for (const Position& earlier : line)
        if (earlier == pos) return true;
    return false;
}

namespace {

std::uint64_t perft_plain(const Position& pos, int depth, const RuleFlags& flags) {
    if (depth == 0) return 1;
    MoveList list;
    generate_moves(pos, flags, list);
    if (list.empty()) return 1;
    if (depth == 1) return list.size();
    std::uint64_t n = 0;
    for (const Move& m : list) n += perft_plain(apply_unchecked(pos, m), depth - 1, flags);
    return n;
}

// line[0..ply) are the ancestors of `pos`.
std::uint64_t perft_line(const Position& pos, int depth, const RuleFlags& flags, std::vector<Position>& line) {
    if (depth == 0) return 1;
    const std::size_t ply = line.size();
    for (std::size_t i = ply % 2; i < ply; i += 2)
        if (line[i] == pos) return 1;
    MoveList list;
    generate_moves(pos, flags, list);
    if (list.empty()) return 1;
    line.push_back(pos);
    std::uint64_t n = 0;
    for (const Move& m : list) n += perft_line(apply_unchecked(pos, m), depth - 1, flags, line);
    line.pop_back();
    return n;
}

}  // namespace

std::uint64_t perft(const Position& pos, int depth, const RuleFlags& flags, PerftOptions options) {
    validate(pos);
    if (!options.repetition_leaves) return perft_plain(pos, depth, flags);
    std::vector<Position> line;
    line.reserve(static_cast<std::size_t>(depth) + 1);
    return perft_line(pos, depth, flags, line);
}

// Text ----------------------------------------------------------------------

std::string to_text(const Position& pos) {
    std::string out;
    for (int r = Square::kRanks - 1; r >= 0; --r) {
        int run = 0;
        for (int f = 0; f < Square::kFiles; ++f) {
            const auto p = pos.at(Square(f, r));
            if (!p) {
                ++run;
                continue;
            }
            if (run) out += static_cast<char>('0' + run);
            run = 0;
            out += piece_letter(*p);
        }
        if (run) out += static_cast<char>('0' + run);
        if (r > 0) out += '/';
    }
    out += pos.side_to_move() == Color::White ? " w" : " b";
    return out;
}

Position parse_position(std::string_view text) {
    Position pos;
    std::size_t i = 0;
    for (int r = Square::kRanks - 1; r >= 0; --r) {
        int f = 0;
        while (f < Square::kFiles) {
            if (i >= text.size()) throw ParseError(i, "unexpected end of position");
            const char c = text[i];
            if (c >= '1' && c <= '7') {
                f += c - '0';
                if (f > Square::kFiles) throw ParseError(i, "rank overflows seven files");
            } else if (const auto p = piece_from_letter(c)) {
                try {
                    pos.put(*p, Square(f, r));
                } catch (const Error& e) {
                    throw ParseError(i, e.what());
                }
                ++f;
            } else {
                throw ParseError(i, std::string("unexpected character '") + c + "'");
            }
            ++i;
        }
        if (r > 0) {
            if (i >= text.size() || text[i] != '/') throw ParseError(i, "expected '/'");
            ++i;
        }
    }
    if (i >= text.size() || text[i] != ' ') throw ParseError(i, "expected ' ' before side to move");
    ++i;
    if (i >= text.size()) throw ParseError(i, "missing side to move");
    if (text[i] == 'w') {
        pos.set_side_to_move(Color::White);
    } else if (text[i] == 'b') {
        pos.set_side_to_move(Color::Black);
    } else {
        throw ParseError(i, "side to move must be 'w' or 'b'");
    }
    ++i;
    if (i != text.size()) throw ParseError(i, "trailing characters");
    return pos;
}

std::string move_to_text(const Position& before, const Move& m) {
    std::string out;
    const auto p = before.at(m.from);
    out += p ? piece_letter(*p) : '?';
    if (m.capture) out += 'x';
    out += m.to.to_string();
    return out;
}

Move parse_move(const Position& pos, std::string_view text, const RuleFlags& flags) {
    if (text.empty()) throw ParseError(0, "empty move");
    const auto piece = piece_from_letter(text[0]);
    if (!piece) throw ParseError(0, "expected a piece letter");
    std::size_t i = 1;
    const bool capture = i < text.size() && text[i] == 'x';
    if (capture) ++i;
    const auto to = Square::parse(text.substr(i));
    if (!to) throw ParseError(i, "expected a destination square");
    const auto from = pos.square_of(piece->color, piece->kind);
    if (piece->color != pos.side_to_move() || !from)
        throw Error(ErrorKind::IllegalMove, std::string(text) + " does not name a piece of the side to move");
    for (const Move& m : legal_moves(pos, flags))
        if (m.from == *from && m.to == *to && m.capture == capture) return m;
    throw Error(ErrorKind::IllegalMove, "illegal move " + std::string(text));
}

}  // namespace dsq
