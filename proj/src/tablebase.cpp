#include "dsq/tablebase.hpp"

#include "dsq/errors.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cctype>
#include <fstream>
#include <limits>

namespace dsq {

namespace {

struct SquareLists {
    std::vector<Square> rat;
    std::vector<Square> other;
    std::array<int, Square::kCount> rat_ordinal{};
    std::array<int, Square::kCount> other_ordinal{};

    SquareLists() {
        rat_ordinal.fill(-1);
        other_ordinal.fill(-1);
        for (int i = 0; i < Square::kCount; ++i) {
            const Square s = Square::from_index(i);
            if (s == sq::d1 || s == sq::d9) continue;
            rat_ordinal[i] = static_cast<int>(rat.size());
            rat.push_back(s);
            if (is_water(s)) continue;
            other_ordinal[i] = static_cast<int>(other.size());
            other.push_back(s);
        }
    }
};

const SquareLists& square_lists() {
    static const SquareLists lists;
    return lists;
}

int ordinal(PieceKind k, Square s) {
    const auto& l = square_lists();
    return k == PieceKind::Rat ? l.rat_ordinal[s.index()] : l.other_ordinal[s.index()];
}

constexpr std::string_view kLetters = "RCWDPTLE";

void put_u16(std::ostream& out, std::uint16_t v) {
    const char b[2] = {static_cast<char>(v & 0xff), static_cast<char>(v >> 8)};
    out.write(b, 2);
}

void put_u32(std::ostream& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.put(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_u64(std::ostream& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.put(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint64_t get_le(std::istream& in, int bytes) {
    std::uint64_t v = 0;
    for (int i = 0; i < bytes; ++i) {
        const int c = in.get();
        if (c == std::char_traits<char>::eof()) throw Error(ErrorKind::Io, "truncated tablebase header");
        v |= static_cast<std::uint64_t>(static_cast<unsigned char>(c)) << (8 * i);
    }
    return v;
}

}  // namespace

// Partition ------------------------------------------------------------------

Partition Partition::of(const Position& pos) {
    Partition p;
    for (PieceKind k : kAllKinds) {
        const auto bit = static_cast<std::uint8_t>(1u << (strength(k) - 1));
        if (pos.square_of(Color::White, k)) p.white |= bit;
        if (pos.square_of(Color::Black, k)) p.black |= bit;
    }
    return p;
}

Partition Partition::parse(std::string_view text) {
    Partition p;
    bool black_side = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (c == '_') {
            if (black_side) throw ParseError(i, "second '_' in partition");
            black_side = true;
            continue;
        }
        const auto pos = kLetters.find(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
        if (pos == std::string_view::npos) throw ParseError(i, std::string("unknown piece letter '") + c + "'");
        auto& mask = black_side ? p.black : p.white;
        const auto bit = static_cast<std::uint8_t>(1u << pos);
        if (mask & bit) throw ParseError(i, "piece kind repeated on one side");
        mask |= bit;
    }
    if (!black_side) throw ParseError(text.size(), "partition needs '_' between White and Black pieces");
    if (p.white == 0 || p.black == 0) throw ParseError(0, "both sides need at least one piece");
    return p;
}

int Partition::piece_count() const { return std::popcount(white) + std::popcount(black); }

std::string Partition::name() const {
    std::string out;
    for (int i = 0; i < 8; ++i)
        if (white & (1u << i)) out += kLetters[static_cast<std::size_t>(i)];
    out += '_';
    for (int i = 0; i < 8; ++i)
        if (black & (1u << i))
            out += static_cast<char>(std::tolower(static_cast<unsigned char>(kLetters[static_cast<std::size_t>(i)])));
    return out;
}

std::vector<Piece> Partition::pieces() const {
    std::vector<Piece> out;
    for (Color c : {Color::White, Color::Black}) {
        const std::uint8_t mask = c == Color::White ? white : black;
        for (int s = 8; s >= 1; --s)
            if (mask & (1u << (s - 1))) out.push_back({c, kind_from_strength(s)});
    }
    return out;
}

std::vector<Partition> partitions_with(int pieces) {
    std::vector<Partition> out;
    for (int w = 1; w < 256; ++w)
        for (int b = 1; b < 256; ++b)
            if (std::popcount(static_cast<unsigned>(w)) + std::popcount(static_cast<unsigned>(b)) == pieces)
                out.push_back({static_cast<std::uint8_t>(w), static_cast<std::uint8_t>(b)});
    return out;
}

std::vector<Partition> capture_targets(Partition p) {
    std::vector<Partition> out;
    auto add = [&](Partition q) {
        if (q.white && q.black && std::find(out.begin(), out.end(), q) == out.end()) out.push_back(q);
    };
    for (int i = 0; i < 8; ++i) {
        const auto bit = static_cast<std::uint8_t>(1u << i);
        // White captures in p; the mover becomes Black after canonicalization.
        if (p.black & bit) add({static_cast<std::uint8_t>(p.black & ~bit), p.white});
        // White captures in mirror(p).
        if (p.white & bit) add({static_cast<std::uint8_t>(p.white & ~bit), p.black});
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::span<const Square> allowed_squares(PieceKind kind) {
    const auto& l = square_lists();
    return kind == PieceKind::Rat ? std::span<const Square>(l.rat) : std::span<const Square>(l.other);
}

// Indexer --------------------------------------------------------------------

Indexer::Indexer(Partition p) : partition_(p), pieces_(p.pieces()) {
    weights_.assign(pieces_.size(), 1);
    for (std::size_t i = pieces_.size(); i-- > 0;) {
        weights_[i] = capacity_;
        capacity_ *= allowed_squares(pieces_[i].kind).size();
    }
}

std::uint64_t Indexer::index(const Position& pos) const {
    if (pos.side_to_move() != Color::White) throw Error(ErrorKind::PartitionMismatch, "indexed position must have White to move");
    if (Partition::of(pos) != partition_)
        throw Error(ErrorKind::PartitionMismatch,
                    "position " + Partition::of(pos).name() + " does not match partition " + partition_.name());
    std::uint64_t idx = 0;
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
        const Square s = *pos.square_of(pieces_[i].color, pieces_[i].kind);
        const int ord = ordinal(pieces_[i].kind, s);
        if (ord < 0) throw Error(ErrorKind::Validation, "piece on " + s.to_string() + " is outside the stored universe");
        idx += static_cast<std::uint64_t>(ord) * weights_[i];
    }
    return idx;
}

std::optional<Position> Indexer::unindex(std::uint64_t index) const {
    Position pos;
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
        const auto squares = allowed_squares(pieces_[i].kind);
        const Square s = squares[(index / weights_[i]) % squares.size()];
        if (!pos.empty(s)) return std::nullopt;
        pos.put(pieces_[i], s);
    }
    return pos;
}

// Entries and files -------------------------------------------------------------

std::string_view value_name(Value v) {
    switch (v) {
        case Value::Draw: return "DRAW";
        case Value::Win: return "WIN";
        case Value::Loss: return "LOSS";
        case Value::Invalid: return "INVALID";
    }
    return "?";
}

Tablebase::Tablebase(Partition p, RuleFlags flags, std::vector<std::uint16_t> entries)
    : indexer_(p), flags_(flags), entries_(std::move(entries)) {
    if (entries_.size() != indexer_.capacity())
        throw Error(ErrorKind::Validation, "entry count does not match capacity of " + p.name());
}

void Tablebase::save(const std::filesystem::path& file) const {
    std::ofstream out(file, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + file.string());
    out.write("DSQT", 4);
    put_u16(out, kFormatVersion);
    put_u16(out, flags_.word());
    out.put(static_cast<char>(partition().white));
    out.put(static_cast<char>(partition().black));
    put_u32(out, 0);
    put_u64(out, entries_.size());
    std::vector<char> bytes(entries_.size() * 2);
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        bytes[2 * i] = static_cast<char>(entries_[i] & 0xff);
        bytes[2 * i + 1] = static_cast<char>(entries_[i] >> 8);
    }
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error(ErrorKind::Io, "write failed for " + file.string());
}

Tablebase Tablebase::load(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw Error(ErrorKind::MissingPartition, "cannot open " + file.string());
    char magic[4];
    if (!in.read(magic, 4) || std::string_view(magic, 4) != "DSQT")
        throw Error(ErrorKind::Io, file.string() + " is not a tablebase file");
    const auto version = static_cast<std::uint16_t>(get_le(in, 2));
    if (version != kFormatVersion) throw Error(ErrorKind::Io, "unsupported format version " + std::to_string(version));
    const auto flags = RuleFlags::from_word(static_cast<std::uint16_t>(get_le(in, 2)));
    Partition p;
    p.white = static_cast<std::uint8_t>(get_le(in, 1));
    p.black = static_cast<std::uint8_t>(get_le(in, 1));
    get_le(in, 4);
    const std::uint64_t count = get_le(in, 8);
    if (count != Indexer(p).capacity()) throw Error(ErrorKind::Io, "entry count mismatch in " + file.string());
    std::vector<char> bytes(count * 2);
    if (!in.read(bytes.data(), static_cast<std::streamsize>(bytes.size())))
        throw Error(ErrorKind::Io, "truncated entries in " + file.string());
    std::vector<std::uint16_t> entries(count);
    for (std::size_t i = 0; i < count; ++i)
        entries[i] = static_cast<std::uint16_t>(static_cast<unsigned char>(bytes[2 * i]) |
                                                (static_cast<unsigned char>(bytes[2 * i + 1]) << 8));
    return Tablebase(p, flags, std::move(entries));
}

Tablebase load_from(const std::filesystem::path& dir, Partition p, const RuleFlags& flags) {
    const std::filesystem::path file = dir / (p.name() + ".dsqt");
    if (!std::filesystem::exists(file))
        throw Error(ErrorKind::MissingPartition, "partition " + p.name() + " is not built (no " + file.string() + ")");
    Tablebase tb = Tablebase::load(file);
    if (tb.partition() != p) throw Error(ErrorKind::PartitionMismatch, file.string() + " holds " + tb.partition().name());
    if (tb.flags() != flags)
        throw Error(ErrorKind::PartitionMismatch, file.string() + " was built with rule flag word " +
                                                      std::to_string(tb.flags().word()) + ", config has " +
                                                      std::to_string(flags.word()));
    return tb;
}

void load_closure(const std::filesystem::path& dir, Partition p, const RuleFlags& flags, TablebaseSet& set) {
    for (Partition q : {p, p.mirrored()}) {
        if (set.contains(q)) continue;
        set.add(load_from(dir, q, flags));
        for (Partition t : capture_targets(q)) load_closure(dir, t, flags, set);
    }
}

void TablebaseSet::add(Tablebase tb) {
    const Partition p = tb.partition();
    tables_.insert_or_assign(p, std::move(tb));
}

const Tablebase* TablebaseSet::find(Partition p) const {
    const auto it = tables_.find(p);
    return it == tables_.end() ? nullptr : &it->second;
}

int TablebaseSet::max_pieces() const {
    int n = 0;
    for (const auto& [p, tb] : tables_) n = std::max(n, p.piece_count());
    return n;
}

// Canonical lookups --------------------------------------------------------------

Canonical canonicalize(const Position& pos) {
    if (pos.side_to_move() == Color::White) return {pos, false};
    return {pos.mirrored(), true};
}

Entry lookup(const TablebaseSet& set, const Position& pos) {
    const Position canon = canonicalize(pos).position;
    const Partition p = Partition::of(canon);
    const Tablebase* tb = set.find(p);
    if (!tb) throw Error(ErrorKind::MissingPartition, "partition " + p.name() + " is not loaded");
    return tb->lookup(canon);
}

namespace {

// Value of the position reached by `m`, for the side then to move.
Entry successor_entry(const TablebaseSet& set, const Position& pos, const Move& m) {
    const Position after = apply_unchecked(pos, m);
    if (winner(after)) return {Value::Loss, 0};
    return lookup(set, after);
}

Entry expected_entry(const TablebaseSet& set, const Position& pos, const RuleFlags& flags) {
    MoveList moves;
    generate_moves(pos, flags, moves);
    if (moves.empty()) return {Value::Draw, 0};
    int best_win = std::numeric_limits<int>::max();
    int max_win = 0;
    bool all_win = true;
    for (const Move& m : moves) {
        const Entry e = successor_entry(set, pos, m);
        if (e.value == Value::Loss) {
            best_win = std::min(best_win, e.dtm + 1);
        } else if (e.value == Value::Win) {
            max_win = std::max<int>(max_win, e.dtm);
        } else {
            all_win = false;
        }
    }
    if (best_win != std::numeric_limits<int>::max()) return {Value::Win, static_cast<std::uint16_t>(best_win)};
    if (all_win) return {Value::Loss, static_cast<std::uint16_t>(max_win + 1)};
    return {Value::Draw, 0};
}

}  // namespace

ProbeResult probe(const TablebaseSet& set, const Position& pos, const RuleFlags& flags) {
    validate(pos);
    if (winner(pos)) throw Error(ErrorKind::Validation, "terminal position");
    const Entry entry = lookup(set, pos);
    if (entry.value == Value::Invalid) throw Error(ErrorKind::Validation, "position is not in the tablebase universe");
    ProbeResult result{entry.value, entry.dtm, std::nullopt};
    MoveList moves;
    generate_moves(pos, flags, moves);
    for (const Move& m : moves) {
        const Entry next = successor_entry(set, pos, m);
        const bool fits = (entry.value == Value::Win && next.value == Value::Loss && next.dtm + 1 == entry.dtm) ||
                          (entry.value == Value::Draw && next.value == Value::Draw) ||
                          (entry.value == Value::Loss && next.value == Value::Win && next.dtm + 1 == entry.dtm);
        if (fits) {
            result.best = m;
            break;
        }
    }
    return result;
}

TablebaseStats& TablebaseStats::operator+=(const TablebaseStats& other) {
    positions += other.positions;
    wins += other.wins;
    losses += other.losses;
    draws += other.draws;
    stalemates += other.stalemates;
    longest_plies = std::max(longest_plies, other.longest_plies);
    longest_win_plies = std::max(longest_win_plies, other.longest_win_plies);
    return *this;
}

TablebaseStats stats(const Tablebase& tb) {
    TablebaseStats s;
    for (std::uint64_t i = 0; i < tb.size(); ++i) {
        const Entry e = tb.at(i);
        switch (e.value) {
            case Value::Win:
                ++s.wins;
                s.longest_plies = std::max(s.longest_plies, e.dtm);
                s.longest_win_plies = std::max(s.longest_win_plies, e.dtm);
                break;
            case Value::Loss:
                ++s.losses;
                s.longest_plies = std::max(s.longest_plies, e.dtm);
                break;
            case Value::Draw: {
                MoveList moves;
                generate_moves(*tb.indexer().unindex(i), tb.flags(), moves);
                if (moves.empty()) {
                    ++s.stalemates;
                    continue;
                }
                ++s.draws;
                break;
            }
            case Value::Invalid: continue;
        }
        ++s.positions;
    }
    return s;
}

VerifyReport verify(const Tablebase& tb, const TablebaseSet& context, const RuleFlags& flags) {
    VerifyReport report;
    const Indexer& idx = tb.indexer();
    for (std::uint64_t i = 0; i < tb.size(); ++i) {
        const Entry stored = tb.at(i);
        const auto pos = idx.unindex(i);
        Entry expected{Value::Invalid, 0};
        if (pos) expected = expected_entry(context, *pos, flags);
        ++report.checked;
        if (stored == expected) continue;
        ++report.violation_count;
        if (report.violations.size() < 16) report.violations.push_back({tb.partition(), i, stored, expected});
    }
    return report;
}

}  // namespace dsq
