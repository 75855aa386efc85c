#pragma once

#include "dsq/rules.hpp"

#include <compare>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dsq {

// Which kinds each side holds. Bit i-1 is set for strength i.
struct Partition {
    std::uint8_t white = 0;
    std::uint8_t black = 0;

    static Partition of(const Position& pos);
    // "TL_e": White letters, '_', Black letters. Letter case is ignored.
    static Partition parse(std::string_view text);

    int piece_count() const;
    Partition mirrored() const { return {black, white}; }
    bool symmetric() const { return white == black; }
    std::string name() const;

    // White by descending strength, then Black by descending strength.
    std::vector<Piece> pieces() const;

    auto operator<=>(const Partition&) const = default;
};

// Every partition with `pieces` pieces and at least one piece per side.
std::vector<Partition> partitions_with(int pieces);

// Partitions reached by a capture from this one or from its mirror, as the
// side to move after the capture sees them. Eliminating captures are omitted.
std::vector<Partition> capture_targets(Partition p);

// Squares a piece of this kind may stand on in a stored position: no den,
// and water for rats only.
std::span<const Square> allowed_squares(PieceKind kind);

// Dense mixed-radix index over per-piece allowed-square lists. The first
// piece in canonical order is the most significant digit.
class Indexer {
public:
    explicit Indexer(Partition p);

    Partition partition() const { return partition_; }
    std::uint64_t capacity() const { return capacity_; }

    // Throws PartitionMismatch unless the pieces match and White is to move.
    std::uint64_t index(const Position& pos) const;
    // nullopt for indices whose pieces collide.
    std::optional<Position> unindex(std::uint64_t index) const;

private:
    Partition partition_;
    std::vector<Piece> pieces_;
    std::vector<std::uint64_t> weights_;
    std::uint64_t capacity_ = 1;
};

enum class Value : std::uint8_t { Draw = 0, Win = 1, Loss = 2, Invalid = 3 };

std::string_view value_name(Value v);

// Game value for the side to move plus distance to the outcome in plies.
struct Entry {
    Value value = Value::Invalid;
    std::uint16_t dtm = 0;

    static constexpr std::uint16_t kMaxDtm = 16383;

    std::uint16_t encode() const { return static_cast<std::uint16_t>(static_cast<unsigned>(value) | (dtm << 2)); }
    static Entry decode(std::uint16_t raw) {
        return {static_cast<Value>(raw & 3u), static_cast<std::uint16_t>(raw >> 2)};
    }

    bool operator==(const Entry&) const = default;
};

// Solved entries of one partition, White to move.
class Tablebase {
public:
    Tablebase(Partition p, RuleFlags flags, std::vector<std::uint16_t> entries);

    Partition partition() const { return indexer_.partition(); }
    const Indexer& indexer() const { return indexer_; }
    RuleFlags flags() const { return flags_; }
    std::uint64_t size() const { return entries_.size(); }

    Entry at(std::uint64_t index) const { return Entry::decode(entries_[index]); }
    void set(std::uint64_t index, Entry e) { entries_[index] = e.encode(); }
    std::span<const std::uint16_t> raw() const { return entries_; }

    // `pos` must be White to move.
    Entry lookup(const Position& pos) const { return at(indexer_.index(pos)); }

    void save(const std::filesystem::path& file) const;
    static Tablebase load(const std::filesystem::path& file);
    std::string file_name() const { return partition().name() + ".dsqt"; }

private:
    Indexer indexer_;
    RuleFlags flags_;
    std::vector<std::uint16_t> entries_;
};

inline constexpr std::uint16_t kFormatVersion = 1;

// Reads `dir`/<name>.dsqt. Throws MissingPartition when the file is absent and
// PartitionMismatch when it was built under other rule flags.
Tablebase load_from(const std::filesystem::path& dir, Partition p, const RuleFlags& flags);

class TablebaseSet {
public:
    void add(Tablebase tb);
    const Tablebase* find(Partition p) const;
    bool contains(Partition p) const { return find(p) != nullptr; }
    // Largest piece count held, 0 when empty.
    int max_pieces() const;
    std::size_t size() const { return tables_.size(); }
    auto begin() const { return tables_.begin(); }
    auto end() const { return tables_.end(); }

private:
    std::map<Partition, Tablebase> tables_;
};

// Loads `p`, its mirror and every partition reachable from them by captures.
void load_closure(const std::filesystem::path& dir, Partition p, const RuleFlags& flags, TablebaseSet& set);

struct Canonical {
    Position position;
    bool mirrored = false;
};

// White to move. Black-to-move inputs are rank-mirrored with colors swapped.
Canonical canonicalize(const Position& pos);

// Entry for any stored position. Throws MissingPartition when the partition
// is not in the set and Validation for positions outside the stored universe.
Entry lookup(const TablebaseSet& set, const Position& pos);

struct SolveOptions {
    RuleFlags flags;
    int threads = 1;
};

// Solves `p` and its mirror together. Returns one table for symmetric
// partitions, otherwise {p, mirror(p)}. Throws MissingPartition when a
// capture target is absent from `subgames`.
std::vector<Tablebase> solve_pair(Partition p, const TablebaseSet& subgames, const SolveOptions& options = {});
Tablebase solve(Partition p, const TablebaseSet& subgames, const SolveOptions& options = {});

// Solves every missing partition of `targets` (and its mirror) into `set`,
// smallest piece counts first. Capture targets must already be present or
// be among `targets`.
void solve_all(const std::vector<Partition>& targets, TablebaseSet& set, const SolveOptions& options = {});

struct ProbeResult {
    Value value = Value::Draw;
    std::uint16_t dtm = 0;
    std::optional<Move> best;
};

// Value and distance of `pos` (either side to move) with a best move chosen
// by one-ply lookahead.
ProbeResult probe(const TablebaseSet& set, const Position& pos, const RuleFlags& flags = {});

struct TablebaseStats {
    std::uint64_t positions = 0;
    std::uint64_t wins = 0;
    std::uint64_t losses = 0;
    std::uint64_t draws = 0;
    // Drawn because the side to move cannot move. Not counted in positions.
    std::uint64_t stalemates = 0;
    // Longest forced win for either player, counted from the entry's side to
    // move. A lost entry at distance d is one ply longer than the win after it.
    std::uint16_t longest_plies = 0;
    // Same, restricted to entries won by the side to move.
    std::uint16_t longest_win_plies = 0;

    // Moves made by the winner over the longest forced win.
    int longest_moves() const { return (longest_plies + 1) / 2; }

    TablebaseStats& operator+=(const TablebaseStats& other);
};

TablebaseStats stats(const Tablebase& tb);

struct Violation {
    Partition partition;
    std::uint64_t index = 0;
    Entry stored;
    Entry expected;
};

struct VerifyReport {
    std::uint64_t checked = 0;
    std::uint64_t violation_count = 0;
    std::vector<Violation> violations;  // first few only

    bool ok() const { return violation_count == 0; }
};

// Recomputes every valid entry from its successors. `context` must hold the
// mirror partition and every capture target.
VerifyReport verify(const Tablebase& tb, const TablebaseSet& context, const RuleFlags& flags = {});

}  // namespace dsq
