#pragma once

#include "dsq/rules.hpp"
#include "dsq/tablebase.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

namespace dsq {

// Centipiece scale. Proven results sit in bands near +-kWinScore:
// a win reached at ply k from the root scores kWinScore - k.
using Score = std::int32_t;

inline constexpr Score kWinScore = 1'000'000;
inline constexpr Score kDrawScore = 0;
inline constexpr int kMaxPly = 10'000;

constexpr Score win_in(int ply) { return kWinScore - ply; }
constexpr Score loss_in(int ply) { return -kWinScore + ply; }
constexpr bool is_proven_win(Score s) { return s > kWinScore - kMaxPly; }
constexpr bool is_proven_loss(Score s) { return s < -kWinScore + kMaxPly; }
// Plies to the proven outcome, counted from the root.
constexpr int proven_distance(Score s) { return s > 0 ? kWinScore - s : kWinScore + s; }

// "WIN 19", "LOSS 12", or the plain number for heuristic and drawn scores.
std::string describe_score(Score s);

// Heuristic score from White's point of view.
using Evaluator = std::function<Score(const Position&)>;

// 100 per strength point of material plus a bonus for closeness to the enemy
// den, White minus Black.
Score default_evaluation(const Position& pos);
Score material_evaluation(const Position& pos);

// "default" or "material". Throws Validation for other names.
Evaluator evaluator_by_name(std::string_view name);
std::vector<std::string_view> evaluator_names();

class Zobrist {
public:
    static constexpr std::uint64_t kDefaultSeed = 0x5eed'd0c5'1a9e'2024ull;

    explicit Zobrist(std::uint64_t seed = kDefaultSeed);

    std::uint64_t key(const Position& pos) const;
    // Key after `m` given the key before it.
    std::uint64_t after(std::uint64_t key, const Position& before, const Move& m) const;

    std::uint64_t piece(Piece p, Square s) const { return basis_[Position::code(p)][s.index()]; }
    std::uint64_t side() const { return side_; }
    std::uint64_t seed() const { return seed_; }

private:
    std::uint64_t seed_;
    std::uint64_t basis_[17][Square::kCount];
    std::uint64_t side_;
};

enum class Bound : std::uint8_t { Exact, Lower, Upper };

struct TTEntry {
    std::uint64_t key = 0;
    std::int16_t depth = -1;
    Score score = 0;
    Bound bound = Bound::Exact;
    std::optional<Move> best;
};

// Two slots per bucket. Slot 0 keeps the deeper entry, slot 1 takes the rest.
// An entry answers only a probe at its own depth, so enabling the table never
// changes a depth-limited score.
class TranspositionTable {
public:
    // `entries` is rounded down to a power of two, at least 2.
    explicit TranspositionTable(std::size_t entries = 1u << 20, std::uint64_t zobrist_seed = Zobrist::kDefaultSeed);

    const Zobrist& zobrist() const { return zobrist_; }
    std::size_t capacity() const { return slots_.size(); }

    const TTEntry* probe(std::uint64_t key, int depth) const;
    void store(const TTEntry& e);
    void clear();

    std::uint64_t hits() const { return hits_; }
    std::uint64_t stores() const { return stores_; }

private:
    std::size_t bucket(std::uint64_t key, int depth) const;

    Zobrist zobrist_;
    std::vector<TTEntry> slots_;
    std::size_t mask_ = 0;
    mutable std::uint64_t hits_ = 0;
    std::uint64_t stores_ = 0;
};

struct SearchOptions {
    RuleFlags flags;
    // A node repeating a position earlier on the current line is a drawn leaf.
    // While on, the transposition table orders moves but never cuts off.
    bool repetition = true;
    Evaluator evaluator = default_evaluation;
};

struct SearchResult {
    Score score = 0;  // side to move's point of view
    std::optional<Move> best;
    std::uint64_t leaves = 0;
    std::uint64_t nodes = 0;
    std::uint64_t tt_hits = 0;
    std::uint64_t probes = 0;
};

// Full-width negamax. With repetition on, `leaves` equals perft(pos, depth).
SearchResult minimax(const Position& pos, int depth, const SearchOptions& options = {});

// `table` may be null.
SearchResult alphabeta(const Position& pos, int depth, TranspositionTable* table, const SearchOptions& options = {});

// Alpha-beta that replaces the subtree of any non-root node holding at most
// tablebases.max_pieces() pieces by its stored value. Throws MissingPartition
// when such a node's partition is not loaded.
SearchResult probe_aware_search(const Position& pos, int depth, const TablebaseSet& tablebases,
                                TranspositionTable* table, const SearchOptions& options = {});

// Score band corresponding to a tablebase entry reached at `ply`.
Score score_from_entry(const Entry& e, int ply);

}  // namespace dsq
