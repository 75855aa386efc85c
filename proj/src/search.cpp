#include "dsq/search.hpp"

#include "dsq/errors.hpp"

#include <algorithm>
#include <bit>
#include <random>

namespace dsq {

std::string describe_score(Score s) {
    if (is_proven_win(s)) return "WIN " + std::to_string(proven_distance(s));
    if (is_proven_loss(s)) return "LOSS " + std::to_string(proven_distance(s));
    return std::to_string(s);
}

// Evaluation ------------------------------------------------------------------

Score material_evaluation(const Position& pos) {
    Score total = 0;
    for (PieceKind k : kAllKinds) {
        if (pos.square_of(Color::White, k)) total += 100 * strength(k);
        if (pos.square_of(Color::Black, k)) total -= 100 * strength(k);
    }
    return total;
}

Score default_evaluation(const Position& pos) {
    // Den distance is at most 11 on this board; a piece next to the den earns 10.
    Score total = material_evaluation(pos);
    for (PieceKind k : kAllKinds) {
        if (auto s = pos.square_of(Color::White, k)) total += 11 - manhattan(*s, sq::d9);
        if (auto s = pos.square_of(Color::Black, k)) total -= 11 - manhattan(*s, sq::d1);
    }
    return total;
}

Evaluator evaluator_by_name(std::string_view name) {
    if (name == "default") return default_evaluation;
    if (name == "material") return material_evaluation;
    throw Error(ErrorKind::Validation, "unknown evaluator '" + std::string(name) + "'");
}

std::vector<std::string_view> evaluator_names() { return {"default", "material"}; }

// Hashing -----------------------------------------------------------------------

Zobrist::Zobrist(std::uint64_t seed) : seed_(seed) {
    std::mt19937_64 rng(seed);
    for (auto& row : basis_)
        for (auto& v : row) v = rng();
    side_ = rng();
}

std::uint64_t Zobrist::key(const Position& pos) const {
    std::uint64_t k = pos.side_to_move() == Color::Black ? side_ : 0;
    for (int i = 0; i < Square::kCount; ++i)
        if (const auto c = pos.cell(Square::from_index(i))) k ^= basis_[c][i];
    return k;
}

std::uint64_t Zobrist::after(std::uint64_t key, const Position& before, const Move& m) const {
    const auto mover = before.cell(m.from);
    key ^= basis_[mover][m.from.index()] ^ basis_[mover][m.to.index()] ^ side_;
    if (const auto victim = before.cell(m.to)) key ^= basis_[victim][m.to.index()];
    return key;
}

TranspositionTable::TranspositionTable(std::size_t entries, std::uint64_t zobrist_seed) : zobrist_(zobrist_seed) {
    entries = std::bit_floor(std::max<std::size_t>(entries, 2));
    slots_.resize(entries);
    mask_ = entries / 2 - 1;
}

std::size_t TranspositionTable::bucket(std::uint64_t key, int depth) const {
    const std::uint64_t mixed = key ^ (static_cast<std::uint64_t>(depth + 1) * 0x9e3779b97f4a7c15ull);
    return static_cast<std::size_t>((mixed ^ (mixed >> 29)) & mask_) * 2;
}

const TTEntry* TranspositionTable::probe(std::uint64_t key, int depth) const {
    const std::size_t b = bucket(key, depth);
    for (std::size_t i = b; i < b + 2; ++i) {
        if (slots_[i].depth == depth && slots_[i].key == key) {
            ++hits_;
            return &slots_[i];
        }
    }
    return nullptr;
}

void TranspositionTable::store(const TTEntry& e) {
    ++stores_;
    const std::size_t b = bucket(e.key, e.depth);
    TTEntry& deep = slots_[b];
    TTEntry& rest = slots_[b + 1];
    if (deep.key == e.key && deep.depth == e.depth) {
        deep = e;
    } else if (rest.key == e.key && rest.depth == e.depth) {
        rest = e;
    } else if (e.depth >= deep.depth) {
        if (deep.depth >= 0) rest = deep;
        deep = e;
    } else {
        rest = e;
    }
}

void TranspositionTable::clear() {
    std::fill(slots_.begin(), slots_.end(), TTEntry{});
    hits_ = 0;
    stores_ = 0;
}

Score score_from_entry(const Entry& e, int ply) {
    switch (e.value) {
        case Value::Win: return win_in(ply + e.dtm);
        case Value::Loss: return loss_in(ply + e.dtm);
        default: return kDrawScore;
    }
}

// Search --------------------------------------------------------------------------

namespace {

// Proven scores are stored relative to the node so they survive transposition.
Score to_table(Score s, int ply) {
    if (is_proven_win(s)) return s + ply;
    if (is_proven_loss(s)) return s - ply;
    return s;
}

Score from_table(Score s, int ply) {
    if (is_proven_win(s)) return s - ply;
    if (is_proven_loss(s)) return s + ply;
    return s;
}

Score terminal_score(const Position& pos, int ply) {
    const auto w = winner(pos);
    return *w == pos.side_to_move() ? win_in(ply) : loss_in(ply);
}

Score static_score(const SearchOptions& o, const Position& pos) {
    const Score s = o.evaluator(pos);
    return pos.side_to_move() == Color::White ? s : -s;
}

bool repeats(const std::vector<Position>& line, const Position& pos) {
    // Same side to move means an even distance back.
    for (std::size_t i = line.size() % 2; i < line.size(); i += 2)
        if (line[i] == pos) return true;
    return false;
}

class Minimax {
public:
    explicit Minimax(const SearchOptions& o) : o_(o) {}

    Score run(const Position& pos, int depth, int ply, std::optional<Move>* best) {
        ++r.nodes;
        if (winner(pos)) {
            ++r.leaves;
            return terminal_score(pos, ply);
        }
        if (o_.repetition && ply > 0 && repeats(line_, pos)) {
            ++r.leaves;
            return kDrawScore;
        }
        if (depth == 0) {
            ++r.leaves;
            return static_score(o_, pos);
        }
        MoveList moves;
        generate_moves(pos, o_.flags, moves);
        if (moves.empty()) {
            ++r.leaves;
            return kDrawScore;
        }
        line_.push_back(pos);
        Score value = -kWinScore - 1;
        for (const Move& m : moves) {
            const Score s = -run(apply_unchecked(pos, m), depth - 1, ply + 1, nullptr);
            if (s > value) {
                value = s;
                if (best) *best = m;
            }
        }
        line_.pop_back();
        return value;
    }

    SearchResult r;

private:
    const SearchOptions& o_;
    std::vector<Position> line_;
};

class AlphaBeta {
public:
    AlphaBeta(const SearchOptions& o, TranspositionTable* table, const TablebaseSet* tablebases)
        : o_(o), table_(table), tablebases_(tablebases) {
        if (tablebases_) probe_limit_ = tablebases_->max_pieces();
    }

    Score run(const Position& pos, std::uint64_t key, int depth, int ply, Score alpha, Score beta,
              std::optional<Move>* best) {
        ++r.nodes;
        if (winner(pos)) {
            ++r.leaves;
            return terminal_score(pos, ply);
        }
        if (ply > 0) {
            if (o_.repetition && repeats(line_, pos)) {
                ++r.leaves;
                return kDrawScore;
            }
            if (pos.total() <= probe_limit_) {
                ++r.leaves;
                ++r.probes;
                return score_from_entry(lookup(*tablebases_, pos), ply);
            }
        } else if (depth == 0 && pos.total() <= probe_limit_) {
            ++r.leaves;
            ++r.probes;
            return score_from_entry(lookup(*tablebases_, pos), ply);
        }
        if (depth == 0) {
            ++r.leaves;
            return static_score(o_, pos);
        }

        std::optional<Move> hint;
        if (table_) {
            if (const TTEntry* e = table_->probe(key, depth)) {
                hint = e->best;
                if (!o_.repetition && ply > 0) {
                    const Score s = from_table(e->score, ply);
                    if (e->bound == Bound::Exact || (e->bound == Bound::Lower && s >= beta) ||
                        (e->bound == Bound::Upper && s <= alpha)) {
                        ++r.tt_hits;
                        return s;
                    }
                }
            }
        }

        MoveList moves;
        generate_moves(pos, o_.flags, moves);
        if (moves.empty()) {
            ++r.leaves;
            return kDrawScore;
        }
        order(moves, hint);

        line_.push_back(pos);
        const Score alpha0 = alpha;
        Score value = -kWinScore - 1;
        std::optional<Move> chosen;
        for (const Move& m : moves) {
            const Position next = apply_unchecked(pos, m);
            const std::uint64_t next_key = table_ ? table_->zobrist().after(key, pos, m) : 0;
            const Score s = -run(next, next_key, depth - 1, ply + 1, -beta, -alpha, nullptr);
            if (s > value) {
                value = s;
                chosen = m;
            }
            alpha = std::max(alpha, s);
            if (alpha >= beta) break;
        }
        line_.pop_back();

        if (best) *best = chosen;
        if (table_) {
            TTEntry e;
            e.key = key;
            e.depth = static_cast<std::int16_t>(depth);
            e.score = to_table(value, ply);
            e.bound = value <= alpha0 ? Bound::Upper : value >= beta ? Bound::Lower : Bound::Exact;
            e.best = chosen;
            table_->store(e);
        }
        return value;
    }

    SearchResult r;

private:
    static void order(MoveList& moves, const std::optional<Move>& hint) {
        std::stable_partition(moves.begin(), moves.end(), [](const Move& m) { return m.capture; });
        if (!hint) return;
        auto it = std::find(moves.begin(), moves.end(), *hint);
        if (it != moves.end()) std::rotate(moves.begin(), it, it + 1);
    }

    const SearchOptions& o_;
    TranspositionTable* table_;
    const TablebaseSet* tablebases_;
    int probe_limit_ = 0;
    std::vector<Position> line_;
};

SearchResult run_alphabeta(const Position& pos, int depth, TranspositionTable* table, const TablebaseSet* tablebases,
                           const SearchOptions& options) {
    if (depth < 0) throw Error(ErrorKind::Validation, "depth must be non-negative");
    if (depth > kMaxPly / 2) throw Error(ErrorKind::Validation, "depth too large");
    validate(pos);
    AlphaBeta search(options, table, tablebases);
    const std::uint64_t key = table ? table->zobrist().key(pos) : 0;
    std::optional<Move> best;
    search.r.score = search.run(pos, key, depth, 0, -kWinScore - 1, kWinScore + 1, &best);
    search.r.best = best;
    return search.r;
}

}  // namespace

SearchResult minimax(const Position& pos, int depth, const SearchOptions& options) {
    if (depth < 0) throw Error(ErrorKind::Validation, "depth must be non-negative");
    validate(pos);
    Minimax search(options);
    std::optional<Move> best;
    search.r.score = search.run(pos, depth, 0, &best);
    search.r.best = best;
    return search.r;
}

SearchResult alphabeta(const Position& pos, int depth, TranspositionTable* table, const SearchOptions& options) {
    return run_alphabeta(pos, depth, table, nullptr, options);
}

SearchResult probe_aware_search(const Position& pos, int depth, const TablebaseSet& tablebases,
                                 TranspositionTable* table, const SearchOptions& options) {
    return run_alphabeta(pos, depth, table, &tablebases, options);
}

}  // namespace dsq
