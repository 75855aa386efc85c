#include "dsq/errors.hpp"
#include "dsq/tablebase.hpp"

#include <algorithm>
#include <thread>

namespace dsq {

namespace {

enum class State : std::uint8_t { Open, Win, Loss, Draw, Invalid };

// Work arrays for one side of a mirror pair.
struct Side {
    explicit Side(Partition p) : indexer(p) {
        const auto n = indexer.capacity();
        state.assign(n, State::Open);
        dtm.assign(n, 0);
        pending.assign(n, 0);
        worst_win.assign(n, 0);
        best_win.assign(n, 0);
    }

    Indexer indexer;
    std::vector<State> state;
    std::vector<std::uint16_t> dtm;
    // Moves whose outcome is not yet known to be a win for the opponent.
    std::vector<std::uint8_t> pending;
    // Largest opponent win distance among resolved moves.
    std::vector<std::uint16_t> worst_win;
    // Tentative shortest win, 0 when none.
    std::vector<std::uint16_t> best_win;
};

struct Item {
    std::uint32_t index;
    std::uint8_t side;
    bool loss;
};

class PairSolver {
public:
    PairSolver(Partition p, const TablebaseSet& subgames, const SolveOptions& options)
        : options_(options), symmetric_(p.symmetric()) {
        sides_.emplace_back(p);
        if (!symmetric_) sides_.emplace_back(p.mirrored());
        for (Partition target : capture_targets(p)) {
            const Tablebase* tb = subgames.find(target);
            if (!tb) throw Error(ErrorKind::MissingPartition, "subgame " + target.name() + " is required by " + p.name());
            if (tb->flags() != options.flags)
                throw Error(ErrorKind::MissingPartition, "subgame " + target.name() + " was built with other rule flags");
            subgames_.push_back(tb);
        }
    }

    std::vector<Tablebase> run() {
        for (std::uint8_t s = 0; s < sides_.size(); ++s) initialize(s);
        propagate();
        std::vector<Tablebase> out;
        for (Side& side : sides_) {
            std::vector<std::uint16_t> entries(side.state.size());
            for (std::size_t i = 0; i < entries.size(); ++i) entries[i] = final_entry(side, i).encode();
            out.emplace_back(side.indexer.partition(), options_.flags, std::move(entries));
        }
        return out;
    }

private:
    std::uint8_t other(std::uint8_t s) const { return symmetric_ ? s : static_cast<std::uint8_t>(1 - s); }

    static Entry final_entry(const Side& side, std::size_t i) {
        switch (side.state[i]) {
            case State::Win: return {Value::Win, side.dtm[i]};
            case State::Loss: return {Value::Loss, side.dtm[i]};
            case State::Invalid: return {Value::Invalid, 0};
            default: return {Value::Draw, 0};
        }
    }

    const Tablebase& subgame(Partition p) const {
        for (const Tablebase* tb : subgames_)
            if (tb->partition() == p) return *tb;
        throw Error(ErrorKind::MissingPartition, "subgame " + p.name() + " missing");
    }

    void initialize_range(Side& side, std::uint64_t begin, std::uint64_t end) {
        MoveList moves;
        for (std::uint64_t i = begin; i < end; ++i) {
            const auto pos = side.indexer.unindex(i);
            if (!pos) {
                side.state[i] = State::Invalid;
                continue;
            }
            moves = MoveList();
            generate_moves(*pos, options_.flags, moves);
            if (moves.empty()) {
                side.state[i] = State::Draw;
                continue;
            }
            int best = 0;
            int worst = 0;
            int pending = 0;
            for (const Move& m : moves) {
                const Position after = apply_unchecked(*pos, m);
                int win_in = 0;
                if (winner(after)) {
                    win_in = 1;
                } else if (m.capture) {
                    const Position canon = after.mirrored();
                    const Entry e = subgame(Partition::of(canon)).lookup(canon);
                    if (e.value == Value::Loss) {
                        win_in = e.dtm + 1;
                    } else if (e.value == Value::Win) {
                        worst = std::max<int>(worst, e.dtm);
                    } else {
                        ++pending;  // a drawn capture never resolves
                    }
                } else {
                    ++pending;
                }
                if (win_in && (best == 0 || win_in < best)) best = win_in;
            }
            side.best_win[i] = static_cast<std::uint16_t>(best);
            side.worst_win[i] = static_cast<std::uint16_t>(worst);
            side.pending[i] = static_cast<std::uint8_t>(pending);
        }
    }

    void initialize(std::uint8_t s) {
        Side& side = sides_[s];
        const std::uint64_t n = side.indexer.capacity();
        const int threads = std::max(1, options_.threads);
        if (threads == 1 || n < 4096) {
            initialize_range(side, 0, n);
        } else {
            std::vector<std::thread> pool;
            const std::uint64_t chunk = (n + threads - 1) / threads;
            for (int t = 0; t < threads; ++t) {
                const std::uint64_t b = std::min(n, chunk * t);
                const std::uint64_t e = std::min(n, b + chunk);
                pool.emplace_back([this, &side, b, e] { initialize_range(side, b, e); });
            }
            for (auto& th : pool) th.join();
        }
        for (std::uint64_t i = 0; i < n; ++i) {
            if (side.state[i] != State::Open) continue;
            if (side.best_win[i]) {
                push(side.best_win[i], {static_cast<std::uint32_t>(i), s, false});
            } else if (side.pending[i] == 0) {
                push(side.worst_win[i] + 1, {static_cast<std::uint32_t>(i), s, true});
            }
        }
    }

    void push(std::size_t dtm, Item item) {
        if (dtm > Entry::kMaxDtm) throw Error(ErrorKind::Verification, "distance exceeds the 14-bit entry field");
        if (buckets_.size() <= dtm) buckets_.resize(dtm + 1);
        buckets_[dtm].push_back(item);
    }

    // Positions of side `other(s)` that reach `pos` by a non-capturing move.
    template <typename Fn>
    void for_each_predecessor(std::uint8_t s, const Position& pos, Fn&& fn) {
        const Position before_move = pos.mirrored();  // Black to move; White just moved
        Side& target = sides_[other(s)];
        for (PieceKind k : kAllKinds) {
            const auto at = before_move.square_of(Color::White, k);
            if (!at) continue;
            const Square to = *at;
            auto try_origin = [&](Square from) {
                if (!before_move.empty(from)) return;
                if (from == sq::d1 || from == sq::d9) return;
                if (k != PieceKind::Rat && is_water(from)) return;
                Position pred = before_move;
                pred.relocate(to, from);
                pred.set_side_to_move(Color::White);
                fn(target, static_cast<std::uint32_t>(target.indexer.index(pred)));
            };
            static constexpr int kSteps[4][2] = {{0, 1}, {0, -1}, {-1, 0}, {1, 0}};
            for (const auto& d : kSteps) {
                const int f = to.file() + d[0];
                const int r = to.rank() + d[1];
                if (Square::on_board(f, r)) try_origin(Square(f, r));
            }
            if (!can_leap(k)) continue;
            for (const Leap& l : leaps_from(to)) {
                bool clear = true;
                for (int i = 0; i < l.over_count; ++i) clear = clear && before_move.empty(l.over[i]);
                if (clear) try_origin(l.to);
            }
        }
    }

    void propagate() {
        for (std::size_t d = 1; d < buckets_.size(); ++d) {
            // Finalizing at distance d only ever pushes to d + 1 or beyond.
            for (std::size_t k = 0; k < buckets_[d].size(); ++k) {
                const Item item = buckets_[d][k];
                Side& side = sides_[item.side];
                if (side.state[item.index] != State::Open) continue;
                side.state[item.index] = item.loss ? State::Loss : State::Win;
                side.dtm[item.index] = static_cast<std::uint16_t>(d);
                const Position pos = *side.indexer.unindex(item.index);
                const std::uint8_t pred_side = other(item.side);
                for_each_predecessor(item.side, pos, [&](Side& pred, std::uint32_t j) {
                    if (pred.state[j] != State::Open) return;
                    if (item.loss) {
                        if (pred.best_win[j] == 0 || d + 1 < pred.best_win[j]) {
                            pred.best_win[j] = static_cast<std::uint16_t>(d + 1);
                            push(d + 1, {j, pred_side, false});
                        }
                        return;
                    }
                    pred.worst_win[j] = std::max(pred.worst_win[j], static_cast<std::uint16_t>(d));
                    if (--pred.pending[j] == 0 && pred.best_win[j] == 0)
                        push(static_cast<std::size_t>(pred.worst_win[j]) + 1, {j, pred_side, true});
                });
            }
            buckets_[d].clear();
            buckets_[d].shrink_to_fit();
        }
    }

    SolveOptions options_;
    bool symmetric_;
    std::vector<Side> sides_;
    std::vector<const Tablebase*> subgames_;
    std::vector<std::vector<Item>> buckets_;
};

}  // namespace

std::vector<Tablebase> solve_pair(Partition p, const TablebaseSet& subgames, const SolveOptions& options) {
    if (p.white == 0 || p.black == 0) throw Error(ErrorKind::Validation, "partition needs pieces on both sides");
    return PairSolver(p, subgames, options).run();
}

Tablebase solve(Partition p, const TablebaseSet& subgames, const SolveOptions& options) {
    auto tables = solve_pair(p, subgames, options);
    return std::move(tables.front());
}

void solve_all(const std::vector<Partition>& targets, TablebaseSet& set, const SolveOptions& options) {
    std::vector<Partition> order = targets;
    std::stable_sort(order.begin(), order.end(),
                     [](Partition a, Partition b) { return a.piece_count() < b.piece_count(); });
    for (Partition p : order) {
        if (set.contains(p)) continue;
        for (Tablebase& tb : solve_pair(p, set, options)) set.add(std::move(tb));
    }
}

}  // namespace dsq
