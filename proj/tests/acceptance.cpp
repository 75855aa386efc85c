// One PASS/FAIL line per acceptance criterion. Exit status is nonzero when a
// gating criterion fails. DSQ_STRETCH=1 adds perft depth 7.
#include "dsq/features.hpp"
#include "dsq/search.hpp"
#include "dsq/tablebase.hpp"
#include "dsq/tree.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <sstream>
#include <string>
#include <thread>

using namespace dsq;

namespace {

int failures = 0;

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void report(int id, bool ok, const std::string& what, bool gating = true) {
    std::printf("%s %d: %s\n", ok ? "PASS" : "FAIL", id, what.c_str());
    std::fflush(stdout);
    if (!ok && gating) ++failures;
}

Label classify_score(Score s) {
    if (is_proven_win(s)) return Label::WhiteWin;
    if (is_proven_loss(s)) return Label::BlackWin;
    return Label::Draw;
}

int solve_threads() { return std::max(1u, std::thread::hardware_concurrency()); }

}  // namespace

int main() {
    const bool stretch = std::getenv("DSQ_STRETCH") != nullptr;
    const Position start = Position::initial();

    // 1. Perft.
    {
        const std::uint64_t expect[] = {24, 576, 12240, 260100, 5098477};
        bool ok = true;
        std::ostringstream s;
        const auto t0 = std::chrono::steady_clock::now();
        for (int d = 1; d <= 5; ++d) {
            const std::uint64_t n = perft(start, d);
            ok = ok && n == expect[d - 1];
            s << n << (d < 5 ? " " : "");
        }
        const double t = seconds_since(t0);
        ok = ok && t < 60;
        s << " in " << t << " s";
        report(1, ok, "perft d=1..5 = " + s.str());

        const auto t6 = std::chrono::steady_clock::now();
        const std::uint64_t n6 = perft(start, 6);
        std::ostringstream s6;
        s6 << "perft d=6 = " << n6 << " (want 99860517) in " << seconds_since(t6) << " s";
        report(1, n6 == 99860517, s6.str(), false);
        if (stretch) {
            const auto t7 = std::chrono::steady_clock::now();
            const std::uint64_t n7 = perft(start, 7);
            std::ostringstream s7;
            s7 << "perft d=7 = " << n7 << " (want 1890415534) in " << seconds_since(t7) << " s";
            report(1, n7 == 1890415534ull, s7.str(), false);
        }
    }

    // 2. Two-piece build.
    TablebaseSet two;
    TablebaseStats total2;
    {
        const auto t0 = std::chrono::steady_clock::now();
        solve_all(partitions_with(2), two, SolveOptions{{}, 1});
        const double t = seconds_since(t0);
        for (const auto& [p, tb] : two) total2 += stats(tb);
        std::ostringstream s;
        s << "2-piece " << total2.positions << " positions, " << total2.wins << " wins, " << total2.losses
          << " losses, " << total2.draws << " draws, flag word " << RuleFlags{}.word() << ", built in " << t << " s";
        report(2,
               total2.positions == 160068 && total2.wins == 82852 && total2.losses == 64501 &&
                   total2.draws == 12715 && t < 60,
               s.str());
    }

    // 3. Longest sequence.
    {
        std::ostringstream s;
        s << "longest 2-piece sequence " << total2.longest_plies << " plies (" << total2.longest_moves()
          << " winner moves); longest won entry alone is " << total2.longest_win_plies << " plies";
        report(3, total2.longest_plies == 34 || total2.longest_moves() == 34, s.str());
    }

    // 4. Example endgames, cross-checked by forward search.
    {
        SearchOptions o;
        o.repetition = false;
        struct Case {
            const char* name;
            const char* text;
            Value value;
        };
        const Case cases[] = {
            {"4a", "7/7/3e3/7/7/7/3E3/7/7 w", Value::Loss},
            {"4b", "t6/7/T6/7/7/7/7/7/7 w", Value::Win},
            {"4c", "d6/7/7/7/7/7/5C1/7/7 w", Value::Draw},
            {"4d", "7/7/3e3/7/6L/7/7/7/7 w", Value::Loss},
        };
        bool ok = true;
        std::ostringstream s;
        TranspositionTable tt(1 << 20);
        for (const Case& c : cases) {
            const Position pos = parse_position(c.text);
            const ProbeResult r = probe(two, pos);
            bool this_ok = r.value == c.value;
            s << c.name << " " << value_name(r.value);
            if (r.value != Value::Draw) {
                tt.clear();
                const SearchResult at = alphabeta(pos, r.dtm, &tt, o);
                tt.clear();
                const SearchResult before = alphabeta(pos, r.dtm - 1, &tt, o);
                const Score want = r.value == Value::Win ? win_in(r.dtm) : loss_in(r.dtm);
                this_ok = this_ok && at.score == want && !is_proven_win(before.score) &&
                          !is_proven_loss(before.score);
                s << " " << r.dtm << " plies";
            } else {
                tt.clear();
                const SearchResult deep = alphabeta(pos, 35, &tt, o);
                this_ok = this_ok && !is_proven_win(deep.score) && !is_proven_loss(deep.score);
            }
            if (std::string(c.name) == "4b") {
                const bool ta6 = r.best && move_to_text(pos, *r.best) == "Ta6";
                this_ok = this_ok && ta6 && (r.dtm + 1) / 2 == 10;
                s << ", best " << (r.best ? move_to_text(pos, *r.best) : "-") << ", " << (r.dtm + 1) / 2
                  << " White moves";
            }
            s << (std::string(c.name) == "4d" ? "" : "; ");
            ok = ok && this_ok;
        }
        report(4, ok, s.str());
    }

    // 5. No draws in equal-material pairs.
    {
        bool ok = true;
        std::ostringstream s;
        for (const char* name : {"E_e", "P_p", "D_d", "W_w", "C_c", "T_t", "L_l"}) {
            const std::uint64_t d = partition_draw_census(*two.find(Partition::parse(name)));
            ok = ok && d == 0;
            s << " " << name << "=" << d;
        }
        report(5, ok, "draws" + s.str());
    }

    // 6. Published trees.
    {
        bool ok = true;
        std::ostringstream s;
        s << "tree (a):";
        for (const char* name : {"E_e", "P_p", "D_d", "W_w", "C_c", "R_r"}) {
            const std::uint64_t m = evaluate_tree(equal_material_tree(), *two.find(Partition::parse(name)));
            ok = ok && m == 0;
            s << " " << name << "=" << m;
        }
        std::uint64_t b = 0;
        for (const char* name : {"C_w", "C_d", "C_p", "C_e", "W_d", "W_p", "W_e", "D_p", "D_e", "P_e"})
            b += evaluate_tree(black_stronger_tree(), *two.find(Partition::parse(name)));
        const std::uint64_t c = evaluate_tree(lion_elephant_tree(), *two.find(Partition::parse("L_e")));
        ok = ok && c == 16;
        s << "; tree (b) total " << b << "; tree (c) on L_e " << c;
        report(6, ok, s.str());
    }

    // 7. Forward search against the tablebase. No win is longer than 34 plies,
    // so depth 35 settles every decisive entry and leaves draws unproven.
    {
        SearchOptions o;
        o.repetition = false;
        std::mt19937_64 rng(2024);
        std::vector<const Tablebase*> tables;
        for (const auto& [p, tb] : two) tables.push_back(&tb);
        int agree = 0, n = 0;
        TranspositionTable tt(1 << 18);
        while (n < 1000) {
            const Tablebase& tb = *tables[rng() % tables.size()];
            const std::uint64_t i = rng() % tb.size();
            const Entry e = tb.at(i);
            if (e.value == Value::Invalid) continue;
            const Position pos = *tb.indexer().unindex(i);
            if (legal_moves(pos).empty()) continue;
            ++n;
            tt.clear();
            const Score s = alphabeta(pos, 35, &tt, o).score;
            if (classify_score(s) == label_of(e.value) && (e.value == Value::Draw || proven_distance(s) == e.dtm))
                ++agree;
        }
        report(7, agree == n,
               std::to_string(agree) + "/" + std::to_string(n) + " random 2-piece positions agree, distance included");
    }

    // 8. Alpha-beta against minimax.
    {
        std::mt19937_64 rng(8);
        int agree = 0, n = 0, tt_agree = 0;
        while (n < 100) {
            Position pos = start;
            const int plies = static_cast<int>(rng() % 60);
            for (int k = 0; k < plies; ++k) {
                const MoveList moves = legal_moves(pos);
                if (moves.empty()) break;
                pos = apply_unchecked(pos, moves[rng() % moves.size()]);
            }
            if (winner(pos)) continue;
            const int depth = 1 + n % 5;
            ++n;
            const Score mm = minimax(pos, depth).score;
            const SearchResult plain = alphabeta(pos, depth, nullptr);
            TranspositionTable tt(1 << 16);
            const SearchResult hashed = alphabeta(pos, depth, &tt);
            SearchOptions no_rep;
            no_rep.repetition = false;
            TranspositionTable tt2(1 << 16);
            const bool cut_ok = alphabeta(pos, depth, &tt2, no_rep).score == minimax(pos, depth, no_rep).score;
            agree += plain.score == mm;
            tt_agree += hashed.score == mm && cut_ok;
        }
        report(8, agree == n && tt_agree == n,
               std::to_string(agree) + "/" + std::to_string(n) + " root scores match minimax at depth 1..5; " +
                   std::to_string(tt_agree) + "/" + std::to_string(n) + " unchanged by the transposition table");
    }

    // 10 first, so that 9 covers the three-piece tables too.
    TablebaseSet three = two;
    bool three_ok = false;
    {
        std::vector<Partition> targets = partitions_with(3);
        const auto t0 = std::chrono::steady_clock::now();
        solve_all(targets, three, SolveOptions{{}, solve_threads()});
        const double t = seconds_since(t0);
        TablebaseStats s3;
        for (Partition p : targets) s3 += stats(*three.find(p));
        std::ostringstream s;
        s << "3-piece " << s3.positions << " positions, " << s3.wins << " wins, " << s3.losses << " losses, "
          << s3.draws << " draws (" << s3.stalemates << " stalemates not counted), longest " << s3.longest_plies
          << " plies, built in " << t << " s";
        three_ok = s3.positions == 54354684 && s3.wins == 30297857 && s3.losses == 23369820 && s3.draws == 687007;
        // Reported after 9 to keep the numbering in order.
        const std::string line = s.str();

        // 9. Self-consistency.
        std::uint64_t checked = 0, violations = 0;
        for (const auto& [p, tb] : three) {
            const VerifyReport r = verify(tb, three);
            checked += r.checked;
            violations += r.violation_count;
        }
        report(9, violations == 0,
               std::to_string(violations) + " violations over " + std::to_string(three.size()) +
                   " tables (" + std::to_string(checked) + " entries)");
        report(10, three_ok, line, false);
    }

    std::printf("%s\n", failures == 0 ? "all gating criteria pass" : "some gating criteria fail");
    return failures == 0 ? 0 : 1;
}
