// dsq: command-line front end for the Jungle rules kernel, search engine,
// tablebase builder and tree miner. Run `dsq --help` for the subcommands.

#include "dsq/config.hpp"
#include "dsq/errors.hpp"
#include "dsq/features.hpp"
#include "dsq/rules.hpp"
#include "dsq/search.hpp"
#include "dsq/tablebase.hpp"
#include "dsq/tree.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace dsq;

enum ExitCode { kOk = 0, kFailure = 1, kUsage = 2, kParse = 3, kMissing = 4, kVerification = 5 };

int exit_code(ErrorKind k) {
    switch (k) {
        case ErrorKind::Parse: return kParse;
        case ErrorKind::MissingPartition:
        case ErrorKind::PartitionMismatch:
        case ErrorKind::Io: return kMissing;
        case ErrorKind::Verification: return kVerification;
        case ErrorKind::Usage:
        case ErrorKind::Validation:
        case ErrorKind::IllegalMove: return kUsage;
    }
    return kFailure;
}

double seconds_since(std::chrono::steady_clock::time_point t) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

Position read_position(const std::string& text) {
    if (text == "initial" || text == "start") return Position::initial();
    Position pos = parse_position(text);
    validate(pos);
    return pos;
}

// "2", "3" or a comma-separated list of partition names.
std::vector<Partition> read_partitions(const std::string& spec) {
    if (spec.empty()) throw Error(ErrorKind::Usage, "empty partition spec");
    if (std::all_of(spec.begin(), spec.end(), [](char c) { return c >= '0' && c <= '9'; })) {
        const int n = std::stoi(spec);
        if (n < 2 || n > 16) throw Error(ErrorKind::Usage, "piece count must be between 2 and 16");
        return partitions_with(n);
    }
    std::vector<Partition> out;
    std::stringstream in(spec);
    std::string item;
    while (std::getline(in, item, ','))
        if (!item.empty()) out.push_back(Partition::parse(item));
    if (out.empty()) throw Error(ErrorKind::Usage, "empty partition spec");
    return out;
}

std::string stats_row(const std::string& name, const TablebaseStats& s) {
    std::ostringstream out;
    out << name << '\t' << s.positions << '\t' << s.wins << '\t' << s.losses << '\t' << s.draws << '\t'
        << s.longest_plies << '\t' << s.longest_moves();
    return out.str();
}

constexpr const char* kStatsHeader = "partition\tpositions\twins\tlosses\tdraws\tlongest_plies\tlongest_moves";

// Adds partitions needed to solve `targets`: captures lead to smaller
// partitions, which are loaded from disk when present and solved otherwise.
std::vector<Partition> with_dependencies(const std::vector<Partition>& targets, const Config& cfg, TablebaseSet& set) {
    std::vector<Partition> todo;
    auto visit = [&](auto&& self, Partition p) -> void {
        for (Partition q : {p, p.mirrored()}) {
            if (set.contains(q) || std::find(todo.begin(), todo.end(), q) != todo.end()) continue;
            try {
                set.add(load_from(cfg.tb_dir, q, cfg.flags));
                continue;
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::MissingPartition) throw;
            }
            todo.push_back(q);
            for (Partition t : capture_targets(q)) self(self, t);
        }
    };
    for (Partition p : targets) visit(visit, p);
    return todo;
}

std::unique_ptr<TranspositionTable> make_table(const Config& cfg) {
    return std::make_unique<TranspositionTable>(cfg.tt_size, cfg.zobrist_seed);
}

DecisionTree fixture(const std::string& name) {
    if (name == "equal") return equal_material_tree();
    if (name == "black") return black_stronger_tree();
    if (name == "lion") return lion_elephant_tree();
    throw Error(ErrorKind::Usage, "unknown fixture '" + name + "' (equal, black, lion)");
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Io, "cannot read " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
    out << text;
}

std::vector<Feature> read_features(const std::string& list) {
    std::vector<Feature> out;
    std::stringstream in(list);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (item.empty()) continue;
        const auto f = feature_from_name(item);
        if (!f) throw Error(ErrorKind::Usage, "unknown feature '" + item + "'");
        out.push_back(*f);
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Jungle (Dou Shou Qi) engine, tablebase builder and tree miner"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Show help for every subcommand");

    std::string config_file;
    std::vector<std::string> overrides;
    std::string tb_dir;
    int threads = 0;
    app.add_option("-c,--config", config_file, "key=value config file");
    app.add_option("--set", overrides, "Override one config key, as key=value")->take_all();
    app.add_option("--tb-dir", tb_dir, "Tablebase directory (config key tb_dir)");
    app.add_option("--threads", threads, "Worker threads for solving (config key threads)");

    std::string position_text = "initial";
    int depth = 0;

    auto* perft_cmd = app.add_subcommand("perft", "Leaf counts of the depth-limited game tree, one line per ply");
    bool perft_plain = false;
    perft_cmd->add_option("depth", depth, "Maximum ply")->required();
    perft_cmd->add_option("-p,--position", position_text, "Position text or 'initial'");
    perft_cmd->add_flag("--plain", perft_plain, "Expand repeated positions instead of treating them as leaves");

    auto* search_cmd = app.add_subcommand("search", "Depth-limited alpha-beta (or minimax) search");
    bool use_minimax = false, no_tt = false, no_repetition = false, use_probe = false;
    search_cmd->add_option("depth", depth, "Search depth in plies")->required();
    search_cmd->add_option("-p,--position", position_text, "Position text or 'initial'");
    search_cmd->add_flag("--minimax", use_minimax, "Full-width minimax instead of alpha-beta");
    search_cmd->add_flag("--no-tt", no_tt, "Disable the transposition table");
    search_cmd->add_flag("--no-repetition", no_repetition, "Do not score repeated positions as draws");
    search_cmd->add_flag("--probe", use_probe, "Replace subtrees by tablebase values from tb_dir");

    std::string spec;
    auto* solve_cmd = app.add_subcommand("solve", "Build tablebases into tb_dir and print their statistics");
    solve_cmd->add_option("pieces", spec, "Piece count (\"2\", \"3\") or partitions such as \"TL_e,E_e\"")->required();

    auto* stats_cmd = app.add_subcommand("stats", "Statistics of built tablebases");
    stats_cmd->add_option("pieces", spec, "Piece count or partition list")->required();

    auto* probe_cmd = app.add_subcommand("probe", "Value, distance and best move of a position");
    bool machine = false;
    probe_cmd->add_option("position", position_text, "Position text")->required();
    probe_cmd->add_flag("--machine", machine, "Print only the tab-separated result line");

    auto* verify_cmd = app.add_subcommand("verify", "Re-derive every entry from its successors");
    verify_cmd->add_option("pieces", spec, "Piece count or partition list")->required();

    auto* features_cmd = app.add_subcommand("features", "Game features of a two-piece position");
    features_cmd->add_option("position", position_text, "Position text (White to move)")->required();
    features_cmd->add_flag("--machine", machine, "Print only the comma-separated values");

    auto* mine_cmd = app.add_subcommand("mine", "Export labeled examples, build a tree and count misclassifications");
    std::string fixture_name, feature_list, examples_out, tree_out;
    mine_cmd->add_option("partition", spec, "Two-piece partition, e.g. L_e")->required();
    mine_cmd->add_option("--fixture", fixture_name, "Score a published tree (equal, black, lion) instead of inducing");
    mine_cmd->add_option("--features", feature_list, "Comma-separated features offered to induction");
    mine_cmd->add_option("--examples", examples_out, "Labeled example file (default <tb_dir>/<partition>.examples)");
    mine_cmd->add_option("--tree", tree_out, "Tree file (default <tb_dir>/<partition>.tree)");

    auto* classify_cmd = app.add_subcommand("classify", "Classify a position, or a whole partition, with a tree");
    std::string tree_file, partition_name;
    classify_cmd->add_option("position", position_text, "Position text (White to move)");
    classify_cmd->add_option("--tree", tree_file, "Tree file");
    classify_cmd->add_option("--fixture", fixture_name, "Published tree: equal, black or lion");
    classify_cmd->add_option("--partition", partition_name, "Count misclassifications over a built partition");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        Config cfg;
        if (!config_file.empty()) cfg.merge_file(config_file);
        for (const std::string& o : overrides) {
            const auto eq = o.find('=');
            if (eq == std::string::npos) throw Error(ErrorKind::Usage, "--set expects key=value, got '" + o + "'");
            cfg.set(o.substr(0, eq), o.substr(eq + 1));
        }
        if (!tb_dir.empty()) cfg.set("tb_dir", tb_dir);
        if (threads > 0) cfg.threads = threads;

        if (*perft_cmd) {
            if (depth < 0) throw Error(ErrorKind::Usage, "depth must be non-negative");
            const Position pos = read_position(position_text);
            PerftOptions options;
            options.repetition_leaves = !perft_plain;
            for (int d = depth == 0 ? 0 : 1; d <= depth; ++d) {
                const auto t = std::chrono::steady_clock::now();
                const std::uint64_t n = perft(pos, d, cfg.flags, options);
                std::printf("%d\t%llu\t%.3f\n", d, static_cast<unsigned long long>(n), seconds_since(t));
                std::fflush(stdout);
            }
            return kOk;
        }

        if (*search_cmd) {
            const Position pos = read_position(position_text);
            SearchOptions options;
            options.flags = cfg.flags;
            options.repetition = !no_repetition;
            options.evaluator = evaluator_by_name(cfg.eval);
            const auto t = std::chrono::steady_clock::now();
            SearchResult r;
            auto table = no_tt ? nullptr : make_table(cfg);
            if (use_minimax) {
                r = minimax(pos, depth, options);
            } else if (use_probe) {
                TablebaseSet set;
                for (int n = 2; n <= std::min(pos.total(), 3); ++n)
                    for (Partition p : partitions_with(n)) {
                        try {
                            set.add(load_from(cfg.tb_dir, p, cfg.flags));
                        } catch (const Error& e) {
                            if (e.kind() != ErrorKind::MissingPartition) throw;
                        }
                    }
                r = probe_aware_search(pos, depth, set, table.get(), options);
            } else {
                r = alphabeta(pos, depth, table.get(), options);
            }
            const std::string best = r.best ? move_to_text(pos, *r.best) : "-";
            std::printf("%d\t%s\t%s\t%llu\t%llu\t%.3f\n", r.score, describe_score(r.score).c_str(), best.c_str(),
                        static_cast<unsigned long long>(r.nodes), static_cast<unsigned long long>(r.leaves),
                        seconds_since(t));
            return kOk;
        }

        if (*solve_cmd) {
            const auto targets = read_partitions(spec);
            TablebaseSet set;
            auto todo = with_dependencies(targets, cfg, set);
            std::filesystem::create_directories(cfg.tb_dir);
            std::stable_sort(todo.begin(), todo.end(),
                             [](Partition a, Partition b) { return a.piece_count() < b.piece_count(); });
            SolveOptions options{cfg.flags, cfg.threads};
            for (Partition p : todo) {
                if (set.contains(p)) continue;
                for (Tablebase& tb : solve_pair(p, set, options)) {
                    tb.save(cfg.tb_dir / tb.file_name());
                    set.add(std::move(tb));
                }
            }
            std::puts(kStatsHeader);
            TablebaseStats total;
            for (Partition p : targets) {
                const TablebaseStats s = stats(*set.find(p));
                total += s;
                std::puts(stats_row(p.name(), s).c_str());
            }
            if (targets.size() > 1) std::puts(stats_row("total", total).c_str());
            return kOk;
        }

        if (*stats_cmd) {
            std::puts(kStatsHeader);
            TablebaseStats total;
            const auto targets = read_partitions(spec);
            for (Partition p : targets) {
                const TablebaseStats s = stats(load_from(cfg.tb_dir, p, cfg.flags));
                total += s;
                std::puts(stats_row(p.name(), s).c_str());
            }
            if (targets.size() > 1) std::puts(stats_row("total", total).c_str());
            return kOk;
        }

        if (*probe_cmd) {
            const Position pos = read_position(position_text);
            TablebaseSet set;
            load_closure(cfg.tb_dir, Partition::of(canonicalize(pos).position), cfg.flags, set);
            const ProbeResult r = probe(set, pos, cfg.flags);
            const std::string best = r.best ? move_to_text(pos, *r.best) : "-";
            const std::string value(value_name(r.value));
            if (machine) {
                std::printf("%s\t%d\t%s\n", value.c_str(), r.dtm, best.c_str());
            } else {
                const char* side = pos.side_to_move() == Color::White ? "White" : "Black";
                if (r.value == Value::Draw)
                    std::printf("%s to move: draw, best %s\n", side, best.c_str());
                else
                    std::printf("%s to move: %s in %d plies (%d moves by the winner), best %s\n", side,
                                r.value == Value::Win ? "win" : "loss", r.dtm, (r.dtm + 1) / 2, best.c_str());
            }
            return kOk;
        }

        if (*verify_cmd) {
            const auto targets = read_partitions(spec);
            TablebaseSet set;
            for (Partition p : targets) load_closure(cfg.tb_dir, p, cfg.flags, set);
            std::uint64_t bad = 0;
            for (Partition p : targets) {
                const VerifyReport r = verify(*set.find(p), set, cfg.flags);
                bad += r.violation_count;
                std::printf("%s\t%llu\t%llu\n", p.name().c_str(), static_cast<unsigned long long>(r.checked),
                            static_cast<unsigned long long>(r.violation_count));
                for (const Violation& v : r.violations)
                    std::fprintf(stderr, "  %s index %llu: stored %s %d, expected %s %d\n", p.name().c_str(),
                                 static_cast<unsigned long long>(v.index),
                                 std::string(value_name(v.stored.value)).c_str(), v.stored.dtm,
                                 std::string(value_name(v.expected.value)).c_str(), v.expected.dtm);
            }
            return bad ? kVerification : kOk;
        }

        if (*features_cmd) {
            const FeatureVector v = extract_features(read_position(position_text));
            if (machine) {
                std::puts(to_text(v).c_str());
            } else {
                for (Feature f : kAllFeatures)
                    std::printf("%-12s %s\n", std::string(feature_name(f)).c_str(), feature_value_name(f, v[f]).c_str());
            }
            return kOk;
        }

        if (*mine_cmd) {
            if (spec.empty()) throw Error(ErrorKind::Usage, "empty partition spec");
            const Partition p = Partition::parse(spec);
            if (p.piece_count() != 2) throw Error(ErrorKind::Usage, "mining works on two-piece partitions");
            const Tablebase tb = load_from(cfg.tb_dir, p, cfg.flags);
            const auto examples = examples_from(tb);
            const std::filesystem::path ex_path =
                examples_out.empty() ? cfg.tb_dir / (p.name() + ".examples") : std::filesystem::path(examples_out);
            std::string lines;
            for (const LabeledExample& e : examples) lines += to_text(e) + '\n';
            write_file(ex_path, lines);
            const auto features = read_features(feature_list);
            const DecisionTree tree = fixture_name.empty() ? induce_tree(examples, features) : fixture(fixture_name);
            const std::filesystem::path tree_path =
                tree_out.empty() ? cfg.tb_dir / (p.name() + ".tree") : std::filesystem::path(tree_out);
            write_file(tree_path, tree.to_text());
            std::printf("%s\t%llu\t%zu\t%zu\n", p.name().c_str(),
                        static_cast<unsigned long long>(misclassified(tree, examples)), examples.size(), tree.size());
            return kOk;
        }

        if (*classify_cmd) {
            if (tree_file.empty() == fixture_name.empty())
                throw Error(ErrorKind::Usage, "give exactly one of --tree and --fixture");
            const DecisionTree tree = tree_file.empty() ? fixture(fixture_name) : DecisionTree::parse(read_file(tree_file));
            if (!partition_name.empty()) {
                const Partition p = Partition::parse(partition_name);
                const Tablebase tb = load_from(cfg.tb_dir, p, cfg.flags);
                std::printf("%s\t%llu\n", p.name().c_str(), static_cast<unsigned long long>(evaluate_tree(tree, tb)));
                return kOk;
            }
            if (classify_cmd->count("position") == 0) throw Error(ErrorKind::Usage, "give a position or --partition");
            const Label l = tree.classify(extract_features(read_position(position_text)));
            std::puts(std::string(label_name(l)).c_str());
            return kOk;
        }
    } catch (const ParseError& e) {
        std::fprintf(stderr, "dsq: parse error: %s\n", e.what());
        return kParse;
    } catch (const Error& e) {
        std::fprintf(stderr, "dsq: %s\n", e.what());
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        std::fprintf(stderr, "dsq: %s\n", e.what());
        return kFailure;
    }
    return kUsage;
}
