#include "dsq/features.hpp"

#include "dsq/errors.hpp"

#include <algorithm>
#include <deque>

namespace dsq {

namespace {

constexpr std::array<std::string_view, kFeatureCount> kNames = {
    "closest", "unopposed_w", "unopposed_b", "sector_w", "sector_b", "distance_d",
    "distance_p", "parity", "adjacent", "trapped", "can_cross"};

constexpr std::array<Square, 3> kWhiteTraps = {sq::c1, sq::d2, sq::e1};
constexpr std::array<Square, 3> kBlackTraps = {sq::c9, sq::d8, sq::e9};

using DistanceMap = std::array<int, Square::kCount>;

// Breadth-first move counts on the empty board. A den ends the walk: it gets a
// distance but is never passed through.
DistanceMap piece_distances(PieceKind kind, Square from) {
    DistanceMap dist;
    dist.fill(-1);
    std::deque<Square> queue{from};
    dist[from.index()] = 0;
    static constexpr int kSteps[4][2] = {{0, 1}, {0, -1}, {-1, 0}, {1, 0}};
    while (!queue.empty()) {
        const Square s = queue.front();
        queue.pop_front();
        auto visit = [&](Square t) {
            if (dist[t.index()] >= 0) return;
            if (kind != PieceKind::Rat && is_water(t)) return;
            dist[t.index()] = dist[s.index()] + 1;
            if (t != sq::d1 && t != sq::d9) queue.push_back(t);
        };
        for (const auto& d : kSteps) {
            const int f = s.file() + d[0];
            const int r = s.rank() + d[1];
            if (Square::on_board(f, r)) visit(Square(f, r));
        }
        if (can_leap(kind))
            for (const Leap& l : leaps_from(s)) visit(l.to);
    }
    return dist;
}

Sector sector_of(Square s) {
    const int rank = s.rank() + 1;
    if (rank >= 7) return Sector::Top;
    if (rank <= 3) return Sector::Bot;
    return Sector::Mid;
}

}  // namespace

std::string_view feature_name(Feature f) { return kNames[static_cast<std::size_t>(f)]; }

std::optional<Feature> feature_from_name(std::string_view name) {
    for (Feature f : kAllFeatures)
        if (feature_name(f) == name) return f;
    return std::nullopt;
}

bool is_numeric(Feature f) { return f == Feature::DistanceD || f == Feature::DistanceP; }

std::vector<int> feature_domain(Feature f) {
    switch (f) {
        case Feature::Closest: return {0, 1};
        case Feature::SectorW:
        case Feature::SectorB: return {0, 1, 2};
        case Feature::Parity: return {0, 1};
        case Feature::DistanceD: {
            std::vector<int> v(12);
            for (int i = 0; i < 12; ++i) v[static_cast<std::size_t>(i)] = i;
            return v;
        }
        case Feature::DistanceP: {
            std::vector<int> v(15);
            for (int i = 0; i < 15; ++i) v[static_cast<std::size_t>(i)] = i;
            return v;
        }
        default: return {1, 0};  // true first, as drawn in the trees
    }
}

std::string feature_value_name(Feature f, int value) {
    switch (f) {
        case Feature::Closest: return value == 0 ? "white" : "black";
        case Feature::SectorW:
        case Feature::SectorB: return value == 0 ? "top" : value == 1 ? "mid" : "bot";
        case Feature::DistanceD:
        case Feature::DistanceP:
        case Feature::Parity: return std::to_string(value);
        default: return value ? "true" : "false";
    }
}

int parse_feature_value(Feature f, std::string_view text) {
    for (int v : feature_domain(f))
        if (feature_value_name(f, v) == text) return v;
    throw ParseError(0, "bad value '" + std::string(text) + "' for " + std::string(feature_name(f)));
}

std::string to_text(const FeatureVector& v) {
    std::string out;
    for (Feature f : kAllFeatures) {
        if (!out.empty()) out += ',';
        out += feature_value_name(f, v[f]);
    }
    return out;
}

int empty_board_distance(PieceKind kind, Square from, Square to) {
    if (from == sq::d1 || from == sq::d9) return from == to ? 0 : -1;
    return piece_distances(kind, from)[to.index()];
}

FeatureVector extract_features(const Position& pos) {
    if (pos.count(Color::White) != 1 || pos.count(Color::Black) != 1)
        throw Error(ErrorKind::Validation, "features need exactly one piece per side");
    if (pos.side_to_move() != Color::White) throw Error(ErrorKind::Validation, "features need White to move");
    validate(pos);

    Piece wp{}, bp{};
    Square w{}, b{};
    for (PieceKind k : kAllKinds) {
        if (auto s = pos.square_of(Color::White, k)) wp = {Color::White, k}, w = *s;
        if (auto s = pos.square_of(Color::Black, k)) bp = {Color::Black, k}, b = *s;
    }

    const DistanceMap from_w = piece_distances(wp.kind, w);
    const DistanceMap from_b = piece_distances(bp.kind, b);

    FeatureVector v;
    v[Feature::Closest] = from_w[sq::d9.index()] <= from_b[sq::d1.index()] ? 0 : 1;

    // A trap is unopposed when the piece gets there first. White moves first,
    // so Black needs a whole move in hand.
    auto before = [](int mine, int theirs, int margin) { return mine >= 0 && (theirs < 0 || mine + margin < theirs); };
    v[Feature::UnopposedW] = std::any_of(kBlackTraps.begin(), kBlackTraps.end(), [&](Square t) {
        return before(from_w[t.index()], from_b[t.index()], 0);
    });
    v[Feature::UnopposedB] = std::any_of(kWhiteTraps.begin(), kWhiteTraps.end(), [&](Square t) {
        return before(from_b[t.index()], from_w[t.index()], 1);
    });

    v[Feature::SectorW] = static_cast<int>(sector_of(w));
    v[Feature::SectorB] = static_cast<int>(sector_of(b));
    v[Feature::DistanceD] = manhattan(w, sq::d1);
    v[Feature::DistanceP] = manhattan(w, b);
    v[Feature::Parity] = v[Feature::DistanceP] % 2;
    v[Feature::Adjacent] = v[Feature::DistanceP] == 1;
    v[Feature::Trapped] = std::find(kWhiteTraps.begin(), kWhiteTraps.end(), b) != kWhiteTraps.end();

    // Some square from rank 7 up on a shortest white route that White reaches
    // first. A white piece already standing there has crossed.
    const int total = from_w[sq::d9.index()];
    bool cross = w.rank() >= 6;
    for (int file = 0; file < Square::kFiles && !cross; ++file) {
        const Square s(file, 6);
        const int to_s = from_w[s.index()];
        if (to_s < 0) continue;
        const int rest = piece_distances(wp.kind, s)[sq::d9.index()];
        if (to_s + rest != total) continue;
        const int black_to_s = from_b[s.index()];
        cross = black_to_s < 0 || to_s < black_to_s;
    }
    v[Feature::CanCross] = cross;
    return v;
}

std::string_view label_name(Label l) {
    switch (l) {
        case Label::WhiteWin: return "white";
        case Label::BlackWin: return "black";
        case Label::Draw: return "draw";
    }
    return "?";
}

std::optional<Label> label_from_name(std::string_view name) {
    for (Label l : {Label::WhiteWin, Label::BlackWin, Label::Draw})
        if (label_name(l) == name) return l;
    return std::nullopt;
}

Label label_of(Value v) {
    switch (v) {
        case Value::Win: return Label::WhiteWin;
        case Value::Loss: return Label::BlackWin;
        case Value::Draw: return Label::Draw;
        case Value::Invalid: break;
    }
    throw Error(ErrorKind::Validation, "invalid entry has no label");
}

std::vector<LabeledExample> examples_from(const Tablebase& tb) {
    if (tb.partition().piece_count() != 2) throw Error(ErrorKind::Validation, "examples need a 2-piece partition");
    std::vector<LabeledExample> out;
    for (std::uint64_t i = 0; i < tb.size(); ++i) {
        const Entry e = tb.at(i);
        if (e.value == Value::Invalid) continue;
        const Position pos = *tb.indexer().unindex(i);
        out.push_back({pos, extract_features(pos), label_of(e.value)});
    }
    return out;
}

std::string to_text(const LabeledExample& e) {
    return to_text(e.position) + "\t" + to_text(e.features) + "\t" + std::string(label_name(e.label));
}

std::uint64_t partition_draw_census(const Tablebase& tb) {
    std::uint64_t n = 0;
    for (std::uint16_t raw : tb.raw())
        if (Entry::decode(raw).value == Value::Draw) ++n;
    return n;
}

}  // namespace dsq
