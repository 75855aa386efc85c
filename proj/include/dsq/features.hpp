#pragma once

#include "dsq/rules.hpp"
#include "dsq/tablebase.hpp"

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dsq {

// Declaration order is the tie-break order for tree induction.
enum class Feature : std::uint8_t {
    Closest,
    UnopposedW,
    UnopposedB,
    SectorW,
    SectorB,
    DistanceD,
    DistanceP,
    Parity,
    Adjacent,
    Trapped,
    CanCross,
};

inline constexpr int kFeatureCount = 11;
inline constexpr std::array<Feature, kFeatureCount> kAllFeatures = {
    Feature::Closest,   Feature::UnopposedW, Feature::UnopposedB, Feature::SectorW,
    Feature::SectorB,   Feature::DistanceD,  Feature::DistanceP,  Feature::Parity,
    Feature::Adjacent,  Feature::Trapped,    Feature::CanCross};

// closest: 0 white, 1 black. sector: 0 top, 1 mid, 2 bot. Booleans 0/1.
enum class Sector : std::uint8_t { Top, Mid, Bot };

std::string_view feature_name(Feature f);
std::optional<Feature> feature_from_name(std::string_view name);
// distance_d and distance_p are split by thresholds, the rest by value.
bool is_numeric(Feature f);
// Values a categorical feature can take, in branch order.
std::vector<int> feature_domain(Feature f);
std::string feature_value_name(Feature f, int value);
// Throws ParseError for a value outside the feature's range.
int parse_feature_value(Feature f, std::string_view text);

struct FeatureVector {
    std::array<int, kFeatureCount> values{};

    int operator[](Feature f) const { return values[static_cast<std::size_t>(f)]; }
    int& operator[](Feature f) { return values[static_cast<std::size_t>(f)]; }
    bool operator==(const FeatureVector&) const = default;
};

// Comma-separated values in declaration order.
std::string to_text(const FeatureVector& v);

// Moves needed by `kind` to walk from `from` to `to` on an empty board without
// passing through either den. Rats swim; tigers and lions use leaps. -1 if
// unreachable.
int empty_board_distance(PieceKind kind, Square from, Square to);

// Requires exactly one piece per side and White to move.
FeatureVector extract_features(const Position& pos);

enum class Label : std::uint8_t { WhiteWin, BlackWin, Draw };

std::string_view label_name(Label l);  // "white", "black", "draw"
std::optional<Label> label_from_name(std::string_view name);
Label label_of(Value v);

struct LabeledExample {
    Position position;
    FeatureVector features;
    Label label;
};

// Every valid entry of a 2-piece tablebase.
std::vector<LabeledExample> examples_from(const Tablebase& tb);
// "<position>\t<features>\t<label>"
std::string to_text(const LabeledExample& e);

std::uint64_t partition_draw_census(const Tablebase& tb);

}  // namespace dsq
