#pragma once

#include "dsq/rules.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace dsq {

// Settings shared by the command-line tools. A config file holds one
// "key = value" per line; '#' starts a comment.
//
//   water_rat_captures_land_rat  bool    true
//   land_rat_captures_water_rat  bool    true
//   water_rat_captures_elephant  bool    false
//   zobrist_seed                 u64     Zobrist::kDefaultSeed
//   tt_size                      entries 4194304 (rounded down to a power of two)
//   threads                      int     1
//   tb_dir                       path    tablebases
//   eval                         name    default
struct Config {
    RuleFlags flags;
    std::uint64_t zobrist_seed;
    std::size_t tt_size = std::size_t{1} << 22;
    int threads = 1;
    std::filesystem::path tb_dir = "tablebases";
    std::string eval = "default";

    Config();

    // Throws ParseError for unknown keys and malformed values.
    void set(std::string_view key, std::string_view value);
    void merge_text(std::string_view text);
    void merge_file(const std::filesystem::path& file);

    // Canonical "key=value" lines, one per setting.
    std::string to_text() const;
};

std::vector<std::string_view> config_keys();

}  // namespace dsq
