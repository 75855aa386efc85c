#include "dsq/config.hpp"

#include "dsq/errors.hpp"
#include "dsq/search.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace dsq {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

bool parse_bool(std::string_view key, std::string_view v) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ParseError(0, std::string(key) + " expects true or false, got '" + std::string(v) + "'");
}

template <typename T>
T parse_number(std::string_view key, std::string_view v) {
    T out{};
    int base = 10;
    if (v.size() > 2 && v[0] == '0' && (v[1] == 'x' || v[1] == 'X')) {
        v.remove_prefix(2);
        base = 16;
    }
    const auto [end, ec] = std::from_chars(v.data(), v.data() + v.size(), out, base);
    if (ec != std::errc() || end != v.data() + v.size())
        throw ParseError(0, std::string(key) + " expects a number, got '" + std::string(v) + "'");
    return out;
}

}  // namespace

Config::Config() : zobrist_seed(Zobrist::kDefaultSeed) {}

std::vector<std::string_view> config_keys() {
    return {"water_rat_captures_land_rat", "land_rat_captures_water_rat", "water_rat_captures_elephant",
            "zobrist_seed", "tt_size", "threads", "tb_dir", "eval"};
}

void Config::set(std::string_view key, std::string_view value) {
    value = trim(value);
    if (key == "water_rat_captures_land_rat") {
        flags.water_rat_captures_land_rat = parse_bool(key, value);
    } else if (key == "land_rat_captures_water_rat") {
        flags.land_rat_captures_water_rat = parse_bool(key, value);
    } else if (key == "water_rat_captures_elephant") {
        flags.water_rat_captures_elephant = parse_bool(key, value);
    } else if (key == "zobrist_seed") {
        zobrist_seed = parse_number<std::uint64_t>(key, value);
    } else if (key == "tt_size") {
        tt_size = parse_number<std::size_t>(key, value);
        if (tt_size < 2) throw ParseError(0, "tt_size must be at least 2");
    } else if (key == "threads") {
        threads = parse_number<int>(key, value);
        if (threads < 1) throw ParseError(0, "threads must be at least 1");
    } else if (key == "tb_dir") {
        if (value.empty()) throw ParseError(0, "tb_dir must not be empty");
        tb_dir = std::string(value);
    } else if (key == "eval") {
        try {
            evaluator_by_name(value);
        } catch (const Error&) {
            throw ParseError(0, "unknown evaluator '" + std::string(value) + "'");
        }
        eval = std::string(value);
    } else {
        throw ParseError(0, "unknown config key '" + std::string(key) + "'");
    }
}

void Config::merge_text(std::string_view text) {
    std::size_t pos = 0;
    int line_no = 0;
    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        const std::size_t line_start = pos;
        pos = end + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ParseError(line_start, "line " + std::to_string(line_no) + ": expected key = value");
        try {
            set(trim(line.substr(0, eq)), line.substr(eq + 1));
        } catch (const ParseError& e) {
            throw ParseError(line_start, "line " + std::to_string(line_no) + ": " + e.what());
        }
    }
}

void Config::merge_file(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw Error(ErrorKind::Io, "cannot read config " + file.string());
    std::stringstream buf;
    buf << in.rdbuf();
    merge_text(buf.str());
}

std::string Config::to_text() const {
    std::ostringstream out;
    auto b = [](bool v) { return v ? "true" : "false"; };
    out << "water_rat_captures_land_rat=" << b(flags.water_rat_captures_land_rat) << '\n'
        << "land_rat_captures_water_rat=" << b(flags.land_rat_captures_water_rat) << '\n'
        << "water_rat_captures_elephant=" << b(flags.water_rat_captures_elephant) << '\n'
        << "zobrist_seed=" << zobrist_seed << '\n'
        << "tt_size=" << tt_size << '\n'
        << "threads=" << threads << '\n'
        << "tb_dir=" << tb_dir.string() << '\n'
        << "eval=" << eval << '\n';
    return out.str();
}

}  // namespace dsq
