// Copyright (c) 2026 The ordforge developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <ordforge/sat_math.hpp>

#include <algorithm>
#include <bit>
#include <charconv>
#include <numeric>
#include <stdexcept>

namespace ordforge {

namespace {

// UTF-8 degree notation glyphs.
constexpr std::string_view SYM_CYCLE = "\xC2\xB0";         // °
constexpr std::string_view SYM_EPOCH = "\xE2\x80\xB2";     // ′
constexpr std::string_view SYM_PERIOD = "\xE2\x80\xB3";    // ″
constexpr std::string_view SYM_BLOCK = "\xE2\x80\xB4";     // ‴

std::uint64_t EpochCount(std::uint64_t initial_subsidy)
{
    return static_cast<std::uint64_t>(std::bit_width(initial_subsidy));
}

std::uint64_t ComputeSupply(std::uint64_t subsidy_interval, std::uint64_t initial_subsidy)
{
    std::uint64_t total = 0;
    for (std::uint64_t epoch = 0; epoch < EpochCount(initial_subsidy); ++epoch) {
        total += subsidy_interval * (initial_subsidy >> epoch);
    }
    return total;
}

} // namespace

NetworkParams NetworkParams::Mainnet()
{
    return Custom(210'000, 2'016, 5'000'000'000);
}

NetworkParams NetworkParams::Toy()
{
    return Custom(12, 8, 1'000);
}

NetworkParams NetworkParams::Custom(std::uint64_t subsidy_interval,
                                    std::uint64_t difficulty_period,
                                    std::uint64_t initial_subsidy)
{
    if (subsidy_interval == 0 || difficulty_period == 0 || initial_subsidy == 0) {
        throw std::invalid_argument("network params: intervals and subsidy must be positive");
    }
    NetworkParams p;
    p.subsidy_interval = subsidy_interval;
    p.difficulty_period = difficulty_period;
    p.cycle_blocks = std::lcm(subsidy_interval, difficulty_period);
    p.initial_subsidy = initial_subsidy;
    p.supply = ComputeSupply(subsidy_interval, initial_subsidy);
    return p;
}

std::uint64_t NetworkParams::SubsidizedHeights() const
{
    return subsidy_interval * EpochCount(initial_subsidy);
}

const char* RarityName(Rarity r)
{
    switch (r) {
    case Rarity::Common: return "common";
    case Rarity::Uncommon: return "uncommon";
    case Rarity::Rare: return "rare";
    case Rarity::Epic: return "epic";
    case Rarity::Legendary: return "legendary";
    case Rarity::Mythic: return "mythic";
    }
    return "common";
}

std::uint64_t SubsidyAtHeight(const NetworkParams& params, std::uint64_t height)
{
    std::uint64_t epoch = height / params.subsidy_interval;
    if (epoch >= 64) return 0;
    return params.initial_subsidy >> epoch;
}

std::uint64_t FirstSatOfHeight(const NetworkParams& params, std::uint64_t height)
{
    if (height > params.SubsidizedHeights()) {
        throw std::out_of_range("height beyond the final subsidized block");
    }
    std::uint64_t total = 0;
    std::uint64_t epoch_start = 0;
    std::uint64_t subsidy = params.initial_subsidy;
    while (subsidy > 0 && epoch_start + params.subsidy_interval <= height) {
        total += params.subsidy_interval * subsidy;
        epoch_start += params.subsidy_interval;
        subsidy >>= 1;
    }
    total += (height - epoch_start) * subsidy;
    return total;
}

SatPosition PositionOf(const NetworkParams& params, Sat s)
{
    if (s.n >= params.supply) throw std::out_of_range("sat beyond supply");
    std::uint64_t cum = 0;
    std::uint64_t epoch_start = 0;
    std::uint64_t subsidy = params.initial_subsidy;
    while (subsidy > 0) {
        std::uint64_t epoch_sats = params.subsidy_interval * subsidy;
        if (s.n < cum + epoch_sats) {
            std::uint64_t into = s.n - cum;
            return {epoch_start + into / subsidy, into % subsidy};
        }
        cum += epoch_sats;
        epoch_start += params.subsidy_interval;
        subsidy >>= 1;
    }
    throw std::out_of_range("sat beyond supply");
}

std::string SatToDecimal(const NetworkParams& params, Sat s)
{
    SatPosition pos = PositionOf(params, s);
    return std::to_string(pos.height) + "." + std::to_string(pos.offset);
}

Degree SatToDegree(const NetworkParams& params, Sat s)
{
    SatPosition pos = PositionOf(params, s);
    Degree d;
    d.cycle = pos.height / params.cycle_blocks;
    d.epoch_offset = pos.height % params.subsidy_interval;
    d.period_offset = pos.height % params.difficulty_period;
    d.block_offset = pos.offset;
    return d;
}

std::string RenderDegree(const Degree& d)
{
    std::string out;
    out += std::to_string(d.cycle);
    out += SYM_CYCLE;
    out += std::to_string(d.epoch_offset);
    out += SYM_EPOCH;
    out += std::to_string(d.period_offset);
    out += SYM_PERIOD;
    out += std::to_string(d.block_offset);
    out += SYM_BLOCK;
    return out;
}

std::string SatToPercentile(const NetworkParams& params, Sat s)
{
    if (s.n >= params.supply) throw std::out_of_range("sat beyond supply");
    double pct = (static_cast<double>(s.n) * 100.0) / static_cast<double>(params.supply - 1);
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), pct);
    return std::string(buf, ptr) + "%";
}

std::string SatToName(const NetworkParams& params, Sat s)
{
    if (s.n >= params.supply) throw std::out_of_range("sat beyond supply");
    std::uint64_t x = params.supply - s.n;
    std::string name;
    while (x > 0) {
        name.push_back(static_cast<char>('a' + (x - 1) % 26));
        x = (x - 1) / 26;
    }
    std::reverse(name.begin(), name.end());
    return name;
}

Rarity RarityOf(const NetworkParams& params, Sat s)
{
    if (s.n == 0) return Rarity::Mythic;
    SatPosition pos = PositionOf(params, s);
    if (pos.offset != 0) return Rarity::Common;
    if (pos.height % params.cycle_blocks == 0) return Rarity::Legendary;
    if (pos.height % params.subsidy_interval == 0) return Rarity::Epic;
    if (pos.height % params.difficulty_period == 0) return Rarity::Rare;
    return Rarity::Uncommon;
}

namespace {

Sat ParseDecimalNotation(const NetworkParams& params, std::string_view text)
{
    std::size_t dot = text.find('.');
    std::uint64_t height = ParseU64(text.substr(0, dot), "decimal height");
    std::uint64_t offset = ParseU64(text.substr(dot + 1), "decimal offset");
    if (height >= params.SubsidizedHeights()) {
        throw ParseError("decimal height: beyond the final subsidized block");
    }
    if (offset >= SubsidyAtHeight(params, height)) {
        throw ParseError("decimal offset: beyond the block subsidy");
    }
    return Sat{FirstSatOfHeight(params, height) + offset};
}

//! Splits "A<sym>rest" at the glyph; throws naming `field` when absent.
std::string_view TakeComponent(std::string_view& text, std::string_view sym, const char* field)
{
    std::size_t at = text.find(sym);
    if (at == std::string_view::npos) {
        throw ParseError(std::string(field) + ": missing degree symbol");
    }
    std::string_view component = text.substr(0, at);
    text.remove_prefix(at + sym.size());
    return component;
}

Sat ParseDegreeNotation(const NetworkParams& params, std::string_view raw)
{
    // Display output may pad with spaces; strip them before parsing.
    std::string text;
    for (char c : raw) {
        if (c != ' ') text.push_back(c);
    }
    std::string_view rest = text;
    std::uint64_t cycle = ParseU64(TakeComponent(rest, SYM_CYCLE, "degree cycle"), "degree cycle");
    std::uint64_t epoch_off = ParseU64(TakeComponent(rest, SYM_EPOCH, "degree epoch_offset"), "degree epoch_offset");
    std::uint64_t period_off = ParseU64(TakeComponent(rest, SYM_PERIOD, "degree period_offset"), "degree period_offset");
    std::uint64_t block_off = ParseU64(TakeComponent(rest, SYM_BLOCK, "degree block_offset"), "degree block_offset");
    if (!rest.empty()) throw ParseError("degree: trailing characters");
    if (epoch_off >= params.subsidy_interval) throw ParseError("degree epoch_offset: out of range");
    if (period_off >= params.difficulty_period) throw ParseError("degree period_offset: out of range");

    // The two offsets pin the height within a cycle; scan the halving
    // boundaries for the residue that also matches the difficulty period.
    std::uint64_t height_in_cycle = 0;
    bool found = false;
    for (std::uint64_t k = 0; k * params.subsidy_interval < params.cycle_blocks; ++k) {
        std::uint64_t h = k * params.subsidy_interval + epoch_off;
        if (h < params.cycle_blocks && h % params.difficulty_period == period_off) {
            height_in_cycle = h;
            found = true;
            break;
        }
    }
    if (!found) throw ParseError("degree: epoch and period offsets are inconsistent");

    std::uint64_t height = cycle * params.cycle_blocks + height_in_cycle;
    if (height >= params.SubsidizedHeights()) throw ParseError("degree cycle: beyond the final subsidized block");
    if (block_off >= SubsidyAtHeight(params, height)) throw ParseError("degree block_offset: beyond the block subsidy");
    return Sat{FirstSatOfHeight(params, height) + block_off};
}

Sat ParseNameNotation(const NetworkParams& params, std::string_view text)
{
    std::uint64_t x = 0;
    for (char c : text) {
        if (c < 'a' || c > 'z') throw ParseError("name: characters must be a-z");
        std::uint64_t digit = static_cast<std::uint64_t>(c - 'a') + 1;
        if (x > (params.supply - digit) / 26) throw ParseError("name: beyond supply");
        x = x * 26 + digit;
    }
    if (x == 0) throw ParseError("name: empty");
    return Sat{params.supply - x};
}

} // namespace

Sat ParseNotation(const NetworkParams& params, std::string_view text)
{
    if (text.empty()) throw ParseError("notation: empty");
    if (text.find(SYM_CYCLE) != std::string_view::npos) return ParseDegreeNotation(params, text);
    if (text.find('.') != std::string_view::npos) return ParseDecimalNotation(params, text);
    if (text[0] >= '0' && text[0] <= '9') {
        std::uint64_t n = ParseU64(text, "integer");
        if (n >= params.supply) throw ParseError("integer: sat beyond supply");
        return Sat{n};
    }
    return ParseNameNotation(params, text);
}

} // namespace ordforge
