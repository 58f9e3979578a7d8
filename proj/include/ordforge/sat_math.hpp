// Copyright (c) 2026 The ordforge developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef ORDFORGE_SAT_MATH_HPP
#define ORDFORGE_SAT_MATH_HPP

#include <ordforge/util.hpp>

#include <compare>
#include <cstdint>
#include <string>

namespace ordforge {

//! Halving and difficulty-adjustment calendar. The cycle length is always the
//! least common multiple of the two periods, and the total supply is the exact
//! sum of per-block subsidies until the subsidy shifts down to zero. Values are
//! injectable so tests can run scaled-down calendars; defaults are mainnet.
struct NetworkParams {
    std::uint64_t subsidy_interval;  //!< blocks between subsidy halvings
    std::uint64_t difficulty_period; //!< blocks between difficulty adjustments
    std::uint64_t cycle_blocks;      //!< lcm(difficulty_period, subsidy_interval)
    std::uint64_t initial_subsidy;   //!< sats per block at height 0
    std::uint64_t supply;            //!< total sats ever subsidized

    static NetworkParams Mainnet();
    static NetworkParams Toy();
    static NetworkParams Custom(std::uint64_t subsidy_interval,
                                std::uint64_t difficulty_period,
                                std::uint64_t initial_subsidy);

    //! First height whose subsidy is zero.
    std::uint64_t SubsidizedHeights() const;

    bool operator==(const NetworkParams&) const = default;
};

//! Absolute satoshi index, 0 <= n < supply.
struct Sat {
    std::uint64_t n = 0;
    auto operator<=>(const Sat&) const = default;
};

//! Position of a sat on the halving/difficulty calendar.
struct Degree {
    std::uint64_t cycle;
    std::uint64_t epoch_offset;  //!< blocks since the last halving
    std::uint64_t period_offset; //!< blocks since the last difficulty adjustment
    std::uint64_t block_offset;  //!< sat index within its block

    bool operator==(const Degree&) const = default;
};

enum class Rarity {
    Common,
    Uncommon,
    Rare,
    Epic,
    Legendary,
    Mythic,
};

const char* RarityName(Rarity r);

std::uint64_t SubsidyAtHeight(const NetworkParams& params, std::uint64_t height);

//! Cumulative subsidy of all blocks below `height`. Valid for heights up to
//! and including the first unsubsidized one (where it returns the full
//! supply); beyond that it throws std::out_of_range.
std::uint64_t FirstSatOfHeight(const NetworkParams& params, std::uint64_t height);

//! Block containing the sat plus the sat's offset within that block.
struct SatPosition {
    std::uint64_t height;
    std::uint64_t offset;
};
SatPosition PositionOf(const NetworkParams& params, Sat s);

std::string SatToDecimal(const NetworkParams& params, Sat s);
Degree SatToDegree(const NetworkParams& params, Sat s);
std::string RenderDegree(const Degree& d);
std::string SatToPercentile(const NetworkParams& params, Sat s);
std::string SatToName(const NetworkParams& params, Sat s);
Rarity RarityOf(const NetworkParams& params, Sat s);

//! Accepts integer, decimal (HEIGHT.OFFSET), degree, or name notation and
//! returns the unique sat that renders back to the input.
Sat ParseNotation(const NetworkParams& params, std::string_view text);

} // namespace ordforge

#endif // ORDFORGE_SAT_MATH_HPP
