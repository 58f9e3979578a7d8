// Copyright (c) 2026 The ordforge developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <ordforge/sat_math.hpp>

#include <doctest.h>

#include <map>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

using namespace ordforge;

namespace {

//! Brute-force position oracle: walk blocks until the sat's block is found.
SatPosition NaivePosition(const NetworkParams& params, Sat s)
{
    std::uint64_t acc = 0;
    for (std::uint64_t h = 0;; ++h) {
        std::uint64_t subsidy = SubsidyAtHeight(params, h);
        REQUIRE(subsidy > 0);
        if (acc + subsidy > s.n) return SatPosition{h, s.n - acc};
        acc += subsidy;
    }
}

} // namespace

TEST_CASE("mainnet calendar constants")
{
    NetworkParams params = NetworkParams::Mainnet();
    CHECK(params.subsidy_interval == 210000);
    CHECK(params.difficulty_period == 2016);
    CHECK(params.cycle_blocks == 1260000);
    CHECK(params.cycle_blocks == std::lcm(params.subsidy_interval, params.difficulty_period));
    CHECK(params.initial_subsidy == 5000000000ULL);
    CHECK(params.supply == 2099999997690000ULL);
}

TEST_CASE("supply equals the brute-force subsidy sum")
{
    NetworkParams params = NetworkParams::Mainnet();
    std::uint64_t total = 0;
    std::uint64_t h = 0;
    while (SubsidyAtHeight(params, h) > 0) total += SubsidyAtHeight(params, h++);
    CHECK(total == params.supply);
    CHECK(h == params.SubsidizedHeights());
    CHECK(SubsidyAtHeight(params, h) == 0);
}

TEST_CASE("custom params recompute cycle and supply")
{
    NetworkParams params = NetworkParams::Custom(12, 8, 1000);
    CHECK(params.cycle_blocks == 24);
    std::uint64_t total = 0;
    for (std::uint64_t h = 0; SubsidyAtHeight(params, h) > 0; ++h) total += SubsidyAtHeight(params, h);
    CHECK(params.supply == total);
    CHECK(NetworkParams::Toy() == params);
}

TEST_CASE("subsidy halves on the interval and reaches zero")
{
    NetworkParams params = NetworkParams::Mainnet();
    CHECK(SubsidyAtHeight(params, 0) == 5000000000ULL);
    CHECK(SubsidyAtHeight(params, 209999) == 5000000000ULL);
    CHECK(SubsidyAtHeight(params, 210000) == 2500000000ULL);
    CHECK(SubsidyAtHeight(params, 420000) == 1250000000ULL);
    CHECK(SubsidyAtHeight(params, 6929999) == 1);
    CHECK(SubsidyAtHeight(params, 6930000) == 0);
    CHECK(SubsidyAtHeight(params, 210000ULL * 64) == 0);
}

TEST_CASE("first sat of height agrees with the running sum")
{
    NetworkParams params = NetworkParams::Mainnet();
    CHECK(FirstSatOfHeight(params, 0) == 0);
    CHECK(FirstSatOfHeight(params, 1) == 5000000000ULL);
    CHECK(FirstSatOfHeight(params, 210000) == 1050000000000000ULL);
    CHECK(FirstSatOfHeight(params, params.SubsidizedHeights()) == params.supply);
    CHECK_THROWS_AS(FirstSatOfHeight(params, params.SubsidizedHeights() + 1), std::out_of_range);
}

TEST_CASE("position matches the naive oracle on a small calendar")
{
    NetworkParams params = NetworkParams::Custom(5, 3, 64);
    for (std::uint64_t n = 0; n < params.supply; ++n) {
        SatPosition fast = PositionOf(params, Sat{n});
        SatPosition slow = NaivePosition(params, Sat{n});
        REQUIRE(fast.height == slow.height);
        REQUIRE(fast.offset == slow.offset);
    }
    CHECK_THROWS_AS(PositionOf(params, Sat{params.supply}), std::out_of_range);
}

TEST_CASE("worked mainnet sat renders every notation exactly")
{
    NetworkParams params = NetworkParams::Mainnet();
    Sat s{1938930000000000ULL};
    CHECK(SatToDecimal(params, s) == "792288.0");
    CHECK(RenderDegree(SatToDegree(params, s)) == "0°162288′0″0‴");
    CHECK(SatToPercentile(params, s) == "92.33000010156304%");
    CHECK(SatToName(params, s) == "acqgzfkezav");
    CHECK(RarityOf(params, s) == Rarity::Rare);
}

TEST_CASE("boundary sats on mainnet")
{
    NetworkParams params = NetworkParams::Mainnet();

    // The very first sat.
    CHECK(SatToDecimal(params, Sat{0}) == "0.0");
    CHECK(RenderDegree(SatToDegree(params, Sat{0})) == "0°0′0″0‴");
    CHECK(SatToPercentile(params, Sat{0}) == "0%");
    CHECK(SatToName(params, Sat{0}) == "nvtdijuwxlp");
    CHECK(RarityOf(params, Sat{0}) == Rarity::Mythic);

    // The very last sat: height 6929999, a one-sat block.
    Sat last{params.supply - 1};
    CHECK(SatToDecimal(params, last) == "6929999.0");
    CHECK(SatToName(params, last) == "a");
    CHECK(SatToPercentile(params, last) == "100%");
    Degree d = SatToDegree(params, last);
    CHECK(d.cycle == 5);
    CHECK(d.epoch_offset == 209999);
    CHECK(d.period_offset == 1007);
    CHECK(d.block_offset == 0);
    CHECK(RarityOf(params, last) == Rarity::Uncommon);
}

TEST_CASE("rarity thresholds on mainnet heights")
{
    NetworkParams params = NetworkParams::Mainnet();
    auto first = [&](std::uint64_t h) { return Sat{FirstSatOfHeight(params, h)}; };

    CHECK(RarityOf(params, first(0)) == Rarity::Mythic);
    CHECK(RarityOf(params, first(1)) == Rarity::Uncommon);
    CHECK(RarityOf(params, first(2016)) == Rarity::Rare);
    CHECK(RarityOf(params, first(210000)) == Rarity::Epic);
    CHECK(RarityOf(params, first(1260000)) == Rarity::Legendary);
    CHECK(RarityOf(params, Sat{first(1).n + 1}) == Rarity::Common);
    CHECK(RarityOf(params, Sat{first(1260000).n + 1}) == Rarity::Common);
}

TEST_CASE("rarity census on a scaled calendar")
{
    // interval 6, period 4 -> cycle 12; subsidy 32 16 8 4 2 1, 36 blocks total.
    NetworkParams params = NetworkParams::Custom(6, 4, 32);
    std::map<Rarity, std::uint64_t> census;
    for (std::uint64_t n = 0; n < params.supply; ++n) ++census[RarityOf(params, Sat{n})];

    std::uint64_t blocks = params.SubsidizedHeights();
    CHECK(blocks == 36);
    std::uint64_t legendary = 0, epic = 0, rare = 0, uncommon = 0;
    for (std::uint64_t h = 0; h < blocks; ++h) {
        if (h == 0) continue; // mythic
        if (h % params.cycle_blocks == 0) ++legendary;
        else if (h % params.subsidy_interval == 0) ++epic;
        else if (h % params.difficulty_period == 0) ++rare;
        else ++uncommon;
    }
    CHECK(census[Rarity::Mythic] == 1);
    CHECK(census[Rarity::Legendary] == legendary);
    CHECK(census[Rarity::Epic] == epic);
    CHECK(census[Rarity::Rare] == rare);
    CHECK(census[Rarity::Uncommon] == uncommon);
    CHECK(census[Rarity::Common] == params.supply - 1 - legendary - epic - rare - uncommon);
    // Exactly one sat per block is non-common.
    std::uint64_t named = 1 + legendary + epic + rare + uncommon;
    CHECK(named == blocks);
}

TEST_CASE("name notation is bijective base 26 over the remaining supply")
{
    NetworkParams params = NetworkParams::Mainnet();
    CHECK(SatToName(params, Sat{params.supply - 1}) == "a");
    CHECK(SatToName(params, Sat{params.supply - 2}) == "b");
    CHECK(SatToName(params, Sat{params.supply - 26}) == "z");
    CHECK(SatToName(params, Sat{params.supply - 27}) == "aa");
    CHECK(SatToName(params, Sat{params.supply - 28}) == "ab");
}

TEST_CASE("every notation parses back to the sat it came from")
{
    NetworkParams params = NetworkParams::Mainnet();
    std::mt19937_64 rng(42);
    std::uniform_int_distribution<std::uint64_t> dist(0, params.supply - 1);
    for (int i = 0; i < 10000; ++i) {
        Sat s{dist(rng)};
        CAPTURE(s.n);
        REQUIRE(ParseNotation(params, std::to_string(s.n)) == s);
        REQUIRE(ParseNotation(params, SatToDecimal(params, s)) == s);
        REQUIRE(ParseNotation(params, RenderDegree(SatToDegree(params, s))) == s);
        REQUIRE(ParseNotation(params, SatToName(params, s)) == s);
    }
}

TEST_CASE("degree notation round trips on a toy calendar too")
{
    NetworkParams params = NetworkParams::Toy();
    for (std::uint64_t n = 0; n < params.supply; n += 97) {
        Sat s{n};
        REQUIRE(ParseNotation(params, RenderDegree(SatToDegree(params, s))) == s);
        REQUIRE(ParseNotation(params, SatToDecimal(params, s)) == s);
        REQUIRE(ParseNotation(params, SatToName(params, s)) == s);
    }
}

TEST_CASE("malformed notations are rejected")
{
    NetworkParams params = NetworkParams::Mainnet();
    CHECK_THROWS_AS(ParseNotation(params, ""), ParseError);
    CHECK_THROWS_AS(ParseNotation(params, "12x34"), ParseError);
    CHECK_THROWS_AS(ParseNotation(params, "1.2.3"), ParseError);
    CHECK_THROWS_AS(ParseNotation(params, "ABC"), ParseError);            // names are lower case
    CHECK_THROWS_AS(ParseNotation(params, "nvtdijuwxlpa"), ParseError);   // past the first sat
    CHECK_THROWS_AS(ParseNotation(params, "99999999.0"), ParseError);
    CHECK_THROWS_AS(ParseNotation(params, "0.5000000000"), ParseError); // offset past block size
    CHECK_THROWS_AS(ParseNotation(params, std::to_string(params.supply)), ParseError);
}

TEST_CASE("percentile endpoints and midpoint digits")
{
    NetworkParams params = NetworkParams::Mainnet();
    CHECK(SatToPercentile(params, Sat{0}) == "0%");
    CHECK(SatToPercentile(params, Sat{params.supply - 1}) == "100%");
    // Every rendered percentile ends with % and parses as a number in [0, 100].
    std::mt19937_64 rng(9);
    std::uniform_int_distribution<std::uint64_t> dist(0, params.supply - 1);
    for (int i = 0; i < 100; ++i) {
        std::string pct = SatToPercentile(params, Sat{dist(rng)});
        REQUIRE(pct.back() == '%');
        double v = std::stod(pct.substr(0, pct.size() - 1));
        REQUIRE(v >= 0.0);
        REQUIRE(v <= 100.0);
    }
}
