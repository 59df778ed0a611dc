#include "poasim/ledger.hpp"
#include "support.hpp"

#include <doctest.h>

#include <array>
#include <random>

using namespace poasim;
using testing::error_of;
using testing::kUnit;
using testing::r1;
using testing::units;

TEST_CASE("decimal parsing and formatting") {
    CHECK(TokenAmount::parse("1575.19")->units() == u128{157519} * u128{10'000'000'000'000'000ULL});
    CHECK(TokenAmount::parse("0.000000000000000001")->units() == 1);
    CHECK(TokenAmount::parse("42")->units() == 42 * kUnit);
    CHECK_FALSE(TokenAmount::parse("0.0000000000000000001"));  // 19 fractional digits
    CHECK_FALSE(TokenAmount::parse("-1"));
    CHECK_FALSE(TokenAmount::parse("1.2.3"));
    CHECK_FALSE(TokenAmount::parse(""));

    CHECK(units(525 * kUnit + 63333333333333333ULL).to_decimal() == "525.063333333333333333");
    CHECK(r1(1000).to_decimal() == "1000");
    CHECK(TokenAmount{}.to_decimal() == "0");
    CHECK(kHardCap.to_string() == "161803398000000000000000000");
}

TEST_CASE("checked arithmetic refuses to wrap") {
    CHECK_THROWS_AS(units(1) - units(2), std::logic_error);
    CHECK_THROWS_AS(units(~u128{0}) + units(1), std::logic_error);
}

TEST_CASE("mul_div keeps a 256-bit intermediate") {
    const u128 cap = kHardCap.units();
    // cap * cap overflows 128 bits; the quotient does not.
    CHECK(mul_div(cap, cap, cap) == cap);
    CHECK(mul_div(cap, 289, 1000) == u128{46761182022} * u128{1'000'000'000'000'000ULL});
    // 360 of 1080 epoch-credits of an ND cap, value computed with arbitrary precision integers.
    const u128 nd = u128{157519} * u128{10'000'000'000'000'000ULL};
    CHECK(mul_div(nd, 360 * 255, 1080 * 255) == u128{525} * kUnit + 63333333333333333ULL);
    CHECK_THROWS_AS(mul_div(1, 1, 0), std::logic_error);
}

TEST_CASE("per-mille split examples") {
    const std::array<std::uint32_t, 3> nd_routing{500, 200, 300};
    const auto parts = split(r1(100), nd_routing);
    CHECK(parts == std::vector{r1(50), r1(20), r1(30)});

    const std::array<std::uint32_t, 2> halves{500, 500};
    CHECK(split(units(1), halves) == std::vector{units(1), units(0)});

    const std::array<std::uint32_t, 2> bad{500, 499};
    CHECK(error_of([&] { split(r1(1), bad); }) == Errc::BadShares);
}

TEST_CASE("split parts stay within one unit of the exact share and re-sum") {
    std::mt19937_64 gen(2024);
    std::uniform_int_distribution<std::uint64_t> word;
    const std::array<std::uint32_t, 5> shares{267, 75, 346, 173, 139};
    for (int trial = 0; trial < 2000; ++trial) {
        const u128 amount = (u128{word(gen)} << 40) ^ word(gen);
        const auto parts = split(units(amount), shares);
        u128 total = 0;
        for (std::size_t i = 0; i < parts.size(); ++i) {
            const u128 exact_floor = amount / 1000 * shares[i] + amount % 1000 * shares[i] / 1000;
            CHECK(parts[i].units() >= exact_floor);
            CHECK(parts[i].units() <= exact_floor + 1);
            total += parts[i].units();
        }
        CHECK(total == amount);
    }
}

TEST_CASE("weighted split hands leftovers to the largest remainders") {
    const std::array<u128, 3> w{1, 1, 1};
    CHECK(split_weighted(units(10), w) == std::vector{units(4), units(3), units(3)});
    const std::array<u128, 2> w2{1, 2};
    CHECK(split_weighted(units(3), w2) == std::vector{units(1), units(2)});
    const std::array<u128, 2> zero{0, 0};
    CHECK(error_of([&] { split_weighted(units(3), zero); }) == Errc::BadShares);
}
