#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace poasim {

using u128 = unsigned __int128;

/// Token quantity in indivisible base units (1 R1 = 10^18 units).
/// Arithmetic is integer-only; subtraction below zero and overflow throw
/// std::logic_error since either one means an accounting bug upstream.
class TokenAmount {
public:
    static constexpr std::uint64_t kDecimals = 18;
    static constexpr u128 kUnitsPerToken = u128{1'000'000'000'000'000'000ULL};

    constexpr TokenAmount() = default;

    static constexpr TokenAmount from_units(u128 units) { return TokenAmount{units}; }
    static constexpr TokenAmount from_tokens(std::uint64_t whole) {
        return TokenAmount{u128{whole} * kUnitsPerToken};
    }
    /// Exact decimal parse, e.g. "1575.19". At most 18 fractional digits.
    static std::optional<TokenAmount> parse(std::string_view text);

    constexpr u128 units() const { return raw_; }
    constexpr bool is_zero() const { return raw_ == 0; }

    /// Base-unit integer, e.g. "1575190000000000000000".
    std::string to_string() const;
    /// Human readable decimal with trailing zeros trimmed, e.g. "1575.19".
    std::string to_decimal() const;
    /// Lossy conversion for analytics only.
    double to_tokens_double() const;

    TokenAmount& operator+=(TokenAmount rhs);
    TokenAmount& operator-=(TokenAmount rhs);
    friend TokenAmount operator+(TokenAmount a, TokenAmount b) { return a += b; }
    friend TokenAmount operator-(TokenAmount a, TokenAmount b) { return a -= b; }

    friend constexpr auto operator<=>(TokenAmount, TokenAmount) = default;

private:
    constexpr explicit TokenAmount(u128 raw) : raw_(raw) {}
    u128 raw_ = 0;
};

std::string u128_to_string(u128 value);
std::optional<u128> u128_parse(std::string_view digits);

/// floor(a * b / c) with a 256-bit intermediate. c must be non-zero and the
/// result must fit in 128 bits.
u128 mul_div(u128 a, u128 b, u128 c);

/// Split `amount` by per-mille shares. Each part is floor(amount*share/1000);
/// leftover units go one each to the largest fractional remainders, ties
/// resolved in declared order. Throws ProtocolError(BadShares) unless the
/// shares sum to exactly 1000.
std::vector<TokenAmount> split(TokenAmount amount, std::span<const std::uint32_t> per_mille);

/// Same remainder policy with arbitrary non-negative integer weights.
/// Throws ProtocolError(BadShares) if all weights are zero.
std::vector<TokenAmount> split_weighted(TokenAmount amount, std::span<const u128> weights);

}  // namespace poasim
