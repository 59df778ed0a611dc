#include "poasim/amount.hpp"

#include "poasim/errors.hpp"

#include <algorithm>
#include <boost/multiprecision/cpp_int.hpp>
#include <numeric>
#include <stdexcept>

namespace poasim {

namespace {

using boost::multiprecision::uint256_t;

uint256_t widen(u128 v) {
    uint256_t out = static_cast<std::uint64_t>(v >> 64);
    out <<= 64;
    out |= static_cast<std::uint64_t>(v);
    return out;
}

u128 narrow(const uint256_t& v) {
    if (v >> 128 != 0) throw std::logic_error("mul_div: result exceeds 128 bits");
    const auto hi = static_cast<std::uint64_t>(v >> 64);
    const auto lo = static_cast<std::uint64_t>(v & uint256_t{0xFFFF'FFFF'FFFF'FFFFULL});
    return (u128{hi} << 64) | lo;
}

// Largest-remainder apportionment given per-target floor parts and
// remainders. Ties keep declared order (stable sort).
std::vector<TokenAmount> apportion(std::vector<u128> floors, const std::vector<uint256_t>& remainders,
                                   u128 leftover) {
    std::vector<std::size_t> order(floors.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return remainders[a] > remainders[b]; });
    for (std::size_t i = 0; leftover > 0; ++i, --leftover) floors[order[i]] += 1;

    std::vector<TokenAmount> out;
    out.reserve(floors.size());
    for (u128 f : floors) out.push_back(TokenAmount::from_units(f));
    return out;
}

}  // namespace

std::string u128_to_string(u128 value) {
    if (value == 0) return "0";
    std::string out;
    while (value > 0) {
        out.push_back(static_cast<char>('0' + static_cast<int>(value % 10)));
        value /= 10;
    }
    std::reverse(out.begin(), out.end());
    return out;
}

std::optional<u128> u128_parse(std::string_view digits) {
    if (digits.empty()) return std::nullopt;
    constexpr u128 kMax = ~u128{0};
    u128 value = 0;
    for (char c : digits) {
        if (c < '0' || c > '9') return std::nullopt;
        const auto d = static_cast<unsigned>(c - '0');
        if (value > (kMax - d) / 10) return std::nullopt;
        value = value * 10 + d;
    }
    return value;
}

std::optional<TokenAmount> TokenAmount::parse(std::string_view text) {
    const auto dot = text.find('.');
    const std::string_view whole = text.substr(0, dot);
    std::string_view frac = dot == std::string_view::npos ? std::string_view{} : text.substr(dot + 1);
    if (dot != std::string_view::npos && frac.empty()) return std::nullopt;
    if (frac.size() > kDecimals) return std::nullopt;

    const auto w = u128_parse(whole);
    if (!w) return std::nullopt;
    u128 f = 0;
    if (!frac.empty()) {
        auto parsed = u128_parse(frac);
        if (!parsed) return std::nullopt;
        f = *parsed;
        for (std::size_t i = frac.size(); i < kDecimals; ++i) f *= 10;
    }
    if (*w > (~u128{0} - f) / kUnitsPerToken) return std::nullopt;
    return TokenAmount{*w * kUnitsPerToken + f};
}

std::string TokenAmount::to_string() const { return u128_to_string(raw_); }

std::string TokenAmount::to_decimal() const {
    std::string out = u128_to_string(raw_ / kUnitsPerToken);
    std::string frac = u128_to_string(raw_ % kUnitsPerToken);
    if (frac == "0") return out;
    frac.insert(0, kDecimals - frac.size(), '0');
    while (frac.back() == '0') frac.pop_back();
    return out + "." + frac;
}

double TokenAmount::to_tokens_double() const {
    return static_cast<double>(raw_ / kUnitsPerToken) +
           static_cast<double>(raw_ % kUnitsPerToken) / 1e18;
}

TokenAmount& TokenAmount::operator+=(TokenAmount rhs) {
    if (raw_ > ~u128{0} - rhs.raw_) throw std::logic_error("TokenAmount overflow");
    raw_ += rhs.raw_;
    return *this;
}

TokenAmount& TokenAmount::operator-=(TokenAmount rhs) {
    if (rhs.raw_ > raw_) throw std::logic_error("TokenAmount underflow");
    raw_ -= rhs.raw_;
    return *this;
}

u128 mul_div(u128 a, u128 b, u128 c) {
    if (c == 0) throw std::logic_error("mul_div: division by zero");
    return narrow(widen(a) * widen(b) / widen(c));
}

std::vector<TokenAmount> split(TokenAmount amount, std::span<const std::uint32_t> per_mille) {
    std::uint64_t total = 0;
    for (auto s : per_mille) total += s;
    if (total != 1000) {
        throw ProtocolError(Errc::BadShares, "shares sum to " + std::to_string(total) + " per-mille, expected 1000");
    }
    const uint256_t wide = widen(amount.units());
    std::vector<u128> floors;
    std::vector<uint256_t> remainders;
    u128 assigned = 0;
    for (auto s : per_mille) {
        const uint256_t num = wide * s;
        floors.push_back(narrow(num / 1000));
        remainders.push_back(num % 1000);
        assigned += floors.back();
    }
    return apportion(std::move(floors), remainders, amount.units() - assigned);
}

std::vector<TokenAmount> split_weighted(TokenAmount amount, std::span<const u128> weights) {
    uint256_t total = 0;
    for (auto w : weights) total += widen(w);
    if (total == 0) throw ProtocolError(Errc::BadShares, "all weights are zero");
    const uint256_t wide = widen(amount.units());
    std::vector<u128> floors;
    std::vector<uint256_t> remainders;
    u128 assigned = 0;
    for (auto w : weights) {
        const uint256_t num = wide * widen(w);
        floors.push_back(narrow(num / total));
        remainders.push_back(num % total);
        assigned += floors.back();
    }
    return apportion(std::move(floors), remainders, amount.units() - assigned);
}

}  // namespace poasim
