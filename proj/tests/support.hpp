#pragma once

#include "poasim/amount.hpp"
#include "poasim/errors.hpp"

#include <doctest.h>

#include <optional>
#include <utility>

namespace testing {

/// The ProtocolError code raised by `f`, or nullopt if it returned normally.
template <class F>
std::optional<poasim::Errc> error_of(F&& f) {
    try {
        std::forward<F>(f)();
    } catch (const poasim::ProtocolError& e) {
        return e.code();
    }
    return std::nullopt;
}

inline poasim::TokenAmount r1(std::uint64_t whole) { return poasim::TokenAmount::from_tokens(whole); }
inline poasim::TokenAmount units(poasim::u128 u) { return poasim::TokenAmount::from_units(u); }

// 10^18 as a 128-bit value, for hand-built constants.
inline constexpr poasim::u128 kUnit = 1'000'000'000'000'000'000ULL;

}  // namespace testing

template <>
struct doctest::StringMaker<poasim::TokenAmount> {
    static String convert(const poasim::TokenAmount& a) { return a.to_string().c_str(); }
};
