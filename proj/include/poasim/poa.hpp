#pragma once

#include "poasim/ledger.hpp"
#include "poasim/licensing.hpp"

#include <array>
#include <cstdint>

namespace poasim {

/// Class-wide allocations as fractions of the hard cap.
TokenAmount gnd_allocation();        // 28.9%
TokenAmount mnd_allocation_total();  // 26.1%
TokenAmount nd_allocation_total();   // 45%

/// Per-license MND caps: the MND allocation split evenly, largest remainder.
std::vector<TokenAmount> mnd_caps(std::size_t count);

enum class ScheduleShape : std::uint8_t { Linear, Sigmoid };

/// Logistic vesting curve over whole credits. Zero before the cliff, then
/// the logistic rescaled so that it reads 0 at the cliff and 1 at the span.
struct SigmoidParams {
    double cliff = 210.0;  // 7 months
    double midpoint = 540.0;
    double steepness = 0.02;
};

/// Cumulative emission as a function of accumulated byte-scale credits.
struct EmissionSchedule {
    LicenseClass cls = LicenseClass::Nd;
    ScheduleShape shape = ScheduleShape::Linear;
    std::uint32_t credit_span = kNdCreditSpan;
    SigmoidParams sigmoid;

    static EmissionSchedule for_class(LicenseClass cls);

    std::uint64_t target_scaled() const { return std::uint64_t{credit_span} * kByteScale; }

    /// Vested fraction in units of 1e-18, non-decreasing, exactly 1e18 at
    /// the span.
    std::uint64_t vested_fraction(std::uint64_t credits_scaled) const;

    /// Tokens vested by `credits_scaled`; equals `allocation` exactly at or
    /// beyond the span.
    TokenAmount cumulative(TokenAmount allocation, std::uint64_t credits_scaled) const;
};

inline constexpr std::uint64_t kFractionOne = 1'000'000'000'000'000'000ULL;

enum class AccrualStatus : std::uint8_t { Minted, Complete };

struct Accrual {
    TokenAmount minted;
    std::uint32_t credits_applied = 0;
    AccrualStatus status = AccrualStatus::Minted;
    bool completed_now = false;
    /// Pool breakdown when the license is the GND, else all zero.
    std::array<TokenAmount, kAllPools.size()> pool_credits{};
};

/// GND mint routing, per-mille LP/MARKETING/GRANTS/CSR/RESERVE. The last
/// 13.9% has no published destination and is parked in RESERVE.
inline constexpr std::array<std::uint32_t, 5> kGndRouting = {267, 75, 346, 173, 139};
inline constexpr std::array<PoolId, 5> kGndRoutingPools = {PoolId::Lp, PoolId::Marketing, PoolId::Grants,
                                                           PoolId::Csr, PoolId::Reserve};

/// Mints a GND epoch reward straight into the foundation pools. Returns the
/// per-pool amounts indexed by PoolId.
std::array<TokenAmount, kAllPools.size()> route_gnd_accrual(SupplyLedger& ledger, TokenAmount amount);

/// Pools kept dormant until protocol maturity.
inline constexpr std::array<PoolId, 3> kMaturityLockedPools = {PoolId::Marketing, PoolId::Grants, PoolId::Csr};

/// Proof-of-Availability minter. Holds one schedule per license class.
class PoaMinter {
public:
    PoaMinter();
    explicit PoaMinter(SigmoidParams mnd_curve);

    const EmissionSchedule& schedule(LicenseClass cls) const;

    /// Credits one finalized epoch of availability `a` (0..255) to the license
    /// and mints the schedule delta to its owner (GND: to the pools).
    /// A complete license is a no-op returning status Complete. Throws
    /// LicenseInactive when no dAuth-valid node is bound.
    Accrual epoch_accrual(LicenseRegistry& registry, SupplyLedger& ledger, LicenseId license,
                          std::uint8_t availability) const;

    bool completion_status(const LicenseRegistry& registry, LicenseId license) const;

private:
    std::array<EmissionSchedule, 3> schedules_;
};

/// Expected completion horizon in epochs, span / mean availability.
/// Throws BadAvailability unless 0 < mean <= 1.
double expected_horizon(double mean_availability, std::uint32_t credit_span);

}  // namespace poasim
