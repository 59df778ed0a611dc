#include "poasim/poa.hpp"

#include "poasim/errors.hpp"

#include <algorithm>
#include <cmath>

namespace poasim {

namespace {

TokenAmount cap_fraction(u128 numerator, u128 denominator) {
    return TokenAmount::from_units(mul_div(kHardCap.units(), numerator, denominator));
}

double logistic(double x, const SigmoidParams& p) { return 1.0 / (1.0 + std::exp(-p.steepness * (x - p.midpoint))); }

}  // namespace

TokenAmount gnd_allocation() { return cap_fraction(289, 1000); }
TokenAmount mnd_allocation_total() { return cap_fraction(261, 1000); }
TokenAmount nd_allocation_total() { return cap_fraction(45, 100); }

std::vector<TokenAmount> mnd_caps(std::size_t count) {
    if (count == 0) return {};
    const std::vector<u128> weights(count, 1);
    return split_weighted(mnd_allocation_total(), weights);
}

EmissionSchedule EmissionSchedule::for_class(LicenseClass cls) {
    switch (cls) {
        case LicenseClass::Gnd: return {cls, ScheduleShape::Linear, kGndCreditSpan, {}};
        case LicenseClass::Mnd: return {cls, ScheduleShape::Sigmoid, kMndCreditSpan, {}};
        case LicenseClass::Nd: return {cls, ScheduleShape::Linear, kNdCreditSpan, {}};
    }
    return {};
}

std::uint64_t EmissionSchedule::vested_fraction(std::uint64_t credits_scaled) const {
    const std::uint64_t target = target_scaled();
    if (credits_scaled >= target) return kFractionOne;
    if (shape == ScheduleShape::Linear) {
        return static_cast<std::uint64_t>(mul_div(kFractionOne, credits_scaled, target));
    }
    const double credits = static_cast<double>(credits_scaled) / kByteScale;
    if (credits <= sigmoid.cliff) return 0;
    const double lo = logistic(sigmoid.cliff, sigmoid);
    const double hi = logistic(static_cast<double>(credit_span), sigmoid);
    const double share = std::clamp((logistic(credits, sigmoid) - lo) / (hi - lo), 0.0, 1.0);
    const double scaled = std::floor(share * static_cast<double>(kFractionOne));
    return std::min<std::uint64_t>(static_cast<std::uint64_t>(scaled), kFractionOne);
}

TokenAmount EmissionSchedule::cumulative(TokenAmount allocation, std::uint64_t credits_scaled) const {
    const std::uint64_t target = target_scaled();
    if (credits_scaled >= target) return allocation;
    if (shape == ScheduleShape::Linear) {
        return TokenAmount::from_units(mul_div(allocation.units(), credits_scaled, target));
    }
    return TokenAmount::from_units(mul_div(allocation.units(), vested_fraction(credits_scaled), kFractionOne));
}

std::array<TokenAmount, kAllPools.size()> route_gnd_accrual(SupplyLedger& ledger, TokenAmount amount) {
    if (amount > ledger.hard_cap() - ledger.minted_total()) {
        throw ProtocolError(Errc::CapExceeded, "GND accrual of " + amount.to_string());
    }
    std::array<TokenAmount, kAllPools.size()> credited{};
    const auto parts = split(amount, kGndRouting);
    for (std::size_t i = 0; i < parts.size(); ++i) {
        ledger.mint(kGndRoutingPools[i], parts[i]);
        credited[static_cast<std::size_t>(kGndRoutingPools[i])] += parts[i];
    }
    return credited;
}

PoaMinter::PoaMinter() : PoaMinter(SigmoidParams{}) {}

PoaMinter::PoaMinter(SigmoidParams mnd_curve)
    : schedules_{EmissionSchedule::for_class(LicenseClass::Gnd), EmissionSchedule::for_class(LicenseClass::Mnd),
                 EmissionSchedule::for_class(LicenseClass::Nd)} {
    schedules_[static_cast<std::size_t>(LicenseClass::Mnd)].sigmoid = mnd_curve;
}

const EmissionSchedule& PoaMinter::schedule(LicenseClass cls) const {
    return schedules_[static_cast<std::size_t>(cls)];
}

Accrual PoaMinter::epoch_accrual(LicenseRegistry& registry, SupplyLedger& ledger, LicenseId license,
                                 std::uint8_t availability) const {
    License& lic = registry.at(license);
    Accrual out;
    if (lic.complete()) {
        out.status = AccrualStatus::Complete;
        return out;
    }
    if (!lic.node || !registry.dauth_validate(*lic.node, ledger)) {
        throw ProtocolError(Errc::LicenseInactive, "license " + std::to_string(license.value));
    }

    EmissionSchedule sched = schedule(lic.cls);
    sched.credit_span = lic.credit_span;
    const std::uint64_t target = sched.target_scaled();
    const auto applied = static_cast<std::uint32_t>(std::min<std::uint64_t>(availability, target - lic.credits_scaled));
    const TokenAmount before = sched.cumulative(lic.cap, lic.credits_scaled);
    const TokenAmount after = sched.cumulative(lic.cap, lic.credits_scaled + applied);
    const TokenAmount delta = after - before;

    if (lic.cls == LicenseClass::Gnd) {
        out.pool_credits = route_gnd_accrual(ledger, delta);
    } else {
        ledger.mint(lic.owner, delta);
    }
    lic.credits_scaled += applied;
    lic.minted += delta;

    out.minted = delta;
    out.credits_applied = applied;
    out.completed_now = lic.complete();
    return out;
}

bool PoaMinter::completion_status(const LicenseRegistry& registry, LicenseId license) const {
    return registry.at(license).complete();
}

double expected_horizon(double mean_availability, std::uint32_t credit_span) {
    if (!(mean_availability > 0.0) || mean_availability > 1.0) {
        throw ProtocolError(Errc::BadAvailability, "mean availability " + std::to_string(mean_availability));
    }
    return static_cast<double>(credit_span) / mean_availability;
}

}  // namespace poasim
