#include "poasim/errors.hpp"

namespace poasim {

std::string_view errc_name(Errc code) noexcept {
    switch (code) {
        case Errc::CapExceeded: return "CapExceeded";
        case Errc::InsufficientBalance: return "InsufficientBalance";
        case Errc::BadShares: return "BadShares";
        case Errc::UnknownAccount: return "UnknownAccount";
        case Errc::PoolLocked: return "PoolLocked";
        case Errc::NotKycVerified: return "NotKycVerified";
        case Errc::NotOwner: return "NotOwner";
        case Errc::NodeAlreadyBound: return "NodeAlreadyBound";
        case Errc::ReassociationRateLimited: return "ReassociationRateLimited";
        case Errc::UnknownLicense: return "UnknownLicense";
        case Errc::NdSoldOut: return "NdSoldOut";
        case Errc::BadInterval: return "BadInterval";
        case Errc::DuplicateVote: return "DuplicateVote";
        case Errc::NoFeasibleOracle: return "NoFeasibleOracle";
        case Errc::LicenseInactive: return "LicenseInactive";
        case Errc::BadAvailability: return "BadAvailability";
        case Errc::InsufficientFee: return "InsufficientFee";
        case Errc::NoEligibleNode: return "NoEligibleNode";
        case Errc::JobNotRunning: return "JobNotRunning";
        case Errc::WindowIncomplete: return "WindowIncomplete";
        case Errc::UnknownJob: return "UnknownJob";
    }
    return "Unknown";
}

}  // namespace poasim
