#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace poasim {

/// Failure kinds raised by the protocol state machines. Each maps 1:1 to a
/// named error in the operation contracts; callers branch on `code()`.
enum class Errc {
    CapExceeded,
    InsufficientBalance,
    BadShares,
    UnknownAccount,
    PoolLocked,
    NotKycVerified,
    NotOwner,
    NodeAlreadyBound,
    ReassociationRateLimited,
    UnknownLicense,
    NdSoldOut,
    BadInterval,
    DuplicateVote,
    NoFeasibleOracle,
    LicenseInactive,
    BadAvailability,
    InsufficientFee,
    NoEligibleNode,
    JobNotRunning,
    WindowIncomplete,
    UnknownJob,
};

std::string_view errc_name(Errc code) noexcept;

class ProtocolError : public std::runtime_error {
public:
    ProtocolError(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

/// Raised by scenario loading. Parse errors carry a line/column, validation
/// errors carry the offending field path.
class ConfigError : public std::runtime_error {
public:
    enum class Kind { Parse, Validation };

    ConfigError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

}  // namespace poasim
