#pragma once

#include "poasim/amount.hpp"
#include "poasim/ledger.hpp"

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace poasim {

enum class LicenseClass : std::uint8_t { Gnd, Mnd, Nd };

std::string_view license_class_name(LicenseClass cls) noexcept;

struct NodeId {
    std::string value;
    friend auto operator<=>(const NodeId&, const NodeId&) = default;
};

struct LicenseId {
    std::uint64_t value = 0;
    friend auto operator<=>(const LicenseId&, const LicenseId&) = default;
};

/// Per-ND mint cap: 1,575.19 tokens.
inline constexpr TokenAmount kNdCap = TokenAmount::from_units(u128{157519} * u128{10'000'000'000'000'000ULL});

// Credit spans in whole epoch-credits (30-epoch months).
inline constexpr std::uint32_t kNdCreditSpan = 1080;
inline constexpr std::uint32_t kGndCreditSpan = 360;
inline constexpr std::uint32_t kMndCreditSpan = 900;

/// Credits are accumulated on the byte scale: one fully available epoch adds 255.
inline constexpr std::uint32_t kByteScale = 255;

/// floor(45% of the hard cap / kNdCap).
inline constexpr std::uint64_t kDefaultNdSupplyLimit = 46'223;

struct License {
    LicenseId id;
    LicenseClass cls = LicenseClass::Nd;
    AccountId owner;
    std::optional<NodeId> node;
    TokenAmount cap;
    std::uint32_t credit_span = 0;
    std::uint64_t credits_scaled = 0;
    TokenAmount minted;
    std::optional<std::uint64_t> last_association_epoch;

    std::uint64_t credit_target_scaled() const { return std::uint64_t{credit_span} * kByteScale; }
    bool complete() const { return credits_scaled >= credit_target_scaled(); }
};

struct AssociationRecord {
    LicenseId license;
    NodeId node;
    std::optional<NodeId> previous;
    std::uint64_t epoch = 0;
};

struct MintProgress {
    TokenAmount minted;
    TokenAmount remaining;
};

/// Tiered ND pricing: tier i sells `size` deeds at `price` each, in order.
struct NdPriceTier {
    std::uint64_t size = 0;
    TokenAmount price;
};

/// Price of the next ND given how many have already been sold; nullopt once
/// every configured tier is exhausted. An empty tier list means deeds are free.
std::optional<TokenAmount> nd_price_for(std::span<const NdPriceTier> tiers, std::uint64_t sold);

/// Per-mille routing of every ND payment: LP, burn, OPEX.
inline constexpr std::array<std::uint32_t, 3> kNdPaymentRouting = {500, 200, 300};

/// Node Deed registry: owns licenses and the node<->license binding.
class LicenseRegistry {
public:
    explicit LicenseRegistry(std::uint64_t nd_supply_limit = kDefaultNdSupplyLimit);

    /// Charges `price` to the buyer, routed LP/burn/OPEX, and issues an
    /// unbound ND. Throws NotKycVerified, InsufficientBalance, NdSoldOut.
    const License& purchase_nd(SupplyLedger& ledger, const AccountId& buyer, TokenAmount price);

    /// Genesis-time GND/MND issuance; no payment.
    const License& create_genesis(LicenseClass cls, const AccountId& owner, TokenAmount cap);

    AssociationRecord associate(const AccountId& caller, LicenseId license, const NodeId& node,
                                std::uint64_t epoch);

    /// Owner -> license -> node chain check with a KYC-verified owner.
    bool dauth_validate(const NodeId& node, const SupplyLedger& ledger) const;

    MintProgress license_remaining(LicenseId license) const;

    /// Secondary-market owner change. Credits and minted stay with the license.
    void transfer_ownership(LicenseId license, const AccountId& new_owner);

    const License& at(LicenseId license) const;
    License& at(LicenseId license);
    std::optional<LicenseId> find_by_node(const NodeId& node) const;

    const std::map<LicenseId, License>& licenses() const { return licenses_; }
    std::uint64_t nd_sold() const { return nd_sold_; }
    std::uint64_t nd_supply_limit() const { return nd_supply_limit_; }

private:
    License& issue(LicenseClass cls, const AccountId& owner, TokenAmount cap, std::uint32_t span);

    std::uint64_t nd_supply_limit_;
    std::uint64_t nd_sold_ = 0;
    std::uint64_t next_id_ = 1;
    std::map<LicenseId, License> licenses_;
    std::map<NodeId, LicenseId> node_index_;
};

}  // namespace poasim
