#include "poasim/licensing.hpp"

#include "poasim/errors.hpp"

#include <stdexcept>
#include <utility>

namespace poasim {

std::string_view license_class_name(LicenseClass cls) noexcept {
    switch (cls) {
        case LicenseClass::Gnd: return "GND";
        case LicenseClass::Mnd: return "MND";
        case LicenseClass::Nd: return "ND";
    }
    return "?";
}

std::optional<TokenAmount> nd_price_for(std::span<const NdPriceTier> tiers, std::uint64_t sold) {
    if (tiers.empty()) return TokenAmount{};
    for (const auto& tier : tiers) {
        if (sold < tier.size) return tier.price;
        sold -= tier.size;
    }
    return std::nullopt;
}

LicenseRegistry::LicenseRegistry(std::uint64_t nd_supply_limit) : nd_supply_limit_(nd_supply_limit) {}

License& LicenseRegistry::issue(LicenseClass cls, const AccountId& owner, TokenAmount cap, std::uint32_t span) {
    License lic;
    lic.id = LicenseId{next_id_++};
    lic.cls = cls;
    lic.owner = owner;
    lic.cap = cap;
    lic.credit_span = span;
    return licenses_.emplace(lic.id, std::move(lic)).first->second;
}

const License& LicenseRegistry::purchase_nd(SupplyLedger& ledger, const AccountId& buyer, TokenAmount price) {
    if (!ledger.kyc_verified(buyer)) throw ProtocolError(Errc::NotKycVerified, buyer.value);
    if (nd_sold_ >= nd_supply_limit_) {
        throw ProtocolError(Errc::NdSoldOut, std::to_string(nd_sold_) + " deeds already sold");
    }
    if (ledger.balance(buyer) < price) {
        throw ProtocolError(Errc::InsufficientBalance, buyer.value + " cannot pay " + price.to_decimal());
    }
    const auto parts = split(price, kNdPaymentRouting);
    ledger.transfer(buyer, PoolId::Lp, parts[0]);
    ledger.burn(buyer, parts[1]);
    ledger.transfer(buyer, PoolId::Opex, parts[2]);
    ++nd_sold_;
    return issue(LicenseClass::Nd, buyer, kNdCap, kNdCreditSpan);
}

const License& LicenseRegistry::create_genesis(LicenseClass cls, const AccountId& owner, TokenAmount cap) {
    switch (cls) {
        case LicenseClass::Gnd: return issue(cls, owner, cap, kGndCreditSpan);
        case LicenseClass::Mnd: return issue(cls, owner, cap, kMndCreditSpan);
        case LicenseClass::Nd: break;
    }
    throw std::invalid_argument("create_genesis: NDs are issued by purchase only");
}

AssociationRecord LicenseRegistry::associate(const AccountId& caller, LicenseId license, const NodeId& node,
                                             std::uint64_t epoch) {
    License& lic = at(license);
    if (lic.owner != caller) throw ProtocolError(Errc::NotOwner, caller.value);
    if (auto it = node_index_.find(node); it != node_index_.end() && it->second != license) {
        throw ProtocolError(Errc::NodeAlreadyBound,
                            node.value + " is bound to license " + std::to_string(it->second.value));
    }
    if (lic.last_association_epoch == epoch) {
        throw ProtocolError(Errc::ReassociationRateLimited,
                            "license " + std::to_string(license.value) + " epoch " + std::to_string(epoch));
    }
    AssociationRecord rec{license, node, lic.node, epoch};
    if (lic.node) node_index_.erase(*lic.node);
    lic.node = node;
    lic.last_association_epoch = epoch;
    node_index_[node] = license;
    return rec;
}

bool LicenseRegistry::dauth_validate(const NodeId& node, const SupplyLedger& ledger) const {
    auto it = node_index_.find(node);
    if (it == node_index_.end()) return false;
    const License& lic = licenses_.at(it->second);
    return lic.node == node && ledger.kyc_verified(lic.owner);
}

MintProgress LicenseRegistry::license_remaining(LicenseId license) const {
    const License& lic = at(license);
    return {lic.minted, lic.cap - lic.minted};
}

void LicenseRegistry::transfer_ownership(LicenseId license, const AccountId& new_owner) {
    at(license).owner = new_owner;
}

const License& LicenseRegistry::at(LicenseId license) const {
    auto it = licenses_.find(license);
    if (it == licenses_.end()) throw ProtocolError(Errc::UnknownLicense, std::to_string(license.value));
    return it->second;
}

License& LicenseRegistry::at(LicenseId license) {
    return const_cast<License&>(std::as_const(*this).at(license));
}

std::optional<LicenseId> LicenseRegistry::find_by_node(const NodeId& node) const {
    auto it = node_index_.find(node);
    if (it == node_index_.end()) return std::nullopt;
    return it->second;
}

}  // namespace poasim
