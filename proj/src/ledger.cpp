#include "poasim/ledger.hpp"

#include "poasim/errors.hpp"

namespace poasim {

std::string_view pool_name(PoolId pool) noexcept {
    switch (pool) {
        case PoolId::Lp: return "LP";
        case PoolId::Opex: return "OPEX";
        case PoolId::Marketing: return "MARKETING";
        case PoolId::Grants: return "GRANTS";
        case PoolId::Csr: return "CSR";
        case PoolId::Reserve: return "RESERVE";
    }
    return "?";
}

std::string holder_label(const Holder& holder) {
    struct Visitor {
        std::string operator()(const AccountId& a) const { return "acct:" + a.value; }
        std::string operator()(PoolId p) const { return "pool:" + std::string(pool_name(p)); }
        std::string operator()(const EscrowId& e) const { return "escrow:" + std::to_string(e.job); }
    };
    return std::visit(Visitor{}, holder);
}

SupplyLedger::SupplyLedger() {
    for (std::size_t i = 0; i < kAllPools.size(); ++i) pools_[i].id = kAllPools[i];
}

void SupplyLedger::open_account(const AccountId& id, bool kyc_verified) {
    auto [it, inserted] = accounts_.try_emplace(id);
    if (inserted) it->second.kyc_verified = kyc_verified;
}

void SupplyLedger::set_kyc(const AccountId& id, bool kyc_verified) {
    auto it = accounts_.find(id);
    if (it == accounts_.end()) throw ProtocolError(Errc::UnknownAccount, id.value);
    it->second.kyc_verified = kyc_verified;
}

bool SupplyLedger::has_account(const AccountId& id) const { return accounts_.contains(id); }

bool SupplyLedger::kyc_verified(const AccountId& id) const {
    auto it = accounts_.find(id);
    return it != accounts_.end() && it->second.kyc_verified;
}

void SupplyLedger::set_pool_locked(PoolId pool, bool locked) {
    pools_[static_cast<std::size_t>(pool)].locked = locked;
}

const PoolWallet& SupplyLedger::pool(PoolId pool) const { return pools_[static_cast<std::size_t>(pool)]; }

TokenAmount SupplyLedger::balance(const Holder& holder) const {
    if (const auto* a = std::get_if<AccountId>(&holder)) {
        auto it = accounts_.find(*a);
        return it == accounts_.end() ? TokenAmount{} : it->second.balance;
    }
    if (const auto* p = std::get_if<PoolId>(&holder)) return pool(*p).balance;
    auto it = escrows_.find(std::get<EscrowId>(holder));
    return it == escrows_.end() ? TokenAmount{} : it->second;
}

TokenAmount& SupplyLedger::slot(const Holder& holder) {
    if (const auto* a = std::get_if<AccountId>(&holder)) {
        auto it = accounts_.find(*a);
        if (it == accounts_.end()) throw ProtocolError(Errc::UnknownAccount, a->value);
        return it->second.balance;
    }
    if (const auto* p = std::get_if<PoolId>(&holder)) return pools_[static_cast<std::size_t>(*p)].balance;
    return escrows_[std::get<EscrowId>(holder)];
}

void SupplyLedger::require_funds(const Holder& holder, TokenAmount amount) const {
    if (const auto* a = std::get_if<AccountId>(&holder); a && !accounts_.contains(*a)) {
        throw ProtocolError(Errc::UnknownAccount, a->value);
    }
    const TokenAmount have = balance(holder);
    if (have < amount) {
        throw ProtocolError(Errc::InsufficientBalance, holder_label(holder) + " holds " + have.to_string() +
                                                           " < " + amount.to_string());
    }
}

void SupplyLedger::mint(const Holder& target, TokenAmount amount) {
    if (const auto* a = std::get_if<AccountId>(&target)) {
        auto it = accounts_.find(*a);
        if (it == accounts_.end()) throw ProtocolError(Errc::UnknownAccount, a->value);
        if (!it->second.kyc_verified) throw ProtocolError(Errc::NotKycVerified, a->value);
    }
    if (amount > kHardCap || minted_ > kHardCap - amount) {
        throw ProtocolError(Errc::CapExceeded, "minting " + amount.to_string() + " on top of " + minted_.to_string());
    }
    if (amount.is_zero()) return;
    slot(target) += amount;
    minted_ += amount;
    journal_.push_back({Movement::Kind::Mint, std::nullopt, target, amount});
}

void SupplyLedger::burn(const Holder& source, TokenAmount amount) {
    require_funds(source, amount);
    if (amount.is_zero()) return;
    slot(source) -= amount;
    burned_ += amount;
    if (const auto* e = std::get_if<EscrowId>(&source); e && escrows_[*e].is_zero()) escrows_.erase(*e);
    journal_.push_back({Movement::Kind::Burn, source, std::nullopt, amount});
}

void SupplyLedger::transfer(const Holder& from, const Holder& to, TokenAmount amount) {
    if (const auto* p = std::get_if<PoolId>(&from); p && pool(*p).locked && !amount.is_zero()) {
        throw ProtocolError(Errc::PoolLocked, std::string(pool_name(*p)));
    }
    require_funds(from, amount);
    if (const auto* a = std::get_if<AccountId>(&to); a && !accounts_.contains(*a)) {
        throw ProtocolError(Errc::UnknownAccount, a->value);
    }
    if (amount.is_zero() || from == to) return;
    slot(from) -= amount;
    slot(to) += amount;
    if (const auto* e = std::get_if<EscrowId>(&from); e && escrows_[*e].is_zero()) escrows_.erase(*e);
    journal_.push_back({Movement::Kind::Transfer, from, to, amount});
}

TokenAmount SupplyLedger::holdings_total() const {
    TokenAmount total;
    for (const auto& [_, acct] : accounts_) total += acct.balance;
    for (const auto& p : pools_) total += p.balance;
    for (const auto& [_, e] : escrows_) total += e;
    return total;
}

std::vector<Movement> SupplyLedger::drain_journal() {
    std::vector<Movement> out;
    out.swap(journal_);
    return out;
}

}  // namespace poasim
