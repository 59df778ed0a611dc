#pragma once

#include "poasim/amount.hpp"

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace poasim {

struct AccountId {
    std::string value;
    friend auto operator<=>(const AccountId&, const AccountId&) = default;
};

enum class PoolId : std::uint8_t { Lp, Opex, Marketing, Grants, Csr, Reserve };

inline constexpr std::array<PoolId, 6> kAllPools = {PoolId::Lp,     PoolId::Opex, PoolId::Marketing,
                                                    PoolId::Grants, PoolId::Csr,  PoolId::Reserve};

std::string_view pool_name(PoolId pool) noexcept;

/// Escrow sub-account holding a PoAI job's locked fee.
struct EscrowId {
    std::uint64_t job = 0;
    friend auto operator<=>(const EscrowId&, const EscrowId&) = default;
};

using Holder = std::variant<AccountId, PoolId, EscrowId>;

std::string holder_label(const Holder& holder);

inline const TokenAmount kHardCap = TokenAmount::from_tokens(161'803'398);

struct Account {
    TokenAmount balance;
    bool kyc_verified = false;
};

struct PoolWallet {
    PoolId id = PoolId::Lp;
    TokenAmount balance;
    bool locked = false;
};

/// One ledger movement. Mints have no source, burns have no destination.
struct Movement {
    enum class Kind : std::uint8_t { Mint, Burn, Transfer };
    Kind kind = Kind::Transfer;
    std::optional<Holder> from;
    std::optional<Holder> to;
    TokenAmount amount;
};

/// Exact token ledger. Every holder balance lives here, including escrow, so
/// conservation reads:
///
///   minted_total == sum(accounts) + sum(pools) + sum(escrows) + burned_total
///
/// Operations are all-or-nothing: a throwing call leaves the ledger unchanged.
/// Every successful non-zero movement is appended to a journal that callers
/// drain for auditing.
class SupplyLedger {
public:
    SupplyLedger();

    void open_account(const AccountId& id, bool kyc_verified);
    void set_kyc(const AccountId& id, bool kyc_verified);
    bool has_account(const AccountId& id) const;
    bool kyc_verified(const AccountId& id) const;

    void set_pool_locked(PoolId pool, bool locked);
    const PoolWallet& pool(PoolId pool) const;

    TokenAmount balance(const Holder& holder) const;

    /// Throws CapExceeded if the cap would be crossed; NotKycVerified when the
    /// target is an account without KYC.
    void mint(const Holder& target, TokenAmount amount);
    void burn(const Holder& source, TokenAmount amount);
    /// Outbound transfers from a locked pool throw PoolLocked.
    void transfer(const Holder& from, const Holder& to, TokenAmount amount);

    TokenAmount minted_total() const { return minted_; }
    TokenAmount burned_total() const { return burned_; }
    TokenAmount hard_cap() const { return kHardCap; }
    TokenAmount circulating() const { return minted_ - burned_; }

    /// Sum of all holder balances, computed by walking every holder.
    TokenAmount holdings_total() const;
    bool conserved() const { return holdings_total() + burned_ == minted_; }

    const std::map<AccountId, Account>& accounts() const { return accounts_; }
    const std::map<EscrowId, TokenAmount>& escrows() const { return escrows_; }

    std::vector<Movement> drain_journal();

private:
    TokenAmount& slot(const Holder& holder);
    void require_funds(const Holder& holder, TokenAmount amount) const;

    TokenAmount minted_;
    TokenAmount burned_;
    std::map<AccountId, Account> accounts_;
    std::array<PoolWallet, kAllPools.size()> pools_;
    std::map<EscrowId, TokenAmount> escrows_;
    std::vector<Movement> journal_;
};

}  // namespace poasim
