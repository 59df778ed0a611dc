#include "poasim/licensing.hpp"

#include "support.hpp"

#include <random>

using namespace poasim;
using testing::error_of;
using testing::kUnit;
using testing::r1;
using testing::units;

namespace {

struct Fixture {
    SupplyLedger ledger;
    LicenseRegistry registry;
    AccountId alice{"alice"};
    AccountId bob{"bob"};

    Fixture() {
        ledger.open_account(alice, true);
        ledger.open_account(bob, true);
        ledger.mint(alice, r1(10'000));
    }

    LicenseId buy(const AccountId& who) { return registry.purchase_nd(ledger, who, r1(100)).id; }
};

}  // namespace

TEST_CASE("ND purchase routes 50/20/30 to LP, burn and OPEX") {
    Fixture f;
    const License& lic = f.registry.purchase_nd(f.ledger, f.alice, r1(100));
    CHECK(f.ledger.pool(PoolId::Lp).balance == r1(50));
    CHECK(f.ledger.burned_total() == r1(20));
    CHECK(f.ledger.pool(PoolId::Opex).balance == r1(30));
    CHECK(f.ledger.balance(f.alice) == r1(9'900));
    CHECK(lic.cls == LicenseClass::Nd);
    CHECK(lic.cap == kNdCap);
    CHECK(lic.credit_span == 1080);
    CHECK_FALSE(lic.node);
    CHECK(f.registry.nd_sold() == 1);
}

TEST_CASE("ND purchase preconditions") {
    Fixture f;
    f.ledger.open_account(AccountId{"anon"}, false);
    CHECK(error_of([&] { f.registry.purchase_nd(f.ledger, AccountId{"anon"}, r1(1)); }) == Errc::NotKycVerified);
    CHECK(error_of([&] { f.registry.purchase_nd(f.ledger, f.bob, r1(1)); }) == Errc::InsufficientBalance);

    LicenseRegistry tiny(1);
    tiny.purchase_nd(f.ledger, f.alice, r1(1));
    CHECK(error_of([&] { tiny.purchase_nd(f.ledger, f.alice, r1(1)); }) == Errc::NdSoldOut);
}

TEST_CASE("per-ND cap and default deed count") {
    CHECK(kNdCap.to_decimal() == "1575.19");
    // floor(0.45 * cap / cap_N), evaluated directly in integers.
    const u128 nd_pool = u128{161'803'398} * kUnit * 45 / 100;
    CHECK(kDefaultNdSupplyLimit == nd_pool / kNdCap.units());
    CHECK(kDefaultNdSupplyLimit == 46'223);
}

TEST_CASE("tiered ND pricing") {
    const std::vector<NdPriceTier> tiers{{2, r1(100)}, {1, r1(150)}};
    CHECK(nd_price_for(tiers, 0) == r1(100));
    CHECK(nd_price_for(tiers, 1) == r1(100));
    CHECK(nd_price_for(tiers, 2) == r1(150));
    CHECK_FALSE(nd_price_for(tiers, 3));
    CHECK(nd_price_for({}, 12345) == units(0));
}

TEST_CASE("association keeps node<->license one-to-one") {
    Fixture f;
    const LicenseId l1 = f.buy(f.alice);
    const LicenseId l2 = f.buy(f.alice);
    const NodeId n{"n"}, m{"m"};

    const auto rec = f.registry.associate(f.alice, l1, n, 0);
    CHECK(rec.node == n);
    CHECK_FALSE(rec.previous);
    CHECK(f.registry.find_by_node(n) == l1);

    CHECK(error_of([&] { f.registry.associate(f.alice, l2, n, 0); }) == Errc::NodeAlreadyBound);
    CHECK(error_of([&] { f.registry.associate(f.alice, l1, m, 0); }) == Errc::ReassociationRateLimited);
    CHECK(error_of([&] { f.registry.associate(f.bob, l1, m, 1); }) == Errc::NotOwner);

    // A later epoch may move the license; the old node is released.
    const auto moved = f.registry.associate(f.alice, l1, m, 1);
    CHECK(moved.previous == n);
    CHECK_FALSE(f.registry.find_by_node(n));
    f.registry.associate(f.alice, l2, n, 1);
    CHECK(f.registry.find_by_node(n) == l2);
    CHECK(f.registry.find_by_node(m) == l1);
    CHECK(error_of([&] { f.registry.associate(f.alice, LicenseId{99}, m, 2); }) == Errc::UnknownLicense);
}

TEST_CASE("dAuth chain") {
    Fixture f;
    const LicenseId l = f.buy(f.alice);
    const NodeId n{"n"};
    CHECK_FALSE(f.registry.dauth_validate(n, f.ledger));
    f.registry.associate(f.alice, l, n, 0);
    CHECK(f.registry.dauth_validate(n, f.ledger));
    f.ledger.set_kyc(f.alice, false);
    CHECK_FALSE(f.registry.dauth_validate(n, f.ledger));
    f.ledger.set_kyc(f.alice, true);
    CHECK(f.registry.dauth_validate(n, f.ledger));

    // Resale: the chain follows the new owner's KYC.
    f.ledger.open_account(AccountId{"carol"}, false);
    f.registry.transfer_ownership(l, AccountId{"carol"});
    CHECK_FALSE(f.registry.dauth_validate(n, f.ledger));
}

TEST_CASE("license progress") {
    Fixture f;
    const LicenseId l = f.buy(f.alice);
    auto p = f.registry.license_remaining(l);
    CHECK(p.minted == units(0));
    CHECK(p.remaining == kNdCap);

    License& lic = f.registry.at(l);
    lic.minted = kNdCap;
    lic.credits_scaled = lic.credit_target_scaled();
    p = f.registry.license_remaining(l);
    CHECK(p.minted == kNdCap);
    CHECK(p.remaining == units(0));
    CHECK(lic.complete());

    lic.credits_scaled -= 1;
    CHECK_FALSE(lic.complete());
}

TEST_CASE("ownership transfer keeps accrued progress") {
    Fixture f;
    const LicenseId l = f.buy(f.alice);
    f.registry.at(l).credits_scaled = 1234;
    f.registry.at(l).minted = r1(7);
    f.registry.transfer_ownership(l, f.bob);
    CHECK(f.registry.at(l).owner == f.bob);
    CHECK(f.registry.at(l).credits_scaled == 1234);
    CHECK(f.registry.at(l).minted == r1(7));
}

TEST_CASE("random purchase prices always re-sum exactly") {
    Fixture f;
    f.ledger.mint(f.bob, r1(50'000'000));
    std::mt19937_64 gen(5);
    for (int i = 0; i < 500; ++i) {
        const TokenAmount price = units(gen() % (u128{100'000} * kUnit));
        const auto lp = f.ledger.pool(PoolId::Lp).balance;
        const auto opex = f.ledger.pool(PoolId::Opex).balance;
        const auto burned = f.ledger.burned_total();
        const auto before = f.ledger.balance(f.bob);
        f.registry.purchase_nd(f.ledger, f.bob, price);
        const auto d_lp = f.ledger.pool(PoolId::Lp).balance - lp;
        const auto d_burn = f.ledger.burned_total() - burned;
        const auto d_opex = f.ledger.pool(PoolId::Opex).balance - opex;
        CHECK(d_lp + d_burn + d_opex == price);
        CHECK(before - f.ledger.balance(f.bob) == price);
    }
}
