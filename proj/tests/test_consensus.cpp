#include "poasim/consensus.hpp"

#include "support.hpp"

#include <random>
#include <set>

using namespace poasim;
using testing::error_of;

namespace {

// k-th smallest (0-based) by counting, no sorting involved.
unsigned kth_by_count(const std::vector<std::uint8_t>& v, std::size_t k) {
    for (unsigned x = 0; x < 256; ++x) {
        std::size_t at_most = 0;
        for (auto e : v) at_most += e <= x;
        if (at_most > k) return x;
    }
    return 255;
}

unsigned brute_median(const std::vector<std::uint8_t>& v) {
    const std::size_t n = v.size();
    if (n % 2 == 1) return kth_by_count(v, n / 2);
    return (kth_by_count(v, n / 2 - 1) + kth_by_count(v, n / 2)) / 2;
}

std::vector<OracleVote> votes_for(const NodeId& node, EpochId epoch, std::initializer_list<int> values) {
    std::vector<OracleVote> out;
    int i = 0;
    for (int v : values) {
        out.push_back({NodeId{"o" + std::to_string(i++)}, node, epoch, static_cast<std::uint8_t>(v)});
    }
    return out;
}

}  // namespace

TEST_CASE("byte-normalized local availability") {
    CHECK(local_availability(8640, 8640) == 255);
    CHECK(local_availability(4320, 8640) == 127);
    CHECK(local_availability(0, 8640) == 0);
    CHECK(local_availability(9000, 8640) == 255);
    for (std::uint32_t mh : {5760u, 8640u}) {
        for (std::uint32_t c = 0; c <= mh; ++c) {
            // floor(c / mh * 255) via exact rational comparison: largest h with h * mh <= c * 255.
            unsigned h = 0;
            while (h < 255 && (h + 1) * mh <= c * 255) ++h;
            REQUIRE(local_availability(c, mh) == h);
        }
    }
}

TEST_CASE("self-availability gate at 98%") {
    CHECK(self_gate(255));
    CHECK_FALSE(self_gate(249));
    CHECK(self_gate(250));
    CHECK(249 / 255.0 < 0.98);
    CHECK(250 / 255.0 >= 0.98);
    CHECK(service_flag(250));
    CHECK_FALSE(service_flag(249));
}

TEST_CASE("fault bound and quorum") {
    CHECK(fault_bound(4) == 1);
    CHECK(quorum_size(4) == 3);
    CHECK(fault_bound(10) == 3);
    CHECK(quorum_size(10) == 7);
    CHECK(fault_bound(1) == 0);
    CHECK(quorum_size(1) == 1);
    for (std::uint32_t o = 1; o < 100; ++o) CHECK(3 * fault_bound(o) < o);
}

TEST_CASE("finalization examples") {
    const NodeId n{"node"};
    const EpochId e{7};

    const auto v = votes_for(n, e, {255, 255, 250, 0});
    const auto r = finalize_epoch(n, e, v, 4);
    CHECK(r.finalized);
    CHECK(r.availability == 252);
    CHECK(r.quorum_size == 4);
    CHECK(r.quorum_required == 3);
    CHECK(r.eligible_oracles.size() == 4);

    CHECK(finalize_epoch(n, e, votes_for(n, e, {91, 91, 91}), 4).availability == 91);

    const auto short_of_quorum = finalize_epoch(n, e, votes_for(n, e, {255, 255}), 4);
    CHECK_FALSE(short_of_quorum.finalized);
    CHECK(short_of_quorum.quorum_size == 2);

    auto dup = votes_for(n, e, {1, 2, 3});
    dup[2].oracle = dup[0].oracle;
    CHECK(error_of([&] { finalize_epoch(n, e, dup, 4); }) == Errc::DuplicateVote);

    auto stray = votes_for(n, e, {1, 2, 3});
    stray[1].epoch = EpochId{8};
    CHECK_THROWS_AS(finalize_epoch(n, e, stray, 4), std::invalid_argument);
}

TEST_CASE("median agrees with a counting oracle") {
    std::mt19937_64 gen(31);
    for (int trial = 0; trial < 3000; ++trial) {
        std::vector<std::uint8_t> v(1 + gen() % 15);
        for (auto& x : v) x = static_cast<std::uint8_t>(gen());
        REQUIRE(median_floor(v) == brute_median(v));
    }
}

TEST_CASE("Byzantine strategies") {
    OracleSet set({NodeId{"a"}, NodeId{"b"}, NodeId{"c"}, NodeId{"d"}, NodeId{"e"}});
    set.inject_byzantine(NodeId{"a"}, {ByzantineStrategy::Zero, 0, 0});
    set.inject_byzantine(NodeId{"b"}, {ByzantineStrategy::Max, 0, 0});
    set.inject_byzantine(NodeId{"c"}, {ByzantineStrategy::Random, 0, 1234});
    set.inject_byzantine(NodeId{"d"}, {ByzantineStrategy::Offset, -100, 0});
    CHECK_THROWS_AS(set.inject_byzantine(NodeId{"zz"}, {}), std::out_of_range);

    const NodeId n{"n"};
    CHECK(set.vote(0, 200, n, EpochId{1}) == 0);
    CHECK(set.vote(1, 200, n, EpochId{1}) == 255);
    CHECK(set.vote(3, 200, n, EpochId{1}) == 100);
    CHECK(set.vote(3, 50, n, EpochId{1}) == 0);
    CHECK(set.vote(4, 200, n, EpochId{1}) == 200);
    CHECK_FALSE(set.is_byzantine(4));
    CHECK(set.is_byzantine(2));

    // Random: reproducible from the seed and independent of the honest value.
    OracleSet twin({NodeId{"a"}, NodeId{"b"}, NodeId{"c"}});
    twin.inject_byzantine(NodeId{"c"}, {ByzantineStrategy::Random, 0, 1234});
    std::set<int> distinct;
    for (std::uint64_t ep = 0; ep < 200; ++ep) {
        const auto x = set.vote(2, 10, n, EpochId{ep});
        CHECK(x == twin.vote(2, 240, n, EpochId{ep}));
        distinct.insert(x);
    }
    CHECK(distinct.size() > 100);
}

TEST_CASE("oracle selection") {
    const std::vector<OracleCandidate> one{{NodeId{"only"}, 5.0, 0.5}};
    CHECK(select_oracle(one, 10.0) == NodeId{"only"});
    CHECK(error_of([&] { select_oracle(one, 4.0); }) == Errc::NoFeasibleOracle);

    const std::vector<OracleCandidate> two{{NodeId{"x"}, 1.0, 0.95}, {NodeId{"y"}, 1.0, 0.99}};
    CHECK(select_oracle(two, 2.0) == NodeId{"y"});

    // Exhaustive comparison on random pools.
    std::mt19937_64 gen(8);
    for (int trial = 0; trial < 500; ++trial) {
        std::vector<OracleCandidate> pool;
        const int size = 1 + static_cast<int>(gen() % 8);
        for (int i = 0; i < size; ++i) {
            pool.push_back({NodeId{"o" + std::to_string(gen() % 20)}, static_cast<double>(gen() % 10),
                            static_cast<double>(gen() % 5) / 4.0});
        }
        const double cap = static_cast<double>(gen() % 10);
        std::optional<NodeId> best;
        double best_av = -1;
        for (const auto& c : pool) {
            if (c.cost > cap) continue;
            for (const auto& d : pool) {
                if (d.cost <= cap) best_av = std::max(best_av, d.availability);
            }
            if (c.availability == best_av && (!best || c.id < *best)) best = c.id;
        }
        if (!best) {
            CHECK(error_of([&] { select_oracle(pool, cap); }) == Errc::NoFeasibleOracle);
        } else {
            CHECK(select_oracle(pool, cap) == *best);
        }
    }
}
