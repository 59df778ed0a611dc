#include "poasim/simulator.hpp"

#include "poasim/consensus.hpp"
#include "poasim/errors.hpp"
#include "poasim/liveness.hpp"
#include "poasim/poa.hpp"
#include "poasim/rng.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace poasim {

bool RunResult::conservation_held() const {
    return std::all_of(supply.begin(), supply.end(), [](const SupplyRow& r) { return r.conserved; });
}

bool RunResult::cap_held() const {
    return std::all_of(supply.begin(), supply.end(), [](const SupplyRow& r) { return r.within_cap; });
}

namespace {

// Same-timestamp ordering: the previous epoch closes before any scheduled
// config event of the new epoch, which runs before the epoch opens.
constexpr int kPhaseClose = 0;
constexpr int kPhaseConfig = 1;
constexpr int kPhaseOpen = 2;

struct OracleState {
    NodeId id;
    UptimeGenerator uptime;
    UptimeTrace trace;
    std::uint8_t self_availability = 255;
    double ema = 1.0;
    double cost = 1.0;
};

struct NodeEntity {
    std::string base;
    NodeId id;
    std::optional<AccountId> owner;
    std::optional<LicenseClass> cls;
    std::optional<LicenseId> license;
    UptimeGenerator uptime;
    std::uint32_t capacity = 0;
    std::uint32_t rebinds = 0;
    bool dauth = false;
};

std::string join_counts(const std::vector<std::uint32_t>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ';';
        out += std::to_string(v[i]);
    }
    return out;
}

class Simulator {
public:
    Simulator(const Scenario& scenario, std::uint64_t seed)
        : mh_(max_heartbeats(scenario.heartbeat_interval_s)),
          minter_(scenario.mnd_curve),
          hb_(scenario.oracles.count, mh_) {
        r_.scenario = scenario;
        r_.seed = seed;
        r_.registry = LicenseRegistry(scenario.nd_supply_limit);
        r_.jobs = JobBook(scenario.poai);
        loss_ = LossModel{scenario.oracles.loss_probability, derive_seed(seed, "loss")};
    }

    RunResult run() {
        const Scenario& s = r_.scenario;
        q_.schedule(0, kPhaseConfig, [this] { genesis(); });
        if (s.duration_epochs > 0) schedule_epoch(0);
        q_.run_all();
        finish();
        return std::move(r_);
    }

private:
    // Logging ---------------------------------------------------------------

    void log(std::string kind, std::string payload) { r_.log.append(q_.now(), std::move(kind), std::move(payload)); }

    void flush_ledger() {
        for (const auto& m : r_.ledger.drain_journal()) {
            switch (m.kind) {
                case Movement::Kind::Mint:
                    log("mint", "to=" + holder_label(*m.to) + " amount=" + m.amount.to_string());
                    break;
                case Movement::Kind::Burn:
                    log("burn", "from=" + holder_label(*m.from) + " amount=" + m.amount.to_string());
                    break;
                case Movement::Kind::Transfer:
                    log("transfer", "from=" + holder_label(*m.from) + " to=" + holder_label(*m.to) +
                                        " amount=" + m.amount.to_string());
                    break;
            }
        }
    }

    void flag(std::uint64_t epoch, std::string kind, std::string detail) {
        log("flag", "kind=" + kind + " epoch=" + std::to_string(epoch) + (detail.empty() ? "" : " " + detail));
        r_.flags.push_back({epoch, std::move(kind), std::move(detail)});
    }

    std::uint64_t epoch_now() const { return q_.now() / kEpochSeconds; }

    bool in_run(std::uint64_t epoch) const { return epoch < r_.scenario.duration_epochs; }

    void at_epoch_start(std::uint64_t epoch, std::function<void()> action) {
        if (in_run(epoch)) q_.schedule(epoch * kEpochSeconds, kPhaseConfig, std::move(action));
    }

    // Setup -----------------------------------------------------------------

    void genesis() {
        const Scenario& s = r_.scenario;
        const std::uint64_t seed = r_.seed;
        log("run_start", "seed=" + std::to_string(seed) + " epochs=" + std::to_string(s.duration_epochs) +
                             " heartbeat_interval_s=" + std::to_string(s.heartbeat_interval_s) +
                             " max_heartbeats=" + std::to_string(mh_));

        for (PoolId p : kMaturityLockedPools) r_.ledger.set_pool_locked(p, true);

        std::vector<NodeId> oracle_ids;
        for (std::uint32_t i = 0; i < s.oracles.count; ++i) {
            const std::string label = "oracle-" + std::to_string(i);
            UptimeModel model = s.oracles.uptime;
            for (const auto& d : s.oracles.degraded) {
                if (d.index == i) model = d.uptime;
            }
            OracleState o{NodeId{label}, UptimeGenerator(model, derive_seed(seed, "uptime/" + label), mh_), {}};
            o.cost = s.oracles.costs.empty() ? 1.0 : s.oracles.costs[i];
            oracles_.push_back(std::move(o));
            oracle_ids.push_back(NodeId{label});
        }
        oracle_set_ = OracleSet(oracle_ids);
        for (const auto& b : s.oracles.byzantine) {
            oracle_set_.inject_byzantine(oracle_ids[b.index], b.spec);
            log("byzantine", "oracle=" + oracle_ids[b.index].value +
                                 " strategy=" + std::string(strategy_name(b.spec.strategy)));
        }

        std::size_t mnd_total = 0;
        for (const auto& g : s.nodes) {
            if (g.license == LicenseClass::Mnd) mnd_total += g.count;
        }
        const auto mnd_cap = mnd_caps(mnd_total);
        std::size_t mnd_index = 0;

        for (const auto& g : s.nodes) {
            for (std::uint32_t i = 0; i < g.count; ++i) {
                const std::size_t n = nodes_.size();
                const std::string base = "node-" + std::to_string(n);
                NodeEntity node{base, NodeId{base}, std::nullopt, g.license, std::nullopt,
                                UptimeGenerator(g.uptime, derive_seed(seed, "uptime/" + base), mh_), g.capacity};
                if (g.license == LicenseClass::Gnd) {
                    node.owner = AccountId{"foundation"};
                    r_.ledger.open_account(*node.owner, true);
                    node.license = r_.registry.create_genesis(LicenseClass::Gnd, *node.owner, gnd_allocation()).id;
                } else if (g.license == LicenseClass::Mnd) {
                    node.owner = AccountId{"founder-" + std::to_string(mnd_index)};
                    r_.ledger.open_account(*node.owner, true);
                    node.license =
                        r_.registry.create_genesis(LicenseClass::Mnd, *node.owner, mnd_cap[mnd_index++]).id;
                } else if (g.license == LicenseClass::Nd) {
                    node.owner = AccountId{"operator-" + std::to_string(n)};
                    r_.ledger.open_account(*node.owner, true);
                    at_epoch_start(g.purchase_epoch + i * g.purchase_spacing, [this, n] { purchase(n); });
                }
                if (node.license) {
                    const License& lic = r_.registry.at(*node.license);
                    log("license_issued", "license=" + std::to_string(lic.id.value) + " class=" +
                                              std::string(license_class_name(lic.cls)) + " owner=" + lic.owner.value +
                                              " cap=" + lic.cap.to_string());
                    bind(node, 0);
                }
                if (node.owner && g.kyc_revoke_epoch) {
                    at_epoch_start(*g.kyc_revoke_epoch, [this, n] { set_kyc(n, false); });
                }
                if (node.owner && g.kyc_restore_epoch) {
                    at_epoch_start(*g.kyc_restore_epoch, [this, n] { set_kyc(n, true); });
                }
                if (g.license && g.rebind_every > 0) {
                    for (std::uint64_t e = g.rebind_every; in_run(e); e += g.rebind_every) {
                        at_epoch_start(e, [this, n] { rebind(n); });
                    }
                }
                nodes_.push_back(std::move(node));
            }
        }

        std::uint64_t sponsor = 0;
        for (std::size_t gi = 0; gi < s.jobs.size(); ++gi) {
            const auto& g = s.jobs[gi];
            for (std::uint32_t j = 0; j < g.count; ++j) {
                const std::uint64_t k = sponsor++;
                at_epoch_start(g.first_epoch + j * g.every, [this, gi, k] { submit(gi, k); });
            }
        }
        if (s.maturity_unlock_epoch) at_epoch_start(*s.maturity_unlock_epoch, [this] { unlock_pools(); });
        flush_ledger();
    }

    void bind(NodeEntity& node, std::uint64_t epoch) {
        const auto rec = r_.registry.associate(*node.owner, *node.license, node.id, epoch);
        log("associate", "license=" + std::to_string(rec.license.value) + " node=" + rec.node.value +
                             " previous=" + (rec.previous ? rec.previous->value : "-"));
    }

    // Scheduled config events -----------------------------------------------

    void purchase(std::size_t n) {
        NodeEntity& node = nodes_[n];
        const std::uint64_t epoch = epoch_now();
        const auto price = nd_price_for(r_.scenario.nd_price_tiers, r_.registry.nd_sold());
        if (!price || r_.registry.nd_sold() >= r_.registry.nd_supply_limit()) {
            flag(epoch, "nd_sold_out", "node=" + node.id.value);
            return;
        }
        // Buyers acquire R1 on the market; the LP wallet is the liquidity source.
        const TokenAmount have = r_.ledger.balance(*node.owner);
        if (have < *price) {
            const TokenAmount need = *price - have;
            if (r_.ledger.balance(PoolId::Lp) < need) {
                flag(epoch, "nd_purchase_deferred", "node=" + node.id.value + " price=" + price->to_string());
                at_epoch_start(epoch + 1, [this, n] { purchase(n); });
                return;
            }
            r_.ledger.transfer(PoolId::Lp, *node.owner, need);
        }
        try {
            const License& lic = r_.registry.purchase_nd(r_.ledger, *node.owner, *price);
            node.license = lic.id;
            flush_ledger();
            log("license_issued", "license=" + std::to_string(lic.id.value) + " class=ND owner=" + lic.owner.value +
                                      " cap=" + lic.cap.to_string() + " price=" + price->to_string());
            bind(node, epoch);
        } catch (const ProtocolError& e) {
            flush_ledger();
            flag(epoch, "nd_purchase_failed", "node=" + node.id.value + " error=" + std::string(errc_name(e.code())));
        }
    }

    void rebind(std::size_t n) {
        NodeEntity& node = nodes_[n];
        const std::uint64_t epoch = epoch_now();
        if (!node.license) return;
        const NodeId fresh{node.base + "-r" + std::to_string(node.rebinds + 1)};
        try {
            const NodeId old = node.id;
            node.id = fresh;
            try {
                bind(node, epoch);
            } catch (...) {
                node.id = old;
                throw;
            }
            ++node.rebinds;
        } catch (const ProtocolError& e) {
            flag(epoch, "rebind_rejected", "node=" + node.id.value + " error=" + std::string(errc_name(e.code())));
        }
    }

    void set_kyc(std::size_t n, bool verified) {
        const NodeEntity& node = nodes_[n];
        r_.ledger.set_kyc(*node.owner, verified);
        log("kyc", "account=" + node.owner->value + " verified=" + (verified ? "1" : "0"));
    }

    void submit(std::size_t group, std::uint64_t sponsor_index) {
        const JobGroup& g = r_.scenario.jobs[group];
        const std::uint64_t epoch = epoch_now();
        const AccountId sponsor{"sponsor-" + std::to_string(sponsor_index)};
        r_.ledger.open_account(sponsor, true);
        if (r_.ledger.balance(PoolId::Lp) < g.fee) {
            flag(epoch, "job_unfunded", "sponsor=" + sponsor.value + " fee=" + g.fee.to_string());
            return;
        }
        r_.ledger.transfer(PoolId::Lp, sponsor, g.fee);
        try {
            const Job& job = r_.jobs.submit_job(r_.ledger, sponsor, g.fee, g.resources, g.duration, epoch);
            flush_ledger();
            log("job_submitted", "job=" + std::to_string(job.id.value) + " sponsor=" + sponsor.value +
                                     " fee=" + job.fee.to_string() + " resources=" + std::to_string(job.resources) +
                                     " duration=" + std::to_string(job.duration));
        } catch (const ProtocolError& e) {
            flush_ledger();
            flag(epoch, "job_rejected", "sponsor=" + sponsor.value + " error=" + std::string(errc_name(e.code())));
        }
    }

    void unlock_pools() {
        for (PoolId p : kMaturityLockedPools) r_.ledger.set_pool_locked(p, false);
        log("pools_unlocked", "pools=MARKETING;GRANTS;CSR");
    }

    // Epoch pipeline --------------------------------------------------------

    void schedule_epoch(std::uint64_t e) {
        q_.schedule(e * kEpochSeconds, kPhaseOpen, [this, e] { open_epoch(e); });
        q_.schedule((e + 1) * kEpochSeconds, kPhaseClose, [this, e] { close_epoch(e); });
    }

    std::vector<NodeCandidate> candidates() const {
        std::vector<NodeCandidate> out;
        for (const auto& node : nodes_) {
            if (!node.license) continue;
            out.push_back({node.id, *node.owner, *node.cls, node.dauth, node.capacity});
        }
        return out;
    }

    void open_epoch(std::uint64_t e) {
        log("epoch_open", "epoch=" + std::to_string(e));
        for (auto& node : nodes_) {
            node.dauth = node.license && r_.registry.dauth_validate(node.id, r_.ledger);
        }

        std::vector<OracleCandidate> pool;
        for (auto& o : oracles_) {
            o.trace = o.uptime.next_epoch(EpochId{e});
            o.self_availability = local_availability(up_slots(o.trace), mh_);
            pool.push_back({o.id, o.cost, o.ema});
        }
        const double cap = r_.scenario.oracles.cost_cap.value_or(std::numeric_limits<double>::infinity());
        try {
            log("dauth_oracle", "oracle=" + select_oracle(pool, cap).value);
        } catch (const ProtocolError&) {
            flag(e, "no_feasible_oracle", "");
        }

        const auto cands = candidates();
        for (const auto& [id, job] : r_.jobs.jobs()) {
            if (job.state != JobState::Pending && job.state != JobState::Transferred) continue;
            try {
                const NodeId node = r_.jobs.assign_job(id, cands);
                log("job_assigned", "job=" + std::to_string(id.value) + " node=" + node.value);
            } catch (const ProtocolError&) {
                log("job_waiting", "job=" + std::to_string(id.value));
                if (r_.jobs.note_idle_epoch(id)) settle(id, e);
            }
        }
    }

    void close_epoch(std::uint64_t e) {
        const EpochId epoch{e};

        // Heartbeats.
        std::vector<HeartbeatReceiver> receivers;
        for (const auto& o : oracles_) receivers.push_back({o.id.value, &o.trace});
        for (auto& node : nodes_) {
            const UptimeTrace trace = node.uptime.next_epoch(epoch);
            if (!node.dauth) continue;
            emit_and_record(hb_, node.id, epoch, trace, receivers, loss_);
            log("heartbeats", "node=" + node.id.value + " up_slots=" + std::to_string(up_slots(trace)) +
                                  " received=" + join_counts(hb_.counts(node.id, epoch)));
        }
        hb_.close_epoch(epoch);

        // Oracle self-gating.
        eligible_.assign(oracles_.size(), false);
        for (std::size_t i = 0; i < oracles_.size(); ++i) {
            eligible_[i] = oracle_set_.is_byzantine(i) || self_gate(oracles_[i].self_availability);
            log("gate", "oracle=" + oracles_[i].id.value +
                            " self=" + std::to_string(oracles_[i].self_availability) +
                            " eligible=" + (eligible_[i] ? "1" : "0"));
        }

        // Finalization: retries of earlier epochs, then this epoch.
        const auto retry = pending_;
        for (const auto& [key, row] : retry) {
            if (attempt(row, e)) pending_.erase(key);
        }
        current_rows_.clear();
        for (const auto& node : nodes_) {
            if (!node.license) continue;
            EpochRow row;
            row.node = node.id;
            row.epoch = e;
            row.license = node.license;
            row.dauth_valid = node.dauth;
            row.heartbeats = hb_.counts(node.id, epoch);
            for (auto c : row.heartbeats) row.honest_values.push_back(local_availability(c, mh_));
            r_.epochs.push_back(std::move(row));
            const std::size_t idx = r_.epochs.size() - 1;
            current_rows_[node.id] = idx;
            if (!attempt(idx, e)) pending_[{e, node.id}] = idx;
        }

        // PoAI.
        for (const auto& [id, job] : r_.jobs.jobs()) {
            if (job.state != JobState::Running || !job.assigned) continue;
            const NodeId node = *job.assigned;
            std::uint8_t a = 0;
            auto it = current_rows_.find(node);
            if (it != current_rows_.end() && r_.epochs[it->second].finalized &&
                r_.epochs[it->second].finalized_round == e) {
                a = r_.epochs[it->second].availability;
            } else {
                flag(e, "job_epoch_unverified", "job=" + std::to_string(id.value) + " node=" + node.value);
            }
            AccountId op{"-"};
            if (auto lic = r_.registry.find_by_node(node)) op = r_.registry.at(*lic).owner;
            const EpochOutcome out = r_.jobs.monitor_epoch(id, e, a, op);
            log("job_epoch", "job=" + std::to_string(id.value) + " node=" + node.value +
                                 " A=" + std::to_string(out.availability) + " pass=" + (out.passed ? "1" : "0") +
                                 " payable=" + out.payable.to_string());
            if (r_.jobs.ready_to_settle(id)) settle(id, e);
        }

        // Scores.
        for (const auto& [node, idx] : current_rows_) {
            const EpochRow& row = r_.epochs[idx];
            if (row.finalized && row.dauth_valid) r_.jobs.scores().update(node, row.availability / 255.0);
        }
        for (auto& o : oracles_) {
            const double alpha = r_.scenario.poai.score_alpha;
            o.ema = (1.0 - alpha) * o.ema + alpha * (o.self_availability / 255.0);
        }

        snapshot(e);
        if (in_run(e + 1)) schedule_epoch(e + 1);
    }

    bool attempt(std::size_t idx, std::uint64_t round) {
        EpochRow& row = r_.epochs[idx];
        const EpochId epoch{row.epoch};
        std::vector<OracleVote> votes;
        std::uint32_t byzantine = 0;
        for (std::size_t i = 0; i < oracles_.size(); ++i) {
            if (!eligible_[i]) continue;
            votes.push_back({oracles_[i].id, row.node, epoch, oracle_set_.vote(i, row.honest_values[i], row.node, epoch)});
            if (oracle_set_.is_byzantine(i)) ++byzantine;
        }
        const ConsensusResult res = finalize_epoch(row.node, epoch, votes, static_cast<std::uint32_t>(oracles_.size()));
        row.eligible_oracles = res.quorum_size;
        row.quorum_required = res.quorum_required;
        row.byzantine_votes = byzantine;
        if (!res.finalized) {
            log("unfinalized", "node=" + row.node.value + " epoch=" + std::to_string(row.epoch) +
                                   " votes=" + std::to_string(res.quorum_size) +
                                   " quorum=" + std::to_string(res.quorum_required));
            return false;
        }
        row.finalized = true;
        row.finalized_round = round;
        row.availability = res.availability;
        log("finalized", "node=" + row.node.value + " epoch=" + std::to_string(row.epoch) +
                             " A=" + std::to_string(res.availability) + " votes=" + std::to_string(res.quorum_size) +
                             " byzantine=" + std::to_string(byzantine));
        accrue(row, round);
        return true;
    }

    void accrue(EpochRow& row, std::uint64_t round) {
        if (!row.license || !row.dauth_valid) return;
        try {
            const Accrual acc = minter_.epoch_accrual(r_.registry, r_.ledger, *row.license, row.availability);
            row.minted = acc.minted;
            flush_ledger();
            if (acc.status == AccrualStatus::Minted) {
                const License& lic = r_.registry.at(*row.license);
                log("accrual", "license=" + std::to_string(lic.id.value) + " epoch=" + std::to_string(row.epoch) +
                                   " credits=" + std::to_string(acc.credits_applied) +
                                   " minted=" + acc.minted.to_string() +
                                   " credits_total=" + std::to_string(lic.credits_scaled));
            }
            if (acc.completed_now) {
                r_.completion_epoch[*row.license] = round;
                log("license_complete", "license=" + std::to_string(row.license->value) +
                                            " epoch=" + std::to_string(round));
            }
        } catch (const ProtocolError& e) {
            flush_ledger();
            flag(round, "accrual_skipped", "license=" + std::to_string(row.license->value) +
                                               " error=" + std::string(errc_name(e.code())));
        }
    }

    void settle(JobId id, std::uint64_t epoch) {
        const Settlement s = r_.jobs.settle(r_.ledger, id);
        flush_ledger();
        std::string payouts;
        for (const auto& p : s.payouts) {
            if (!payouts.empty()) payouts += ';';
            payouts += p.account.value + ":" + p.amount.to_string();
        }
        log("job_settled", "job=" + std::to_string(id.value) + " epoch=" + std::to_string(epoch) +
                               " state=" + std::string(job_state_name(s.final_state)) +
                               " payable=" + s.payable.to_string() + " released=" + s.released.to_string() +
                               " burned=" + s.burned.to_string() + " refunded=" + s.refunded.to_string() +
                               " payouts=" + (payouts.empty() ? "-" : payouts));
    }

    void snapshot(std::uint64_t e) {
        const SupplyLedger& l = r_.ledger;
        SupplyRow row;
        row.epoch = e;
        row.minted = l.minted_total();
        row.burned = l.burned_total();
        row.circulating = l.holdings_total();
        for (PoolId p : kAllPools) row.pools[static_cast<std::size_t>(p)] = l.pool(p).balance;
        for (const auto& [_, amount] : l.escrows()) row.escrow += amount;
        row.conserved = row.circulating + row.burned == row.minted;
        row.within_cap = row.minted <= l.hard_cap();
        log("supply", "epoch=" + std::to_string(e) + " minted=" + row.minted.to_string() +
                          " burned=" + row.burned.to_string() + " circulating=" + row.circulating.to_string() +
                          " conserved=" + (row.conserved ? "1" : "0"));
        r_.supply.push_back(row);
    }

    void finish() {
        for (const auto& [key, idx] : pending_) {
            EpochRow& row = r_.epochs[idx];
            row.defaulted = true;
            row.availability = 0;
            ++r_.unfinalized;
            flag(key.first, "unfinalized", "node=" + row.node.value);
        }
        pending_.clear();
        log("run_end", "epochs=" + std::to_string(r_.scenario.duration_epochs) +
                           " minted=" + r_.ledger.minted_total().to_string() +
                           " burned=" + r_.ledger.burned_total().to_string());
    }

    RunResult r_;
    EventQueue q_;
    std::uint32_t mh_;
    PoaMinter minter_;
    HeartbeatLog hb_;
    LossModel loss_;
    OracleSet oracle_set_;
    std::vector<OracleState> oracles_;
    std::vector<NodeEntity> nodes_;
    std::vector<bool> eligible_;
    std::map<std::pair<std::uint64_t, NodeId>, std::size_t> pending_;
    std::map<NodeId, std::size_t> current_rows_;
};

}  // namespace

RunResult run(const Scenario& scenario, std::uint64_t seed) {
    validate(scenario);
    return Simulator(scenario, seed).run();
}

}  // namespace poasim
