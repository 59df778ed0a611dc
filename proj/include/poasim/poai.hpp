#pragma once

#include "poasim/ledger.hpp"
#include "poasim/licensing.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace poasim {

inline constexpr std::uint32_t kDefaultJobDuration = 30;

/// Settlement split of the consumed fee: operators, burn. Nothing else.
inline constexpr std::array<std::uint32_t, 2> kSettlementSplit = {850, 150};

struct JobId {
    std::uint64_t value = 0;
    friend auto operator<=>(const JobId&, const JobId&) = default;
};

enum class JobState : std::uint8_t { Pending, Running, Transferred, Settled, Aborted };

std::string_view job_state_name(JobState s) noexcept;

struct EpochOutcome {
    std::uint64_t epoch = 0;
    NodeId node;
    AccountId operator_account;
    std::uint8_t availability = 0;
    bool passed = false;
    TokenAmount payable;  // zero on failed epochs
};

struct Job {
    JobId id;
    AccountId sponsor;
    TokenAmount fee;
    std::uint32_t resources = 0;
    std::uint32_t duration = kDefaultJobDuration;
    std::uint64_t submitted_epoch = 0;
    std::optional<NodeId> assigned;
    std::optional<NodeId> last_failed;
    std::vector<NodeId> node_history;
    JobState state = JobState::Pending;
    std::vector<EpochOutcome> outcomes;
    std::uint32_t passed_epochs = 0;
    std::uint32_t lost_epochs = 0;  // failed or waiting for a node

    bool terminal() const { return state == JobState::Settled || state == JobState::Aborted; }
};

/// Escrow bookkeeping mirrored against the ledger's EscrowId balance.
struct EscrowAccount {
    JobId job;
    TokenAmount deposit;
    TokenAmount locked;
    TokenAmount released;
    TokenAmount burned;
    TokenAmount refunded;

    bool conserved() const { return locked + released + burned + refunded == deposit; }
};

struct Payout {
    AccountId account;
    TokenAmount amount;
    std::uint32_t epochs_served = 0;
};

struct Settlement {
    JobId job;
    JobState final_state = JobState::Settled;
    TokenAmount payable;
    std::vector<Payout> payouts;
    TokenAmount released;
    TokenAmount burned;
    TokenAmount refunded;
};

/// Exponential moving average of per-epoch availability fractions per node.
/// Unseen nodes score 1.
class NodeScore {
public:
    explicit NodeScore(double alpha = 0.1) : alpha_(alpha) {}

    void update(const NodeId& node, double fraction);
    double score(const NodeId& node) const;

private:
    double alpha_;
    std::map<NodeId, double> scores_;
};

struct PoaiConfig {
    TokenAmount fee_rate;  // per resource unit per epoch
    double score_alpha = 0.1;
    /// A job that has lost this many epochs (failed or unassigned) aborts.
    std::uint32_t max_extension_epochs = 30;
};

struct NodeCandidate {
    NodeId node;
    AccountId operator_account;
    LicenseClass cls = LicenseClass::Nd;
    bool dauth_valid = false;
    std::uint32_t capacity = 0;
};

/// Fee share of the i-th served epoch (0-based): the fee cut into `duration`
/// integer slices that re-sum to the fee exactly.
TokenAmount epoch_fee_share(TokenAmount fee, std::uint32_t duration, std::uint32_t index);

/// Proof-of-AI job escrow and lifecycle.
class JobBook {
public:
    explicit JobBook(PoaiConfig config = {});

    TokenAmount min_fee(std::uint32_t resources, std::uint32_t duration) const;

    /// Locks `fee` from the sponsor into the job's escrow.
    /// Throws InsufficientFee, InsufficientBalance, NotKycVerified.
    const Job& submit_job(SupplyLedger& ledger, const AccountId& sponsor, TokenAmount fee, std::uint32_t resources,
                          std::optional<std::uint32_t> duration, std::uint64_t epoch);

    /// Places a Pending/Transferred job on the best eligible ND node: highest
    /// score, then lowest load, then lowest id. The node that just failed the
    /// job is skipped if anything else qualifies. Throws NoEligibleNode.
    NodeId assign_job(JobId job, std::span<const NodeCandidate> candidates);

    /// Resolves one service epoch for a Running job; pass iff a >= 250.
    /// Failing transitions the job to Transferred. Throws JobNotRunning.
    EpochOutcome monitor_epoch(JobId job, std::uint64_t epoch, std::uint8_t availability,
                               const AccountId& operator_account);

    /// Records an epoch in which a Pending/Transferred job had no node.
    /// Returns true when this pushes the job over its extension budget and it
    /// becomes Aborted.
    bool note_idle_epoch(JobId job);

    bool ready_to_settle(JobId job) const;

    /// Pays 85% of the consumed fee to operators (pro rata to what each
    /// earned), burns 15%, refunds the rest to the sponsor. Requires every
    /// service epoch passed, or an aborted job. Throws WindowIncomplete.
    Settlement settle(SupplyLedger& ledger, JobId job);

    const Job& job(JobId id) const;
    const EscrowAccount& escrow(JobId id) const;
    const std::map<JobId, Job>& jobs() const { return jobs_; }
    const std::map<JobId, Settlement>& settlements() const { return settlements_; }

    std::uint32_t load(const NodeId& node) const;
    NodeScore& scores() { return scores_; }
    const NodeScore& scores() const { return scores_; }
    const PoaiConfig& config() const { return config_; }

private:
    Job& mut(JobId id);
    void release_node(Job& job);
    void register_loss(Job& job);

    PoaiConfig config_;
    NodeScore scores_;
    std::uint64_t next_id_ = 1;
    std::map<JobId, Job> jobs_;
    std::map<JobId, EscrowAccount> escrows_;
    std::map<JobId, Settlement> settlements_;
    std::map<NodeId, std::uint32_t> load_;
};

}  // namespace poasim
