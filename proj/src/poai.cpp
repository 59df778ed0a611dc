#include "poasim/poai.hpp"

#include "poasim/consensus.hpp"
#include "poasim/errors.hpp"

#include <algorithm>

namespace poasim {

std::string_view job_state_name(JobState s) noexcept {
    switch (s) {
        case JobState::Pending: return "Pending";
        case JobState::Running: return "Running";
        case JobState::Transferred: return "Transferred";
        case JobState::Settled: return "Settled";
        case JobState::Aborted: return "Aborted";
    }
    return "?";
}

void NodeScore::update(const NodeId& node, double fraction) {
    fraction = std::clamp(fraction, 0.0, 1.0);
    auto [it, inserted] = scores_.try_emplace(node, 1.0);
    it->second = std::clamp((1.0 - alpha_) * it->second + alpha_ * fraction, 0.0, 1.0);
}

double NodeScore::score(const NodeId& node) const {
    auto it = scores_.find(node);
    return it == scores_.end() ? 1.0 : it->second;
}

TokenAmount epoch_fee_share(TokenAmount fee, std::uint32_t duration, std::uint32_t index) {
    const u128 hi = mul_div(fee.units(), index + 1, duration);
    const u128 lo = mul_div(fee.units(), index, duration);
    return TokenAmount::from_units(hi - lo);
}

JobBook::JobBook(PoaiConfig config) : config_(config), scores_(config.score_alpha) {}

TokenAmount JobBook::min_fee(std::uint32_t resources, std::uint32_t duration) const {
    return TokenAmount::from_units(config_.fee_rate.units() * resources * duration);
}

const Job& JobBook::submit_job(SupplyLedger& ledger, const AccountId& sponsor, TokenAmount fee,
                               std::uint32_t resources, std::optional<std::uint32_t> duration,
                               std::uint64_t epoch) {
    const std::uint32_t window = duration.value_or(kDefaultJobDuration);
    if (window == 0) throw std::invalid_argument("job duration must be positive");
    if (!ledger.kyc_verified(sponsor)) throw ProtocolError(Errc::NotKycVerified, sponsor.value);
    const TokenAmount floor_fee = min_fee(resources, window);
    if (fee < floor_fee) {
        throw ProtocolError(Errc::InsufficientFee, fee.to_decimal() + " < minimum " + floor_fee.to_decimal());
    }
    const JobId id{next_id_};
    ledger.transfer(sponsor, EscrowId{id.value}, fee);
    ++next_id_;

    Job job;
    job.id = id;
    job.sponsor = sponsor;
    job.fee = fee;
    job.resources = resources;
    job.duration = window;
    job.submitted_epoch = epoch;
    escrows_[id] = EscrowAccount{id, fee, fee, {}, {}, {}};
    return jobs_.emplace(id, std::move(job)).first->second;
}

NodeId JobBook::assign_job(JobId id, std::span<const NodeCandidate> candidates) {
    Job& job = mut(id);
    if (job.state != JobState::Pending && job.state != JobState::Transferred) {
        throw ProtocolError(Errc::JobNotRunning, "job " + std::to_string(id.value) + " is " +
                                                     std::string(job_state_name(job.state)));
    }
    auto eligible = [&](const NodeCandidate& c) {
        return c.dauth_valid && c.cls == LicenseClass::Nd && c.capacity >= load(c.node) + job.resources;
    };
    auto pick = [&](bool skip_last_failed) -> const NodeCandidate* {
        const NodeCandidate* best = nullptr;
        for (const auto& c : candidates) {
            if (!eligible(c)) continue;
            if (skip_last_failed && job.last_failed == c.node) continue;
            if (best == nullptr) {
                best = &c;
                continue;
            }
            const double s = scores_.score(c.node), bs = scores_.score(best->node);
            const auto l = load(c.node), bl = load(best->node);
            if (s > bs || (s == bs && (l < bl || (l == bl && c.node < best->node)))) best = &c;
        }
        return best;
    };
    const NodeCandidate* chosen = pick(true);
    if (chosen == nullptr) chosen = pick(false);
    if (chosen == nullptr) throw ProtocolError(Errc::NoEligibleNode, "job " + std::to_string(id.value));

    job.assigned = chosen->node;
    job.node_history.push_back(chosen->node);
    job.state = JobState::Running;
    load_[chosen->node] += job.resources;
    return chosen->node;
}

EpochOutcome JobBook::monitor_epoch(JobId id, std::uint64_t epoch, std::uint8_t availability,
                                    const AccountId& operator_account) {
    Job& job = mut(id);
    if (job.state != JobState::Running || !job.assigned) {
        throw ProtocolError(Errc::JobNotRunning, "job " + std::to_string(id.value));
    }
    EpochOutcome out;
    out.epoch = epoch;
    out.node = *job.assigned;
    out.operator_account = operator_account;
    out.availability = availability;
    out.passed = service_flag(availability);
    if (out.passed) {
        const TokenAmount share = epoch_fee_share(job.fee, job.duration, job.passed_epochs);
        out.payable = TokenAmount::from_units(mul_div(share.units(), availability, 255));
        ++job.passed_epochs;
        if (job.passed_epochs == job.duration) release_node(job);
    } else {
        job.last_failed = job.assigned;
        release_node(job);
        job.state = JobState::Transferred;
        register_loss(job);
    }
    job.outcomes.push_back(out);
    return out;
}

bool JobBook::note_idle_epoch(JobId id) {
    Job& job = mut(id);
    if (job.state != JobState::Pending && job.state != JobState::Transferred) return false;
    register_loss(job);
    return job.state == JobState::Aborted;
}

void JobBook::register_loss(Job& job) {
    ++job.lost_epochs;
    if (job.lost_epochs >= config_.max_extension_epochs) {
        release_node(job);
        job.state = JobState::Aborted;
    }
}

void JobBook::release_node(Job& job) {
    if (!job.assigned) return;
    auto it = load_.find(*job.assigned);
    if (it != load_.end()) {
        it->second -= std::min(it->second, job.resources);
        if (it->second == 0) load_.erase(it);
    }
    job.assigned.reset();
}

bool JobBook::ready_to_settle(JobId id) const {
    const Job& j = job(id);
    if (settlements_.contains(id)) return false;
    return j.passed_epochs == j.duration || j.state == JobState::Aborted;
}

Settlement JobBook::settle(SupplyLedger& ledger, JobId id) {
    Job& job = mut(id);
    if (!ready_to_settle(id)) {
        throw ProtocolError(Errc::WindowIncomplete, "job " + std::to_string(id.value) + " served " +
                                                        std::to_string(job.passed_epochs) + "/" +
                                                        std::to_string(job.duration));
    }
    EscrowAccount& esc = escrows_.at(id);
    const EscrowId holder{id.value};

    Settlement rec;
    rec.job = id;
    std::vector<Payout> earners;
    std::vector<u128> weights;
    for (const auto& o : job.outcomes) {
        if (!o.passed) continue;
        rec.payable += o.payable;
        auto it = std::find_if(earners.begin(), earners.end(),
                               [&](const Payout& p) { return p.account == o.operator_account; });
        if (it == earners.end()) {
            earners.push_back({o.operator_account, {}, 0});
            weights.push_back(0);
            it = earners.end() - 1;
        }
        it->epochs_served += 1;
        weights[static_cast<std::size_t>(it - earners.begin())] += o.payable.units();
    }

    if (!rec.payable.is_zero()) {
        const auto parts = split(rec.payable, kSettlementSplit);
        rec.released = parts[0];
        rec.burned = parts[1];
        const auto shares = split_weighted(rec.released, weights);
        for (std::size_t i = 0; i < earners.size(); ++i) {
            earners[i].amount = shares[i];
            ledger.transfer(holder, earners[i].account, shares[i]);
        }
        ledger.burn(holder, rec.burned);
    }
    rec.payouts = std::move(earners);
    rec.refunded = esc.deposit - rec.payable;
    ledger.transfer(holder, job.sponsor, rec.refunded);

    esc.locked = TokenAmount{};
    esc.released = rec.released;
    esc.burned = rec.burned;
    esc.refunded = rec.refunded;

    if (job.state != JobState::Aborted) job.state = JobState::Settled;
    rec.final_state = job.state;
    return settlements_.emplace(id, std::move(rec)).first->second;
}

const Job& JobBook::job(JobId id) const {
    auto it = jobs_.find(id);
    if (it == jobs_.end()) throw ProtocolError(Errc::UnknownJob, std::to_string(id.value));
    return it->second;
}

Job& JobBook::mut(JobId id) { return const_cast<Job&>(std::as_const(*this).job(id)); }

const EscrowAccount& JobBook::escrow(JobId id) const {
    auto it = escrows_.find(id);
    if (it == escrows_.end()) throw ProtocolError(Errc::UnknownJob, std::to_string(id.value));
    return it->second;
}

std::uint32_t JobBook::load(const NodeId& node) const {
    auto it = load_.find(node);
    return it == load_.end() ? 0 : it->second;
}

}  // namespace poasim
