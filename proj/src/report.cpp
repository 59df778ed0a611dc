#include "poasim/report.hpp"

#include "poasim/consensus.hpp"

#include <fstream>
#include <json.hpp>
#include <stdexcept>

namespace poasim {

namespace {

using nlohmann::ordered_json;

std::string money(TokenAmount a) { return a.to_string() + ',' + a.to_decimal(); }

ordered_json money_json(TokenAmount a) { return {{"units", a.to_string()}, {"r1", a.to_decimal()}}; }

std::string joined(const std::vector<std::uint32_t>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ';';
        out += std::to_string(v[i]);
    }
    return out;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

}  // namespace

std::string epochs_csv(const RunResult& run) {
    std::string out =
        "node,epoch,license,dauth_valid,heartbeats_per_oracle,A,service,finalized,finalized_round,defaulted,"
        "eligible_oracles,quorum_required,byzantine_votes,minted_this_epoch,minted_this_epoch_r1\n";
    for (const auto& r : run.epochs) {
        out += r.node.value + ',' + std::to_string(r.epoch) + ',' +
               (r.license ? std::to_string(r.license->value) : std::string()) + ',' + (r.dauth_valid ? "1" : "0") +
               ',' + joined(r.heartbeats) + ',' + std::to_string(r.availability) + ',' +
               (service_flag(r.availability) ? "1" : "0") + ',' + (r.finalized ? "1" : "0") + ',' +
               (r.finalized ? std::to_string(r.finalized_round) : std::string()) + ',' + (r.defaulted ? "1" : "0") +
               ',' + std::to_string(r.eligible_oracles) + ',' + std::to_string(r.quorum_required) + ',' +
               std::to_string(r.byzantine_votes) + ',' + money(r.minted) + '\n';
    }
    return out;
}

std::string supply_csv(const RunResult& run) {
    std::string out = "epoch,minted,minted_r1,burned,burned_r1,circulating,circulating_r1";
    for (PoolId p : kAllPools) {
        const std::string name(pool_name(p));
        out += ',' + name + ',' + name + "_r1";
    }
    out += ",escrow,escrow_r1,conserved,within_cap\n";
    for (const auto& r : run.supply) {
        out += std::to_string(r.epoch) + ',' + money(r.minted) + ',' + money(r.burned) + ',' + money(r.circulating);
        for (const auto& p : r.pools) out += ',' + money(p);
        out += ',' + money(r.escrow) + ',' + (r.conserved ? "1" : "0") + ',' + (r.within_cap ? "1" : "0") + '\n';
    }
    return out;
}

std::string jobs_csv(const RunResult& run) {
    std::string out =
        "job,sponsor,fee,fee_r1,resources,duration,submitted_epoch,state,nodes,epoch_results,passed_epochs,"
        "lost_epochs,payable,payable_r1,released,released_r1,burned,burned_r1,refunded,refunded_r1,payouts\n";
    for (const auto& [id, job] : run.jobs.jobs()) {
        std::string nodes;
        for (const auto& n : job.node_history) nodes += (nodes.empty() ? "" : ";") + n.value;
        std::string results;
        for (const auto& o : job.outcomes) {
            results += (results.empty() ? "" : ";") + std::to_string(o.epoch) + ':' + (o.passed ? 'P' : 'F');
        }
        out += std::to_string(id.value) + ',' + job.sponsor.value + ',' + money(job.fee) + ',' +
               std::to_string(job.resources) + ',' + std::to_string(job.duration) + ',' +
               std::to_string(job.submitted_epoch) + ',' + std::string(job_state_name(job.state)) + ',' + nodes + ',' +
               results + ',' + std::to_string(job.passed_epochs) + ',' + std::to_string(job.lost_epochs) + ',';
        auto s = run.jobs.settlements().find(id);
        if (s == run.jobs.settlements().end()) {
            out += ",,,,,,,,\n";
            continue;
        }
        std::string payouts;
        for (const auto& p : s->second.payouts) {
            payouts += (payouts.empty() ? "" : ";") + p.account.value + ':' + p.amount.to_string();
        }
        out += money(s->second.payable) + ',' + money(s->second.released) + ',' + money(s->second.burned) + ',' +
               money(s->second.refunded) + ',' + payouts + '\n';
    }
    return out;
}

std::string licenses_json(const RunResult& run) {
    ordered_json arr = ordered_json::array();
    for (const auto& [id, lic] : run.registry.licenses()) {
        const MintProgress progress = run.registry.license_remaining(id);
        ordered_json j;
        j["id"] = id.value;
        j["class"] = license_class_name(lic.cls);
        j["owner"] = lic.owner.value;
        j["node"] = lic.node ? ordered_json(lic.node->value) : ordered_json(nullptr);
        j["cap"] = money_json(lic.cap);
        j["minted"] = money_json(progress.minted);
        j["remaining"] = money_json(progress.remaining);
        j["credits_scaled"] = lic.credits_scaled;
        j["credit_target_scaled"] = lic.credit_target_scaled();
        j["credits"] = static_cast<double>(lic.credits_scaled) / kByteScale;
        j["complete"] = lic.complete();
        auto done = run.completion_epoch.find(id);
        j["completion_epoch"] = done == run.completion_epoch.end() ? ordered_json(nullptr) : ordered_json(done->second);
        arr.push_back(std::move(j));
    }
    return arr.dump(2) + '\n';
}

std::string summary_json(const RunResult& run) {
    const SupplyLedger& l = run.ledger;
    ordered_json j;
    j["seed"] = run.seed;
    j["epochs"] = run.scenario.duration_epochs;
    j["max_heartbeats"] = run.scenario.heartbeat_interval_s ? 86400 / run.scenario.heartbeat_interval_s : 0;
    j["hard_cap"] = money_json(l.hard_cap());
    j["minted"] = money_json(l.minted_total());
    j["burned"] = money_json(l.burned_total());
    j["circulating"] = money_json(l.holdings_total());
    ordered_json pools;
    for (PoolId p : kAllPools) pools[std::string(pool_name(p))] = money_json(l.pool(p).balance);
    j["pools"] = pools;

    ordered_json by_class;
    for (LicenseClass cls : {LicenseClass::Gnd, LicenseClass::Mnd, LicenseClass::Nd}) {
        std::size_t count = 0, complete = 0;
        TokenAmount minted;
        for (const auto& [id, lic] : run.registry.licenses()) {
            if (lic.cls != cls) continue;
            ++count;
            if (lic.complete()) ++complete;
            minted += lic.minted;
        }
        by_class[std::string(license_class_name(cls))] = {
            {"count", count}, {"complete", complete}, {"minted", money_json(minted)}};
    }
    j["licenses"] = by_class;

    std::size_t settled = 0, aborted = 0;
    TokenAmount released, burned, refunded;
    for (const auto& [id, s] : run.jobs.settlements()) {
        (s.final_state == JobState::Aborted ? aborted : settled)++;
        released += s.released;
        burned += s.burned;
        refunded += s.refunded;
    }
    j["jobs"] = {{"submitted", run.jobs.jobs().size()},
                 {"settled", settled},
                 {"aborted", aborted},
                 {"released", money_json(released)},
                 {"burned", money_json(burned)},
                 {"refunded", money_json(refunded)}};

    j["unfinalized_epochs"] = run.unfinalized;
    j["flags"] = run.flags.size();
    j["conservation_held"] = run.conservation_held();
    j["cap_held"] = run.cap_held();
    j["events"] = run.log.size();
    j["digest"] = run.log.digest();
    return j.dump(2) + '\n';
}

void write_reports(const RunResult& run, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    write_file(dir / "epochs.csv", epochs_csv(run));
    write_file(dir / "supply.csv", supply_csv(run));
    write_file(dir / "jobs.csv", jobs_csv(run));
    write_file(dir / "licenses.json", licenses_json(run));
    write_file(dir / "summary.json", summary_json(run));
    write_file(dir / "events.log", run.log.serialize());
}

ReplayTotals replay_supply(const EventLog& log) {
    ReplayTotals t;
    for (const auto& e : log.events()) {
        if (e.kind != "mint" && e.kind != "burn") continue;
        const auto units = u128_parse(payload_field(e.payload, "amount"));
        if (!units) throw std::invalid_argument("replay: bad amount in " + e.kind + " event");
        (e.kind == "mint" ? t.minted : t.burned) += TokenAmount::from_units(*units);
    }
    return t;
}

}  // namespace poasim
