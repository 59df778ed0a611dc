#pragma once

#include "poasim/amount.hpp"
#include "poasim/event_log.hpp"
#include "poasim/simulator.hpp"

#include <filesystem>
#include <string>

namespace poasim {

// Every token amount is written twice: base units and a decimal R1 string.

std::string epochs_csv(const RunResult& run);
std::string supply_csv(const RunResult& run);
std::string jobs_csv(const RunResult& run);
std::string licenses_json(const RunResult& run);
std::string summary_json(const RunResult& run);

/// Writes epochs.csv, supply.csv, jobs.csv, licenses.json, summary.json and
/// events.log into `dir`, creating it if needed.
void write_reports(const RunResult& run, const std::filesystem::path& dir);

/// Supply totals rebuilt purely from mint/burn events of a log.
struct ReplayTotals {
    TokenAmount minted;
    TokenAmount burned;
};
ReplayTotals replay_supply(const EventLog& log);

}  // namespace poasim
