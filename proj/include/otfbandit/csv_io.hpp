#pragma once

#include "otfbandit/harness.hpp"

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace otf {

inline constexpr const char* kTraceFile = "traces.csv";
inline constexpr const char* kSummaryFile = "summary.csv";
inline constexpr const char* kMetadataFile = "metadata.txt";

// traces.csv: "run_id,t,cum_regret", one row per (run, round), t from 1.
// summary.csv: "t,mean_regret,std_regret".
// Values use 17 significant digits, so reading them back is exact.
// Each file is written to a temporary sibling and renamed into place; on
// failure no partial file is left behind. Errors carry the path.
void write_traces_csv(const std::vector<RegretTrace>& traces, const std::filesystem::path& path);
void write_summary_csv(const SummaryStats& stats, const std::filesystem::path& path);

// Writes traces.csv and summary.csv into `dir`, creating it if needed.
void emit_csv(const std::vector<RegretTrace>& traces, const SummaryStats& stats,
              const std::filesystem::path& dir);

std::vector<RegretTrace> read_traces_csv(const std::filesystem::path& path);

// Reads summary.csv back; final_quantiles and n_runs are left zeroed.
SummaryStats read_summary_csv(const std::filesystem::path& path);

// "key = value" lines.
using Metadata = std::vector<std::pair<std::string, std::string>>;
void write_metadata(const Metadata& entries, const std::filesystem::path& path);
Metadata read_metadata(const std::filesystem::path& path);

} // namespace otf
