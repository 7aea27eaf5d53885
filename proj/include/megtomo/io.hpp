#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "megtomo/benchmark.hpp"

namespace megtomo {

inline constexpr const char* kToolName = "megtomo";
inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr const char* kQuartileConvention =
    "linear interpolation between order statistics";

// Fixed 12-significant-digit formatting so CSV output diffs cleanly across
// platforms.
std::string format_g12(double value);

void write_trace_csv(const TrackTrace& trace, const std::string& path);
void write_counts_csv(const TrackTrace& trace, const std::string& path);
void write_aggregate_csv(const AggregateStats& stats, const std::string& path,
                         std::optional<double> snr = std::nullopt);

nlohmann::json quartile_json(const QuartileStat& stat);
nlohmann::json failures_json(const std::vector<RunFailure>& failures);
nlohmann::json trace_json(const TrackTrace& trace, const nlohmann::json& config_echo);
nlohmann::json summary_json(const nlohmann::json& config_echo, const AggregateStats& stats,
                            const std::vector<RunFailure>& failures);
nlohmann::json sweep_summary_json(const nlohmann::json& config_echo,
                                  const std::vector<SweepPoint>& points);

void write_json(const nlohmann::json& j, const std::string& path);

// FNV-1a 64-bit digest of the file contents, rendered as 16 hex digits.
std::string file_digest(const std::string& path);

// Reproducibility manifest listing every output with its digest. The paths are
// interpreted relative to out_dir and recorded as given.
void write_manifest(const std::string& out_dir, const std::string& command,
                    const nlohmann::json& config_echo, std::uint64_t master_seed,
                    const std::vector<std::string>& outputs);

}  // namespace megtomo
