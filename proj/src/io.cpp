#include "megtomo/io.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <stdexcept>

namespace megtomo {

std::string format_g12(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", value);
  return buf;
}

namespace {

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file " + path);
  return out;
}

void finish_output(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw std::runtime_error("failed writing output file " + path);
}

}  // namespace

void write_trace_csv(const TrackTrace& trace, const std::string& path) {
  auto out = open_output(path);
  out << "iteration,basis_label,infidelity,purity";
  for (int i = 0; i < trace.dim; ++i) out << ",p_true_" << i;
  for (int i = 0; i < trace.dim; ++i) out << ",p_pred_" << i;
  out << '\n';
  for (const auto& rec : trace.records) {
    out << rec.iteration << ',' << rec.basis_label << ',' << format_g12(rec.infidelity) << ','
        << format_g12(rec.purity);
    for (double p : rec.p_true) out << ',' << format_g12(p);
    for (double p : rec.p_pred) out << ',' << format_g12(p);
    out << '\n';
  }
  finish_output(out, path);
}

void write_counts_csv(const TrackTrace& trace, const std::string& path) {
  auto out = open_output(path);
  out << "iteration,basis_label";
  for (int i = 0; i < trace.dim; ++i) out << ",count_" << i;
  out << '\n';
  for (const auto& rec : trace.records) {
    if (rec.counts.empty()) continue;  // row 0 carries no measurement
    out << rec.iteration << ',' << rec.basis_label;
    for (auto c : rec.counts) out << ',' << c;
    out << '\n';
  }
  finish_output(out, path);
}

void write_aggregate_csv(const AggregateStats& stats, const std::string& path,
                         std::optional<double> snr) {
  auto out = open_output(path);
  out << "iteration,median,q25,q75";
  if (snr) out << ",snr";
  out << '\n';
  for (std::size_t t = 0; t < stats.infidelity.size(); ++t) {
    const auto& q = stats.infidelity[t];
    out << t << ',' << format_g12(q.median) << ',' << format_g12(q.q25) << ','
        << format_g12(q.q75);
    if (snr) out << ',' << format_g12(*snr);
    out << '\n';
  }
  finish_output(out, path);
}

nlohmann::json quartile_json(const QuartileStat& stat) {
  return {{"q25", stat.q25}, {"median", stat.median}, {"q75", stat.q75}};
}

nlohmann::json failures_json(const std::vector<RunFailure>& failures) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& f : failures) {
    arr.push_back({{"state", f.state_index}, {"repeat", f.repeat_index}, {"message", f.message}});
  }
  return arr;
}

nlohmann::json trace_json(const TrackTrace& trace, const nlohmann::json& config_echo) {
  nlohmann::json records = nlohmann::json::array();
  for (const auto& rec : trace.records) {
    nlohmann::json r = {{"iteration", rec.iteration},
                        {"basis_index", rec.basis_index},
                        {"basis_label", rec.basis_label},
                        {"infidelity", rec.infidelity},
                        {"purity", rec.purity},
                        {"p_true", rec.p_true},
                        {"p_pred", rec.p_pred}};
    if (!rec.counts.empty()) {
      r["counts"] = rec.counts;
      r["degenerate_counts"] = rec.degenerate_counts;
    }
    records.push_back(std::move(r));
  }
  return {{"tool", std::string(kToolName) + " " + kToolVersion},
          {"config", config_echo},
          {"seed", trace.seed},
          {"dim", trace.dim},
          {"state_index", trace.state_index},
          {"repeat_index", trace.repeat_index},
          {"records", std::move(records)}};
}

namespace {

nlohmann::json stats_json(const AggregateStats& stats) {
  nlohmann::json j = {{"n_traces", stats.n_traces},
                      {"threshold", stats.threshold},
                      {"iterations_to_threshold", quartile_json(stats.iterations_to_thresh)},
                      {"censored", stats.censored},
                      {"mean_infidelity", quartile_json(stats.mean_infidelity_burn_in)},
                      {"mean_infidelity_full_trace", quartile_json(stats.mean_infidelity_full)},
                      {"final_purity", quartile_json(stats.final_purity)}};
  if (stats.censored == stats.n_traces) j["iterations_to_threshold"] = nullptr;
  return j;
}

}  // namespace

nlohmann::json summary_json(const nlohmann::json& config_echo, const AggregateStats& stats,
                            const std::vector<RunFailure>& failures) {
  nlohmann::json j = stats_json(stats);
  j["tool"] = std::string(kToolName) + " " + kToolVersion;
  j["config"] = config_echo;
  j["quartile_convention"] = kQuartileConvention;
  j["failures"] = failures_json(failures);
  return j;
}

nlohmann::json sweep_summary_json(const nlohmann::json& config_echo,
                                  const std::vector<SweepPoint>& points) {
  nlohmann::json levels = nlohmann::json::array();
  for (const auto& p : points) {
    nlohmann::json entry = stats_json(p.stats);
    entry["extra_background_rate"] = p.level;
    entry["snr"] = p.snr;
    entry["failures"] = failures_json(p.failures);
    levels.push_back(std::move(entry));
  }
  return {{"tool", std::string(kToolName) + " " + kToolVersion},
          {"config", config_echo},
          {"quartile_convention", kQuartileConvention},
          {"levels", std::move(levels)}};
}

void write_json(const nlohmann::json& j, const std::string& path) {
  auto out = open_output(path);
  out << j.dump(2) << '\n';
  finish_output(out, path);
}

std::string file_digest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read file for digest: " + path);
  std::uint64_t hash = 14695981039346656037ULL;
  char buf[4096];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    const std::streamsize n = in.gcount();
    for (std::streamsize i = 0; i < n; ++i) {
      hash ^= static_cast<unsigned char>(buf[i]);
      hash *= 1099511628211ULL;
    }
  }
  char hex[17];
  std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(hash));
  return hex;
}

void write_manifest(const std::string& out_dir, const std::string& command,
                    const nlohmann::json& config_echo, std::uint64_t master_seed,
                    const std::vector<std::string>& outputs) {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char stamp[32];
  std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", &tm);

  nlohmann::json files = nlohmann::json::array();
  for (const auto& rel : outputs) {
    files.push_back({{"path", rel}, {"digest", file_digest(out_dir + "/" + rel)}});
  }
  const nlohmann::json manifest = {{"tool", std::string(kToolName) + " " + kToolVersion},
                                   {"command", command},
                                   {"timestamp", stamp},
                                   {"master_seed", master_seed},
                                   {"config", config_echo},
                                   {"outputs", std::move(files)}};
  write_json(manifest, out_dir + "/manifest.json");
}

}  // namespace megtomo
