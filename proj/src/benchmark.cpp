#include "megtomo/benchmark.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "megtomo/rng.hpp"

namespace megtomo {

std::string evolution_name(Evolution evolution) {
  switch (evolution) {
    case Evolution::Stationary: return "stationary";
    case Evolution::PauliZ: return "pauli_z";
    case Evolution::RandomHermitian: return "random";
  }
  throw std::invalid_argument("evolution_name: unknown evolution");
}

Evolution evolution_from_name(const std::string& name) {
  if (name == "stationary") return Evolution::Stationary;
  if (name == "pauli_z") return Evolution::PauliZ;
  if (name == "random") return Evolution::RandomHermitian;
  throw std::invalid_argument("unknown evolution \"" + name +
                              "\" (expected stationary, pauli_z or random)");
}

void ScenarioConfig::validate() const {
  if (dim < 2) throw std::invalid_argument("ScenarioConfig: dim must be >= 2");
  if (scheme == Scheme::Mub && !is_prime(dim)) {
    throw std::invalid_argument("ScenarioConfig: the mub scheme requires a prime dim");
  }
  if (t_tot < 1) throw std::invalid_argument("ScenarioConfig: t_tot must be >= 1");
  if (n_states < 1) throw std::invalid_argument("ScenarioConfig: n_states must be >= 1");
  if (n_noise_repeats < 1) {
    throw std::invalid_argument("ScenarioConfig: n_noise_repeats must be >= 1");
  }
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw std::invalid_argument("ScenarioConfig: threshold must lie in (0, 1)");
  }
  if (burn_in < -1 || burn_in >= t_tot) {
    throw std::invalid_argument("ScenarioConfig: burn_in must be -1 (auto) or in [0, t_tot)");
  }
  if (meg.dim != dim) {
    throw std::invalid_argument("ScenarioConfig: meg.dim must match dim");
  }
  noise.validate();
  meg.validate();
}

namespace {

HermitianMatrix make_generator(const ScenarioConfig& cfg, int state_index) {
  switch (cfg.evolution) {
    case Evolution::Stationary:
      return HermitianMatrix::zero(cfg.dim);
    case Evolution::PauliZ:
      return pauli_z_general(cfg.dim);
    case Evolution::RandomHermitian: {
      Rng rng(derive_seed(cfg.master_seed,
                          {kSeedTagGenerator, static_cast<std::uint64_t>(state_index)}));
      return random_hermitian(cfg.dim, rng);
    }
  }
  throw std::invalid_argument("run_ensemble: unknown evolution");
}

}  // namespace

EnsembleResult run_ensemble(const ScenarioConfig& cfg, int jobs) {
  cfg.validate();
  const MeasurementFamily family = make_family(cfg.scheme, cfg.dim);

  std::vector<PureState> initial_states;
  std::vector<EvolutionSpec> evolutions;
  initial_states.reserve(cfg.n_states);
  evolutions.reserve(cfg.n_states);
  for (int s = 0; s < cfg.n_states; ++s) {
    Rng rng(derive_seed(cfg.master_seed, {kSeedTagState, static_cast<std::uint64_t>(s)}));
    initial_states.push_back(haar_random_pure(cfg.dim, rng));
    evolutions.push_back(EvolutionSpec::with_default_rate(make_generator(cfg, s), cfg.t_tot));
  }

  const int total = cfg.n_states * cfg.n_noise_repeats;
  std::vector<std::optional<TrackTrace>> slots(total);
  std::vector<RunFailure> failures;
  std::mutex failure_mutex;

  auto run_one = [&](int index) {
    const int s = index / cfg.n_noise_repeats;
    const int r = index % cfg.n_noise_repeats;
    try {
      Rng rng(derive_seed(cfg.master_seed, {kSeedTagRun, static_cast<std::uint64_t>(s),
                                            static_cast<std::uint64_t>(r)}));
      TrackTrace trace = track(initial_states[s], evolutions[s], family, cfg.noise, cfg.meg, rng);
      trace.state_index = s;
      trace.repeat_index = r;
      slots[index] = std::move(trace);
    } catch (const std::exception& e) {
      std::lock_guard<std::mutex> lock(failure_mutex);
      failures.push_back({s, r, e.what()});
    }
  };

  const int workers = std::max(1, std::min(jobs, total));
  if (workers == 1) {
    for (int i = 0; i < total; ++i) run_one(i);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (int i = next.fetch_add(1); i < total; i = next.fetch_add(1)) run_one(i);
      });
    }
    for (auto& th : pool) th.join();
  }

  EnsembleResult result;
  result.traces.reserve(total);
  for (auto& slot : slots) {
    if (slot) result.traces.push_back(std::move(*slot));
  }
  std::sort(failures.begin(), failures.end(), [](const RunFailure& a, const RunFailure& b) {
    return std::tie(a.state_index, a.repeat_index) < std::tie(b.state_index, b.repeat_index);
  });
  result.failures = std::move(failures);
  return result;
}

std::optional<int> iterations_to_threshold(const TrackTrace& trace, double threshold) {
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw std::invalid_argument("iterations_to_threshold: threshold must lie in (0, 1)");
  }
  for (std::size_t t = 1; t < trace.records.size(); ++t) {
    if (trace.records[t].infidelity < threshold) return static_cast<int>(t);
  }
  return std::nullopt;
}

double mean_infidelity(const TrackTrace& trace, int burn_in) {
  const int t_tot = static_cast<int>(trace.records.size()) - 1;
  if (burn_in < 0 || burn_in >= t_tot) {
    throw std::invalid_argument("mean_infidelity: burn_in must lie in [0, t_tot)");
  }
  double sum = 0.0;
  for (int t = burn_in + 1; t <= t_tot; ++t) sum += trace.records[t].infidelity;
  return sum / (t_tot - burn_in);
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw std::invalid_argument("quantile: empty sample");
  if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("quantile: q must lie in [0, 1]");
  std::sort(values.begin(), values.end());
  const double h = q * (values.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(h);
  if (lo + 1 >= values.size()) return values.back();
  const double frac = h - static_cast<double>(lo);
  return values[lo] + frac * (values[lo + 1] - values[lo]);
}

QuartileStat quartiles(const std::vector<double>& values) {
  return {quantile(values, 0.25), quantile(values, 0.5), quantile(values, 0.75)};
}

AggregateStats aggregate(const std::vector<TrackTrace>& traces, double threshold, int burn_in) {
  if (traces.empty()) throw std::invalid_argument("aggregate: empty trace list");
  const std::size_t length = traces[0].records.size();
  for (const auto& trace : traces) {
    if (trace.records.size() != length) {
      throw std::invalid_argument("aggregate: traces must have equal length");
    }
  }
  const int t_tot = static_cast<int>(length) - 1;

  AggregateStats stats;
  stats.threshold = threshold;
  stats.n_traces = static_cast<int>(traces.size());

  stats.infidelity.reserve(length);
  std::vector<double> column(traces.size());
  for (std::size_t t = 0; t < length; ++t) {
    for (std::size_t i = 0; i < traces.size(); ++i) {
      column[i] = traces[i].records[t].infidelity;
    }
    stats.infidelity.push_back(quartiles(column));
  }

  std::vector<double> reached;
  std::vector<double> mean_burn;
  std::vector<double> mean_full;
  std::vector<double> purity_final;
  for (const auto& trace : traces) {
    const auto itt = iterations_to_threshold(trace, threshold);
    if (itt) {
      reached.push_back(static_cast<double>(*itt));
    } else {
      ++stats.censored;
    }
    // Auto burn-in uses the trace's own crossing; traces that never converge
    // fall back to the whole-trace mean.
    int b = burn_in >= 0 ? burn_in : itt.value_or(0);
    b = std::min(b, t_tot - 1);
    mean_burn.push_back(mean_infidelity(trace, b));
    mean_full.push_back(mean_infidelity(trace, 0));
    purity_final.push_back(trace.records.back().purity);
  }
  if (!reached.empty()) stats.iterations_to_thresh = quartiles(reached);
  stats.mean_infidelity_burn_in = quartiles(mean_burn);
  stats.mean_infidelity_full = quartiles(mean_full);
  stats.final_purity = quartiles(purity_final);
  return stats;
}

std::vector<SweepPoint> noise_sweep(const ScenarioConfig& base, const std::vector<double>& levels,
                                    int jobs) {
  for (double level : levels) {
    if (level < 0.0) throw std::invalid_argument("noise_sweep: levels must be >= 0");
  }
  std::vector<SweepPoint> points;
  points.reserve(levels.size());
  for (double level : levels) {
    ScenarioConfig cfg = base;
    cfg.noise.extra_background_rate = level;
    EnsembleResult ensemble = run_ensemble(cfg, jobs);
    SweepPoint point;
    point.level = level;
    point.snr = cfg.noise.snr();
    point.stats = aggregate(ensemble.traces, cfg.threshold, cfg.burn_in);
    point.failures = std::move(ensemble.failures);
    points.push_back(std::move(point));
  }
  return points;
}

}  // namespace megtomo
