// Acceptance gate: one line per criterion, exit code = number of failures.
// Heavy scenarios run through the library with a thread pool; the CLI binary
// (argv[1]) is only needed for the determinism criterion.

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <json.hpp>

#include "megtomo/benchmark.hpp"
#include "megtomo/config.hpp"
#include "megtomo/io.hpp"

namespace fs = std::filesystem;
using namespace megtomo;

namespace {

// Every tolerance and window the gate enforces.
constexpr double kThreshold = 0.1;           // infidelity defining "converged"
constexpr double kC1Low = 3, kC1High = 8;    // high-signal median iterations window
constexpr double kC2MubLow = 4, kC2MubHigh = 31;
constexpr double kC2PauliLow = 9, kC2PauliHigh = 62;
constexpr double kC3Cap50 = 0.01, kC3Cap300 = 0.001;
constexpr double kC4FactorOfBase = 2.0;      // 2000-extra vs no-extra steady error
constexpr double kC4AbsCap = 0.25;           // steady error cap at 2500 extra
constexpr double kC5AvgCap = 0.1, kC5EarlyCap = 0.25;
constexpr double kC6PhysTol = 1e-12;
constexpr double kC7RelTol = 1e-6;
constexpr double kC8OverlapTol = 1e-10, kC8AlgebraTol = 1e-12;
constexpr double kC9FidTol = 1e-9, kC9EigTol = 1e-10;

int worker_jobs() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

ScenarioConfig base_scenario() {
  ScenarioConfig cfg;  // qutrit, MUB, stationary, signal 1e6, dark 100, background 50
  cfg.t_tot = 300;
  cfg.n_states = 50;
  cfg.n_noise_repeats = 1;
  cfg.master_seed = 0;
  cfg.threshold = kThreshold;
  return cfg;
}

AggregateStats run_and_aggregate(const ScenarioConfig& cfg) {
  const EnsembleResult ens = run_ensemble(cfg, worker_jobs());
  if (!ens.failures.empty()) {
    throw std::runtime_error("ensemble reported " + std::to_string(ens.failures.size()) +
                             " failed runs, first: " + ens.failures.front().message);
  }
  return aggregate(ens.traces, cfg.threshold, cfg.burn_in);
}

// --- criterion 1: high-signal convergence speed ---------------------------
bool criterion_high_signal(std::string& detail) {
  const AggregateStats stats = run_and_aggregate(base_scenario());
  const double median = stats.iterations_to_thresh.median;
  detail = "median iterations to <10% infidelity = " + fmt(median) + ", window [" +
           fmt(kC1Low) + ", " + fmt(kC1High) + "], censored " + std::to_string(stats.censored);
  return stats.censored == 0 && median >= kC1Low && median <= kC1High;
}

// --- criterion 2: low-signal convergence windows --------------------------
bool criterion_low_signal(std::string& detail) {
  ScenarioConfig cfg = base_scenario();
  cfg.noise.signal_rate = 100;

  const AggregateStats mub = run_and_aggregate(cfg);
  cfg.scheme = Scheme::GeneralizedPauli;
  const AggregateStats pauli = run_and_aggregate(cfg);

  const double m = mub.iterations_to_thresh.median;
  const double p = pauli.iterations_to_thresh.median;
  detail = "mub median = " + fmt(m) + " in [" + fmt(kC2MubLow) + ", " + fmt(kC2MubHigh) +
           "], pauli median = " + fmt(p) + " in [" + fmt(kC2PauliLow) + ", " +
           fmt(kC2PauliHigh) + "]";
  return m >= kC2MubLow && m <= kC2MubHigh && p >= kC2PauliLow && p <= kC2PauliHigh && m < p;
}

// --- criterion 3: noiseless steady-state accuracy -------------------------
bool criterion_noiseless_floor(std::string& detail) {
  ScenarioConfig cfg = base_scenario();
  cfg.noise.dark_rate = 0;
  cfg.noise.background_rate = 0;
  const AggregateStats stats = run_and_aggregate(cfg);
  const double at50 = stats.infidelity[50].median;
  const double at300 = stats.infidelity[300].median;
  detail = "median infidelity " + fmt(at50) + " at iteration 50 (cap " + fmt(kC3Cap50) +
           "), " + fmt(at300) + " at 300 (cap " + fmt(kC3Cap300) + ")";
  return at50 < kC3Cap50 && at300 < kC3Cap300;
}

// --- criterion 4: background-noise robustness -----------------------------
bool criterion_noise_robustness(std::string& detail) {
  ScenarioConfig cfg = base_scenario();
  cfg.noise.signal_rate = 100;
  cfg.n_noise_repeats = 20;

  const std::vector<SweepPoint> points = noise_sweep(cfg, {0.0, 2000.0, 2500.0}, worker_jobs());
  const double m0 = points[0].stats.mean_infidelity_burn_in.median;
  const double m2000 = points[1].stats.mean_infidelity_burn_in.median;
  const double m2500 = points[2].stats.mean_infidelity_burn_in.median;

  const bool within_factor = m2000 <= kC4FactorOfBase * m0;
  const bool under_cap = m2500 < kC4AbsCap;
  detail = "median steady infidelity: " + fmt(m0) + " at extra 0, " + fmt(m2000) +
           " at 2000 (snr " + fmt(points[1].snr) + ", factor cap " + fmt(kC4FactorOfBase) +
           "x: " + (within_factor ? "ok" : "violated") + "), " + fmt(m2500) +
           " at 2500 (cap " + fmt(kC4AbsCap) + ": " + (under_cap ? "ok" : "violated") + ")";
  return within_factor && under_cap;
}

// --- criterion 5: tracking prediction accuracy ----------------------------
bool criterion_tracking(std::string& detail) {
  ScenarioConfig cfg = base_scenario();
  cfg.evolution = Evolution::RandomHermitian;
  const EnsembleResult ens = run_ensemble(cfg, worker_jobs());
  if (!ens.failures.empty()) throw std::runtime_error("ensemble reported failed runs");

  auto mad_at = [](const TrackTrace& trace, int t) {
    const auto& rec = trace.records[t];
    double sum = 0;
    for (std::size_t i = 0; i < rec.p_true.size(); ++i) {
      sum += std::abs(rec.p_pred[i] - rec.p_true[i]);
    }
    return sum / static_cast<double>(rec.p_true.size());
  };

  double steady = 0, early3 = 0, early4 = 0;
  for (const TrackTrace& trace : ens.traces) {
    double acc = 0;
    for (int t = 10; t <= cfg.t_tot; ++t) acc += mad_at(trace, t);
    steady += acc / (cfg.t_tot - 10 + 1);
    early3 += mad_at(trace, 3);
    early4 += mad_at(trace, 4);
  }
  steady /= ens.traces.size();
  early3 /= ens.traces.size();
  early4 /= ens.traces.size();

  detail = "mean |p_pred - p_true| = " + fmt(steady) + " over iterations 10..300 (cap " +
           fmt(kC5AvgCap) + "); " + fmt(early3) + " / " + fmt(early4) +
           " at iterations 3 / 4 (cap " + fmt(kC5EarlyCap) + ")";
  return steady <= kC5AvgCap && early3 < kC5EarlyCap && early4 < kC5EarlyCap;
}

// --- criterion 6: update physicality --------------------------------------
bool criterion_physicality(std::string& detail) {
  Rng rng(987654321);
  std::vector<MeasurementBasis> pool;
  for (const auto& b : mub_family(3).bases) pool.push_back(b);
  for (const auto& b : generalized_pauli_family(3).bases) pool.push_back(b);

  NoiseConfig harsh;
  harsh.signal_rate = 50;
  harsh.dark_rate = 10;
  harsh.background_rate = 5;

  const double etas[3] = {0.5, 5.0, 50.0};
  MegConfig cfg;
  EstimatorState state = EstimatorState::initial(3);
  double worst_trace = 0, worst_defect = 0, worst_eig = 1;

  for (int step = 0; step < 10000; ++step) {
    if (step % 50 == 0) {
      const PureState seed_state = haar_random_pure(3, rng);
      const double mix = rng.uniform01();
      Matrix m = mix * (seed_state.vector() * seed_state.vector().adjoint()) +
                 (1.0 - mix) / 3 * Matrix::Identity(3, 3);
      state = EstimatorState{DensityMatrix(symmetrized(m)), 0};
    }
    const MeasurementBasis& basis = pool[rng.uniform_index(pool.size())];
    const PureState truth = haar_random_pure(3, rng);
    const CountRecord counts = measure_iteration(truth, basis, harsh, rng);
    cfg.learning_rate = etas[step % 3];
    state = meg_step(state, basis, counts.probabilities, cfg);

    const Matrix& rho = state.estimate.matrix();
    worst_trace = std::max(worst_trace, std::abs(rho.trace().real() - 1.0));
    worst_defect = std::max(worst_defect, hermiticity_defect(rho));
    Eigen::SelfAdjointEigenSolver<Matrix> eig(rho, Eigen::EigenvaluesOnly);
    worst_eig = std::min(worst_eig, eig.eigenvalues().minCoeff());
  }

  detail = "10000 steps: max |trace-1| = " + fmt(worst_trace) + ", max hermiticity defect = " +
           fmt(worst_defect) + ", min eigenvalue = " + fmt(worst_eig) + " (tol " +
           fmt(kC6PhysTol) + ")";
  return worst_trace <= kC6PhysTol && worst_defect <= kC6PhysTol && worst_eig >= -kC6PhysTol;
}

// --- criterion 7: gradient finite-difference oracle -----------------------
bool criterion_gradient(std::string& detail) {
  Rng rng(123321);
  std::vector<MeasurementBasis> pool;
  for (const auto& b : mub_family(3).bases) pool.push_back(b);
  for (const auto& b : generalized_pauli_family(3).bases) pool.push_back(b);

  // quadratic loss evaluated on a raw matrix argument, for differencing
  auto raw_loss = [](const Matrix& m, const MeasurementBasis& basis,
                     const std::vector<double>& y) {
    double total = 0;
    for (int i = 0; i < basis.size(); ++i) {
      const auto& v = basis.state(i).vector();
      const double r = (v.adjoint() * m * v)(0).real() - y[i];
      total += r * r;
    }
    return total;
  };

  const double h = 1e-5;
  double worst = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const PureState psi = haar_random_pure(3, rng);
    const double mix = 0.9 * rng.uniform01();
    Matrix m = mix * (psi.vector() * psi.vector().adjoint()) +
               (1.0 - mix) / 3 * Matrix::Identity(3, 3);
    const DensityMatrix rho(symmetrized(m));
    const MeasurementBasis& basis = pool[rng.uniform_index(pool.size())];
    std::vector<double> y(3);
    double norm = 0;
    for (double& v : y) {
      v = rng.uniform01() + 1e-3;
      norm += v;
    }
    for (double& v : y) v /= norm;

    const Matrix analytic = gradient(rho, basis, y).matrix();

    // assemble the gradient from directional derivatives along a Hermitian basis
    Matrix fd = Matrix::Zero(3, 3);
    auto probe = [&](const Matrix& dir) {
      const double fplus = raw_loss(rho.matrix() + h * dir, basis, y);
      const double fminus = raw_loss(rho.matrix() - h * dir, basis, y);
      return (fplus - fminus) / (2 * h);
    };
    for (int i = 0; i < 3; ++i) {
      Matrix e = Matrix::Zero(3, 3);
      e(i, i) = 1;
      fd(i, i) = probe(e);
      for (int j = i + 1; j < 3; ++j) {
        Matrix re = Matrix::Zero(3, 3), im = Matrix::Zero(3, 3);
        re(i, j) = re(j, i) = 0.5;
        im(i, j) = Complex(0, 0.5);
        im(j, i) = Complex(0, -0.5);
        const double dre = probe(re);
        const double dim_part = probe(im);
        fd(i, j) = Complex(dre, dim_part);
        fd(j, i) = Complex(dre, -dim_part);
      }
    }
    const double rel = (fd - analytic).norm() / std::max(analytic.norm(), 1e-12);
    worst = std::max(worst, rel);
  }
  detail = "max relative error " + fmt(worst) + " over 100 triples (tol " + fmt(kC7RelTol) + ")";
  return worst <= kC7RelTol;
}

// --- criterion 8: measurement algebra -------------------------------------
bool criterion_measurement_algebra(std::string& detail) {
  double worst_overlap = 0;
  for (const int d : {2, 3, 5, 7}) {
    const MeasurementFamily fam = mub_family(d);
    if (static_cast<int>(fam.bases.size()) != d + 1) {
      detail = "mub family for d=" + std::to_string(d) + " has wrong size";
      return false;
    }
    for (std::size_t a = 0; a < fam.bases.size(); ++a) {
      for (std::size_t b = a + 1; b < fam.bases.size(); ++b) {
        for (int i = 0; i < d; ++i) {
          for (int j = 0; j < d; ++j) {
            const double ov = fam.bases[a].state(i).overlap(fam.bases[b].state(j));
            worst_overlap = std::max(worst_overlap, std::abs(ov - 1.0 / d));
          }
        }
      }
    }
  }

  double worst_algebra = 0;
  for (const int d : {2, 3, 5, 7}) {
    const auto ops = generalized_pauli_operators(d);
    if (static_cast<int>(ops.size()) != d * d - 1) {
      detail = "operator set for d=" + std::to_string(d) + " has wrong size";
      return false;
    }
    for (std::size_t a = 0; a < ops.size(); ++a) {
      worst_algebra = std::max(worst_algebra, std::abs(ops[a].matrix().trace()));
      for (std::size_t b = 0; b < ops.size(); ++b) {
        const double inner = (ops[a].matrix() * ops[b].matrix()).trace().real();
        worst_algebra = std::max(worst_algebra, std::abs(inner - (a == b ? 2.0 : 0.0)));
      }
    }
  }

  // elementwise reductions at d = 2 and d = 3
  double worst_elem = 0;
  {
    const auto ops = generalized_pauli_operators(2);
    Matrix sx(2, 2), sy(2, 2), sz(2, 2);
    sx << 0, 1, 1, 0;
    sy << 0, Complex(0, -1), Complex(0, 1), 0;
    sz << 1, 0, 0, -1;
    worst_elem = std::max({worst_elem, (ops[0].matrix() - sx).cwiseAbs().maxCoeff(),
                           (ops[1].matrix() - sy).cwiseAbs().maxCoeff(),
                           (ops[2].matrix() - sz).cwiseAbs().maxCoeff()});
  }
  {
    const auto ops = generalized_pauli_operators(3);
    auto offdiag = [](int a, int b, Complex v) {
      Matrix m = Matrix::Zero(3, 3);
      m(a, b) = v;
      m(b, a) = std::conj(v);
      return m;
    };
    const double s3 = 1.0 / std::sqrt(3.0);
    Matrix l3 = Matrix::Zero(3, 3);
    l3(0, 0) = 1;
    l3(1, 1) = -1;
    Matrix w2 = Matrix::Zero(3, 3);
    w2(0, 0) = s3;
    w2(1, 1) = s3;
    w2(2, 2) = -2 * s3;
    const Matrix expected[8] = {offdiag(0, 1, 1), offdiag(0, 1, Complex(0, -1)), l3,
                                offdiag(0, 2, 1), offdiag(0, 2, Complex(0, -1)),
                                offdiag(1, 2, 1), offdiag(1, 2, Complex(0, -1)), w2};
    for (int i = 0; i < 8; ++i) {
      worst_elem =
          std::max(worst_elem, (ops[i].matrix() - expected[i]).cwiseAbs().maxCoeff());
    }
  }

  detail = "worst mub overlap deviation " + fmt(worst_overlap) + " (tol " + fmt(kC8OverlapTol) +
           "), worst algebra deviation " + fmt(std::max(worst_algebra, worst_elem)) + " (tol " +
           fmt(kC8AlgebraTol) + ")";
  return worst_overlap <= kC8OverlapTol && worst_algebra <= kC8AlgebraTol &&
         worst_elem <= kC8AlgebraTol;
}

// --- criterion 9: pure projection oracle ----------------------------------
bool criterion_pure_projection(std::string& detail) {
  Rng rng(24601);
  double worst_fid = 1, worst_eig = 0;
  for (const int d : {2, 3, 5}) {
    for (int step = 1; step <= 9; ++step) {
      const double lambda = 0.1 * step;
      for (int trial = 0; trial < 3; ++trial) {
        const PureState phi = haar_random_pure(d, rng);
        Matrix m = lambda * (phi.vector() * phi.vector().adjoint()) +
                   (1.0 - lambda) / d * Matrix::Identity(d, d);
        const DensityMatrix rho(symmetrized(m));
        const PureState recovered = pure_projection(rho);
        worst_fid = std::min(worst_fid, recovered.overlap(phi));
        const EigenSystem eig = eig_hermitian(HermitianMatrix(rho.matrix()));
        const double top = eig.values(d - 1);
        worst_eig = std::max(worst_eig, std::abs(top - (lambda + (1.0 - lambda) / d)));
      }
    }
  }
  detail = "min recovery fidelity " + fmt(worst_fid) + " (floor " + fmt(1 - kC9FidTol) +
           "), max top-eigenvalue deviation " + fmt(worst_eig) + " (tol " + fmt(kC9EigTol) + ")";
  return worst_fid >= 1.0 - kC9FidTol && worst_eig <= kC9EigTol;
}

// --- criterion 10: deterministic outputs across jobs ----------------------
int run_command(const std::string& cmd) {
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

bool criterion_determinism(const std::string& cli, std::string& detail) {
  if (cli.empty()) {
    detail = "no CLI binary path supplied";
    return false;
  }
  const fs::path root =
      fs::temp_directory_path() / ("megtomo_acceptance_" + std::to_string(::getpid()));
  struct Cleanup {
    fs::path p;
    ~Cleanup() {
      std::error_code ec;
      fs::remove_all(p, ec);
    }
  } cleanup{root};

  const fs::path a = root / "jobs1";
  const fs::path b = root / "jobs4";
  const fs::path c = root / "again";
  const std::vector<std::pair<fs::path, int>> runs{{a, 1}, {b, 4}, {c, 1}};
  for (const auto& [dir, jobs] : runs) {
    const std::string cmd = "'" + cli + "' bench --preset smoke --out '" + dir.string() +
                            "' --jobs " + std::to_string(jobs) + " >/dev/null 2>&1";
    if (run_command(cmd) != 0) {
      detail = "bench run failed in " + dir.string();
      return false;
    }
  }

  // every CSV/JSON except the manifest must match byte for byte
  std::vector<std::string> rel_paths;
  for (const auto& entry : fs::recursive_directory_iterator(a)) {
    if (!entry.is_regular_file()) continue;
    const std::string rel = fs::relative(entry.path(), a).string();
    if (rel != "manifest.json") rel_paths.push_back(rel);
  }
  std::sort(rel_paths.begin(), rel_paths.end());
  if (rel_paths.empty()) {
    detail = "no outputs produced";
    return false;
  }
  for (const auto& rel : rel_paths) {
    const std::string bytes = slurp(a / rel);
    if (bytes != slurp(b / rel) || bytes != slurp(c / rel)) {
      detail = rel + " differs between runs";
      return false;
    }
  }

  // manifests differ in command/timestamp only; digests and seed must agree
  const auto ma = nlohmann::json::parse(slurp(a / "manifest.json"));
  const auto mb = nlohmann::json::parse(slurp(b / "manifest.json"));
  if (ma.at("outputs") != mb.at("outputs") || ma.at("master_seed") != mb.at("master_seed") ||
      ma.at("config") != mb.at("config")) {
    detail = "manifest digests disagree between job counts";
    return false;
  }
  detail = std::to_string(rel_paths.size()) + " files byte-identical across --jobs 1/4 and a re-run";
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";
  int failures = 0;

  const std::vector<std::pair<std::string, std::function<bool(std::string&)>>> criteria = {
      {"high-signal convergence speed", criterion_high_signal},
      {"low-signal convergence windows", criterion_low_signal},
      {"noiseless steady-state accuracy", criterion_noiseless_floor},
      {"background-noise robustness", criterion_noise_robustness},
      {"tracking prediction accuracy", criterion_tracking},
      {"update physicality", criterion_physicality},
      {"gradient finite-difference oracle", criterion_gradient},
      {"measurement algebra", criterion_measurement_algebra},
      {"pure projection oracle", criterion_pure_projection},
      {"deterministic outputs across jobs",
       [&cli](std::string& detail) { return criterion_determinism(cli, detail); }},
  };

  for (std::size_t i = 0; i < criteria.size(); ++i) {
    std::string detail;
    bool ok = false;
    try {
      ok = criteria[i].second(detail);
    } catch (const std::exception& e) {
      ok = false;
      detail = std::string("exception: ") + e.what();
    }
    std::printf("[%s] criterion %zu: %s (%s)\n", ok ? "PASS" : "FAIL", i + 1,
                criteria[i].first.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
  }
  return failures;
}
