#include "chest/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <set>
#include <stdexcept>
#include <thread>

#include "chest/environment.hpp"

namespace chest {

std::string_view to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::nmse_sweep: return "nmse-sweep";
    case ExperimentKind::se_sweep: return "se-sweep";
    case ExperimentKind::ecdf: return "ecdf";
    case ExperimentKind::pilot_sweep: return "pilot-sweep";
    case ExperimentKind::ntb_sweep: return "ntb-sweep";
    case ExperimentKind::validate: return "validate";
  }
  return "?";
}

ExperimentKind experiment_from_string(std::string_view name) {
  for (auto k : {ExperimentKind::nmse_sweep, ExperimentKind::se_sweep, ExperimentKind::ecdf,
                 ExperimentKind::pilot_sweep, ExperimentKind::ntb_sweep,
                 ExperimentKind::validate}) {
    if (to_string(k) == name) return k;
  }
  throw std::invalid_argument("unknown experiment '" + std::string(name) + "'");
}

namespace {

std::vector<Method> default_methods(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::nmse_sweep:
      return {Method::ls, Method::denoise, Method::bml, Method::emdt};
    case ExperimentKind::se_sweep:
    case ExperimentKind::ecdf:
      return {Method::ls, Method::denoise, Method::bml, Method::emdt, Method::ideal};
    case ExperimentKind::pilot_sweep:
      return {Method::ls, Method::emdt};
    case ExperimentKind::ntb_sweep:
      return {Method::bml};
    case ExperimentKind::validate:
      return {};
  }
  return {};
}

/// Runs fn(i) for i in [0, n) on `threads` workers. Results must be written
/// to per-index slots so the outcome does not depend on scheduling.
template <typename Fn>
void parallel_for(int n, int threads, Fn&& fn) {
  threads = std::clamp(threads, 1, std::max(n, 1));
  if (threads == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (int i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = n;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

struct TrialSymbol {
  CMatrix hp;
  CMatrix h_full;
  PilotPattern pilots;
  CMatrix unit_noise;
};

TrialSymbol draw_symbol(const Environment& env, int trial, int symbol, bool full,
                        StreamPurpose fading, StreamPurpose pilots, StreamPurpose noise) {
  const auto& sys = env.bundle.system;
  const auto t = static_cast<std::uint64_t>(trial);
  const auto m = static_cast<std::uint64_t>(symbol);
  TrialSymbol s;
  Rng rf = make_stream(sys.seed, t, m, fading);
  const FadingVector c = draw_fading(env.paths.amplitude, rf);
  s.hp = assemble_channel(env.steering, c, env.freq_pilots, symbol).h;
  if (full) s.h_full = assemble_channel(env.steering, c, env.freq_full, symbol).h;
  Rng rp = make_stream(sys.seed, t, m, pilots);
  s.pilots = build_pilot_pattern(sys.n_subcarriers, sys.n_pilots, sys.symbol_power, rp);
  Rng rn = make_stream(sys.seed, t, m, noise);
  s.unit_noise = draw_circular_gaussian(sys.n_rx, sys.n_pilots, rn);
  return s;
}

TrialSymbol draw_test_symbol(const Environment& env, int trial, bool full) {
  return draw_symbol(env, trial, 0, full, StreamPurpose::fading, StreamPurpose::pilots,
                     StreamPurpose::noise);
}

/// Warm-up LS snapshots for batch ML, stacked side by side. The LS snapshot
/// at noise variance s2 is channel + sqrt(s2) * ls_noise.
struct BmlBatch {
  CMatrix channel;
  CMatrix ls_noise;
  int n_batch = 0;

  CMatrix ls(double noise_variance, int prefix) const {
    const auto cols = channel.cols() / n_batch * prefix;
    return channel.leftCols(cols) + std::sqrt(noise_variance) * ls_noise.leftCols(cols);
  }
};

BmlBatch draw_bml_batch(const Environment& env, int trial, int n_batch) {
  const auto& sys = env.bundle.system;
  BmlBatch b;
  b.n_batch = n_batch;
  b.channel.resize(sys.n_rx, Eigen::Index{n_batch} * sys.n_pilots);
  b.ls_noise.resize(sys.n_rx, Eigen::Index{n_batch} * sys.n_pilots);
  for (int m = 0; m < n_batch; ++m) {
    const TrialSymbol s = draw_symbol(env, trial, m + 1, false, StreamPurpose::bml_fading,
                                      StreamPurpose::bml_pilots, StreamPurpose::bml_noise);
    const auto cols = Eigen::Index{m} * sys.n_pilots;
    b.channel.middleCols(cols, sys.n_pilots) = s.hp;
    b.ls_noise.middleCols(cols, sys.n_pilots) =
        s.unit_noise * s.pilots.symbols.cwiseInverse().asDiagonal();
  }
  return b;
}

enum class SeGrid { none, pilot, full };

struct EvalOptions {
  std::vector<double> snrs;
  std::vector<Method> methods;
  SeGrid se_grid = SeGrid::none;
  bool collect_samples = false;
};

struct Cell {
  double error = 0.0;
  double se = 0.0;
  std::vector<double> samples;
};

struct TrialOutcome {
  double truth_energy = 0.0;
  double floor_energy = 0.0;
  std::vector<Cell> cells;  // snr-major
};

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw std::runtime_error(std::string("non-finite ") + what);
}

ChannelEstimate estimate_with(Method method, const ChannelEstimate& ls, const Environment& env,
                              const BmlBatch* batch, double noise_variance,
                              const CMatrix& truth) {
  switch (method) {
    case Method::ls: return ls;
    case Method::denoise:
      return denoise_estimate(ls, env.bundle.estimator.tau_max, env.bundle.sample_interval);
    case Method::bml: {
      const ProjectorPair proj = bml_subspace_stacked(
          batch->ls(noise_variance, batch->n_batch), batch->n_batch,
          env.bundle.bml_rank_spatial, env.bundle.bml_rank_temporal);
      return project_estimate(ls, proj, Method::bml);
    }
    case Method::emdt: return project_estimate(ls, env.twin, Method::emdt);
    case Method::ideal: return {truth, Grid::pilot, Method::ideal};
  }
  throw std::logic_error("unhandled method");
}

TrialOutcome evaluate_trial(const Environment& env, int trial, const EvalOptions& opt) {
  const auto& sys = env.bundle.system;
  const bool full = opt.se_grid == SeGrid::full || opt.collect_samples;
  const TrialSymbol sym = draw_test_symbol(env, trial, full);

  TrialOutcome out;
  out.truth_energy = sym.hp.squaredNorm();
  out.floor_energy = (sym.hp - apply_projectors(env.twin, sym.hp)).squaredNorm();
  out.cells.resize(opt.snrs.size() * opt.methods.size());

  const bool need_bml = std::find(opt.methods.begin(), opt.methods.end(), Method::bml) !=
                        opt.methods.end();
  BmlBatch batch;
  if (need_bml) batch = draw_bml_batch(env, trial, env.bundle.estimator.n_batch);

  const ChannelRealization hp{sym.hp, 0};
  for (std::size_t i = 0; i < opt.snrs.size(); ++i) {
    const double s2 = env.noise_variance(opt.snrs[i]);
    const ChannelEstimate ls = ls_estimate(simulate_uplink(hp, sym.pilots, s2, sym.unit_noise));
    for (std::size_t j = 0; j < opt.methods.size(); ++j) {
      const Method method = opt.methods[j];
      Cell& cell = out.cells[i * opt.methods.size() + j];
      const ChannelEstimate est = estimate_with(method, ls, env, &batch, s2, sym.hp);
      cell.error = (est.h_hat - sym.hp).squaredNorm();
      require_finite(cell.error, "estimation error");
      if (opt.se_grid == SeGrid::pilot) {
        cell.se = genie_spectral_efficiency(est.h_hat, sym.hp, sys.symbol_power, s2);
      }
      if (full) {
        const CMatrix full_est =
            method == Method::ideal
                ? sym.h_full
                : interpolate_full(est, sym.pilots, sys.n_subcarriers).h_hat;
        if (opt.se_grid == SeGrid::full) {
          cell.se = genie_spectral_efficiency(full_est, sym.h_full, sys.symbol_power, s2);
        }
        if (opt.collect_samples) {
          cell.samples = post_combining_snr(full_est, sym.h_full, sys.symbol_power, s2);
        }
      }
      require_finite(cell.se, "spectral efficiency");
    }
  }
  return out;
}

std::vector<TrialOutcome> run_trials(const Environment& env, const EvalOptions& opt) {
  const int n = env.bundle.system.n_trials;
  std::vector<TrialOutcome> outcomes(static_cast<std::size_t>(n));
  parallel_for(n, env.bundle.experiment.threads, [&](int t) {
    outcomes[static_cast<std::size_t>(t)] = evaluate_trial(env, t, opt);
  });
  return outcomes;
}

/// Standard error of sum(e) / sum(h) by linearization.
double ratio_std_error(const std::vector<double>& e, const std::vector<double>& h) {
  const auto n = e.size();
  if (n < 2) return 0.0;
  double se = 0.0, sh = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    se += e[i];
    sh += h[i];
  }
  const double r = se / sh;
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) ss += (e[i] - r * h[i]) * (e[i] - r * h[i]);
  return std::sqrt(ss * static_cast<double>(n) / static_cast<double>(n - 1)) / sh;
}

std::vector<MetricsRecord> summarize(const Environment& env, const EvalOptions& opt,
                                     const std::vector<TrialOutcome>& outcomes,
                                     double se_scale = 1.0) {
  const auto& sys = env.bundle.system;
  const auto n_methods = opt.methods.size();
  std::vector<double> truth;
  truth.reserve(outcomes.size());
  double truth_sum = 0.0, floor_sum = 0.0;
  for (const auto& o : outcomes) {
    truth.push_back(o.truth_energy);
    truth_sum += o.truth_energy;
    floor_sum += o.floor_energy;
  }

  std::vector<MetricsRecord> records;
  for (std::size_t i = 0; i < opt.snrs.size(); ++i) {
    const double s2 = env.noise_variance(opt.snrs[i]);
    for (std::size_t j = 0; j < n_methods; ++j) {
      const Method method = opt.methods[j];
      std::vector<double> errors;
      errors.reserve(outcomes.size());
      double err_sum = 0.0, se_sum = 0.0;
      for (const auto& o : outcomes) {
        const Cell& c = o.cells[i * n_methods + j];
        errors.push_back(c.error);
        err_sum += c.error;
        se_sum += c.se;
      }
      MetricsRecord r;
      r.method = std::string(to_string(method));
      r.snr_db = opt.snrs[i];
      r.n_pilots = sys.n_pilots;
      r.trials = static_cast<int>(outcomes.size());
      if (method != Method::ideal) {
        if (!(truth_sum > 0.0)) throw std::runtime_error("zero channel energy over the ensemble");
        r.nmse_empirical = err_sum / truth_sum;
        r.nmse_std_error = ratio_std_error(errors, truth);
        require_finite(*r.nmse_empirical, "NMSE");
      }
      if (method == Method::emdt) {
        r.nmse_analytic =
            analytic_nmse(env.twin, env.covariance, opt.snrs[i], sys.symbol_power, s2);
        r.nmse_floor_measured = floor_sum / truth_sum;
      }
      if (opt.se_grid != SeGrid::none) {
        r.spectral_efficiency = se_scale * se_sum / static_cast<double>(outcomes.size());
      }
      records.push_back(std::move(r));
    }
  }
  return records;
}

std::vector<MetricsRecord> run_sweep(const ExperimentPlan& plan, SeGrid grid) {
  const Environment env = build_environment(plan.bundle, plan.external_paths);
  EvalOptions opt;
  opt.snrs = plan.bundle.system.snr_grid;
  opt.methods = plan.methods;
  opt.se_grid = grid;
  return summarize(env, opt, run_trials(env, opt));
}

}  // namespace

ExperimentPlan make_plan(ExperimentKind kind, const ConfigBundle& bundle, Scale scale,
                         std::string output_dir) {
  SystemConfig sys = bundle.system;
  EstimatorConfig est = bundle.estimator;
  const ExperimentConfig& exp = bundle.experiment;
  if (scale == Scale::desk) sys.n_rx = std::min(sys.n_rx, exp.desk_n_rx);
  if (kind == ExperimentKind::pilot_sweep) {
    sys.n_subcarriers =
        scale == Scale::desk ? exp.desk_pilot_subcarriers : exp.full_pilot_subcarriers;
    sys.cp_length.reset();
    sys.n_pilots = exp.pilot_grid;
  }
  ExperimentPlan plan;
  plan.kind = kind;
  plan.bundle = validate_config(sys, bundle.scenario, est, exp);
  plan.methods = default_methods(kind);
  plan.output_dir = std::move(output_dir);
  plan.scale = scale;
  return plan;
}

std::vector<MetricsRecord> run_nmse_sweep(const ExperimentPlan& plan) {
  return run_sweep(plan, SeGrid::none);
}

std::vector<MetricsRecord> run_se_sweep(const ExperimentPlan& plan) {
  return run_sweep(plan, SeGrid::full);
}

std::vector<EcdfTable> run_ecdf(const ExperimentPlan& plan) {
  const Environment env = build_environment(plan.bundle, plan.external_paths);
  EvalOptions opt;
  opt.snrs = plan.bundle.experiment.ecdf_snr_db;
  opt.methods = plan.methods;
  opt.collect_samples = true;
  if (opt.snrs.empty()) throw ConfigError("experiment.ecdf_snr_db", "must not be empty");
  const auto outcomes = run_trials(env, opt);

  std::vector<EcdfTable> tables;
  for (std::size_t i = 0; i < opt.snrs.size(); ++i) {
    for (std::size_t j = 0; j < opt.methods.size(); ++j) {
      std::vector<double> samples;
      for (const auto& o : outcomes) {
        const auto& s = o.cells[i * opt.methods.size() + j].samples;
        samples.insert(samples.end(), s.begin(), s.end());
      }
      tables.push_back({std::string(to_string(opt.methods[j])), opt.snrs[i],
                        Ecdf(std::move(samples))});
    }
  }
  return tables;
}

std::vector<MetricsRecord> run_pilot_sweep(const ExperimentPlan& plan) {
  const ConfigBundle& base = plan.bundle;
  const int grid = base.experiment.pilot_grid;
  std::vector<MetricsRecord> records;
  for (int n_p : base.experiment.pilot_counts) {
    if (n_p < 1 || grid % n_p != 0 || base.system.n_subcarriers % n_p != 0) {
      throw ConfigError("experiment.pilot_counts",
                        "pilot count " + std::to_string(n_p) + " does not divide the grid");
    }
    SystemConfig sys = base.system;
    sys.n_pilots = n_p;
    EstimatorConfig est = base.estimator;
    est.bml_rank_temporal = std::min(base.bml_rank_temporal, n_p);
    est.bml_rank_spatial = base.bml_rank_spatial;
    const ConfigBundle bundle = validate_config(sys, base.scenario, est, base.experiment);
    const Environment env = build_environment(bundle, plan.external_paths);

    EvalOptions opt;
    opt.snrs = base.experiment.pilot_snr_db;
    opt.methods = plan.methods;
    opt.se_grid = SeGrid::pilot;
    const double overhead = 1.0 - static_cast<double>(n_p) / grid;
    auto part = summarize(env, opt, run_trials(env, opt), overhead);
    records.insert(records.end(), part.begin(), part.end());
  }
  return records;
}

std::vector<BatchFloorRecord> run_ntb_sweep(const ExperimentPlan& plan) {
  const Environment env = build_environment(plan.bundle, plan.external_paths);
  const auto& grid = plan.bundle.system.snr_grid;
  const double snr = *std::max_element(grid.begin(), grid.end());
  const double s2 = env.noise_variance(snr);
  const std::set<int> sizes_set(plan.bundle.experiment.batch_sizes.begin(),
                                plan.bundle.experiment.batch_sizes.end());
  const std::vector<int> sizes(sizes_set.begin(), sizes_set.end());
  if (sizes.empty()) throw ConfigError("experiment.batch_sizes", "must not be empty");
  const int n = plan.bundle.system.n_trials;

  std::vector<std::vector<double>> errors(sizes.size(), std::vector<double>(static_cast<std::size_t>(n)));
  std::vector<double> truth(static_cast<std::size_t>(n));
  parallel_for(n, plan.bundle.experiment.threads, [&](int t) {
    const TrialSymbol sym = draw_test_symbol(env, t, false);
    const BmlBatch batch = draw_bml_batch(env, t, sizes.back());
    const ChannelEstimate ls =
        ls_estimate(simulate_uplink(ChannelRealization{sym.hp, 0}, sym.pilots, s2, sym.unit_noise));
    truth[static_cast<std::size_t>(t)] = sym.hp.squaredNorm();
    for (std::size_t k = 0; k < sizes.size(); ++k) {
      const ProjectorPair proj =
          bml_subspace_stacked(batch.ls(s2, sizes[k]), sizes[k], env.bundle.bml_rank_spatial,
                               env.bundle.bml_rank_temporal);
      const double e = (project_estimate(ls, proj, Method::bml).h_hat - sym.hp).squaredNorm();
      require_finite(e, "estimation error");
      errors[k][static_cast<std::size_t>(t)] = e;
    }
  });

  double truth_sum = 0.0;
  for (double h : truth) truth_sum += h;
  std::vector<BatchFloorRecord> out;
  for (std::size_t k = 0; k < sizes.size(); ++k) {
    BatchFloorRecord r;
    r.n_batch = sizes[k];
    r.snr_db = snr;
    double e = 0.0;
    for (double v : errors[k]) e += v;
    r.nmse = e / truth_sum;
    r.std_error = ratio_std_error(errors[k], truth);
    r.trials = n;
    r.trial_error = errors[k];
    r.truth_energy = truth_sum;
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace chest
