#include "chest/invariants.hpp"

#include <cmath>
#include <cstdio>
#include <functional>

#include "chest/environment.hpp"
#include "chest/experiments.hpp"
#include "chest/linalg.hpp"
#include "chest/report.hpp"

namespace chest {
namespace {

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

InvariantCheck bound(std::string name, double value, double limit) {
  return {std::move(name), value <= limit, "max deviation " + sci(value) + " (limit " + sci(limit) + ")"};
}

InvariantCheck guarded(const std::string& name, const std::function<InvariantCheck()>& fn) {
  try {
    return fn();
  } catch (const std::exception& e) {
    return {name, false, std::string("threw: ") + e.what()};
  }
}

// Small instance used by the brute-force and Monte Carlo checks.
struct Toy {
  PathSet paths;
  ArrayGeometry geom;
  SamplingGrid grid;
  std::vector<int> pilots;
  CMatrix steering;
  CMatrix freq;
};

Toy make_toy(const ConfigBundle& b) {
  Toy t;
  t.paths.push_back(0.05, 0.4, 0.13 * b.sample_interval, 0.8);
  t.paths.push_back(-0.1, 1.9, 2.6 * b.sample_interval, 0.5);
  t.paths.push_back(0.2, 2.7, 5.0 * b.sample_interval, std::sqrt(1.0 - 0.64 - 0.25));
  t.geom = make_ula(4, b.scenario.array_spacing, b.wavelength);
  t.grid = {16, b.sample_interval, b.scenario.pulse_rolloff};
  t.pilots = pilot_indices(16, 8);
  t.steering = steering_matrix(t.paths, t.geom);
  t.freq = frequency_response(t.paths, t.grid, t.pilots);
  return t;
}

}  // namespace

std::vector<InvariantCheck> run_invariant_suite(const ConfigBundle& bundle) {
  std::vector<InvariantCheck> checks;
  const Environment env = build_environment(bundle);
  const Toy toy = make_toy(bundle);

  checks.push_back(guarded("projector idempotent and Hermitian", [&] {
    const CMatrix& s = env.twin.spatial;
    const CMatrix& t = env.twin.temporal;
    const double dev = std::max({(s * s - s).cwiseAbs().maxCoeff(),
                                 (s - s.adjoint()).cwiseAbs().maxCoeff(),
                                 (t * t - t).cwiseAbs().maxCoeff(),
                                 (t - t.adjoint()).cwiseAbs().maxCoeff()});
    return bound("projector idempotent and Hermitian", dev, 1e-10);
  }));

  checks.push_back(guarded("vec/Kronecker identity", [&] {
    Rng rng = make_stream(bundle.system.seed, 0, 0, StreamPurpose::validation);
    const CMatrix a = draw_circular_gaussian(3, 4, rng);
    const CMatrix x = draw_circular_gaussian(4, 5, rng);
    const CMatrix c = draw_circular_gaussian(5, 2, rng);
    const CVector lhs = linalg::vec(a * x * c);
    const CVector rhs = linalg::kron(c.transpose(), a) * linalg::vec(x);
    const CMatrix h = draw_circular_gaussian(bundle.system.n_rx, bundle.system.n_pilots, rng);
    const CVector qh = projection_matrix(env.twin) * linalg::vec(h);
    const CVector ph = linalg::vec(apply_projectors(env.twin, h));
    const double dev = std::max((lhs - rhs).cwiseAbs().maxCoeff(), (qh - ph).cwiseAbs().maxCoeff());
    return bound("vec/Kronecker identity", dev, 1e-10);
  }));

  checks.push_back(guarded("trace of Q Q^H equals r_S r_T", [&] {
    const double tr = env.twin.spatial.squaredNorm() * env.twin.temporal.squaredNorm();
    const double want = static_cast<double>(env.twin.rank_spatial) * env.twin.rank_temporal;
    return bound("trace of Q Q^H equals r_S r_T", std::abs(tr - want) / want, 1e-10);
  }));

  checks.push_back(guarded("analytic noise term consistency", [&] {
    const double s2 = env.noise_variance(0.0);
    const NmseBreakdown b =
        analytic_nmse(env.twin, env.covariance, 0.0, bundle.system.symbol_power, s2);
    const double rank_form = static_cast<double>(env.twin.rank_spatial) *
                             env.twin.rank_temporal /
                             (static_cast<double>(bundle.system.n_rx) * bundle.system.n_pilots);
    return bound("analytic noise term consistency",
                 std::abs(b.noise_term - rank_form) / rank_form, 1e-9);
  }));

  checks.push_back(guarded("channel assembly matches triple sum", [&] {
    Rng rng = make_stream(bundle.system.seed, 1, 0, StreamPurpose::validation);
    const FadingVector c = draw_fading(toy.paths.amplitude, rng);
    const CMatrix h = assemble_channel(toy.steering, c, toy.freq).h;
    double dev = 0.0;
    for (int r = 0; r < 4; ++r) {
      for (int k = 0; k < 8; ++k) {
        Complex sum{0.0, 0.0};
        for (int l = 0; l < 3; ++l) sum += toy.steering(r, l) * c.gains(l) * toy.freq(k, l);
        dev = std::max(dev, std::abs(sum - h(r, k)));
      }
    }
    return bound("channel assembly matches triple sum", dev, 1e-12);
  }));

  checks.push_back(guarded("Monte Carlo covariance", [&] {
    constexpr int draws = 100000;
    Rng rng = make_stream(bundle.system.seed, 2, 0, StreamPurpose::validation);
    const CMatrix phi = channel_covariance(toy.paths, toy.steering, toy.freq).factor();
    // sum of h h^H with h = phi c, accumulated as phi (sum c c^H) phi^H
    CMatrix cc = CMatrix::Zero(3, 3);
    for (int n = 0; n < draws; ++n) {
      const CVector c = draw_fading(toy.paths.amplitude, rng).gains;
      cc.noalias() += c * c.adjoint();
    }
    cc /= static_cast<double>(draws);
    const CMatrix sample = phi * cc * phi.adjoint();
    const CMatrix exact = channel_covariance(toy.paths, toy.steering, toy.freq).dense();
    return bound("Monte Carlo covariance", (sample - exact).norm() / exact.norm(), 0.02);
  }));

  checks.push_back(guarded("fading moments", [&] {
    constexpr int draws = 100000;
    Rng rng = make_stream(bundle.system.seed, 3, 0, StreamPurpose::validation);
    const std::vector<double> amp{1.0};
    double p2 = 0.0;
    Complex pseudo{0.0, 0.0}, mean{0.0, 0.0};
    for (int n = 0; n < draws; ++n) {
      const Complex c = draw_fading(amp, rng).gains(0);
      mean += c;
      p2 += std::norm(c);
      pseudo += c * c;
    }
    const double inv = 1.0 / draws;
    const double dev = std::max({std::abs(p2 * inv - 1.0), std::abs(pseudo * inv),
                                 std::abs(mean * inv)});
    return bound("fading moments", dev, 5.0 / std::sqrt(static_cast<double>(draws)));
  }));

  checks.push_back(guarded("denoiser is an orthogonal projector", [&] {
    const CMatrix& d = env.denoiser;
    const double dev = std::max({(d * d - d).cwiseAbs().maxCoeff(),
                                 (d - d.adjoint()).cwiseAbs().maxCoeff(),
                                 std::abs(d.trace().real() - env.retained_taps)});
    return bound("denoiser is an orthogonal projector", dev, 1e-10);
  }));

  checks.push_back(guarded("CSV determinism across runs and threads", [&] {
    ConfigBundle small = bundle;
    small.system.n_trials = 8;
    small.system.snr_grid = {0.0, 10.0};
    small.estimator.n_batch = 4;
    ExperimentPlan plan = make_plan(ExperimentKind::nmse_sweep, small, Scale::desk);
    const std::string a = format_csv(run_nmse_sweep(plan));
    const std::string b = format_csv(run_nmse_sweep(plan));
    plan.bundle.experiment.threads = 3;
    const std::string c = format_csv(run_nmse_sweep(plan));
    InvariantCheck r{"CSV determinism across runs and threads", a == b && b == c, ""};
    r.detail = r.passed ? "identical output" : "outputs differ";
    return r;
  }));

  return checks;
}

}  // namespace chest
