#include "steadyrc/synthesis.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "steadyrc/util.hpp"

namespace steadyrc {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

}  // namespace

std::vector<Archetype> default_archetype_pool() {
  // Cycle lengths 8 and 6 are coprime against 24 entries, so every
  // (cap_final, tau, amp) triple is distinct.
  static const double amps[8] = {0.32, -0.18, 0.14, -0.30, 0.22, -0.10, 0.40, -0.24};
  static const double taus[6] = {360.0, 540.0, 720.0, 960.0, 420.0, 1080.0};
  static const double oscs[4] = {0.0, 0.20, 0.32, 0.12};
  static const double overshoots[4] = {0.05, 0.10, 0.15, 0.03};

  std::vector<Archetype> pool;
  pool.reserve(24);
  for (int i = 0; i < 24; ++i) {
    Archetype a;
    char tag[16];
    std::snprintf(tag, sizeof(tag), "arch-%02d", i);
    a.tag = tag;
    a.cap_final = 90.0 + 18.0 * i;
    a.transient_amp = amps[i % 8];
    a.tau_s = taus[i % 6];
    a.osc_amp = oscs[i % 4];
    a.osc_period_s = 300.0 + 75.0 * (i % 7);
    a.noise_level = 0.0025 + 0.0005 * (i % 3);
    a.shell_final = 52.0 + 1.3 * i;
    a.shell_amp = 0.15 + 0.02 * (i % 5);
    a.tau_shell_s = 600.0 + 60.0 * (i % 5);
    a.shell_noise = 0.12 + 0.03 * (i % 3);
    a.ref_pressure = 0.55 + 0.07 * i;
    a.press_overshoot = overshoots[i % 4];
    a.tau_press_s = 150.0 + 30.0 * (i % 4);
    a.press_osc_period_s = 200.0 + 40.0 * (i % 5);
    a.press_noise = 0.0008;
    a.excursion_prob = (i % 4 == 0) ? 0.35 : 0.15;
    a.excursion_amp = 0.025 + 0.005 * (i % 3);
    a.param_jitter = 0.08;
    pool.push_back(std::move(a));
  }
  return pool;
}

Episode synthesize_episode(const Archetype& arch, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };
  auto jitter = [&](double v) {
    return v * uniform(1.0 - arch.param_jitter, 1.0 + arch.param_jitter);
  };

  const double dt = 10.0;
  const double cap_final = jitter(arch.cap_final);
  const double amp = jitter(arch.transient_amp);
  const double tau = jitter(arch.tau_s);
  const double osc_amp = jitter(arch.osc_amp);
  const double phase = uniform(0.0, kTwoPi);
  const double shell_final = jitter(arch.shell_final);
  const double shell_amp = jitter(arch.shell_amp);
  const double tau_shell = jitter(arch.tau_shell_s);
  const double press_over = jitter(arch.press_overshoot);
  const double tau_press = jitter(arch.tau_press_s);

  const double duration_min = uniform(arch.min_duration_min, arch.max_duration_min);
  const int n_e = static_cast<int>(std::lround(duration_min * 60.0 / dt));

  // Optional single pressure excursion in the first half of the episode,
  // reproducing the setpoint dropping out and re-entering.
  const bool excursion = unit(rng) < arch.excursion_prob;
  const double exc_center_s = uniform(0.18, 0.55) * n_e * dt;
  const double exc_width_s = uniform(60.0, 150.0);
  const double exc_amp =
      (unit(rng) < 0.5 ? -1.0 : 1.0) * uniform(0.8, 1.2) * arch.excursion_amp * arch.ref_pressure;

  Episode ep;
  ep.model_tag = arch.tag;
  ep.dt = dt;
  ep.ref = arch.ref_pressure;
  ep.cap.resize(n_e);
  ep.shell_temp.resize(n_e);
  ep.pressure.resize(n_e);

  for (int t = 0; t < n_e; ++t) {
    const double s = t * dt;
    const double osc = 1.0 + osc_amp * std::sin(kTwoPi * s / arch.osc_period_s + phase);
    ep.cap(t) = cap_final * (1.0 + amp * std::exp(-s / tau) * osc) +
                cap_final * arch.noise_level * gauss(rng);
    ep.shell_temp(t) = shell_final * (1.0 - shell_amp * std::exp(-s / tau_shell)) +
                       arch.shell_noise * gauss(rng);
    double p = arch.ref_pressure *
                   (1.0 + press_over * std::exp(-s / tau_press) *
                              std::cos(kTwoPi * s / arch.press_osc_period_s)) +
               arch.ref_pressure * arch.press_noise * gauss(rng);
    if (excursion) {
      const double z = (s - exc_center_s) / exc_width_s;
      p += exc_amp * std::exp(-0.5 * z * z);
    }
    ep.pressure(t) = p;
  }

  derive_labels(ep);  // throws NoSteadyState for parameterizations that never settle
  return ep;
}

std::vector<Episode> synthesize_corpus(int n, const std::vector<Archetype>& pool,
                                       std::uint64_t seed) {
  if (n < 1) throw ConfigError("corpus size must be >= 1");
  if (pool.empty()) throw ConfigError("archetype pool is empty");

  std::vector<Episode> corpus;
  corpus.reserve(n);
  for (int i = 0; i < n; ++i) {
    const Archetype& arch = pool[i % pool.size()];
    Episode ep;
    bool ok = false;
    for (int attempt = 0; attempt < 100 && !ok; ++attempt) {
      try {
        ep = synthesize_episode(arch, derive_seed(seed, std::uint64_t(i) * 100 + attempt));
        ok = true;
      } catch (const NoSteadyState&) {
        // retry with the next derived seed
      }
    }
    if (!ok)
      throw DataError("archetype '" + arch.tag + "' kept producing episodes with no steady state");
    char id[16];
    std::snprintf(id, sizeof(id), "syn-%05d", i);
    ep.id = id;
    corpus.push_back(std::move(ep));
  }
  return corpus;
}

}  // namespace steadyrc
