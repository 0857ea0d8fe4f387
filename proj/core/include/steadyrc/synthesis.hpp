#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "steadyrc/dataset.hpp"

namespace steadyrc {

/// Parameter set for one synthetic compressor model. The capacity follows
///   cap(t) = cap_final * (1 + A e^{-t dt / tau} (1 + B sin)) + noise,
/// the shell temperature a first-order rise, and the suction pressure an
/// overshoot-and-settle response that ends inside the +-1% setpoint band,
/// optionally with one mid-episode excursion outside it.
struct Archetype {
  std::string tag;

  double cap_final = 200.0;     // W
  double transient_amp = 0.3;   // A; sign picks approach from above/below
  double tau_s = 600.0;         // capacity time constant
  double osc_amp = 0.0;         // B, secondary oscillation on the transient
  double osc_period_s = 600.0;
  double noise_level = 0.003;   // relative capacity noise sigma

  double shell_final = 60.0;    // deg C
  double shell_amp = 0.2;       // fraction below final at t = 0
  double tau_shell_s = 800.0;
  double shell_noise = 0.15;    // absolute deg C sigma

  double ref_pressure = 1.0;     // setpoint, arbitrary units
  double press_overshoot = 0.08; // fraction above ref at t = 0
  double tau_press_s = 200.0;
  double press_osc_period_s = 300.0;
  double press_noise = 0.0008;   // relative sigma; small vs the 1% band

  double excursion_prob = 0.0;  // chance of one mid-episode pressure excursion
  double excursion_amp = 0.03;  // peak relative deviation of that excursion

  double param_jitter = 0.0;    // relative spread applied per episode
  double min_duration_min = 90.0;
  double max_duration_min = 270.0;
};

/// 24 archetypes with distinct (cap_final, tau, transient_amp) triples,
/// mimicking a heterogeneous fleet of compressor models.
std::vector<Archetype> default_archetype_pool();

/// One synthetic episode, labeled. Deterministic given (archetype, seed).
/// Throws NoSteadyState when the drawn parameters never settle; callers
/// retry with a fresh seed.
Episode synthesize_episode(const Archetype& archetype, std::uint64_t seed);

/// n episodes, archetypes assigned round-robin, ids "syn-00000"... Rejected
/// draws are retried with derived seeds, so the result is deterministic.
std::vector<Episode> synthesize_corpus(int n, const std::vector<Archetype>& pool,
                                       std::uint64_t seed);

}  // namespace steadyrc
