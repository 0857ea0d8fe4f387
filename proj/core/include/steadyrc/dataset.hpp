#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "steadyrc/reservoir.hpp"

namespace steadyrc {

using BinarySeries = Eigen::VectorXi;  // 0/1
using TargetSeries = Eigen::VectorXi;  // -1/+1

/// One compressor performance test: the three measured series sampled every
/// dt seconds, the a-priori pressure setpoint, and the derived label data.
struct Episode {
  std::string id;
  std::string model_tag;   // compressor archetype label
  double dt = 10.0;        // sampling period in seconds
  Vector cap;              // cooling capacity
  Vector shell_temp;       // compressor shell temperature
  Vector pressure;         // suction pressure
  double ref = 0.0;        // suction-pressure setpoint, same scale as pressure

  // Derived by derive_setpoint / derive_labels.
  BinarySeries setpoint;   // 1 where pressure is within +-1% of ref
  TargetSeries y_hat;      // -1 before steady state, +1 from t_d on
  int t_d = -1;            // desired switch sample
  double cap_f = 0.0;      // mean capacity over the final 45 minutes

  bool normalized = false;
  bool labeled = false;

  int n_e() const { return static_cast<int>(cap.size()); }
};

/// Per-variable maxima over the training split. Training-split-only by
/// contract; computing them from validation or test data leaks.
struct NormStats {
  double cap_max = 0.0;
  double shell_max = 0.0;
  double pressure_max = 0.0;
};

struct SplitRatios {
  double train = 0.6;
  double val = 0.2;
  double test = 0.2;
};

struct DatasetSplit {
  std::vector<std::string> train;
  std::vector<std::string> val;
  std::vector<std::string> test;
  SplitRatios ratios;
  std::uint64_t seed = 0;
};

/// Minimum episode length: the final 45-minute window at 10 s sampling.
int final_window_samples(double dt);

NormStats compute_norm_stats(const std::vector<Episode>& training_episodes);

/// Divides cap / shell_temp / pressure by their training maxima; ref is
/// divided by the pressure maximum so the setpoint indicator stays
/// scale-consistent. Exactly-once: a second call on the same episode throws.
void normalize(std::vector<Episode>& episodes, const NormStats& stats);
void normalize(Episode& episode, const NormStats& stats);

/// 1 where pressure lies in [ref*(1-0.01), ref*(1+0.01)] (closed bounds).
BinarySeries compute_setpoint_indicator(const Vector& pressure, double ref);

/// Mean of the last 45 minutes of the capacity signal.
double compute_final_capacity(const Vector& cap, double dt);

struct LabelResult {
  TargetSeries y_hat;
  int t_d = -1;
};

/// t_d is the earliest sample s such that for ALL t >= s the capacity stays
/// inside [0.98 cap_f, 1.02 cap_f] and setpoint(t) = 1; intervals that are
/// only temporarily inside the margin are disregarded. y_hat is -1 before
/// t_d and +1 from t_d on. Throws NoSteadyState when no such s exists.
LabelResult generate_labels(const Vector& cap, const BinarySeries& setpoint, double cap_f);

/// Fills episode.setpoint from pressure and ref.
void derive_setpoint(Episode& episode);

/// Fills setpoint, cap_f, y_hat and t_d. Throws NoSteadyState /
/// EpisodeTooShort; such episodes are rejected from the corpus.
void derive_labels(Episode& episode);

/// Seeded shuffle followed by a contiguous partition at the ratio boundaries.
DatasetSplit split_dataset(std::vector<std::string> ids, const SplitRatios& ratios,
                           std::uint64_t seed);

/// The first n_window samples of the (normalized) capacity signal, the input
/// to the clustering stage. Nothing past sample n_window - 1 may reach it.
Vector initial_window(const Episode& episode, int n_window);

/// Stacks initial windows row-wise for kmeans_fit.
Matrix window_matrix(const std::vector<Episode>& episodes, int n_window);

// --- File formats -----------------------------------------------------------
//
// Episode CSV: header "t_index,cap,shell_temp,pressure", one row per sample.
// Sidecar JSON next to it: {"id", "model_tag", "ref", "dt"}.
// Manifest JSON: {"version": 1, "episodes": [{"id", "csv", "sidecar"}],
//                 "split": {...}} with paths relative to the manifest file.

struct ManifestEntry {
  std::string id;
  std::string csv;      // relative to the manifest directory
  std::string sidecar;  // relative to the manifest directory
};

struct Manifest {
  std::vector<ManifestEntry> episodes;
  bool has_split = false;
  DatasetSplit split;
};

void write_episode(const std::filesystem::path& dir, const Episode& episode);
Episode read_episode(const std::filesystem::path& csv_path,
                     const std::filesystem::path& sidecar_path);

void write_manifest(const std::filesystem::path& path, const Manifest& manifest);
Manifest read_manifest(const std::filesystem::path& path);

/// Loads every episode listed in a manifest (raw, unlabeled).
std::vector<Episode> load_episodes(const std::filesystem::path& manifest_path,
                                   const Manifest& manifest);

}  // namespace steadyrc
