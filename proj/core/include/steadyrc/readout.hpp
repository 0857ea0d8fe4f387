#pragma once

#include <optional>
#include <vector>

#include "steadyrc/clustering.hpp"
#include "steadyrc/dataset.hpp"
#include "steadyrc/reservoir.hpp"

namespace steadyrc {

/// Explicit design for the regularized least-squares readout: harvested
/// states with a trailing all-ones column (the output bias) and +-1 targets.
struct DesignMatrix {
  Matrix x;  // n_s x (n_r + 1)
  Vector y;  // n_s
};

/// Stacks states row-wise and appends the ones column.
DesignMatrix build_design(const Matrix& states, const TargetSeries& targets);

/// Solves (X^T X + lambda I) w = X^T y by LDLT. The normal-equation residual
/// must come out <= 1e-8 relative; a rank-deficient system with lambda = 0
/// throws SingularSystem.
Vector ridge_regress(const DesignMatrix& design, double lambda);

/// Normal equations accumulated episode by episode, so the stacked state
/// matrix for a full corpus never has to exist in memory.
class NormalEquations {
 public:
  explicit NormalEquations(int state_dim);

  /// Adds one episode's states (n_e x n_r) and targets. Episodes may be
  /// prepared in parallel but must be added in a fixed order for bit-stable
  /// results.
  void add_episode(const Matrix& states, const TargetSeries& targets);

  /// Adds a pre-reduced partial (same layout as this).
  void add_partial(const NormalEquations& other);

  Vector solve(double lambda) const;

  long sample_count() const { return n_s_; }
  int dim() const { return static_cast<int>(xty_.size()); }

 private:
  Matrix xtx_;  // lower triangle valid
  Vector xty_;
  long n_s_ = 0;
};

/// How episode series map onto reservoir input rows: the three analog
/// channels, optionally the setpoint indicator, optionally the k one-hot
/// cluster inputs (constant over the episode).
struct InputSpec {
  bool use_setpoint = false;
  const Centroids* centroids = nullptr;
  int n_init_window = 80;

  int n_inputs() const {
    return 3 + (use_setpoint ? 1 : 0) + (centroids ? centroids->k() : 0);
  }
};

/// Builds the n_e x n_i input matrix for one (normalized, setpoint-derived)
/// episode. The cluster one-hot block is assigned from the initial capacity
/// window and held constant for the whole episode.
Matrix assemble_inputs(const Episode& episode, const InputSpec& spec);

/// Everything needed to score a fresh episode: reservoir, readout,
/// normalization stats, optional centroids and the decision threshold.
/// Treated as immutable once the pipeline has filled the threshold.
struct TrainedModel {
  ReservoirConfig config;  // n_i reflects the assembled input layout
  ReservoirWeights weights;
  Vector w_out;            // n_r + 1, last entry is the output bias
  double lambda = 1e-3;
  NormStats norm_stats;
  bool use_setpoint = false;
  std::optional<Centroids> centroids;
  int n_init_window = 80;
  double threshold = 0.0;

  InputSpec input_spec() const {
    return InputSpec{use_setpoint, centroids ? &*centroids : nullptr, n_init_window};
  }
};

/// Harvests every training episode (in parallel, reduced in episode order),
/// accumulates the normal equations and solves the ridge readout.
/// Episodes must be normalized and labeled; stats/centroids are recorded
/// into the model as-is.
TrainedModel train_model(const std::vector<Episode>& training_episodes,
                         ReservoirConfig config, double lambda, const NormStats& stats,
                         bool use_setpoint, std::optional<Centroids> centroids,
                         int n_init_window);

/// Pre-threshold analog score for every sample of an episode.
Vector score_episode(const TrainedModel& model, const Episode& episode);

}  // namespace steadyrc
