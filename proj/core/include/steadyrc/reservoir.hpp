#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "steadyrc/errors.hpp"

namespace steadyrc {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Distribution the fixed random weights are drawn from.
enum class WeightDist { Gaussian, Discrete };  // N(0,1) vs uniform over {-1,0,1}

struct ReservoirConfig {
  int n_r = 600;             // reservoir size
  int n_i = 3;               // input dimension (analog channels + binary cluster inputs)
  double alpha = 0.1;        // leak rate in (0,1]
  double rho_target = 0.2;   // spectral radius after conditioning
  double v_inp = 0.4;        // input scaling
  double v_bias = 0.2;       // bias scaling
  WeightDist weight_dist = WeightDist::Gaussian;
  std::uint64_t seed = 42;

  void validate() const;  // throws ConfigError
};

/// The three fixed random matrices. Immutable after init_weights; safe to
/// share across threads.
struct ReservoirWeights {
  Matrix w_in;    // n_r x n_i, already scaled by v_inp
  Matrix w_res;   // n_r x n_r, conditioned to rho_target
  Vector w_bias;  // n_r, already scaled by v_bias

  int n_r() const { return static_cast<int>(w_res.rows()); }
  int n_i() const { return static_cast<int>(w_in.cols()); }
};

/// Unconditioned draws plus the raw spectral radius. Lets a grid search
/// re-condition one draw to many spectral radii without re-estimating.
struct RawWeights {
  Matrix w_in;   // unscaled draw
  Matrix w_res;  // unscaled draw
  Vector w_bias; // unscaled draw
  double rho_raw = 0.0;
};

/// Spectral radius estimate via two-vector subspace iteration with a 2x2
/// Rayleigh-Ritz projection. Plain single-vector power iteration does not
/// converge when the dominant eigenvalue is a complex pair, which is the
/// common case for dense random matrices; the 2D subspace captures the pair.
double spectral_radius(const Matrix& w, double tol = 1e-9, int max_iter = 10000);

/// Returns w * (rho_target / rho(w)). Throws DegenerateMatrix when
/// rho(w) < 1e-12 (zero or nilpotent input).
Matrix rescale_spectral_radius(const Matrix& w, double rho_target);

/// Draws w_in, w_res, w_bias (in that order) from config.weight_dist with the
/// config seed and estimates rho of the raw w_res.
RawWeights draw_raw_weights(const ReservoirConfig& config);

/// Applies v_inp / v_bias scaling and conditions w_res to rho_target.
ReservoirWeights condition_weights(const RawWeights& raw, const ReservoirConfig& config);

/// draw_raw_weights + condition_weights. Deterministic given the seed.
ReservoirWeights init_weights(const ReservoirConfig& config);

/// One leaky update:
///   x' = tanh((1 - alpha) x + alpha (W_in u + W_res x + W_bias))
/// The nonlinearity wraps the whole leaky combination, including the
/// (1 - alpha) x carry-over term. This is intentional and differs from the
/// variant that applies tanh to the drive only.
Vector update_state(const ReservoirWeights& w, const Vector& x, const Vector& u, double alpha);

/// Iterates update_state from x(0) = 0 over the rows of episode_inputs
/// (n_e x n_i). Row t of the result is x(t+1). The zero reset makes episodes
/// independent, so callers may harvest them in parallel.
Matrix harvest_states(const ReservoirWeights& w, const Matrix& episode_inputs, double alpha);

/// Analog readout w_out . [x; 1]; the last entry of w_out is the output bias.
/// Thresholding to a +-1 decision happens downstream.
double readout_score(const Vector& w_out, const Vector& x);

}  // namespace steadyrc
