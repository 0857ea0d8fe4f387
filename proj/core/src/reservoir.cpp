#include "steadyrc/reservoir.hpp"

#include <cmath>
#include <random>

namespace steadyrc {

namespace {

constexpr double kDegenerateRho = 1e-12;

// Largest |eigenvalue| of a real 2x2 matrix, covering the complex-pair case.
double spectral_radius_2x2(double a, double b, double c, double d) {
  const double tr = a + d;
  const double det = a * d - b * c;
  const double disc = 0.25 * tr * tr - det;
  if (disc >= 0.0) {
    const double s = std::sqrt(disc);
    return std::max(std::abs(0.5 * tr + s), std::abs(0.5 * tr - s));
  }
  // Complex conjugate pair: |lambda|^2 = det (> tr^2/4 >= 0 here).
  return std::sqrt(det);
}

// Orthonormalizes the two columns of v in place. Returns false when the first
// column has collapsed to (numerical) zero. A collapsed second column is
// replaced by a deterministic vector orthogonal to the first.
bool orthonormalize_pair(Matrix& v) {
  const double r0 = v.col(0).norm();
  if (!(r0 > 0.0) || !std::isfinite(r0)) return false;
  v.col(0) /= r0;
  v.col(1) -= v.col(0).dot(v.col(1)) * v.col(0);
  double r1 = v.col(1).norm();
  if (r1 > 1e-14 * r0 && std::isfinite(r1)) {
    v.col(1) /= r1;
    return true;
  }
  // Rebuild column 1 from the standard basis vector least aligned with col 0.
  Eigen::Index least = 0;
  v.col(0).cwiseAbs().minCoeff(&least);
  v.col(1).setZero();
  v.col(1)(least) = 1.0;
  v.col(1) -= v.col(0).dot(v.col(1)) * v.col(0);
  r1 = v.col(1).norm();
  if (!(r1 > 0.0)) return false;
  v.col(1) /= r1;
  return true;
}

template <typename Draw>
void fill_with(Matrix& m, Draw&& draw) {
  double* p = m.data();
  const Eigen::Index n = m.size();
  for (Eigen::Index i = 0; i < n; ++i) p[i] = draw();
}

}  // namespace

void ReservoirConfig::validate() const {
  if (n_r < 1) throw ConfigError("n_r must be >= 1");
  if (n_i < 1) throw ConfigError("n_i must be >= 1");
  if (!(alpha > 0.0) || alpha > 1.0) throw ConfigError("alpha must be in (0, 1]");
  if (!(rho_target > 0.0)) throw ConfigError("rho_target must be > 0");
  if (v_inp < 0.0) throw ConfigError("v_inp must be >= 0");
  if (v_bias < 0.0) throw ConfigError("v_bias must be >= 0");
}

double spectral_radius(const Matrix& w, double tol, int max_iter) {
  if (w.rows() != w.cols()) throw DimensionMismatch("spectral_radius needs a square matrix");
  const Eigen::Index n = w.rows();
  if (n == 0) throw DimensionMismatch("spectral_radius: empty matrix");
  if (n == 1) return std::abs(w(0, 0));
  if (n == 2) return spectral_radius_2x2(w(0, 0), w(0, 1), w(1, 0), w(1, 1));

  // Fixed internal seed: the estimate must be a deterministic function of w.
  std::mt19937_64 rng(0x5eedf00dULL);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix v(n, 2);
  fill_with(v, [&] { return gauss(rng); });
  if (!orthonormalize_pair(v)) return 0.0;

  double estimate = 0.0;
  double previous = -1.0;
  int stable = 0;
  Matrix y(n, 2);
  for (int iter = 0; iter < max_iter; ++iter) {
    y.noalias() = w * v;
    // Rayleigh-Ritz on span(v): H = v^T (w v) is 2x2.
    const double h00 = v.col(0).dot(y.col(0));
    const double h01 = v.col(0).dot(y.col(1));
    const double h10 = v.col(1).dot(y.col(0));
    const double h11 = v.col(1).dot(y.col(1));
    estimate = spectral_radius_2x2(h00, h01, h10, h11);

    if (y.norm() < kDegenerateRho * std::sqrt(double(n))) return 0.0;  // nilpotent-like collapse

    if (std::abs(estimate - previous) <= tol * std::max(1.0, estimate)) {
      if (++stable >= 3) break;
    } else {
      stable = 0;
    }
    previous = estimate;
    v = y;
    if (!orthonormalize_pair(v)) return 0.0;
  }
  return estimate;
}

Matrix rescale_spectral_radius(const Matrix& w, double rho_target) {
  if (!(rho_target > 0.0)) throw ConfigError("rho_target must be > 0");
  const double rho = spectral_radius(w);
  if (rho < kDegenerateRho)
    throw DegenerateMatrix("cannot rescale: spectral radius is numerically zero");
  return w * (rho_target / rho);
}

RawWeights draw_raw_weights(const ReservoirConfig& config) {
  config.validate();
  std::mt19937_64 rng(config.seed);
  RawWeights raw;
  raw.w_in.resize(config.n_r, config.n_i);
  raw.w_res.resize(config.n_r, config.n_r);
  raw.w_bias.resize(config.n_r);

  // Draw order (w_in, w_res, w_bias) is fixed; changing it changes every
  // seeded run.
  if (config.weight_dist == WeightDist::Gaussian) {
    std::normal_distribution<double> dist(0.0, 1.0);
    auto draw = [&] { return dist(rng); };
    fill_with(raw.w_in, draw);
    fill_with(raw.w_res, draw);
    for (int i = 0; i < config.n_r; ++i) raw.w_bias(i) = draw();
  } else {
    std::uniform_int_distribution<int> dist(-1, 1);
    auto draw = [&] { return static_cast<double>(dist(rng)); };
    fill_with(raw.w_in, draw);
    fill_with(raw.w_res, draw);
    for (int i = 0; i < config.n_r; ++i) raw.w_bias(i) = draw();
  }

  raw.rho_raw = spectral_radius(raw.w_res);
  return raw;
}

ReservoirWeights condition_weights(const RawWeights& raw, const ReservoirConfig& config) {
  config.validate();
  if (raw.rho_raw < kDegenerateRho)
    throw DegenerateMatrix("cannot rescale: spectral radius is numerically zero");
  ReservoirWeights w;
  w.w_in = raw.w_in * config.v_inp;
  w.w_res = raw.w_res * (config.rho_target / raw.rho_raw);
  w.w_bias = raw.w_bias * config.v_bias;
  return w;
}

ReservoirWeights init_weights(const ReservoirConfig& config) {
  return condition_weights(draw_raw_weights(config), config);
}

Vector update_state(const ReservoirWeights& w, const Vector& x, const Vector& u, double alpha) {
  if (x.size() != w.n_r()) throw DimensionMismatch("state size != n_r");
  if (u.size() != w.n_i()) throw DimensionMismatch("input size != n_i");
  Vector pre = (1.0 - alpha) * x;
  pre.noalias() += alpha * (w.w_res * x);
  pre.noalias() += alpha * (w.w_in * u);
  pre += alpha * w.w_bias;
  return pre.array().tanh();
}

Matrix harvest_states(const ReservoirWeights& w, const Matrix& episode_inputs, double alpha) {
  const Eigen::Index n_e = episode_inputs.rows();
  if (n_e == 0) throw InsufficientData("harvest_states: empty episode");
  if (episode_inputs.cols() != w.n_i())
    throw DimensionMismatch("episode input dimension != n_i");

  const Eigen::Index n_r = w.n_r();
  // Input drive for all steps at once; the recurrent part stays sequential.
  Matrix drive = episode_inputs * w.w_in.transpose();  // n_e x n_r
  drive.rowwise() += w.w_bias.transpose();

  Matrix states(n_e, n_r);
  Vector x = Vector::Zero(n_r);
  Vector pre(n_r);
  for (Eigen::Index t = 0; t < n_e; ++t) {
    pre = (1.0 - alpha) * x;
    pre.noalias() += alpha * (w.w_res * x);
    pre += alpha * drive.row(t).transpose();
    x = pre.array().tanh();
    states.row(t) = x.transpose();
  }
  return states;
}

double readout_score(const Vector& w_out, const Vector& x) {
  if (w_out.size() != x.size() + 1)
    throw DimensionMismatch("readout expects w_out of size n_r + 1");
  return w_out.head(x.size()).dot(x) + w_out(w_out.size() - 1);
}

}  // namespace steadyrc
