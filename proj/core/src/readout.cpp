#include "steadyrc/readout.hpp"

#include <cmath>

#include "steadyrc/util.hpp"

namespace steadyrc {

namespace {

// Shared solve for both the explicit and the accumulated path.
// xtx may carry only a valid lower triangle.
Vector solve_normal_equations(const Matrix& xtx_lower, const Vector& xty, double lambda) {
  if (lambda < 0.0) throw ConfigError("lambda must be >= 0");
  const Eigen::Index dim = xty.size();
  Matrix a = xtx_lower.selfadjointView<Eigen::Lower>();
  a.diagonal().array() += lambda;

  Eigen::LDLT<Matrix> ldlt(a);
  Vector w = ldlt.solve(xty);

  // Rank check only matters for the unregularized case; with lambda > 0 the
  // system is positive definite.
  if (lambda == 0.0) {
    const Vector d = ldlt.vectorD().cwiseAbs();
    const double dmax = d.maxCoeff();
    if (!(dmax > 0.0) || d.minCoeff() < dim * 1e-14 * dmax || !w.allFinite())
      throw SingularSystem("normal equations are rank-deficient and lambda = 0");
  }

  const double denom = std::max(xty.norm(), 1e-300);
  const double residual = (a.selfadjointView<Eigen::Lower>() * w - xty).norm() / denom;
  if (!w.allFinite() || residual > 1e-8) {
    if (lambda == 0.0)
      throw SingularSystem("normal equations are rank-deficient and lambda = 0");
    throw Error("ridge solve failed: relative residual " + format_double(residual));
  }
  return w;
}

}  // namespace

DesignMatrix build_design(const Matrix& states, const TargetSeries& targets) {
  if (states.rows() != targets.size())
    throw DimensionMismatch("states and targets row counts differ");
  DesignMatrix d;
  d.x.resize(states.rows(), states.cols() + 1);
  d.x.leftCols(states.cols()) = states;
  d.x.col(states.cols()).setOnes();
  d.y = targets.cast<double>();
  return d;
}

Vector ridge_regress(const DesignMatrix& design, double lambda) {
  if (design.x.rows() != design.y.size())
    throw DimensionMismatch("design rows != target rows");
  if (design.x.rows() < 1) throw InsufficientData("empty design matrix");
  const Eigen::Index dim = design.x.cols();
  Matrix xtx = Matrix::Zero(dim, dim);
  xtx.selfadjointView<Eigen::Lower>().rankUpdate(design.x.transpose());
  const Vector xty = design.x.transpose() * design.y;
  return solve_normal_equations(xtx, xty, lambda);
}

NormalEquations::NormalEquations(int state_dim) {
  if (state_dim < 1) throw ConfigError("state dimension must be >= 1");
  xtx_ = Matrix::Zero(state_dim + 1, state_dim + 1);
  xty_ = Vector::Zero(state_dim + 1);
}

void NormalEquations::add_episode(const Matrix& states, const TargetSeries& targets) {
  const Eigen::Index n = dim() - 1;
  if (states.cols() != n) throw DimensionMismatch("state width != accumulator dimension");
  if (states.rows() != targets.size())
    throw DimensionMismatch("states and targets row counts differ");

  const Vector y = targets.cast<double>();
  xtx_.topLeftCorner(n, n).selfadjointView<Eigen::Lower>().rankUpdate(states.transpose());
  xtx_.row(n).head(n) += states.colwise().sum();  // ones-column cross terms (lower triangle)
  xtx_(n, n) += double(states.rows());
  xty_.head(n).noalias() += states.transpose() * y;
  xty_(n) += y.sum();
  n_s_ += states.rows();
}

void NormalEquations::add_partial(const NormalEquations& other) {
  if (other.dim() != dim()) throw DimensionMismatch("accumulator dimensions differ");
  xtx_ += other.xtx_;
  xty_ += other.xty_;
  n_s_ += other.n_s_;
}

Vector NormalEquations::solve(double lambda) const {
  if (n_s_ < 1) throw InsufficientData("no samples accumulated");
  return solve_normal_equations(xtx_, xty_, lambda);
}

Matrix assemble_inputs(const Episode& ep, const InputSpec& spec) {
  if (!ep.normalized)
    throw InvalidArgument("episode '" + ep.id + "' must be normalized before assembly");
  const int n_e = ep.n_e();
  Matrix u(n_e, spec.n_inputs());
  u.col(0) = ep.cap;
  u.col(1) = ep.shell_temp;
  u.col(2) = ep.pressure;
  int col = 3;
  if (spec.use_setpoint) {
    if (ep.setpoint.size() != n_e)
      throw InvalidArgument("episode '" + ep.id + "' has no setpoint series");
    u.col(col++) = ep.setpoint.cast<double>();
  }
  if (spec.centroids) {
    const int cluster =
        assign_cluster(initial_window(ep, spec.n_init_window), *spec.centroids);
    const Vector u2 = one_hot(cluster, spec.centroids->k());
    for (int j = 0; j < u2.size(); ++j) u.col(col + j).setConstant(u2(j));
  }
  return u;
}

TrainedModel train_model(const std::vector<Episode>& training_episodes,
                         ReservoirConfig config, double lambda, const NormStats& stats,
                         bool use_setpoint, std::optional<Centroids> centroids,
                         int n_init_window) {
  if (training_episodes.empty()) throw InsufficientData("empty training set");

  TrainedModel model;
  model.use_setpoint = use_setpoint;
  model.centroids = std::move(centroids);
  model.n_init_window = n_init_window;
  model.norm_stats = stats;
  model.lambda = lambda;

  const InputSpec spec = model.input_spec();
  config.n_i = spec.n_inputs();
  config.validate();
  model.config = config;
  model.weights = init_weights(config);

  NormalEquations equations(config.n_r);
  // Episodes are harvested in parallel blocks; partials are reduced in
  // episode order so repeated runs are bit-identical.
  const std::size_t block = 8;
  std::vector<NormalEquations> partials;
  for (std::size_t start = 0; start < training_episodes.size(); start += block) {
    const std::size_t count = std::min(block, training_episodes.size() - start);
    partials.assign(count, NormalEquations(config.n_r));
    parallel_for(count, [&](std::size_t i) {
      const Episode& ep = training_episodes[start + i];
      if (!ep.labeled)
        throw InvalidArgument("episode '" + ep.id + "' has no labels");
      const Matrix states = harvest_states(model.weights, assemble_inputs(ep, spec), config.alpha);
      partials[i].add_episode(states, ep.y_hat);
    });
    for (std::size_t i = 0; i < count; ++i) equations.add_partial(partials[i]);
  }

  model.w_out = equations.solve(lambda);
  return model;
}

Vector score_episode(const TrainedModel& model, const Episode& episode) {
  const Matrix states =
      harvest_states(model.weights, assemble_inputs(episode, model.input_spec()),
                     model.config.alpha);
  const Eigen::Index n_r = states.cols();
  return (states * model.w_out.head(n_r)).array() + model.w_out(n_r);
}

}  // namespace steadyrc
