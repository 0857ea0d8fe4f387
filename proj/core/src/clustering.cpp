#include "steadyrc/clustering.hpp"

#include <limits>
#include <random>

namespace steadyrc {

namespace {

int nearest_center(const Matrix& centers, const Eigen::RowVectorXd& point, double* dist_out) {
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (int c = 0; c < centers.rows(); ++c) {
    const double d = (centers.row(c) - point).squaredNorm();
    if (d < best_d) {  // strict <: ties keep the lowest index
      best_d = d;
      best = c;
    }
  }
  if (dist_out) *dist_out = best_d;
  return best;
}

// k-means++ D^2 seeding. Cumulative-sum sampling is hand-rolled so the draw
// sequence is pinned by the seed alone.
Matrix seed_centers(const Matrix& windows, int k, std::mt19937_64& rng) {
  const Eigen::Index n = windows.rows();
  Matrix centers(k, windows.cols());
  std::uniform_int_distribution<Eigen::Index> first(0, n - 1);
  centers.row(0) = windows.row(first(rng));

  Vector d2(n);
  for (Eigen::Index i = 0; i < n; ++i)
    d2(i) = (windows.row(i) - centers.row(0)).squaredNorm();

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int c = 1; c < k; ++c) {
    const double total = d2.sum();
    Eigen::Index pick = 0;
    if (total > 0.0) {
      const double target = unit(rng) * total;
      double acc = 0.0;
      pick = n - 1;
      for (Eigen::Index i = 0; i < n; ++i) {
        acc += d2(i);
        if (acc >= target) {
          pick = i;
          break;
        }
      }
    } else {
      // All remaining distances are zero (duplicate windows); any point works.
      pick = first(rng);
    }
    centers.row(c) = windows.row(pick);
    for (Eigen::Index i = 0; i < n; ++i)
      d2(i) = std::min(d2(i), (windows.row(i) - centers.row(c)).squaredNorm());
  }
  return centers;
}

}  // namespace

Centroids kmeans_fit(const Matrix& windows, int k, std::uint64_t seed,
                     int max_iter, double tol, std::vector<double>* inertia_trace) {
  if (k < 1) throw ConfigError("k must be >= 1");
  const Eigen::Index n = windows.rows();
  if (n < k)
    throw InsufficientData("kmeans_fit: fewer windows than clusters");
  if (inertia_trace) inertia_trace->clear();

  std::mt19937_64 rng(seed);
  Matrix centers = seed_centers(windows, k, rng);

  std::vector<int> assign(n, -1);
  std::vector<int> prev_assign;
  Vector dist(n);
  double inertia = 0.0;
  double prev_inertia = std::numeric_limits<double>::infinity();

  auto assign_all = [&] {
    inertia = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      double d = 0.0;
      assign[i] = nearest_center(centers, windows.row(i), &d);
      dist(i) = d;
      inertia += d;
    }
    if (inertia_trace) inertia_trace->push_back(inertia);
  };

  assign_all();
  for (int iter = 0; iter < max_iter; ++iter) {
    // Center update: mean of each cluster's members.
    Matrix sums = Matrix::Zero(k, windows.cols());
    std::vector<Eigen::Index> counts(k, 0);
    for (Eigen::Index i = 0; i < n; ++i) {
      sums.row(assign[i]) += windows.row(i);
      ++counts[assign[i]];
    }
    for (int c = 0; c < k; ++c) {
      if (counts[c] > 0) {
        centers.row(c) = sums.row(c) / double(counts[c]);
        continue;
      }
      // Empty cluster: re-seed with the farthest member of the largest cluster.
      int largest = 0;
      for (int j = 1; j < k; ++j)
        if (counts[j] > counts[largest]) largest = j;
      Eigen::Index farthest = -1;
      double far_d = -1.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (assign[i] != largest) continue;
        if (dist(i) > far_d) {
          far_d = dist(i);
          farthest = i;
        }
      }
      if (farthest >= 0) {
        centers.row(c) = windows.row(farthest);
        --counts[largest];
        ++counts[c];
        assign[farthest] = c;
      }
    }

    prev_assign = assign;
    prev_inertia = inertia;
    assign_all();
    if (assign == prev_assign) break;  // fixpoint: centers are the means of this assignment
    if (std::abs(prev_inertia - inertia) <= tol * std::max(1.0, inertia)) break;
  }

  Centroids out;
  out.centers = std::move(centers);
  out.inertia = inertia;
  return out;
}

int assign_cluster(const Vector& window, const Centroids& centroids) {
  if (window.size() != centroids.dim())
    throw DimensionMismatch("window length != centroid dimension");
  return nearest_center(centroids.centers, window.transpose(), nullptr);
}

Vector one_hot(int cluster, int k) {
  if (cluster < 0 || cluster >= k)
    throw InvalidArgument("cluster index out of range");
  Vector u2 = Vector::Zero(k);
  u2(cluster) = 1.0;
  return u2;
}

}  // namespace steadyrc
