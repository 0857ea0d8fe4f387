#pragma once

#include <cstdint>
#include <vector>

#include "steadyrc/reservoir.hpp"

namespace steadyrc {

/// Fitted k-means centroids over initial capacity windows.
/// Immutable after kmeans_fit; assignment is pure and thread-safe.
struct Centroids {
  Matrix centers;       // k x n_I, one center per row
  double inertia = 0.0; // within-cluster sum of squared distances at convergence

  int k() const { return static_cast<int>(centers.rows()); }
  int dim() const { return static_cast<int>(centers.cols()); }
};

/// Lloyd's algorithm with k-means++ seeding.
///
/// windows holds one initial window per row. Terminates on assignment
/// fixpoint, on relative inertia change < tol, or after max_iter rounds.
/// An emptied cluster is re-seeded with the farthest point of the largest
/// cluster, which keeps the run deterministic for a given seed.
/// inertia_trace, when given, receives the inertia after every assignment
/// pass (non-increasing by construction).
Centroids kmeans_fit(const Matrix& windows, int k, std::uint64_t seed,
                     int max_iter = 100, double tol = 1e-10,
                     std::vector<double>* inertia_trace = nullptr);

/// Index of the nearest center by squared Euclidean distance; ties go to the
/// lowest index.
int assign_cluster(const Vector& window, const Centroids& centroids);

/// Binary indicator vector with a single 1 at `cluster`. This is the constant
/// subspace-projection input u2 held for a whole episode.
Vector one_hot(int cluster, int k);

}  // namespace steadyrc
