#pragma once

#include <filesystem>
#include <limits>
#include <string>
#include <vector>

#include "steadyrc/dataset.hpp"
#include "steadyrc/readout.hpp"

namespace steadyrc {

/// One scored episode: the analog output plus everything the time metrics
/// need. Samples before n_init_window are excluded from pooled metrics for
/// every model; no detection is possible before the clustering window ends,
/// and the restriction is applied uniformly to keep comparisons fair.
struct ScoredEpisode {
  std::string id;
  Vector scores;
  TargetSeries y_hat;
  int t_d = 0;
  int n_init_window = 0;
  Vector cap;
  double cap_f = 0.0;
  double dt = 10.0;

  int n_e() const { return static_cast<int>(scores.size()); }
};

ScoredEpisode make_scored(const Episode& episode, Vector scores, int n_init_window);

struct RocPoint {
  double threshold = 0.0;
  double tpr = 0.0;
  double fpr = 0.0;
};

struct Confusion {
  long tp = 0, fp = 0, tn = 0, fn = 0;

  long total() const { return tp + fp + tn + fn; }
  double tpr() const { return tp + fn > 0 ? double(tp) / double(tp + fn) : 0.0; }
  double fpr() const { return fp + tn > 0 ? double(fp) / double(fp + tn) : 0.0; }
  double zero_one_loss() const {
    return total() > 0 ? double(fp + fn) / double(total()) : 0.0;
  }
};

/// Threshold sweep over every distinct score, descending, preceded by a
/// predict-nothing point at threshold +inf. Ties share one point. Throws
/// SingleClass when only one label value is present.
std::vector<RocPoint> roc_curve(const Vector& scores, const TargetSeries& labels);

/// Trapezoidal area under the curve; equals the Mann-Whitney pairwise
/// statistic with ties counted 1/2.
double auc(const std::vector<RocPoint>& roc);

/// Prediction is +1 iff score >= theta.
Confusion confusion_at_threshold(const Vector& scores, const TargetSeries& labels, double theta);

/// First sample t >= n_init_window whose score reaches theta (the rig would
/// stop there, so later crossings are irrelevant); n_e when none does.
int detection_time(const Vector& scores, double theta, int n_init_window);

struct TimeErrorStats {
  double mu_minutes = 0.0;
  double sigma_minutes = 0.0;  // population standard deviation
  double pct_late = 0.0;       // share of episodes with t_p > t_d
};

TimeErrorStats time_error_stats(const std::vector<int>& t_p, const std::vector<int>& t_d,
                                double dt);

double time_saved_minutes(int n_e, int t_p, double dt);

/// Relative capacity deviation (cap(t_p) - cap_f) / cap_f at detection.
double capacity_deviation(const Vector& cap, int t_p, double cap_f);

/// Baseline that declares steady state at a fixed time: the training-set
/// mean of t_d, rounded to one sample.
struct NaiveReference {
  int fixed_sample = 0;

  static NaiveReference fit(const std::vector<Episode>& training_episodes);
  /// Induced +-1 output series for an episode of length n_e.
  Vector scores(int n_e) const;
};

/// Smallest threshold whose FPR is within target_fpr; by monotonicity this
/// also maximizes TPR under the constraint. Returned value is the midpoint
/// between the qualifying score and the next distinct score below it, so the
/// decision is robust to scores placed exactly on the boundary.
double select_threshold_for_fpr(const Vector& scores, const TargetSeries& labels,
                                double target_fpr);

/// Metrics at one decision threshold, pooled over episodes.
struct ThresholdReport {
  double theta = 0.0;
  Confusion confusion;                // pooled samples with t >= n_init_window
  TimeErrorStats terr;
  double mean_time_saved_min = 0.0;
  std::vector<double> terr_minutes;   // per episode
  std::vector<double> deviations;     // per episode, at min(t_p, n_e - 1)
};

struct EvaluationReport {
  std::vector<RocPoint> roc;  // empty for the reference model
  double auc = std::numeric_limits<double>::quiet_NaN();
  std::vector<ThresholdReport> thresholds;
  long pooled_samples = 0;
};

/// Pools samples with t >= n_init_window across episodes.
void pool_scores(const std::vector<ScoredEpisode>& scored, Vector& scores,
                 TargetSeries& labels);

ThresholdReport threshold_report(const std::vector<ScoredEpisode>& scored, double theta);

/// Full report: ROC + AUC (unless with_roc is false, e.g. for the reference
/// model) and one ThresholdReport per requested theta.
EvaluationReport evaluate_scored(const std::vector<ScoredEpisode>& scored,
                                 const std::vector<double>& thetas, bool with_roc = true);

// --- CSV artifacts -----------------------------------------------------------

void write_roc_csv(const std::filesystem::path& path, const std::vector<RocPoint>& roc);

/// Fig-9-style table: tpr / fpr / time-error stats on a uniform grid of
/// n_points thresholds spanning the pooled score range.
void write_rates_vs_threshold_csv(const std::filesystem::path& path,
                                  const std::vector<ScoredEpisode>& scored,
                                  int n_points = 201);

/// Histogram rows (theta, bin_lo, bin_hi, count) with fixed-width bins.
void write_terr_histogram_csv(const std::filesystem::path& path,
                              const EvaluationReport& report,
                              double bin_width_min = 2.0);
void write_deviation_histogram_csv(const std::filesystem::path& path,
                                   const EvaluationReport& report,
                                   double bin_width = 0.005);

/// One row per threshold with the headline table fields; the AUC cell is
/// empty when the model has no score sweep (reference baseline).
void write_summary_csv(const std::filesystem::path& path, const std::string& variant,
                       const EvaluationReport& report);

}  // namespace steadyrc
