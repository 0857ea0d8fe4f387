#include "steadyrc/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>

#include "steadyrc/util.hpp"

namespace steadyrc {

namespace fs = std::filesystem;

namespace {

void check_lengths(const Vector& scores, const TargetSeries& labels) {
  if (scores.size() != labels.size())
    throw DimensionMismatch("scores and labels lengths differ");
  if (!scores.allFinite()) throw InvalidArgument("scores must be finite");
}

struct ClassCounts {
  long pos = 0, neg = 0;
};

ClassCounts count_classes(const TargetSeries& labels) {
  ClassCounts c;
  for (Eigen::Index i = 0; i < labels.size(); ++i)
    (labels(i) > 0 ? c.pos : c.neg) += 1;
  return c;
}

// (score, label) pairs sorted by score descending.
std::vector<std::pair<double, int>> sorted_pairs(const Vector& scores,
                                                 const TargetSeries& labels) {
  std::vector<std::pair<double, int>> pairs(scores.size());
  for (Eigen::Index i = 0; i < scores.size(); ++i) pairs[i] = {scores(i), labels(i)};
  std::sort(pairs.begin(), pairs.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });
  return pairs;
}

}  // namespace

ScoredEpisode make_scored(const Episode& episode, Vector scores, int n_init_window) {
  if (!episode.labeled) throw InvalidArgument("episode '" + episode.id + "' has no labels");
  if (scores.size() != episode.n_e())
    throw DimensionMismatch("score length != episode length");
  ScoredEpisode s;
  s.id = episode.id;
  s.scores = std::move(scores);
  s.y_hat = episode.y_hat;
  s.t_d = episode.t_d;
  s.n_init_window = n_init_window;
  s.cap = episode.cap;
  s.cap_f = episode.cap_f;
  s.dt = episode.dt;
  return s;
}

std::vector<RocPoint> roc_curve(const Vector& scores, const TargetSeries& labels) {
  check_lengths(scores, labels);
  const ClassCounts classes = count_classes(labels);
  if (classes.pos == 0 || classes.neg == 0)
    throw SingleClass("roc_curve needs both classes");

  const auto pairs = sorted_pairs(scores, labels);
  std::vector<RocPoint> roc;
  roc.push_back({std::numeric_limits<double>::infinity(), 0.0, 0.0});

  long tp = 0, fp = 0;
  std::size_t i = 0;
  while (i < pairs.size()) {
    const double threshold = pairs[i].first;
    // Consume the whole tie group; ties share one sweep point.
    while (i < pairs.size() && pairs[i].first == threshold) {
      (pairs[i].second > 0 ? tp : fp) += 1;
      ++i;
    }
    roc.push_back({threshold, double(tp) / double(classes.pos),
                   double(fp) / double(classes.neg)});
  }
  return roc;
}

double auc(const std::vector<RocPoint>& roc) {
  if (roc.size() < 2) throw InvalidArgument("auc needs at least two ROC points");
  double area = 0.0;
  for (std::size_t i = 1; i < roc.size(); ++i) {
    area += (roc[i].fpr - roc[i - 1].fpr) * (roc[i].tpr + roc[i - 1].tpr) * 0.5;
  }
  return area;
}

Confusion confusion_at_threshold(const Vector& scores, const TargetSeries& labels,
                                 double theta) {
  check_lengths(scores, labels);
  Confusion c;
  for (Eigen::Index i = 0; i < scores.size(); ++i) {
    const bool predicted = scores(i) >= theta;
    const bool actual = labels(i) > 0;
    if (predicted && actual) ++c.tp;
    else if (predicted && !actual) ++c.fp;
    else if (!predicted && !actual) ++c.tn;
    else ++c.fn;
  }
  return c;
}

int detection_time(const Vector& scores, double theta, int n_init_window) {
  const int n_e = static_cast<int>(scores.size());
  for (int t = std::max(n_init_window, 0); t < n_e; ++t)
    if (scores(t) >= theta) return t;
  return n_e;  // no detection: the test would run to completion
}

TimeErrorStats time_error_stats(const std::vector<int>& t_p, const std::vector<int>& t_d,
                                double dt) {
  if (t_p.empty() || t_p.size() != t_d.size())
    throw InvalidArgument("time_error_stats needs matching non-empty t_p / t_d lists");
  const double n = double(t_p.size());
  TimeErrorStats s;
  long late = 0;
  double sum = 0.0;
  for (std::size_t i = 0; i < t_p.size(); ++i) {
    const double terr = (t_p[i] - t_d[i]) * dt / 60.0;
    sum += terr;
    if (t_p[i] > t_d[i]) ++late;
  }
  s.mu_minutes = sum / n;
  double ss = 0.0;
  for (std::size_t i = 0; i < t_p.size(); ++i) {
    const double terr = (t_p[i] - t_d[i]) * dt / 60.0;
    ss += (terr - s.mu_minutes) * (terr - s.mu_minutes);
  }
  s.sigma_minutes = std::sqrt(ss / n);
  s.pct_late = double(late) / n;
  return s;
}

double time_saved_minutes(int n_e, int t_p, double dt) {
  if (t_p > n_e) throw InvalidArgument("t_p beyond episode end");
  return (n_e - t_p) * dt / 60.0;
}

double capacity_deviation(const Vector& cap, int t_p, double cap_f) {
  if (t_p < 0 || t_p >= cap.size()) throw InvalidArgument("t_p is not a valid sample index");
  if (cap_f == 0.0) throw InvalidArgument("cap_f must be non-zero");
  return (cap(t_p) - cap_f) / cap_f;
}

NaiveReference NaiveReference::fit(const std::vector<Episode>& training_episodes) {
  if (training_episodes.empty()) throw InsufficientData("empty training set");
  double sum = 0.0;
  for (const auto& ep : training_episodes) {
    if (!ep.labeled) throw InvalidArgument("episode '" + ep.id + "' has no labels");
    sum += ep.t_d;
  }
  NaiveReference ref;
  ref.fixed_sample = static_cast<int>(std::lround(sum / double(training_episodes.size())));
  return ref;
}

Vector NaiveReference::scores(int n_e) const {
  Vector s(n_e);
  for (int t = 0; t < n_e; ++t) s(t) = t >= fixed_sample ? 1.0 : -1.0;
  return s;
}

double select_threshold_for_fpr(const Vector& scores, const TargetSeries& labels,
                                double target_fpr) {
  check_lengths(scores, labels);
  if (scores.size() == 0) throw InsufficientData("no scores");
  if (target_fpr < 0.0 || target_fpr > 1.0)
    throw ConfigError("target_fpr must be in [0, 1]");
  const ClassCounts classes = count_classes(labels);
  if (classes.pos == 0 || classes.neg == 0)
    throw SingleClass("threshold selection needs both classes");

  const auto pairs = sorted_pairs(scores, labels);
  // Walk thresholds downward; FPR grows monotonically. The last candidate
  // still within budget is the smallest qualifying threshold and therefore
  // the TPR-maximal one.
  long fp = 0;
  bool found = false;
  double chosen = 0.0;
  double next_below = 0.0;  // largest distinct score below `chosen`
  std::size_t i = 0;
  while (i < pairs.size()) {
    const double threshold = pairs[i].first;
    while (i < pairs.size() && pairs[i].first == threshold) {
      if (pairs[i].second <= 0) ++fp;
      ++i;
    }
    if (double(fp) / double(classes.neg) <= target_fpr) {
      found = true;
      chosen = threshold;
      next_below = i < pairs.size() ? pairs[i].first : threshold;
    } else {
      break;
    }
  }
  if (found) return chosen == next_below ? chosen : 0.5 * (chosen + next_below);

  // Even the highest score exceeds the budget; predict nothing. Cannot fail
  // for target_fpr >= 0, but keep the guard honest.
  const double above = std::nextafter(pairs.front().first,
                                      std::numeric_limits<double>::infinity());
  if (!(std::isfinite(above))) throw Unattainable("no threshold satisfies the FPR budget");
  return above;
}

void pool_scores(const std::vector<ScoredEpisode>& scored, Vector& scores,
                 TargetSeries& labels) {
  Eigen::Index total = 0;
  for (const auto& s : scored)
    total += std::max(0, s.n_e() - std::max(s.n_init_window, 0));
  scores.resize(total);
  labels.resize(total);
  Eigen::Index at = 0;
  for (const auto& s : scored) {
    for (int t = std::max(s.n_init_window, 0); t < s.n_e(); ++t) {
      scores(at) = s.scores(t);
      labels(at) = s.y_hat(t);
      ++at;
    }
  }
}

ThresholdReport threshold_report(const std::vector<ScoredEpisode>& scored, double theta) {
  if (scored.empty()) throw InsufficientData("no scored episodes");
  ThresholdReport r;
  r.theta = theta;

  Vector pooled_scores;
  TargetSeries pooled_labels;
  pool_scores(scored, pooled_scores, pooled_labels);
  r.confusion = confusion_at_threshold(pooled_scores, pooled_labels, theta);

  std::vector<int> t_p(scored.size()), t_d(scored.size());
  double saved = 0.0;
  for (std::size_t i = 0; i < scored.size(); ++i) {
    const auto& s = scored[i];
    t_p[i] = detection_time(s.scores, theta, s.n_init_window);
    t_d[i] = s.t_d;
    saved += time_saved_minutes(s.n_e(), t_p[i], s.dt);
    r.terr_minutes.push_back((t_p[i] - t_d[i]) * s.dt / 60.0);
    // A no-detection episode is read out at its final sample.
    const int at = std::min(t_p[i], s.n_e() - 1);
    r.deviations.push_back(capacity_deviation(s.cap, at, s.cap_f));
  }
  r.terr = time_error_stats(t_p, t_d, scored.front().dt);
  r.mean_time_saved_min = saved / double(scored.size());
  return r;
}

EvaluationReport evaluate_scored(const std::vector<ScoredEpisode>& scored,
                                 const std::vector<double>& thetas, bool with_roc) {
  EvaluationReport report;
  Vector pooled_scores;
  TargetSeries pooled_labels;
  pool_scores(scored, pooled_scores, pooled_labels);
  report.pooled_samples = pooled_scores.size();
  if (with_roc) {
    report.roc = roc_curve(pooled_scores, pooled_labels);
    report.auc = auc(report.roc);
  }
  for (double theta : thetas) report.thresholds.push_back(threshold_report(scored, theta));
  return report;
}

// --- CSV artifacts -----------------------------------------------------------

namespace {

std::ofstream open_csv(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  return out;
}

void write_histogram(std::ofstream& out, double theta, const std::vector<double>& values,
                     double bin_width) {
  if (values.empty()) return;
  const double lo = *std::min_element(values.begin(), values.end());
  const double hi = *std::max_element(values.begin(), values.end());
  const long first_bin = std::lround(std::floor(lo / bin_width));
  const long last_bin = std::lround(std::floor(hi / bin_width));
  std::map<long, long> counts;
  for (double v : values) {
    long bin = std::lround(std::floor(v / bin_width));
    bin = std::clamp(bin, first_bin, last_bin);
    ++counts[bin];
  }
  for (const auto& [bin, count] : counts) {
    out << format_double(theta) << ',' << format_double(bin * bin_width) << ','
        << format_double((bin + 1) * bin_width) << ',' << count << '\n';
  }
}

}  // namespace

void write_roc_csv(const fs::path& path, const std::vector<RocPoint>& roc) {
  auto out = open_csv(path);
  out << "threshold,tpr,fpr\n";
  for (const auto& p : roc)
    out << format_double(p.threshold) << ',' << format_double(p.tpr) << ','
        << format_double(p.fpr) << '\n';
}

void write_rates_vs_threshold_csv(const fs::path& path,
                                  const std::vector<ScoredEpisode>& scored, int n_points) {
  if (n_points < 2) throw ConfigError("rates table needs at least 2 threshold points");
  Vector pooled_scores;
  TargetSeries pooled_labels;
  pool_scores(scored, pooled_scores, pooled_labels);
  const double lo = pooled_scores.minCoeff();
  const double hi = pooled_scores.maxCoeff();

  auto out = open_csv(path);
  out << "threshold,tpr,fpr,mu_terr_min,sigma_terr_min\n";
  for (int i = 0; i < n_points; ++i) {
    const double theta = lo + (hi - lo) * double(i) / double(n_points - 1);
    const Confusion c = confusion_at_threshold(pooled_scores, pooled_labels, theta);
    std::vector<int> t_p(scored.size()), t_d(scored.size());
    for (std::size_t e = 0; e < scored.size(); ++e) {
      t_p[e] = detection_time(scored[e].scores, theta, scored[e].n_init_window);
      t_d[e] = scored[e].t_d;
    }
    const TimeErrorStats terr = time_error_stats(t_p, t_d, scored.front().dt);
    out << format_double(theta) << ',' << format_double(c.tpr()) << ','
        << format_double(c.fpr()) << ',' << format_double(terr.mu_minutes) << ','
        << format_double(terr.sigma_minutes) << '\n';
  }
}

void write_terr_histogram_csv(const fs::path& path, const EvaluationReport& report,
                              double bin_width_min) {
  auto out = open_csv(path);
  out << "threshold,bin_lo_min,bin_hi_min,count\n";
  for (const auto& t : report.thresholds)
    write_histogram(out, t.theta, t.terr_minutes, bin_width_min);
}

void write_deviation_histogram_csv(const fs::path& path, const EvaluationReport& report,
                                   double bin_width) {
  auto out = open_csv(path);
  out << "threshold,bin_lo,bin_hi,count\n";
  for (const auto& t : report.thresholds)
    write_histogram(out, t.theta, t.deviations, bin_width);
}

void write_summary_csv(const fs::path& path, const std::string& variant,
                       const EvaluationReport& report) {
  auto out = open_csv(path);
  out << "variant,threshold,auc,zero_one_loss,tpr,fpr,mu_terr_min,sigma_terr_min,"
         "pct_late,mean_time_saved_min\n";
  for (const auto& t : report.thresholds) {
    out << variant << ',' << format_double(t.theta) << ',';
    if (std::isfinite(report.auc)) out << format_double(report.auc);
    out << ',' << format_double(t.confusion.zero_one_loss()) << ','
        << format_double(t.confusion.tpr()) << ',' << format_double(t.confusion.fpr()) << ','
        << format_double(t.terr.mu_minutes) << ',' << format_double(t.terr.sigma_minutes)
        << ',' << format_double(t.terr.pct_late) << ','
        << format_double(t.mean_time_saved_min) << '\n';
  }
}

}  // namespace steadyrc
