#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "steadyrc/evaluation.hpp"
#include "steadyrc/model_io.hpp"
#include "steadyrc/synthesis.hpp"

namespace steadyrc {

/// Model variants. The ".inp" variants feed the setpoint indicator as a
/// fourth analog input; the "clu" variants add the k one-hot cluster inputs.
enum class Variant { Rc1, Rc1Inp, Rc2Clu, Rc2CluInp, Reference };

std::string to_string(Variant v);
Variant parse_variant(const std::string& name);

struct GridSpec {
  std::vector<double> rho;
  std::vector<double> alpha;
};

/// Default search grid. The surface axes are a project choice; the paper's
/// exact grid is not recoverable from the text.
GridSpec default_grid();

struct RunConfig {
  std::string manifest;
  Variant variant = Variant::Rc1Inp;
  ReservoirConfig reservoir;  // reservoir.seed also seeds k-means (derived)
  double lambda = 0.001;
  int k = 4;
  int n_init_window = 80;
  SplitRatios ratios;
  std::uint64_t split_seed = 7;
  GridSpec grid = default_grid();
  double target_fpr = 0.02;
  std::string out_dir;

  void validate() const;
};

/// Flat key=value config file; '#' starts a comment line. Unknown keys are
/// configuration errors. CLI flags override file values.
RunConfig parse_run_config(const std::filesystem::path& path);
void apply_config_line(RunConfig& config, const std::string& key, const std::string& value);

struct PipelineResult {
  std::optional<TrainedModel> model;        // absent for the reference variant
  std::optional<NaiveReference> reference;  // present for the reference variant
  DatasetSplit split;
  double threshold = 0.0;  // selected on validation at target_fpr (0 for reference)
  double val_auc = std::numeric_limits<double>::quiet_NaN();
  EvaluationReport test_report;
};

/// End-to-end run: split, normalize with training stats, label, fit k-means
/// for the clustered variants, train the readout, select the threshold on
/// validation, evaluate on test and (when out_dir is set) write the model
/// artifact plus the CSV reports. Deterministic for a fixed config.
PipelineResult run_pipeline(const RunConfig& config);

/// Same pipeline over in-memory raw episodes. external_split, when given,
/// overrides the seeded split (used for manifests that carry one).
PipelineResult run_pipeline(const RunConfig& config, std::vector<Episode> episodes,
                            const DatasetSplit* external_split = nullptr);

struct GridResult {
  std::vector<double> rho;
  std::vector<double> alpha;
  Matrix val_auc;  // rho x alpha
  int best_rho_index = 0;
  int best_alpha_index = 0;
  double min_auc = 0.0;
  double mean_auc = 0.0;
  double std_auc = 0.0;  // population std over cells
};

/// Re-conditions one raw weight draw to every (rho, alpha) cell, retrains the
/// readout and records the validation AUC. Cells are independent and run in
/// parallel; the surface does not depend on evaluation order.
GridResult grid_search(const RunConfig& config);
GridResult grid_search(const RunConfig& config, std::vector<Episode> episodes,
                       const DatasetSplit* external_split = nullptr);

struct SizeSweepRow {
  int n_r = 0;
  double test_auc = 0.0;
};

/// Full pipeline per reservoir size; reports test AUC.
std::vector<SizeSweepRow> reservoir_size_sweep(const RunConfig& config,
                                               const std::vector<int>& sizes);
std::vector<SizeSweepRow> reservoir_size_sweep(const RunConfig& config,
                                               const std::vector<int>& sizes,
                                               const std::vector<Episode>& episodes,
                                               const DatasetSplit* external_split = nullptr);

void write_grid_csv(const std::filesystem::path& path, const GridResult& grid);
void write_size_sweep_csv(const std::filesystem::path& path,
                          const std::vector<SizeSweepRow>& rows);

}  // namespace steadyrc
