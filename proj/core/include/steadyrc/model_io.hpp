#pragma once

#include <filesystem>

#include "steadyrc/readout.hpp"

namespace steadyrc {

/// Versioned JSON container for a trained model: config echo, all fixed
/// matrices, the readout, normalization stats, centroids and the decision
/// threshold. Numbers round-trip at full double precision and the output is
/// byte-stable for identical models.
void save_model(const std::filesystem::path& path, const TrainedModel& model);
TrainedModel load_model(const std::filesystem::path& path);

}  // namespace steadyrc
