#include "steadyrc/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "steadyrc/util.hpp"

namespace steadyrc {

namespace fs = std::filesystem;
using nlohmann::json;

int final_window_samples(double dt) {
  if (!(dt > 0.0)) throw ConfigError("dt must be > 0");
  return static_cast<int>(std::lround(45.0 * 60.0 / dt));
}

NormStats compute_norm_stats(const std::vector<Episode>& training_episodes) {
  if (training_episodes.empty())
    throw InsufficientData("compute_norm_stats: empty training set");
  NormStats s;
  for (const auto& ep : training_episodes) {
    if (ep.normalized)
      throw InvalidArgument("compute_norm_stats expects raw episodes");
    if (ep.n_e() > 0) {
      s.cap_max = std::max(s.cap_max, ep.cap.maxCoeff());
      s.shell_max = std::max(s.shell_max, ep.shell_temp.maxCoeff());
      s.pressure_max = std::max(s.pressure_max, ep.pressure.maxCoeff());
    }
  }
  return s;
}

void normalize(Episode& ep, const NormStats& stats) {
  if (ep.normalized)
    throw InvalidArgument("episode '" + ep.id + "' is already normalized");
  if (!(stats.cap_max > 0.0) || !(stats.shell_max > 0.0) || !(stats.pressure_max > 0.0))
    throw ZeroMaximum("normalization maxima must be > 0");
  ep.cap /= stats.cap_max;
  ep.shell_temp /= stats.shell_max;
  ep.pressure /= stats.pressure_max;
  ep.ref /= stats.pressure_max;
  ep.cap_f /= stats.cap_max;  // keep any pre-derived value scale-consistent
  ep.normalized = true;
}

void normalize(std::vector<Episode>& episodes, const NormStats& stats) {
  for (auto& ep : episodes) normalize(ep, stats);
}

BinarySeries compute_setpoint_indicator(const Vector& pressure, double ref) {
  if (!(ref > 0.0)) throw InvalidArgument("setpoint reference must be > 0");
  const double lo = ref * (1.0 - 0.01);
  const double hi = ref * (1.0 + 0.01);
  BinarySeries out(pressure.size());
  for (Eigen::Index t = 0; t < pressure.size(); ++t)
    out(t) = (pressure(t) >= lo && pressure(t) <= hi) ? 1 : 0;
  return out;
}

double compute_final_capacity(const Vector& cap, double dt) {
  const int window = final_window_samples(dt);
  if (cap.size() < window)
    throw EpisodeTooShort("episode shorter than the final 45-minute window");
  return cap.tail(window).mean();
}

LabelResult generate_labels(const Vector& cap, const BinarySeries& setpoint, double cap_f) {
  if (cap.size() != setpoint.size())
    throw DimensionMismatch("cap and setpoint lengths differ");
  const Eigen::Index n = cap.size();
  if (n == 0) throw InsufficientData("generate_labels: empty episode");

  const double lo = cap_f * 0.98;
  const double hi = cap_f * 1.02;

  // Permanent-entry scan: the last violating sample decides t_d, which
  // disregards any interval that is only temporarily inside the margin.
  Eigen::Index last_violation = -1;
  for (Eigen::Index t = n - 1; t >= 0; --t) {
    const bool inside = cap(t) >= lo && cap(t) <= hi && setpoint(t) == 1;
    if (!inside) {
      last_violation = t;
      break;
    }
  }
  const Eigen::Index t_d = last_violation + 1;
  if (t_d >= n)
    throw NoSteadyState("capacity never stays inside the steady-state margin");

  LabelResult res;
  res.t_d = static_cast<int>(t_d);
  res.y_hat.resize(n);
  for (Eigen::Index t = 0; t < n; ++t) res.y_hat(t) = t >= t_d ? 1 : -1;
  return res;
}

void derive_setpoint(Episode& ep) {
  ep.setpoint = compute_setpoint_indicator(ep.pressure, ep.ref);
}

void derive_labels(Episode& ep) {
  derive_setpoint(ep);
  ep.cap_f = compute_final_capacity(ep.cap, ep.dt);
  LabelResult labels = generate_labels(ep.cap, ep.setpoint, ep.cap_f);
  ep.y_hat = std::move(labels.y_hat);
  ep.t_d = labels.t_d;
  ep.labeled = true;
}

DatasetSplit split_dataset(std::vector<std::string> ids, const SplitRatios& ratios,
                           std::uint64_t seed) {
  if (ids.size() < 5) throw InsufficientData("split_dataset needs at least 5 episodes");
  if (!(ratios.train > 0.0) || ratios.val < 0.0 || ratios.test < 0.0 ||
      std::abs(ratios.train + ratios.val + ratios.test - 1.0) > 1e-9)
    throw ConfigError("split ratios must be non-negative and sum to 1");

  std::mt19937_64 rng(seed);
  std::shuffle(ids.begin(), ids.end(), rng);

  const auto n = static_cast<long>(ids.size());
  long n_train = std::lround(ratios.train * double(n));
  long n_val = std::lround(ratios.val * double(n));
  n_train = std::clamp(n_train, 1L, n - 2);
  n_val = std::clamp(n_val, 1L, n - n_train - 1);

  DatasetSplit split;
  split.ratios = ratios;
  split.seed = seed;
  split.train.assign(ids.begin(), ids.begin() + n_train);
  split.val.assign(ids.begin() + n_train, ids.begin() + n_train + n_val);
  split.test.assign(ids.begin() + n_train + n_val, ids.end());
  return split;
}

Vector initial_window(const Episode& episode, int n_window) {
  if (n_window < 1) throw ConfigError("initial window length must be >= 1");
  if (episode.n_e() < n_window)
    throw EpisodeTooShort("episode shorter than the initial window");
  return episode.cap.head(n_window);
}

Matrix window_matrix(const std::vector<Episode>& episodes, int n_window) {
  Matrix w(static_cast<Eigen::Index>(episodes.size()), n_window);
  for (std::size_t i = 0; i < episodes.size(); ++i)
    w.row(static_cast<Eigen::Index>(i)) = initial_window(episodes[i], n_window).transpose();
  return w;
}

// --- File I/O ----------------------------------------------------------------

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  return fields;
}

json split_to_json(const DatasetSplit& split) {
  return json{{"seed", split.seed},
              {"ratios", {split.ratios.train, split.ratios.val, split.ratios.test}},
              {"train", split.train},
              {"val", split.val},
              {"test", split.test}};
}

DatasetSplit split_from_json(const json& j) {
  DatasetSplit split;
  split.seed = j.at("seed").get<std::uint64_t>();
  const auto& r = j.at("ratios");
  split.ratios = {r.at(0).get<double>(), r.at(1).get<double>(), r.at(2).get<double>()};
  split.train = j.at("train").get<std::vector<std::string>>();
  split.val = j.at("val").get<std::vector<std::string>>();
  split.test = j.at("test").get<std::vector<std::string>>();
  return split;
}

}  // namespace

void write_episode(const fs::path& dir, const Episode& ep) {
  fs::create_directories(dir);
  const fs::path csv_path = dir / (ep.id + ".csv");
  std::ofstream csv(csv_path);
  if (!csv) throw DataError("cannot write " + csv_path.string());
  csv << "t_index,cap,shell_temp,pressure\n";
  for (int t = 0; t < ep.n_e(); ++t) {
    csv << t << ',' << format_double(ep.cap(t)) << ',' << format_double(ep.shell_temp(t))
        << ',' << format_double(ep.pressure(t)) << '\n';
  }
  if (!csv.good()) throw DataError("short write to " + csv_path.string());

  json meta{{"id", ep.id}, {"model_tag", ep.model_tag}, {"ref", ep.ref}, {"dt", ep.dt}};
  const fs::path json_path = dir / (ep.id + ".json");
  std::ofstream side(json_path);
  if (!side) throw DataError("cannot write " + json_path.string());
  side << meta.dump(1) << '\n';
}

Episode read_episode(const fs::path& csv_path, const fs::path& sidecar_path) {
  std::ifstream side(sidecar_path);
  if (!side) throw DataError("cannot read " + sidecar_path.string());
  json meta = json::parse(side, nullptr, true);

  Episode ep;
  ep.id = meta.at("id").get<std::string>();
  ep.model_tag = meta.value("model_tag", std::string{});
  ep.ref = meta.at("ref").get<double>();
  ep.dt = meta.value("dt", 10.0);

  std::ifstream csv(csv_path);
  if (!csv) throw DataError("cannot read " + csv_path.string());
  std::string line;
  if (!std::getline(csv, line) || split_csv_line(line) !=
          std::vector<std::string>{"t_index", "cap", "shell_temp", "pressure"})
    throw DataError(csv_path.string() + ": bad or missing episode CSV header");

  std::vector<double> cap, shell, pressure;
  long expected_t = 0;
  while (std::getline(csv, line)) {
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 4)
      throw DataError(csv_path.string() + ": expected 4 columns");
    if (parse_long(fields[0]) != expected_t)
      throw DataError(csv_path.string() + ": non-contiguous t_index");
    ++expected_t;
    cap.push_back(parse_double(fields[1]));
    shell.push_back(parse_double(fields[2]));
    pressure.push_back(parse_double(fields[3]));
  }
  ep.cap = Eigen::Map<const Vector>(cap.data(), static_cast<Eigen::Index>(cap.size()));
  ep.shell_temp = Eigen::Map<const Vector>(shell.data(), static_cast<Eigen::Index>(shell.size()));
  ep.pressure =
      Eigen::Map<const Vector>(pressure.data(), static_cast<Eigen::Index>(pressure.size()));
  return ep;
}

void write_manifest(const fs::path& path, const Manifest& manifest) {
  json eps = json::array();
  for (const auto& e : manifest.episodes)
    eps.push_back(json{{"id", e.id}, {"csv", e.csv}, {"sidecar", e.sidecar}});
  json j{{"version", 1}, {"episodes", eps}};
  if (manifest.has_split) j["split"] = split_to_json(manifest.split);

  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out << j.dump(1) << '\n';
  if (!out.good()) throw DataError("short write to " + path.string());
}

Manifest read_manifest(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read manifest " + path.string());
  json j = json::parse(in, nullptr, true);
  if (j.value("version", 0) != 1)
    throw DataError(path.string() + ": unsupported manifest version");

  Manifest m;
  for (const auto& e : j.at("episodes")) {
    m.episodes.push_back({e.at("id").get<std::string>(), e.at("csv").get<std::string>(),
                          e.at("sidecar").get<std::string>()});
  }
  if (j.contains("split")) {
    m.has_split = true;
    m.split = split_from_json(j.at("split"));
  }
  return m;
}

std::vector<Episode> load_episodes(const fs::path& manifest_path, const Manifest& manifest) {
  const fs::path base = manifest_path.parent_path();
  std::vector<Episode> episodes;
  episodes.reserve(manifest.episodes.size());
  for (const auto& entry : manifest.episodes) {
    Episode ep = read_episode(base / entry.csv, base / entry.sidecar);
    if (ep.id != entry.id)
      throw DataError("manifest id '" + entry.id + "' does not match sidecar id '" + ep.id + "'");
    episodes.push_back(std::move(ep));
  }
  return episodes;
}

}  // namespace steadyrc
