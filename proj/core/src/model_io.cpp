#include "steadyrc/model_io.hpp"

#include <fstream>

#include <json.hpp>

namespace steadyrc {

using nlohmann::json;

namespace {

constexpr const char* kFormat = "steadyrc-model";
constexpr int kVersion = 1;

json matrix_to_json(const Matrix& m) {
  json values = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) values.push_back(m(r, c));
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"values", values}};
}

Matrix matrix_from_json(const json& j) {
  const Eigen::Index rows = j.at("rows").get<Eigen::Index>();
  const Eigen::Index cols = j.at("cols").get<Eigen::Index>();
  const auto& values = j.at("values");
  if (static_cast<Eigen::Index>(values.size()) != rows * cols)
    throw DataError("model file: matrix size mismatch");
  Matrix m(rows, cols);
  Eigen::Index i = 0;
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = values.at(i++).get<double>();
  return m;
}

json vector_to_json(const Vector& v) {
  json values = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) values.push_back(v(i));
  return values;
}

Vector vector_from_json(const json& j) {
  Vector v(j.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = j.at(i).get<double>();
  return v;
}

}  // namespace

void save_model(const std::filesystem::path& path, const TrainedModel& model) {
  json j;
  j["format"] = kFormat;
  j["format_version"] = kVersion;
  j["config"] = json{{"n_r", model.config.n_r},
                     {"n_i", model.config.n_i},
                     {"alpha", model.config.alpha},
                     {"rho_target", model.config.rho_target},
                     {"v_inp", model.config.v_inp},
                     {"v_bias", model.config.v_bias},
                     {"weight_dist",
                      model.config.weight_dist == WeightDist::Gaussian ? "gaussian" : "discrete"},
                     {"seed", model.config.seed}};
  j["w_in"] = matrix_to_json(model.weights.w_in);
  j["w_res"] = matrix_to_json(model.weights.w_res);
  j["w_bias"] = vector_to_json(model.weights.w_bias);
  j["w_out"] = vector_to_json(model.w_out);
  j["lambda"] = model.lambda;
  j["norm_stats"] = json{{"cap_max", model.norm_stats.cap_max},
                         {"shell_max", model.norm_stats.shell_max},
                         {"pressure_max", model.norm_stats.pressure_max}};
  j["use_setpoint"] = model.use_setpoint;
  if (model.centroids) {
    j["centroids"] =
        json{{"centers", matrix_to_json(model.centroids->centers)},
             {"inertia", model.centroids->inertia}};
  }
  j["n_init_window"] = model.n_init_window;
  j["threshold"] = model.threshold;

  std::ofstream out(path);
  if (!out) throw DataError("cannot write model to " + path.string());
  out << j.dump(1) << '\n';
  if (!out.good()) throw DataError("short write to " + path.string());
}

TrainedModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read model " + path.string());
  json j = json::parse(in, nullptr, true);
  if (j.value("format", std::string{}) != kFormat)
    throw DataError(path.string() + ": not a steadyrc model file");
  if (j.value("format_version", 0) != kVersion)
    throw DataError(path.string() + ": unsupported model version");

  TrainedModel model;
  const json& c = j.at("config");
  model.config.n_r = c.at("n_r").get<int>();
  model.config.n_i = c.at("n_i").get<int>();
  model.config.alpha = c.at("alpha").get<double>();
  model.config.rho_target = c.at("rho_target").get<double>();
  model.config.v_inp = c.at("v_inp").get<double>();
  model.config.v_bias = c.at("v_bias").get<double>();
  model.config.weight_dist = c.at("weight_dist").get<std::string>() == "discrete"
                                 ? WeightDist::Discrete
                                 : WeightDist::Gaussian;
  model.config.seed = c.at("seed").get<std::uint64_t>();

  model.weights.w_in = matrix_from_json(j.at("w_in"));
  model.weights.w_res = matrix_from_json(j.at("w_res"));
  model.weights.w_bias = vector_from_json(j.at("w_bias"));
  model.w_out = vector_from_json(j.at("w_out"));
  model.lambda = j.at("lambda").get<double>();
  const json& s = j.at("norm_stats");
  model.norm_stats = {s.at("cap_max").get<double>(), s.at("shell_max").get<double>(),
                      s.at("pressure_max").get<double>()};
  model.use_setpoint = j.at("use_setpoint").get<bool>();
  if (j.contains("centroids")) {
    Centroids cent;
    cent.centers = matrix_from_json(j.at("centroids").at("centers"));
    cent.inertia = j.at("centroids").at("inertia").get<double>();
    model.centroids = std::move(cent);
  }
  model.n_init_window = j.at("n_init_window").get<int>();
  model.threshold = j.at("threshold").get<double>();
  return model;
}

}  // namespace steadyrc
