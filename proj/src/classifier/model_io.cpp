#include "orchid/classifier.hpp"
#include "orchid/error.hpp"

#include "json.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace orchid {
namespace {

using Json = nlohmann::ordered_json;

template <typename T>
T required(const Json& j, const char* key) {
  if (!j.contains(key)) throw Error(ErrorCode::Parse, std::string("model is missing '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("bad '") + key + "': " + e.what());
  }
}

}  // namespace

std::string model_to_json(const TrainedModel& model) {
  Json j;
  j["format_version"] = kModelFormatVersion;
  j["kernel"] = std::string(to_string(model.params.kernel));
  j["c"] = model.params.c;
  j["g"] = model.params.g;
  j["r"] = model.params.r;
  j["d"] = model.params.d;
  j["input_dim"] = model.input_dim;
  j["class_labels"] = model.class_labels;
  if (!model.class_genera.empty()) j["class_genera"] = model.class_genera;
  j["feature_subset"] = model.feature_subset;
  j["scaler"] = {{"mins", model.scaler.mins}, {"maxs", model.scaler.maxs}};
  Json binaries = Json::array();
  for (const PairModel& pm : model.binary_models) {
    Json svs = Json::array();
    for (std::size_t i = 0; i < pm.model.support_vectors.size(); ++i) {
      svs.push_back({{"alpha_y", pm.model.alpha_y[i]}, {"features", pm.model.support_vectors[i]}});
    }
    binaries.push_back({{"class_pair", {pm.positive, pm.negative}},
                        {"bias", pm.model.bias},
                        {"svs", std::move(svs)}});
  }
  j["binary_models"] = std::move(binaries);
  return j.dump(2) + "\n";
}

TrainedModel model_from_json(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::Parse, std::string("model file is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw Error(ErrorCode::Parse, "model file must hold a JSON object");
  const int version = required<int>(j, "format_version");
  if (version != kModelFormatVersion) {
    throw Error(ErrorCode::Parse, "unsupported model format_version " + std::to_string(version));
  }
  TrainedModel m;
  try {
    m.params.kernel = parse_kernel(required<std::string>(j, "kernel"));
  } catch (const Error& e) {
    throw Error(ErrorCode::Parse, e.what());
  }
  m.params.c = required<double>(j, "c");
  m.params.g = required<double>(j, "g");
  m.params.r = required<double>(j, "r");
  m.params.d = required<int>(j, "d");
  m.class_labels = required<std::vector<std::string>>(j, "class_labels");
  if (j.contains("class_genera")) m.class_genera = required<std::vector<std::string>>(j, "class_genera");
  m.feature_subset = required<std::vector<int>>(j, "feature_subset");
  if (!j.contains("scaler")) throw Error(ErrorCode::Parse, "model is missing 'scaler'");
  m.scaler.mins = required<std::vector<double>>(j["scaler"], "mins");
  m.scaler.maxs = required<std::vector<double>>(j["scaler"], "maxs");
  if (j.contains("input_dim")) {
    m.input_dim = required<std::size_t>(j, "input_dim");
  } else {
    for (int f : m.feature_subset) m.input_dim = std::max(m.input_dim, static_cast<std::size_t>(std::max(f, 0)));
  }
  if (!j.contains("binary_models") || !j["binary_models"].is_array()) {
    throw Error(ErrorCode::Parse, "model is missing 'binary_models'");
  }
  for (const Json& b : j["binary_models"]) {
    const auto pair = required<std::vector<int>>(b, "class_pair");
    if (pair.size() != 2) throw Error(ErrorCode::Parse, "class_pair must have two entries");
    PairModel pm;
    pm.positive = pair[0];
    pm.negative = pair[1];
    pm.model.bias = required<double>(b, "bias");
    pm.model.params = m.params;
    if (!b.contains("svs") || !b["svs"].is_array()) throw Error(ErrorCode::Parse, "binary model has no 'svs'");
    for (const Json& sv : b["svs"]) {
      pm.model.alpha_y.push_back(required<double>(sv, "alpha_y"));
      pm.model.support_vectors.push_back(required<std::vector<double>>(sv, "features"));
    }
    m.binary_models.push_back(std::move(pm));
  }

  // Structural consistency, so a corrupted file fails here rather than at predict time.
  const std::size_t k = m.class_labels.size();
  const std::size_t dim = m.feature_subset.size();
  if (k < 2) throw Error(ErrorCode::Parse, "model needs at least two classes");
  if (!m.class_genera.empty() && m.class_genera.size() != k) {
    throw Error(ErrorCode::Parse, "class_genera does not match class_labels");
  }
  if (m.scaler.mins.size() != dim || m.scaler.maxs.size() != dim) {
    throw Error(ErrorCode::Parse, "scaler size does not match feature_subset");
  }
  if (m.binary_models.size() != k * (k - 1) / 2) {
    throw Error(ErrorCode::Parse, "wrong number of binary models");
  }
  for (int f : m.feature_subset) {
    if (f < 1 || static_cast<std::size_t>(f) > m.input_dim) {
      throw Error(ErrorCode::Parse, "feature_subset index out of range");
    }
  }
  for (const PairModel& pm : m.binary_models) {
    if (pm.positive < 0 || pm.negative < 0 || static_cast<std::size_t>(pm.positive) >= k ||
        static_cast<std::size_t>(pm.negative) >= k) {
      throw Error(ErrorCode::Parse, "class_pair index out of range");
    }
    for (const Row& sv : pm.model.support_vectors) {
      if (sv.size() != dim) throw Error(ErrorCode::Parse, "support vector has wrong dimension");
    }
  }
  return m;
}

void save_model(const TrainedModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << model_to_json(model);
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

TrainedModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return model_from_json(buf.str());
}

std::string report_to_json(const CvReport& report, bool include_timing) {
  Json j;
  j["samples"] = report.samples;
  j["mean_accuracy"] = report.mean_accuracy;
  j["fold_accuracies"] = report.fold_accuracies;
  j["class_labels"] = report.class_labels;
  j["confusion"] = report.confusion;
  if (include_timing) j["seconds_per_image"] = report.seconds_per_image;
  return j.dump();
}

}  // namespace orchid
