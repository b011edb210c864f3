#include "commands.hpp"

#include "orchid/classifier.hpp"
#include "orchid/dataset.hpp"
#include "orchid/error.hpp"
#include "orchid/pipeline.hpp"
#include "orchid/segmentation.hpp"
#include "orchid/service.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <chrono>
#include <cstdio>
#include <iomanip>
#include <iostream>

namespace fs = std::filesystem;

namespace orchid::cli {
namespace {

using Json = nlohmann::ordered_json;

/// Thrown for bad user input that only the command layer can detect.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidMarkers:
    case ErrorCode::InvalidArgument: return kExitUsage;
    default: return kExitFailure;
  }
}

Json params_json(const SvmHyperParams& p) {
  return Json{{"kernel", to_string(p.kernel)}, {"c", p.c}, {"g", p.g}, {"r", p.r}, {"d", p.d}};
}

struct SvmFlags {
  std::string kernel = "rbf";
  double c = 30.0;
  double g = 0.009;
  double r = 0.0;
  int d = 3;

  void add(CLI::App& app) {
    app.add_option("--kernel", kernel, "linear | poly | rbf | sigmoid")->capture_default_str();
    app.add_option("--c", c, "penalty")->capture_default_str();
    app.add_option("--g", g, "kernel gamma")->capture_default_str();
    app.add_option("--r", r, "kernel coef0")->capture_default_str();
    app.add_option("--d", d, "polynomial degree")->capture_default_str();
  }

  SvmHyperParams params() const {
    SvmHyperParams p{parse_kernel(kernel), c, g, r, d};
    p.validate();
    return p;
  }
};

std::vector<int> subset_for(const std::string& group) {
  if (group.empty()) return all_features(kFeatureCount);
  return resolve_subset(group);
}

// -- segment -------------------------------------------------------------------

struct SegmentArgs {
  std::string image, flower_markers, lip_markers, out_dir;
  int cleanup = 2;
  OversegmentParams over;
};

int cmd_segment(const SegmentArgs& a, std::ostream& out, std::ostream& err) {
  const RgbImage image = load_image(a.image);
  MarkerSet flower;
  std::optional<MarkerSet> lip;
  try {
    flower = load_marker_file(a.flower_markers);
    if (!a.lip_markers.empty()) lip = load_marker_file(a.lip_markers);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Decode) throw Error(ErrorCode::InvalidMarkers, e.what());
    throw;
  }
  if (!lip) err << "warning: no lip markers given, writing flower outputs only\n";

  const SegmentationOutput seg = segment_two_stage(image, flower, lip, a.over, a.cleanup);
  fs::create_directories(a.out_dir);
  const std::string stem = (fs::path(a.out_dir) / fs::path(a.image).stem()).string();
  save_mask_png(seg.flower, stem + std::string(kFlowerMaskSuffix));
  save_png(seg.flower_image, stem + ".object.flower.png");
  Json line{{"image", a.image}, {"width", seg.image.width()}, {"height", seg.image.height()},
            {"flower_pixels", seg.flower.count()}};
  if (seg.lip) {
    save_mask_png(*seg.lip, stem + std::string(kLipMaskSuffix));
    save_png(*seg.lip_image, stem + ".object.lip.png");
    line["lip_pixels"] = seg.lip->count();
  }
  out << line.dump() << '\n';
  return kExitOk;
}

// -- extract -------------------------------------------------------------------

struct ExtractArgs {
  std::string root, role = "train", image, flower_mask, lip_mask, out;
  std::string image_id, genus = "unknown", species = "unknown";
  bool flower_only = false;
  bool strict = false;
  int cleanup = 0;
};

int cmd_extract(const ExtractArgs& a, std::ostream& out, std::ostream& err) {
  ExtractOptions opt{a.flower_only, a.cleanup};
  DatasetExtraction result;
  if (!a.root.empty()) {
    if (a.role != "train" && a.role != "holdout") throw UsageError("--role must be train or holdout");
    const DatasetIndex index = ingest(a.root);
    result = extract_dataset(index, a.role == "train" ? DatasetRole::Train : DatasetRole::Holdout, opt, a.strict);
  } else {
    if (a.image.empty() || a.flower_mask.empty()) {
      throw UsageError("give --root, or --image with --flower-mask (and --lip-mask)");
    }
    DatasetEntry e;
    e.image = a.image;
    e.image_id = a.image_id.empty() ? fs::path(a.image).stem().string() : a.image_id;
    e.genus = a.genus;
    e.species = a.species;
    e.flower_mask = fs::path(a.flower_mask);
    if (!a.lip_mask.empty()) e.lip_mask = fs::path(a.lip_mask);
    DatasetIndex index;
    index.entries.push_back(e);
    result = extract_dataset(index, DatasetRole::Train, opt, a.strict);
  }
  for (const ExtractFailure& f : result.failures) err << "skipped " << f.image_id << ": " << f.message << '\n';
  save_features(result.table, a.out);
  out << Json{{"rows", result.table.rows.size()}, {"failures", result.failures.size()}, {"out", a.out}}.dump()
      << '\n';
  err << "extracted " << result.table.rows.size() << " rows, " << result.failures.size() << " failures\n";
  return result.failures.empty() ? kExitOk : kExitFailure;
}

// -- train ---------------------------------------------------------------------

struct TrainArgs {
  std::string features, out, group;
  SvmFlags svm;
  bool grid = false;
  bool no_cv = false;
  bool timing = false;
  int k = 5;
  std::uint64_t seed = 0;
};

int cmd_train(const TrainArgs& a, std::ostream& out, std::ostream& err) {
  const FeatureTable table = load_features(a.features);
  if (table.rows.empty()) throw Error(ErrorCode::EmptyDataset, "feature table has no rows");
  const Matrix rows = table.matrix();
  const std::vector<std::string> labels = table.species();
  const std::vector<int> subset = subset_for(a.group);

  Json report;
  report["command"] = "train";
  report["features"] = subset.size();
  SvmHyperParams params;
  if (a.grid) {
    const auto results = grid_search(rows, labels, default_grid(), subset, a.k, a.seed);
    params = results.front().params;
    Json top = Json::array();
    for (std::size_t i = 0; i < results.size() && i < 10; ++i) {
      top.push_back({{"params", params_json(results[i].params)},
                     {"mean_accuracy", results[i].mean_accuracy},
                     {"converged", results[i].converged}});
    }
    report["grid_points"] = results.size();
    report["grid_top"] = top;
    err << "grid search: best " << describe(params) << " accuracy " << results.front().mean_accuracy << '\n';
  } else {
    params = a.svm.params();
  }
  report["params"] = params_json(params);
  if (!a.no_cv) {
    const CvReport cv = kfold_cv(rows, labels, params, subset, a.k, a.seed);
    report["cv"] = Json::parse(report_to_json(cv, a.timing));
    err << a.k << "-fold accuracy " << cv.mean_accuracy << '\n';
  }
  TrainedModel model = train_ovo(rows, labels, params, subset);
  model.class_genera = table.genera_for(model.class_labels);
  save_model(model, a.out);
  report["model"] = a.out;
  out << report.dump() << '\n';
  return kExitOk;
}

// -- predict -------------------------------------------------------------------

struct PredictArgs {
  std::string model, features, image, flower_mask, lip_mask;
  bool flower_only = false;
};

Json prediction_json(const TrainedModel& m, const std::string& id, const Prediction& p) {
  std::string genus;
  const auto pos = static_cast<std::size_t>(
      std::find(m.class_labels.begin(), m.class_labels.end(), p.label) - m.class_labels.begin());
  if (pos < m.class_genera.size()) genus = m.class_genera[pos];
  Json votes = Json::array();
  for (const auto& [label, n] : p.votes) votes.push_back({label, n});
  return Json{{"image_id", id}, {"species", p.label}, {"genus", genus}, {"votes", votes}};
}

int cmd_predict(const PredictArgs& a, std::ostream& out, std::ostream& err) {
  if (a.features.empty() && (a.image.empty() || a.flower_mask.empty())) {
    throw UsageError("give --features, or --image with --flower-mask and --lip-mask");
  }
  const TrainedModel model = load_model(a.model);
  if (!a.features.empty()) {
    const FeatureTable table = load_features(a.features);
    std::size_t correct = 0;
    for (const FeatureRow& r : table.rows) {
      const Prediction p = predict_ovo(model, r.values);
      if (p.label == r.species) ++correct;
      out << prediction_json(model, r.image_id, p).dump() << '\n';
    }
    const double acc = table.rows.empty() ? 0.0 : static_cast<double>(correct) / table.rows.size();
    out << Json{{"samples", table.rows.size()}, {"correct", correct}, {"accuracy", acc}}.dump() << '\n';
    err << "accuracy " << correct << "/" << table.rows.size() << '\n';
    return kExitOk;
  }
  std::optional<BinaryMask> lip;
  if (!a.lip_mask.empty()) lip = load_mask(a.lip_mask);
  const Extraction ex =
      extract_features(load_image(a.image), load_mask(a.flower_mask), lip, {a.flower_only, 0});
  const Prediction p = predict_ovo(model, ex.vector.values());
  out << prediction_json(model, fs::path(a.image).stem().string(), p).dump() << '\n';
  return kExitOk;
}

// -- evaluate ------------------------------------------------------------------

struct EvaluateArgs {
  std::string features;
  std::vector<std::string> groups;
  SvmFlags svm;
  int k = 5;
  std::uint64_t seed = 0;
  bool timing = false;
};

int cmd_evaluate(const EvaluateArgs& a, std::ostream& out, std::ostream& err) {
  const FeatureTable table = load_features(a.features);
  if (table.rows.empty()) throw Error(ErrorCode::EmptyDataset, "feature table has no rows");
  const SvmHyperParams params = a.svm.params();

  std::vector<std::string> names = a.groups;
  if (names.empty()) {
    names = {"All", "Group1", "Group2", "Group3", "Group4", "Group5", "Group6"};
  }
  for (const char* always : {"FlowerOnly", "LipOnly", "All"}) {
    if (std::find(names.begin(), names.end(), always) == names.end()) names.push_back(always);
  }
  // Resolve everything up front so a typo fails before any training.
  std::vector<std::vector<int>> subsets;
  for (const std::string& n : names) subsets.push_back(resolve_subset(n));

  struct RowResult {
    std::string group;
    std::size_t features;
    double accuracy;
    double seconds;
  };
  std::vector<RowResult> rows;
  const Matrix x = table.matrix();
  const auto labels = table.species();
  for (std::size_t i = 0; i < names.size(); ++i) {
    const CvReport r = kfold_cv(x, labels, params, subsets[i], a.k, a.seed);
    rows.push_back({names[i], subsets[i].size(), r.mean_accuracy, r.seconds_per_image});
  }
  std::stable_sort(rows.begin(), rows.end(),
                   [](const RowResult& l, const RowResult& r) { return l.accuracy > r.accuracy; });

  err << std::left << std::setw(6) << "rank" << std::setw(12) << "group" << std::setw(10) << "features"
      << "accuracy\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    Json line{{"rank", i + 1},
              {"group", rows[i].group},
              {"features", rows[i].features},
              {"mean_accuracy", rows[i].accuracy}};
    if (a.timing) line["seconds_per_image"] = rows[i].seconds;
    out << line.dump() << '\n';
    err << std::left << std::setw(6) << i + 1 << std::setw(12) << rows[i].group << std::setw(10)
        << rows[i].features << std::fixed << std::setprecision(4) << rows[i].accuracy << '\n';
  }
  return kExitOk;
}

// -- synth / serve -------------------------------------------------------------

int cmd_synth(const SyntheticSpec& spec, const std::string& out_dir, std::ostream& out, std::ostream& err) {
  const SyntheticSummary s = generate_synthetic_corpus(spec, out_dir);
  out << Json{{"out", out_dir}, {"images", s.images}, {"masks", s.masks}, {"seed", spec.seed}}.dump() << '\n';
  err << "wrote " << s.images << " images to " << out_dir << '\n';
  return kExitOk;
}

int cmd_serve(const ServiceConfig& config, std::ostream& out, std::ostream& err) {
  Service service(config);
  const int port = service.bind();
  out << Json{{"host", config.host}, {"port", port}, {"models", service.model_names()}}.dump() << std::endl;
  err << "listening on " << config.host << ":" << port << '\n';
  service.run();
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Orchid flower identification toolkit"};
  app.require_subcommand(1);

  SegmentArgs seg;
  auto* s = app.add_subcommand("segment", "two-stage marker-driven segmentation");
  s->add_option("--image", seg.image)->required();
  s->add_option("--flower-markers", seg.flower_markers)->required();
  s->add_option("--lip-markers", seg.lip_markers);
  s->add_option("--out-dir", seg.out_dir)->required();
  s->add_option("--cleanup-radius", seg.cleanup)->capture_default_str();
  s->add_option("--color-radius", seg.over.color_radius)->capture_default_str();
  s->add_option("--spatial-radius", seg.over.spatial_radius)->capture_default_str();
  s->add_option("--min-region", seg.over.min_region)->capture_default_str();

  ExtractArgs ex;
  auto* e = app.add_subcommand("extract", "write the 111-feature CSV");
  e->add_option("--root", ex.root, "dataset root");
  e->add_option("--role", ex.role, "train | holdout")->capture_default_str();
  e->add_option("--image", ex.image);
  e->add_option("--flower-mask", ex.flower_mask);
  e->add_option("--lip-mask", ex.lip_mask);
  e->add_option("--image-id", ex.image_id);
  e->add_option("--genus", ex.genus);
  e->add_option("--species", ex.species);
  e->add_option("--out", ex.out)->required();
  e->add_flag("--flower-only", ex.flower_only, "leave lip slots zero");
  e->add_flag("--strict", ex.strict, "abort on the first failing image");
  e->add_option("--cleanup-radius", ex.cleanup)->capture_default_str();

  TrainArgs tr;
  auto* t = app.add_subcommand("train", "train a one-vs-one SVM model");
  t->add_option("--features", tr.features)->required();
  t->add_option("--out", tr.out)->required();
  t->add_option("--group", tr.group, "group name or index list such as 1-10,93");
  tr.svm.add(*t);
  t->add_flag("--grid", tr.grid, "grid search over the default parameter grid");
  t->add_flag("--no-cv", tr.no_cv, "skip the cross-validation report");
  t->add_flag("--timing", tr.timing, "include wall time in the report");
  t->add_option("--k", tr.k)->capture_default_str();
  t->add_option("--seed", tr.seed)->capture_default_str();

  PredictArgs pr;
  auto* p = app.add_subcommand("predict", "classify feature rows or one segmented image");
  p->add_option("--model", pr.model)->required();
  p->add_option("--features", pr.features);
  p->add_option("--image", pr.image);
  p->add_option("--flower-mask", pr.flower_mask);
  p->add_option("--lip-mask", pr.lip_mask);
  p->add_flag("--flower-only", pr.flower_only);

  EvaluateArgs ev;
  auto* v = app.add_subcommand("evaluate", "cross-validated accuracy per feature group");
  v->add_option("--features", ev.features)->required();
  v->add_option("--ablate", ev.groups, "groups to compare");
  ev.svm.add(*v);
  v->add_option("--k", ev.k)->capture_default_str();
  v->add_option("--seed", ev.seed)->capture_default_str();
  v->add_flag("--timing", ev.timing, "include per-image prediction time");

  SyntheticSpec spec;
  std::string synth_out;
  auto* y = app.add_subcommand("synth", "render the synthetic flower corpus");
  y->add_option("--out", synth_out)->required();
  y->add_option("--classes", spec.n_classes)->capture_default_str();
  y->add_option("--per-class", spec.per_class)->capture_default_str();
  y->add_option("--holdout", spec.holdout_per_class)->capture_default_str();
  y->add_option("--seed", spec.seed)->capture_default_str();
  y->add_option("--width", spec.width)->capture_default_str();
  y->add_option("--height", spec.height)->capture_default_str();
  y->add_flag("--markers", spec.markers, "also write scribble marker images");

  ServiceConfig cfg;
  std::string models_dir, static_dir;
  auto* w = app.add_subcommand("serve", "run the HTTP service");
  w->add_option("--host", cfg.host)->capture_default_str();
  w->add_option("--port", cfg.port)->capture_default_str();
  w->add_option("--models-dir", models_dir);
  w->add_option("--static-dir", static_dir);
  w->add_option("--session-capacity", cfg.session_capacity)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& pe) {
    const int code = app.exit(pe, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*s) return cmd_segment(seg, out, err);
    if (*e) return cmd_extract(ex, out, err);
    if (*t) return cmd_train(tr, out, err);
    if (*p) return cmd_predict(pr, out, err);
    if (*v) return cmd_evaluate(ev, out, err);
    if (*y) return cmd_synth(spec, synth_out, out, err);
    if (!models_dir.empty()) cfg.models_dir = models_dir;
    if (!static_dir.empty()) cfg.static_dir = static_dir;
    return cmd_serve(cfg, out, err);
  } catch (const UsageError& ue) {
    err << "error: " << ue.what() << '\n';
    return kExitUsage;
  } catch (const Error& oe) {
    err << "error: " << oe.what() << '\n';
    return exit_code_for(oe.code());
  } catch (const std::exception& ex2) {
    err << "error: " << ex2.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace orchid::cli
