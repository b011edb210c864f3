#include "orchid/classifier.hpp"
#include "orchid/error.hpp"
#include "orchid/random.hpp"

#include <algorithm>
#include <chrono>
#include <map>

namespace orchid {
namespace {

std::vector<std::string> sorted_classes(const std::vector<std::string>& labels) {
  std::vector<std::string> classes = labels;
  std::sort(classes.begin(), classes.end());
  classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
  return classes;
}

int class_index(const std::vector<std::string>& classes, const std::string& label) {
  auto it = std::lower_bound(classes.begin(), classes.end(), label);
  if (it == classes.end() || *it != label) return -1;
  return static_cast<int>(it - classes.begin());
}

}  // namespace

std::vector<int> stratified_folds(const std::vector<std::string>& labels, int k, std::uint64_t seed) {
  const std::size_t n = labels.size();
  if (k < 2) throw Error(ErrorCode::InvalidArgument, "k must be at least 2");
  if (static_cast<std::size_t>(k) > n) {
    throw Error(ErrorCode::TooFewSamplesPerClass, "k exceeds the number of rows");
  }
  const auto classes = sorted_classes(labels);
  std::map<std::string, std::vector<std::size_t>> members;
  for (std::size_t i = 0; i < n; ++i) members[labels[i]].push_back(i);

  const bool leave_one_out = static_cast<std::size_t>(k) == n;
  for (const auto& [label, idx] : members) {
    const std::size_t needed = leave_one_out ? 2 : static_cast<std::size_t>(k);
    if (idx.size() < needed) {
      throw Error(ErrorCode::TooFewSamplesPerClass,
                  "class '" + label + "' has " + std::to_string(idx.size()) + " rows, need " +
                      std::to_string(needed));
    }
  }

  std::vector<int> fold(n, 0);
  if (leave_one_out) {
    for (std::size_t i = 0; i < n; ++i) fold[i] = static_cast<int>(i);
    return fold;
  }
  // Shuffle within each class, then deal round-robin with a counter that runs
  // across classes so fold totals stay balanced too.
  Rng rng(seed);
  std::size_t counter = 0;
  for (const std::string& label : classes) {
    std::vector<std::size_t> idx = members[label];
    rng.shuffle(idx);
    for (std::size_t i : idx) fold[i] = static_cast<int>(counter++ % static_cast<std::size_t>(k));
  }
  return fold;
}

CvReport kfold_cv(const Matrix& rows, const std::vector<std::string>& labels,
                  const SvmHyperParams& params, const std::vector<int>& subset, int k,
                  std::uint64_t seed, const SmoOptions& options) {
  if (rows.size() != labels.size()) throw Error(ErrorCode::DimensionMismatch, "row and label counts differ");
  const std::vector<int> fold = stratified_folds(labels, k, seed);
  CvReport report;
  report.class_labels = sorted_classes(labels);
  const std::size_t nc = report.class_labels.size();
  report.confusion.assign(nc, std::vector<int>(nc, 0));
  report.samples = rows.size();

  double predict_seconds = 0.0;
  for (int f = 0; f < k; ++f) {
    Matrix train_x, test_x;
    std::vector<std::string> train_y, test_y;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (fold[i] == f) {
        test_x.push_back(rows[i]);
        test_y.push_back(labels[i]);
      } else {
        train_x.push_back(rows[i]);
        train_y.push_back(labels[i]);
      }
    }
    const TrainedModel model = train_ovo(train_x, train_y, params, subset, options);
    std::size_t correct = 0;
    const auto start = std::chrono::steady_clock::now();
    for (std::size_t i = 0; i < test_x.size(); ++i) {
      const Prediction p = predict_ovo(model, test_x[i]);
      if (p.label == test_y[i]) ++correct;
      const int t = class_index(report.class_labels, test_y[i]);
      const int q = class_index(report.class_labels, p.label);
      ++report.confusion[static_cast<std::size_t>(t)][static_cast<std::size_t>(q)];
    }
    predict_seconds += std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report.fold_accuracies.push_back(test_x.empty() ? 0.0
                                                    : static_cast<double>(correct) / test_x.size());
  }
  double sum = 0.0;
  for (double a : report.fold_accuracies) sum += a;
  report.mean_accuracy = sum / static_cast<double>(report.fold_accuracies.size());
  report.seconds_per_image = predict_seconds / static_cast<double>(rows.size());
  return report;
}

std::vector<SvmHyperParams> default_grid() {
  const double cs[] = {1, 10, 30, 100, 1000, 1e4, 1e5};
  const double gs[] = {0.001, 0.009, 0.03, 0.125, 0.5, 2, 8, 32};
  const double rs[] = {0, 1, 10};
  const int ds[] = {3, 4, 5};
  std::vector<SvmHyperParams> grid;
  for (double c : cs) grid.push_back({KernelType::Linear, c, 0.0, 0.0, 3});
  for (double c : cs)
    for (double g : gs)
      for (double r : rs)
        for (int d : ds) grid.push_back({KernelType::Polynomial, c, g, r, d});
  for (double c : cs)
    for (double g : gs) grid.push_back({KernelType::Rbf, c, g, 0.0, 3});
  for (double c : cs)
    for (double g : gs)
      for (double r : rs) grid.push_back({KernelType::Sigmoid, c, g, r, 3});
  return grid;
}

std::vector<GridResult> grid_search(const Matrix& rows, const std::vector<std::string>& labels,
                                    const std::vector<SvmHyperParams>& grid,
                                    const std::vector<int>& subset, int k, std::uint64_t seed,
                                    const SmoOptions& options) {
  if (grid.empty()) throw Error(ErrorCode::InvalidArgument, "parameter grid is empty");
  std::vector<GridResult> results;
  results.reserve(grid.size());
  for (const SvmHyperParams& p : grid) {
    GridResult r{p, 0.0, true};
    try {
      r.mean_accuracy = kfold_cv(rows, labels, p, subset, k, seed, options).mean_accuracy;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NonConvergence) throw;
      r.converged = false;
    }
    results.push_back(r);
  }
  std::stable_sort(results.begin(), results.end(), [](const GridResult& a, const GridResult& b) {
    if (a.mean_accuracy != b.mean_accuracy) return a.mean_accuracy > b.mean_accuracy;
    if (a.params.c != b.params.c) return a.params.c < b.params.c;
    return a.params.g < b.params.g;
  });
  return results;
}

CvReport evaluate_holdout(const TrainedModel& model, const Matrix& rows,
                          const std::vector<std::string>& labels) {
  if (rows.size() != labels.size()) throw Error(ErrorCode::DimensionMismatch, "row and label counts differ");
  CvReport report;
  report.class_labels = model.class_labels;
  const std::size_t nc = model.class_labels.size();
  report.confusion.assign(nc, std::vector<int>(nc, 0));
  report.samples = rows.size();
  std::size_t correct = 0;
  const auto start = std::chrono::steady_clock::now();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const Prediction p = predict_ovo(model, rows[i]);
    if (p.label == labels[i]) ++correct;
    const int t = class_index(model.class_labels, labels[i]);
    if (t < 0) {
      throw Error(ErrorCode::InvalidArgument, "holdout label '" + labels[i] + "' is not a model class");
    }
    ++report.confusion[static_cast<std::size_t>(t)]
                      [static_cast<std::size_t>(class_index(model.class_labels, p.label))];
  }
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const double acc = rows.empty() ? 0.0 : static_cast<double>(correct) / rows.size();
  report.fold_accuracies = {acc};
  report.mean_accuracy = acc;
  report.seconds_per_image = rows.empty() ? 0.0 : elapsed / rows.size();
  return report;
}

}  // namespace orchid
