#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace orchid {

using Row = std::vector<double>;
using Matrix = std::vector<Row>;

enum class KernelType { Linear, Polynomial, Rbf, Sigmoid };

std::string_view to_string(KernelType k) noexcept;
KernelType parse_kernel(std::string_view name);

struct SvmHyperParams {
  KernelType kernel = KernelType::Rbf;
  double c = 30.0;
  double g = 0.009;
  double r = 0.0;
  int d = 3;

  void validate() const;
  friend bool operator==(const SvmHyperParams&, const SvmHyperParams&) = default;
};

std::string describe(const SvmHyperParams& p);

double kernel_eval(const SvmHyperParams& params, std::span<const double> x, std::span<const double> y);

/// Per-dimension min-max scaling to [0, 1]; constant dimensions map to 0.
struct FeatureScaler {
  std::vector<double> mins;
  std::vector<double> maxs;

  static FeatureScaler fit(const Matrix& rows);
  Row transform(std::span<const double> x) const;
};

// -- Binary SVM --------------------------------------------------------------

struct SmoOptions {
  double tolerance = 1e-3;
  std::size_t max_iterations = 1'000'000;
  bool record_objective = false;
};

/// Full dual solution, kept for diagnostics and tests.
struct SmoSolution {
  std::vector<double> alpha;        // one per training row, in [0, c]
  double bias = 0.0;                // decision = sum alpha_i y_i K(x_i, x) + bias
  double dual_objective = 0.0;      // sum alpha - 1/2 alpha' Q alpha
  double max_violation = 0.0;       // KKT gap m(alpha) - M(alpha) at exit
  std::size_t iterations = 0;
  std::vector<double> objective_trace;
};

SmoSolution solve_smo(const Matrix& x, std::span<const int> y, const SvmHyperParams& params,
                      const SmoOptions& options = {});

struct BinaryModel {
  Matrix support_vectors;
  std::vector<double> alpha_y;  // alpha_i * y_i
  double bias = 0.0;
  SvmHyperParams params;

  double decision(std::span<const double> x) const;
};

/// Labels are -1 / +1. Rows are expected to be scaled already.
BinaryModel train_binary(const Matrix& x, std::span<const int> y, const SvmHyperParams& params,
                         const SmoOptions& options = {});
double predict_binary(const BinaryModel& model, std::span<const double> x);

// -- One-vs-one multiclass ----------------------------------------------------

struct PairModel {
  int positive = 0;  // index into class_labels; decision > 0 votes for it
  int negative = 0;
  BinaryModel model;
};

struct TrainedModel {
  std::vector<std::string> class_labels;  // sorted; index order is the tie-break order
  std::vector<std::string> class_genera;  // optional, parallel to class_labels
  std::vector<PairModel> binary_models;
  FeatureScaler scaler;
  std::vector<int> feature_subset;  // 1-based indices into the input row
  std::size_t input_dim = 0;
  SvmHyperParams params;
};

/// Indices 1..dim.
std::vector<int> all_features(std::size_t dim);

TrainedModel train_ovo(const Matrix& rows, const std::vector<std::string>& labels,
                       const SvmHyperParams& params, const std::vector<int>& subset,
                       const SmoOptions& options = {});

struct Prediction {
  std::string label;
  std::vector<std::pair<std::string, int>> votes;  // ranked: votes desc, then winner order
};

Prediction predict_ovo(const TrainedModel& model, std::span<const double> x);

// -- Evaluation ---------------------------------------------------------------

struct CvReport {
  std::vector<std::string> class_labels;
  std::vector<double> fold_accuracies;
  double mean_accuracy = 0.0;
  std::vector<std::vector<int>> confusion;  // [true][predicted]
  std::size_t samples = 0;
  double seconds_per_image = 0.0;  // wall time; excluded from deterministic output
};

/// Stratified fold assignment: returns the fold of every row.
std::vector<int> stratified_folds(const std::vector<std::string>& labels, int k, std::uint64_t seed);

CvReport kfold_cv(const Matrix& rows, const std::vector<std::string>& labels,
                  const SvmHyperParams& params, const std::vector<int>& subset, int k = 5,
                  std::uint64_t seed = 0, const SmoOptions& options = {});

struct GridResult {
  SvmHyperParams params;
  double mean_accuracy = 0.0;
  bool converged = true;
};

std::vector<SvmHyperParams> default_grid();

std::vector<GridResult> grid_search(const Matrix& rows, const std::vector<std::string>& labels,
                                    const std::vector<SvmHyperParams>& grid,
                                    const std::vector<int>& subset, int k = 5,
                                    std::uint64_t seed = 0, const SmoOptions& options = {});

CvReport evaluate_holdout(const TrainedModel& model, const Matrix& rows,
                          const std::vector<std::string>& labels);

// -- Persistence --------------------------------------------------------------

inline constexpr int kModelFormatVersion = 1;

std::string model_to_json(const TrainedModel& model);
TrainedModel model_from_json(std::string_view text);
void save_model(const TrainedModel& model, const std::filesystem::path& path);
TrainedModel load_model(const std::filesystem::path& path);

std::string report_to_json(const CvReport& report, bool include_timing = false);

}  // namespace orchid
