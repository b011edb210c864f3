#include "orchid/classifier.hpp"
#include "orchid/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace orchid {
namespace {

Row project(std::span<const double> x, const std::vector<int>& subset) {
  Row out;
  out.reserve(subset.size());
  for (int f : subset) out.push_back(x[static_cast<std::size_t>(f - 1)]);
  return out;
}

void check_subset(const std::vector<int>& subset, std::size_t dim) {
  if (subset.empty()) throw Error(ErrorCode::InvalidArgument, "feature subset is empty");
  std::set<int> seen;
  for (int f : subset) {
    if (f < 1 || static_cast<std::size_t>(f) > dim) {
      throw Error(ErrorCode::InvalidArgument, "feature index " + std::to_string(f) + " out of range");
    }
    if (!seen.insert(f).second) {
      throw Error(ErrorCode::InvalidArgument, "duplicate feature index " + std::to_string(f));
    }
  }
}

}  // namespace

std::vector<int> all_features(std::size_t dim) {
  std::vector<int> out(dim);
  std::iota(out.begin(), out.end(), 1);
  return out;
}

TrainedModel train_ovo(const Matrix& rows, const std::vector<std::string>& labels,
                       const SvmHyperParams& params, const std::vector<int>& subset,
                       const SmoOptions& options) {
  params.validate();
  if (rows.empty()) throw Error(ErrorCode::InsufficientClasses, "no training rows");
  if (rows.size() != labels.size()) {
    throw Error(ErrorCode::DimensionMismatch, "row and label counts differ");
  }
  const std::size_t dim = rows.front().size();
  for (const Row& r : rows) {
    if (r.size() != dim) throw Error(ErrorCode::DimensionMismatch, "ragged feature rows");
  }
  check_subset(subset, dim);

  TrainedModel model;
  model.params = params;
  model.feature_subset = subset;
  model.input_dim = dim;
  model.class_labels = labels;
  std::sort(model.class_labels.begin(), model.class_labels.end());
  model.class_labels.erase(std::unique(model.class_labels.begin(), model.class_labels.end()),
                           model.class_labels.end());
  if (model.class_labels.size() < 2) {
    throw Error(ErrorCode::InsufficientClasses, "need at least two classes");
  }

  Matrix projected;
  projected.reserve(rows.size());
  for (const Row& r : rows) projected.push_back(project(r, subset));
  model.scaler = FeatureScaler::fit(projected);
  Matrix scaled;
  scaled.reserve(rows.size());
  for (const Row& r : projected) scaled.push_back(model.scaler.transform(r));

  std::vector<int> class_of(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    class_of[i] = static_cast<int>(
        std::lower_bound(model.class_labels.begin(), model.class_labels.end(), labels[i]) -
        model.class_labels.begin());
  }

  const int k = static_cast<int>(model.class_labels.size());
  for (int a = 0; a < k; ++a) {
    for (int b = a + 1; b < k; ++b) {
      Matrix x;
      std::vector<int> y;
      for (std::size_t i = 0; i < rows.size(); ++i) {
        if (class_of[i] == a || class_of[i] == b) {
          x.push_back(scaled[i]);
          y.push_back(class_of[i] == a ? 1 : -1);
        }
      }
      model.binary_models.push_back({a, b, train_binary(x, y, params, options)});
    }
  }
  return model;
}

Prediction predict_ovo(const TrainedModel& model, std::span<const double> x) {
  if (x.size() != model.input_dim) {
    throw Error(ErrorCode::DimensionMismatch, "query has " + std::to_string(x.size()) +
                                                  " features, model expects " +
                                                  std::to_string(model.input_dim));
  }
  const Row scaled = model.scaler.transform(project(x, model.feature_subset));
  const std::size_t k = model.class_labels.size();
  std::vector<int> votes(k, 0);
  std::vector<double> margin(k, 0.0);
  for (const PairModel& pm : model.binary_models) {
    const double dec = pm.model.decision(scaled);
    const int winner = dec > 0.0 ? pm.positive : pm.negative;
    ++votes[static_cast<std::size_t>(winner)];
    margin[static_cast<std::size_t>(winner)] += std::abs(dec);
  }
  // Most votes; ties go to the larger summed winning margin, then the lower class index.
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (votes[a] != votes[b]) return votes[a] > votes[b];
    return margin[a] > margin[b];
  });
  Prediction p;
  p.label = model.class_labels[order.front()];
  for (std::size_t idx : order) p.votes.emplace_back(model.class_labels[idx], votes[idx]);
  return p;
}

}  // namespace orchid
