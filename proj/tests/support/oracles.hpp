#pragma once

#include "orchid/classifier.hpp"
#include "orchid/imaging.hpp"

#include <array>
#include <vector>

namespace orchid::testing {

/// Percentile means recomputed by repeated extraction of the extreme value.
struct PercentileMeans {
  double r10 = 0.0;
  double r90 = 0.0;
};
PercentileMeans percentile_oracle(std::vector<double> d);

/// Clamped normalization evaluated value by value.
std::vector<double> normalized_oracle(const std::vector<double>& d, PercentileMeans pm);

/// Raw Hu invariants from raw moments in long double, converted to central
/// moments by binomial expansion.
std::array<double, 7> hu_oracle(const BinaryMask& mask);

/// Occupied boxes at grid 2^k, found by testing each box's extent.
std::size_t box_count_oracle(const std::vector<Point>& pts, int k);

/// Exact SVM dual optimum by enumerating which variables sit at 0, at c, or
/// strictly inside. Only for tiny instances (3^n faces).
struct QpOptimum {
  double objective = 0.0;
  std::vector<double> alpha;
};
QpOptimum svm_dual_oracle(const Matrix& x, const std::vector<int>& y, const SvmHyperParams& p);

/// Largest training accuracy a linear separator w.x + b can reach, by trying
/// every direction through pairs of points plus tiny perturbations.
double best_linear_accuracy(const Matrix& x, const std::vector<int>& y);

}  // namespace orchid::testing
