#include "orchid/classifier.hpp"
#include "orchid/error.hpp"

#include <cmath>
#include <limits>

namespace orchid {
namespace {

constexpr double kTau = 1e-12;

double objective_of(const std::vector<double>& alpha, const std::vector<double>& grad) {
  // f = 1/2 a'Qa - e'a = 1/2 sum a_i (G_i - 1); the dual objective is -f.
  double f = 0.0;
  for (std::size_t i = 0; i < alpha.size(); ++i) f += alpha[i] * (grad[i] - 1.0);
  return -0.5 * f;
}

}  // namespace

SmoSolution solve_smo(const Matrix& x, std::span<const int> y, const SvmHyperParams& params,
                      const SmoOptions& options) {
  params.validate();
  const std::size_t n = x.size();
  if (n != y.size()) throw Error(ErrorCode::DimensionMismatch, "row and label counts differ");
  bool has_pos = false, has_neg = false;
  for (std::size_t i = 0; i < n; ++i) {
    if (y[i] == 1) {
      has_pos = true;
    } else if (y[i] == -1) {
      has_neg = true;
    } else {
      throw Error(ErrorCode::InvalidArgument, "binary labels must be -1 or +1");
    }
    for (double v : x[i]) {
      if (!std::isfinite(v)) throw Error(ErrorCode::NonFinite, "training row contains a non-finite value");
    }
    if (x[i].size() != x[0].size()) throw Error(ErrorCode::DimensionMismatch, "ragged training rows");
  }
  if (!has_pos || !has_neg) throw Error(ErrorCode::SingleClass, "both classes must be present");

  // Q_ij = y_i y_j K(x_i, x_j), held densely: per-pair problems are small.
  std::vector<double> q(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const double k = kernel_eval(params, x[i], x[j]) * y[i] * y[j];
      q[i * n + j] = k;
      q[j * n + i] = k;
    }
  }

  const double c = params.c;
  SmoSolution sol;
  sol.alpha.assign(n, 0.0);
  std::vector<double>& alpha = sol.alpha;
  std::vector<double> grad(n, -1.0);
  auto in_up = [&](std::size_t t) { return y[t] == 1 ? alpha[t] < c : alpha[t] > 0.0; };
  auto in_low = [&](std::size_t t) { return y[t] == 1 ? alpha[t] > 0.0 : alpha[t] < c; };

  if (options.record_objective) sol.objective_trace.push_back(0.0);
  while (true) {
    // Maximal violating pair.
    double g_max = -std::numeric_limits<double>::infinity();
    double g_min = std::numeric_limits<double>::infinity();
    std::size_t i = n, j = n;
    for (std::size_t t = 0; t < n; ++t) {
      const double v = -y[t] * grad[t];
      if (in_up(t) && v > g_max) {
        g_max = v;
        i = t;
      }
      if (in_low(t) && v < g_min) {
        g_min = v;
        j = t;
      }
    }
    sol.max_violation = (i == n || j == n) ? 0.0 : g_max - g_min;
    if (i == n || j == n || sol.max_violation < options.tolerance) break;
    if (sol.iterations >= options.max_iterations) {
      throw Error(ErrorCode::NonConvergence,
                  "SMO did not converge within " + std::to_string(options.max_iterations) +
                      " iterations (violation " + std::to_string(sol.max_violation) + ")");
    }
    ++sol.iterations;

    const double* qi = &q[i * n];
    const double* qj = &q[j * n];
    const double old_i = alpha[i], old_j = alpha[j];
    if (y[i] != y[j]) {
      double quad = qi[i] + qj[j] + 2.0 * qi[j];
      if (quad <= 0.0) quad = kTau;
      const double delta = (-grad[i] - grad[j]) / quad;
      const double diff = alpha[i] - alpha[j];
      alpha[i] += delta;
      alpha[j] += delta;
      if (diff > 0.0) {
        if (alpha[j] < 0.0) {
          alpha[j] = 0.0;
          alpha[i] = diff;
        }
      } else if (alpha[i] < 0.0) {
        alpha[i] = 0.0;
        alpha[j] = -diff;
      }
      if (diff > 0.0) {
        if (alpha[i] > c) {
          alpha[i] = c;
          alpha[j] = c - diff;
        }
      } else if (alpha[j] > c) {
        alpha[j] = c;
        alpha[i] = c + diff;
      }
    } else {
      double quad = qi[i] + qj[j] - 2.0 * qi[j];
      if (quad <= 0.0) quad = kTau;
      const double delta = (grad[i] - grad[j]) / quad;
      const double sum = alpha[i] + alpha[j];
      alpha[i] -= delta;
      alpha[j] += delta;
      if (sum > c) {
        if (alpha[i] > c) {
          alpha[i] = c;
          alpha[j] = sum - c;
        }
      } else if (alpha[j] < 0.0) {
        alpha[j] = 0.0;
        alpha[i] = sum;
      }
      if (sum > c) {
        if (alpha[j] > c) {
          alpha[j] = c;
          alpha[i] = sum - c;
        }
      } else if (alpha[i] < 0.0) {
        alpha[i] = 0.0;
        alpha[j] = sum;
      }
    }
    const double di = alpha[i] - old_i, dj = alpha[j] - old_j;
    for (std::size_t t = 0; t < n; ++t) grad[t] += qi[t] * di + qj[t] * dj;
    if (options.record_objective) sol.objective_trace.push_back(objective_of(alpha, grad));
  }

  // rho from free vectors, or the midpoint of the feasible interval.
  double ub = std::numeric_limits<double>::infinity();
  double lb = -std::numeric_limits<double>::infinity();
  double free_sum = 0.0;
  std::size_t free_count = 0;
  for (std::size_t t = 0; t < n; ++t) {
    const double yg = y[t] * grad[t];
    if (alpha[t] >= c) {
      if (y[t] == -1) ub = std::min(ub, yg); else lb = std::max(lb, yg);
    } else if (alpha[t] <= 0.0) {
      if (y[t] == 1) ub = std::min(ub, yg); else lb = std::max(lb, yg);
    } else {
      free_sum += yg;
      ++free_count;
    }
  }
  const double rho = free_count > 0 ? free_sum / static_cast<double>(free_count) : (ub + lb) / 2.0;
  sol.bias = -rho;
  sol.dual_objective = objective_of(alpha, grad);
  return sol;
}

BinaryModel train_binary(const Matrix& x, std::span<const int> y, const SvmHyperParams& params,
                         const SmoOptions& options) {
  const SmoSolution sol = solve_smo(x, y, params, options);
  BinaryModel model;
  model.params = params;
  model.bias = sol.bias;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (sol.alpha[i] > 0.0) {
      model.support_vectors.push_back(x[i]);
      model.alpha_y.push_back(sol.alpha[i] * y[i]);
    }
  }
  return model;
}

double BinaryModel::decision(std::span<const double> x) const {
  double sum = bias;
  for (std::size_t i = 0; i < support_vectors.size(); ++i) {
    sum += alpha_y[i] * kernel_eval(params, support_vectors[i], x);
  }
  return sum;
}

double predict_binary(const BinaryModel& model, std::span<const double> x) {
  if (!model.support_vectors.empty() && model.support_vectors.front().size() != x.size()) {
    throw Error(ErrorCode::DimensionMismatch, "query dimension does not match the model");
  }
  return model.decision(x);
}

}  // namespace orchid
