#include "oracles.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace orchid::testing {

PercentileMeans percentile_oracle(std::vector<double> d) {
  const std::size_t tail = d.size() / 10 + (d.size() % 10 != 0 ? 1 : 0);
  std::multiset<double> pool(d.begin(), d.end());
  double lo = 0, hi = 0;
  auto low_pool = pool;
  for (std::size_t i = 0; i < tail; ++i) {
    lo += *low_pool.begin();
    low_pool.erase(low_pool.begin());
  }
  for (std::size_t i = 0; i < tail; ++i) {
    auto last = std::prev(pool.end());
    hi += *last;
    pool.erase(last);
  }
  return {lo / static_cast<double>(tail), hi / static_cast<double>(tail)};
}

std::vector<double> normalized_oracle(const std::vector<double>& d, PercentileMeans pm) {
  std::vector<double> out;
  for (double v : d) {
    if (v >= pm.r90) out.push_back(1.0);
    else if (v <= pm.r10) out.push_back(0.0);
    else out.push_back((v - pm.r10) / (pm.r90 - pm.r10));
  }
  return out;
}

std::array<double, 7> hu_oracle(const BinaryMask& mask) {
  long double m[4][4] = {};
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      if (!mask.at(x, y)) continue;
      long double px = 1;
      for (int p = 0; p < 4; ++p) {
        long double py = 1;
        for (int q = 0; q + p < 4; ++q) {
          m[p][q] += px * py;
          py *= y;
        }
        px *= x;
      }
    }
  }
  const long double xb = m[1][0] / m[0][0], yb = m[0][1] / m[0][0];
  const long double u20 = m[2][0] - xb * m[1][0];
  const long double u02 = m[0][2] - yb * m[0][1];
  const long double u11 = m[1][1] - xb * m[0][1];
  const long double u30 = m[3][0] - 3 * xb * m[2][0] + 2 * xb * xb * m[1][0];
  const long double u03 = m[0][3] - 3 * yb * m[0][2] + 2 * yb * yb * m[0][1];
  const long double u21 = m[2][1] - 2 * xb * m[1][1] - yb * m[2][0] + 2 * xb * xb * m[0][1];
  const long double u12 = m[1][2] - 2 * yb * m[1][1] - xb * m[0][2] + 2 * yb * yb * m[1][0];
  const long double a = m[0][0];
  auto eta = [&](long double u, int order) { return u / std::pow(a, 1.0L + order / 2.0L); };
  const long double n20 = eta(u20, 2), n02 = eta(u02, 2), n11 = eta(u11, 2);
  const long double n30 = eta(u30, 3), n03 = eta(u03, 3), n21 = eta(u21, 3), n12 = eta(u12, 3);
  std::array<double, 7> h{};
  h[0] = static_cast<double>(n20 + n02);
  h[1] = static_cast<double>((n20 - n02) * (n20 - n02) + 4 * n11 * n11);
  h[2] = static_cast<double>((n30 - 3 * n12) * (n30 - 3 * n12) + (3 * n21 - n03) * (3 * n21 - n03));
  h[3] = static_cast<double>((n30 + n12) * (n30 + n12) + (n21 + n03) * (n21 + n03));
  const long double s1 = n30 + n12, s2 = n21 + n03;
  h[4] = static_cast<double>((n30 - 3 * n12) * s1 * (s1 * s1 - 3 * s2 * s2) +
                             (3 * n21 - n03) * s2 * (3 * s1 * s1 - s2 * s2));
  h[5] = static_cast<double>((n20 - n02) * (s1 * s1 - s2 * s2) + 4 * n11 * s1 * s2);
  h[6] = static_cast<double>((3 * n21 - n03) * s1 * (s1 * s1 - 3 * s2 * s2) -
                             (n30 - 3 * n12) * s2 * (3 * s1 * s1 - s2 * s2));
  return h;
}

std::size_t box_count_oracle(const std::vector<Point>& pts, int k) {
  int min_x = pts[0].x, max_x = pts[0].x, min_y = pts[0].y, max_y = pts[0].y;
  for (Point p : pts) {
    min_x = std::min(min_x, p.x);
    max_x = std::max(max_x, p.x);
    min_y = std::min(min_y, p.y);
    max_y = std::max(max_y, p.y);
  }
  const double side = std::max(max_x - min_x + 1, max_y - min_y + 1);
  const int n = 1 << k;
  const double step = side / n;
  std::size_t count = 0;
  for (int by = 0; by < n; ++by) {
    for (int bx = 0; bx < n; ++bx) {
      const double x0 = bx * step, x1 = (bx + 1) * step;
      const double y0 = by * step, y1 = (by + 1) * step;
      for (Point p : pts) {
        const double px = p.x - min_x, py = p.y - min_y;
        if (px >= x0 && px < x1 && py >= y0 && py < y1) {
          ++count;
          break;
        }
      }
    }
  }
  return count;
}

QpOptimum svm_dual_oracle(const Matrix& x, const std::vector<int>& y, const SvmHyperParams& p) {
  const int n = static_cast<int>(x.size());
  Eigen::MatrixXd q(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) q(i, j) = y[i] * y[j] * kernel_eval(p, x[i], x[j]);
  const double c = p.c;
  auto objective = [&](const Eigen::VectorXd& a) { return a.sum() - 0.5 * a.dot(q * a); };

  QpOptimum best;
  best.objective = -std::numeric_limits<double>::infinity();
  int faces = 1;
  for (int i = 0; i < n; ++i) faces *= 3;
  for (int code = 0; code < faces; ++code) {
    std::vector<int> state(n);  // 0 lower, 1 upper, 2 free
    for (int i = 0, v = code; i < n; ++i, v /= 3) state[i] = v % 3;
    Eigen::VectorXd a = Eigen::VectorXd::Zero(n);
    std::vector<int> free_idx;
    for (int i = 0; i < n; ++i) {
      if (state[i] == 1) a(i) = c;
      if (state[i] == 2) free_idx.push_back(i);
    }
    if (!free_idx.empty()) {
      // Stationarity on the free block with the equality multiplier b:
      // Q_FF a_F + y_F b = 1 - Q_FB a_B,  y_F' a_F = -y_B' a_B.
      const int f = static_cast<int>(free_idx.size());
      Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(f + 1, f + 1);
      Eigen::VectorXd rhs(f + 1);
      double fixed_sum = 0.0;
      for (int i = 0; i < n; ++i)
        if (state[i] != 2) fixed_sum += y[i] * a(i);
      for (int r = 0; r < f; ++r) {
        const int i = free_idx[r];
        double s = 1.0;
        for (int j = 0; j < n; ++j)
          if (state[j] != 2) s -= q(i, j) * a(j);
        rhs(r) = s;
        for (int col = 0; col < f; ++col) kkt(r, col) = q(i, free_idx[col]);
        kkt(r, f) = y[i];
        kkt(f, r) = y[i];
      }
      rhs(f) = -fixed_sum;
      const Eigen::VectorXd sol = kkt.completeOrthogonalDecomposition().solve(rhs);
      if ((kkt * sol - rhs).norm() > 1e-8) continue;
      for (int r = 0; r < f; ++r) a(free_idx[r]) = sol(r);
    }
    double eq = 0.0;
    bool feasible = true;
    for (int i = 0; i < n; ++i) {
      eq += y[i] * a(i);
      if (a(i) < -1e-10 || a(i) > c + 1e-10) feasible = false;
    }
    if (!feasible || std::abs(eq) > 1e-8) continue;
    const double obj = objective(a);
    if (obj > best.objective) {
      best.objective = obj;
      best.alpha.assign(a.data(), a.data() + n);
    }
  }
  return best;
}

double best_linear_accuracy(const Matrix& x, const std::vector<int>& y) {
  const std::size_t n = x.size();
  double best = 0.0;
  auto score = [&](double wx, double wy, double b) {
    std::size_t ok = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double v = wx * x[i][0] + wy * x[i][1] + b;
      if ((v > 0 ? 1 : -1) == y[i]) ++ok;
    }
    return static_cast<double>(ok) / n;
  };
  // Any optimal 2-D separator can be moved until it passes through two
  // points; perturbing around such lines covers every labelling it induces.
  const double eps = 1e-7;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double dx = x[j][0] - x[i][0], dy = x[j][1] - x[i][1];
      if (i == j) {
        dx = 1.0;
        dy = 0.0;
      }
      for (double turn : {-eps, 0.0, eps}) {
        const double wx = -dy + turn * dx, wy = dx + turn * dy;
        const double b0 = -(wx * x[i][0] + wy * x[i][1]);
        for (double shift : {-eps, 0.0, eps}) {
          best = std::max(best, score(wx, wy, b0 + shift));
          best = std::max(best, score(-wx, -wy, -b0 - shift));
        }
      }
    }
  }
  return best;
}

}  // namespace orchid::testing
