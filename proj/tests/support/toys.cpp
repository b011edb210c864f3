#include "toys.hpp"

#include "orchid/random.hpp"

#include <cmath>
#include <numbers>

namespace orchid::testing {

LabeledSet three_clusters(int per_class, std::uint64_t seed) {
  Rng rng(seed);
  const double centers[3][2] = {{0, 0}, {10, 0}, {5, 9}};
  const char* names[3] = {"a", "b", "c"};
  LabeledSet out;
  for (int c = 0; c < 3; ++c) {
    for (int i = 0; i < per_class; ++i) {
      out.x.push_back({centers[c][0] + rng.uniform(-1, 1), centers[c][1] + rng.uniform(-1, 1)});
      out.labels.push_back(names[c]);
    }
  }
  return out;
}

LabeledSet annulus(int per_class, std::uint64_t seed) {
  Rng rng(seed);
  LabeledSet out;
  for (int i = 0; i < per_class; ++i) {
    const double r = std::sqrt(rng.uniform()), t = rng.uniform(0, 2 * std::numbers::pi);
    out.x.push_back({r * std::cos(t), r * std::sin(t)});
    out.labels.push_back("inner");
  }
  for (int i = 0; i < per_class; ++i) {
    const double r = std::sqrt(rng.uniform(4.0, 9.0)), t = rng.uniform(0, 2 * std::numbers::pi);
    out.x.push_back({r * std::cos(t), r * std::sin(t)});
    out.labels.push_back("ring");
  }
  return out;
}

Matrix embed(const Matrix& x, std::size_t dim) {
  Matrix out;
  for (const Row& r : x) {
    Row e(dim, 0.0);
    for (std::size_t i = 0; i < r.size() && i < dim; ++i) e[i] = r[i];
    out.push_back(std::move(e));
  }
  return out;
}

BinarySet xor_points() {
  return {{{0, 0}, {0, 1}, {1, 0}, {1, 1}}, {-1, 1, 1, -1}, {KernelType::Linear, 100, 0, 0, 3}};
}

std::vector<BinarySet> qp_fixtures() {
  std::vector<BinarySet> out;
  out.push_back({{{0, 0}, {2, 0}}, {-1, 1}, {KernelType::Linear, 1000, 0, 0, 3}});
  out.push_back(xor_points());
  out.push_back({{{0, 0}, {0, 1}, {1, 0}, {1, 1}}, {-1, 1, 1, -1}, {KernelType::Rbf, 100, 1, 0, 3}});
  out.push_back({{{0, 0}, {0, 1}, {1, 0}, {1, 1}}, {-1, 1, 1, -1}, {KernelType::Polynomial, 10, 1, 1, 2}});
  Rng rng(2718);
  const KernelType kernels[4] = {KernelType::Linear, KernelType::Polynomial, KernelType::Rbf, KernelType::Sigmoid};
  const double cs[4] = {0.5, 1, 10, 100};
  for (int i = 0; i < 24; ++i) {
    BinarySet s;
    const int n = 3 + static_cast<int>(rng.below(4));
    for (int j = 0; j < n; ++j) {
      s.x.push_back({rng.uniform(), rng.uniform()});
      s.y.push_back(j == 0 ? -1 : j == 1 ? 1 : (rng.below(2) ? 1 : -1));
    }
    s.params.kernel = kernels[i % 4];
    s.params.c = cs[(i / 4) % 4];
    s.params.g = s.params.kernel == KernelType::Sigmoid ? 0.5 : 1.0;
    s.params.r = s.params.kernel == KernelType::Sigmoid ? 0.0 : 1.0;
    s.params.d = 2 + static_cast<int>(rng.below(2));
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace orchid::testing
