#include "orchid/error.hpp"
#include "orchid/features.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace orchid {
namespace {

constexpr std::size_t kMinBoundary = 10;

double distance(Point p, Centroid c) {
  const double dx = p.x - c.gx;
  const double dy = p.y - c.gy;
  return std::sqrt(dx * dx + dy * dy);
}

}  // namespace

ContourSignature boundary_distances(std::span<const Point> boundary, Centroid c) {
  if (boundary.size() < kMinBoundary) {
    throw Error(ErrorCode::TooFewBoundaryPoints,
                "need at least 10 boundary points, got " + std::to_string(boundary.size()));
  }
  ContourSignature sig;
  sig.n_boundary = boundary.size();
  sig.distances.reserve(boundary.size());
  for (const Point& p : boundary) sig.distances.push_back(distance(p, c));

  // Percentile means over the ceil(N/10) smallest and largest distances.
  std::vector<double> sorted = sig.distances;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t tail = (sorted.size() + 9) / 10;
  sig.r10 = std::accumulate(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(tail), 0.0) /
            static_cast<double>(tail);
  sig.r90 = std::accumulate(sorted.end() - static_cast<std::ptrdiff_t>(tail), sorted.end(), 0.0) /
            static_cast<double>(tail);

  sig.normalized.reserve(boundary.size());
  for (double d : sig.distances) {
    if (d >= sig.r90) {
      sig.normalized.push_back(1.0);
    } else if (d <= sig.r10) {
      sig.normalized.push_back(0.0);
    } else {
      sig.normalized.push_back((d - sig.r10) / (sig.r90 - sig.r10));
    }
  }
  return sig;
}

double sf1(const ContourSignature& sig) {
  if (sig.r90 <= 0.0) throw Error(ErrorCode::DegenerateShape, "r90 is zero");
  return sig.r10 / sig.r90;
}

double sf2(const ContourSignature& sig) {
  if (sig.normalized.size() < kMinBoundary) {
    throw Error(ErrorCode::TooFewBoundaryPoints, "signature has fewer than 10 points");
  }
  return std::accumulate(sig.normalized.begin(), sig.normalized.end(), 0.0) /
         static_cast<double>(sig.normalized.size());
}

CcdSignature ccd36(std::span<const Point> boundary, Centroid c) {
  if (boundary.size() < kMinBoundary) {
    throw Error(ErrorCode::TooFewBoundaryPoints, "ccd36 needs at least 10 boundary points");
  }
  std::size_t ref = 0;
  double max_d = -1.0;
  std::vector<double> d(boundary.size());
  for (std::size_t i = 0; i < boundary.size(); ++i) {
    d[i] = distance(boundary[i], c);
    if (d[i] > max_d) {
      max_d = d[i];
      ref = i;
    }
  }
  CcdSignature ccd;
  if (max_d <= 0.0) return ccd;

  // Angles are measured counterclockwise on screen, hence the negated y.
  auto angle = [&](Point p) {
    return std::atan2(-(p.y - c.gy), p.x - c.gx) * 180.0 / std::numbers::pi;
  };
  const double ref_angle = angle(boundary[ref]);
  for (std::size_t i = 0; i < boundary.size(); ++i) {
    double rel = std::fmod(angle(boundary[i]) - ref_angle, 360.0);
    if (rel < 0.0) rel += 360.0;
    const long deg = std::lround(rel) % 360;
    if (deg % 10 != 0) continue;
    auto& slot = ccd.values[static_cast<std::size_t>(deg / 10)];
    slot = std::max(slot, d[i]);
  }
  for (double& v : ccd.values) v /= max_d;
  return ccd;
}

}  // namespace orchid
