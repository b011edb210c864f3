#include "orchid/classifier.hpp"
#include "orchid/error.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

namespace orchid {

std::string_view to_string(KernelType k) noexcept {
  switch (k) {
    case KernelType::Linear: return "linear";
    case KernelType::Polynomial: return "polynomial";
    case KernelType::Rbf: return "rbf";
    case KernelType::Sigmoid: return "sigmoid";
  }
  return "?";
}

KernelType parse_kernel(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  if (lower == "linear") return KernelType::Linear;
  if (lower == "polynomial" || lower == "poly") return KernelType::Polynomial;
  if (lower == "rbf" || lower == "radial") return KernelType::Rbf;
  if (lower == "sigmoid") return KernelType::Sigmoid;
  throw Error(ErrorCode::InvalidArgument, "unknown kernel '" + std::string(name) + "'");
}

void SvmHyperParams::validate() const {
  if (!(c > 0.0) || !std::isfinite(c)) throw Error(ErrorCode::InvalidArgument, "c must be > 0");
  if (!(g >= 0.0) || !std::isfinite(g)) throw Error(ErrorCode::InvalidArgument, "g must be >= 0");
  if (!std::isfinite(r)) throw Error(ErrorCode::InvalidArgument, "r must be finite");
  if (kernel == KernelType::Rbf && !(g > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "rbf kernel requires g > 0");
  }
  if (kernel == KernelType::Polynomial && d < 1) {
    throw Error(ErrorCode::InvalidArgument, "polynomial kernel requires d >= 1");
  }
}

std::string describe(const SvmHyperParams& p) {
  std::ostringstream out;
  out << to_string(p.kernel) << " c=" << p.c;
  if (p.kernel != KernelType::Linear) out << " g=" << p.g;
  if (p.kernel == KernelType::Polynomial || p.kernel == KernelType::Sigmoid) out << " r=" << p.r;
  if (p.kernel == KernelType::Polynomial) out << " d=" << p.d;
  return out.str();
}

double kernel_eval(const SvmHyperParams& params, std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw Error(ErrorCode::DimensionMismatch, "kernel arguments differ in dimension");
  }
  switch (params.kernel) {
    case KernelType::Rbf: {
      double sq = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        const double diff = x[i] - y[i];
        sq += diff * diff;
      }
      return std::exp(-params.g * sq);
    }
    default:
      break;
  }
  double dot = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) dot += x[i] * y[i];
  switch (params.kernel) {
    case KernelType::Linear: return dot;
    case KernelType::Polynomial: return std::pow(params.g * dot + params.r, params.d);
    case KernelType::Sigmoid: return std::tanh(params.g * dot + params.r);
    default: return dot;
  }
}

FeatureScaler FeatureScaler::fit(const Matrix& rows) {
  FeatureScaler s;
  if (rows.empty()) return s;
  s.mins = rows.front();
  s.maxs = rows.front();
  for (const Row& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      s.mins[i] = std::min(s.mins[i], row[i]);
      s.maxs[i] = std::max(s.maxs[i], row[i]);
    }
  }
  return s;
}

Row FeatureScaler::transform(std::span<const double> x) const {
  if (x.size() != mins.size()) throw Error(ErrorCode::DimensionMismatch, "scaler dimension mismatch");
  Row out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double range = maxs[i] - mins[i];
    out[i] = range > 0.0 ? (x[i] - mins[i]) / range : 0.0;
  }
  return out;
}

}  // namespace orchid
