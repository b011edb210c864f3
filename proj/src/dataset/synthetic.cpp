#include "orchid/dataset.hpp"
#include "orchid/error.hpp"
#include "orchid/random.hpp"

#include "json.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>

namespace fs = std::filesystem;

namespace orchid {
namespace {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t sample_seed(std::uint64_t seed, int class_id, DatasetRole role, int index) {
  std::uint64_t h = splitmix(seed);
  h = splitmix(h ^ static_cast<std::uint64_t>(class_id));
  h = splitmix(h ^ (role == DatasetRole::Train ? 0x1ULL : 0x2ULL));
  return splitmix(h ^ static_cast<std::uint64_t>(index));
}

std::uint8_t to_byte(double v) {
  return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
}

Rgb hsv_to_rgb(double h, double s, double v) {
  h = std::fmod(h, 360.0);
  if (h < 0) h += 360.0;
  const double c = v * s;
  const double hp = h / 60.0;
  const double x = c * (1.0 - std::abs(std::fmod(hp, 2.0) - 1.0));
  double r = 0, g = 0, b = 0;
  switch (static_cast<int>(hp)) {
    case 0: r = c; g = x; break;
    case 1: r = x; g = c; break;
    case 2: g = c; b = x; break;
    case 3: g = x; b = c; break;
    case 4: r = x; b = c; break;
    default: r = c; b = x; break;
  }
  const double m = v - c;
  return {to_byte(r + m), to_byte(g + m), to_byte(b + m)};
}

Rgb cell_color(int cell, double hue_jitter, double value) {
  const auto [h, s] = HsHistogram::center(cell);
  return hsv_to_rgb(h + hue_jitter, s, value);
}

std::string_view lip_shape_name(LipShape s) {
  switch (s) {
    case LipShape::Ellipse: return "ellipse";
    case LipShape::ThreeLobed: return "three_lobed";
    case LipShape::Slender: return "slender";
  }
  return "ellipse";
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << text;
}

}  // namespace

SyntheticClass synthetic_class(int id) {
  if (id < 0 || id >= kSyntheticMaxClasses) {
    throw Error(ErrorCode::UnsupportedClassCount, "synthetic class " + std::to_string(id) + " out of range");
  }
  const int t = id / 3;
  const int v = id % 3;
  char genus[16];
  std::snprintf(genus, sizeof genus, "genus%02d", t);
  SyntheticClass c;
  c.id = id;
  c.genus = genus;
  c.species = c.genus + "_sp" + std::to_string(v);
  c.petals = 4 + t % 6;
  c.sharpness = t / 6 == 0 ? 1.0 : 3.0;
  c.inner_ratio = 0.5;
  // Hue bins 7t mod 12 are distinct for t = 0..9.
  const int hue = (7 * t) % 12;
  constexpr std::array<int, 3> lip_offsets{2, 4, 9};
  c.petal_cell = hue * kSatBins + 4;
  c.disk_cell = ((hue + 6) % kHueBins) * kSatBins + 2;
  c.lip_cell = ((hue + lip_offsets[static_cast<std::size_t>(v)]) % kHueBins) * kSatBins + 5;
  c.lip_shape = static_cast<LipShape>(v);
  return c;
}

SyntheticSample render_synthetic(const SyntheticSpec& spec, int class_id, DatasetRole role, int index) {
  if (spec.width < 64 || spec.height < 64) {
    throw Error(ErrorCode::InvalidArgument, "synthetic images must be at least 64x64");
  }
  const SyntheticClass cls = synthetic_class(class_id);
  Rng rng(sample_seed(spec.seed, class_id, role, index));
  const double scale = rng.uniform(0.8, 1.2);
  const double rot = rng.uniform(0.0, 2.0 * std::numbers::pi);
  const double tx = rng.uniform(-0.08, 0.08) * spec.width;
  const double ty = rng.uniform(-0.08, 0.08) * spec.height;
  const double jitter = rng.uniform(-5.0, 5.0);
  const Rgb petal = cell_color(cls.petal_cell, jitter, rng.uniform(0.55, 1.0));
  const Rgb disk = cell_color(cls.disk_cell, jitter, rng.uniform(0.55, 1.0));
  const Rgb lip = cell_color(cls.lip_cell, jitter, rng.uniform(0.55, 1.0));

  const double cx = spec.width / 2.0 + tx;
  const double cy = spec.height / 2.0 + ty;
  const double big_r = 0.32 * std::min(spec.width, spec.height) * scale;
  const double rho = cls.inner_ratio;
  const double disk_r = 0.75 * rho * big_r;
  const double lip_a = 0.7 * disk_r;
  const double cr = std::cos(rot), sr = std::sin(rot);

  SyntheticSample out{RgbImage(spec.width, spec.height), BinaryMask(spec.width, spec.height),
                      BinaryMask(spec.width, spec.height)};
  for (int y = 0; y < spec.height; ++y) {
    for (int x = 0; x < spec.width; ++x) {
      const double dx = x + 0.5 - cx;
      const double dy = cy - (y + 0.5);
      const double r = std::hypot(dx, dy);
      if (r > big_r) continue;
      const double theta = std::atan2(dy, dx);
      const double profile =
          big_r * (rho + (1.0 - rho) * std::pow(std::abs(std::cos(cls.petals * (theta - rot) / 2.0)),
                                                 cls.sharpness));
      if (r > profile) continue;
      out.flower.set(x, y);
      out.image.at(x, y) = r <= disk_r ? disk : petal;

      const double u = dx * cr + dy * sr;
      const double w = -dx * sr + dy * cr;
      bool in_lip = false;
      switch (cls.lip_shape) {
        case LipShape::Ellipse:
          in_lip = (u / lip_a) * (u / lip_a) + (w / (0.6 * lip_a)) * (w / (0.6 * lip_a)) <= 1.0;
          break;
        case LipShape::ThreeLobed:
          in_lip = r <= lip_a * (0.75 + 0.25 * std::cos(3.0 * std::atan2(w, u)));
          break;
        case LipShape::Slender: {
          const double a = 1.309 * lip_a;
          in_lip = (u / a) * (u / a) + (w / (0.35 * a)) * (w / (0.35 * a)) <= 1.0;
          break;
        }
      }
      if (in_lip) {
        out.lip.set(x, y);
        out.image.at(x, y) = lip;
      }
    }
  }
  return out;
}

RgbImage synthetic_markers(const BinaryMask& object, const std::optional<BinaryMask>& within) {
  constexpr int kMargin = 4;
  constexpr int kPitch = 8;
  const BinaryMask inner = erode(object, kMargin);
  const BinaryMask outer = dilate(object, kMargin);
  const std::optional<BinaryMask> allowed =
      within ? std::optional<BinaryMask>(erode(*within, 2)) : std::nullopt;
  RgbImage img(object.width(), object.height());
  for (int y = kPitch / 2; y < object.height(); y += kPitch) {
    for (int x = 0; x < object.width(); ++x) {
      if (inner.at(x, y)) {
        img.at(x, y) = {0, 255, 0};
      } else if (!outer.at(x, y) && (!allowed || allowed->at(x, y))) {
        img.at(x, y) = {255, 0, 0};
      }
    }
  }
  return img;
}

SyntheticSummary generate_synthetic_corpus(const SyntheticSpec& spec, const fs::path& root) {
  if (spec.n_classes < 1 || spec.n_classes > kSyntheticMaxClasses) {
    throw Error(ErrorCode::UnsupportedClassCount,
                "n_classes must be 1.." + std::to_string(kSyntheticMaxClasses));
  }
  if (spec.per_class < 0 || spec.holdout_per_class < 0) {
    throw Error(ErrorCode::InvalidArgument, "image counts must be non-negative");
  }
  std::error_code ec;
  fs::create_directories(root, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create " + root.string() + ": " + ec.message());

  nlohmann::ordered_json manifest;
  manifest["seed"] = spec.seed;
  manifest["n_classes"] = spec.n_classes;
  manifest["per_class"] = spec.per_class;
  manifest["holdout_per_class"] = spec.per_class > 0 ? spec.holdout_per_class : 0;
  manifest["width"] = spec.width;
  manifest["height"] = spec.height;
  auto& classes = manifest["class_templates"] = nlohmann::ordered_json::array();

  SyntheticSummary summary;
  for (int c = 0; c < spec.n_classes; ++c) {
    const SyntheticClass cls = synthetic_class(c);
    classes.push_back({{"class", c},
                       {"genus", cls.genus},
                       {"species", cls.species},
                       {"petals", cls.petals},
                       {"sharpness", cls.sharpness},
                       {"inner_ratio", cls.inner_ratio},
                       {"petal_cell", cls.petal_cell + 1},
                       {"disk_cell", cls.disk_cell + 1},
                       {"lip_cell", cls.lip_cell + 1},
                       {"lip_shape", lip_shape_name(cls.lip_shape)}});
    if (spec.per_class == 0) continue;

    for (DatasetRole role : {DatasetRole::Train, DatasetRole::Holdout}) {
      const int count = role == DatasetRole::Train ? spec.per_class : spec.holdout_per_class;
      if (count == 0) continue;
      const fs::path dir = (role == DatasetRole::Train ? root : root / "holdout") / cls.genus / cls.species;
      fs::create_directories(dir, ec);
      if (ec) throw Error(ErrorCode::Io, "cannot create " + dir.string() + ": " + ec.message());
      for (int i = 0; i < count; ++i) {
        char stem[64];
        std::snprintf(stem, sizeof stem, role == DatasetRole::Train ? "%s_%03d" : "%s_h%02d",
                      cls.species.c_str(), i);
        const SyntheticSample s = render_synthetic(spec, c, role, i);
        const fs::path base = dir / stem;
        save_png(s.image, base.string() + ".png");
        save_mask_png(s.flower, base.string() + std::string(kFlowerMaskSuffix));
        save_mask_png(s.lip, base.string() + std::string(kLipMaskSuffix));
        if (spec.markers) {
          save_png(synthetic_markers(s.flower, std::nullopt), base.string() + std::string(kFlowerMarkerSuffix));
          save_png(synthetic_markers(s.lip, s.flower), base.string() + std::string(kLipMarkerSuffix));
        }
        ++summary.images;
        summary.masks += 2;
      }
    }
  }
  write_text(root / "manifest.json", manifest.dump(2) + "\n");
  return summary;
}

}  // namespace orchid
