#include "orchid/pipeline.hpp"
#include "orchid/error.hpp"

namespace orchid {
namespace {

RegionFeatures region_features(const RgbImage& image, const BinaryMask& mask, int radius) {
  const BinaryMask clean = morph_cleanup(mask, radius);
  return extract_region_features(apply_mask(image, clean), clean);
}

void check_dims(const RgbImage& image, const BinaryMask& mask, const char* what) {
  if (mask.width() != image.width() || mask.height() != image.height()) {
    throw Error(ErrorCode::DimensionMismatch,
                std::string(what) + " mask is " + std::to_string(mask.width()) + "x" +
                    std::to_string(mask.height()) + ", image is " + std::to_string(image.width()) + "x" +
                    std::to_string(image.height()));
  }
}

}  // namespace

BinaryMask resize_mask(const BinaryMask& mask, int width, int height) {
  if (mask.width() == width && mask.height() == height) return mask;
  BinaryMask out(width, height);
  for (int y = 0; y < height; ++y) {
    const int sy = std::min(mask.height() - 1, static_cast<int>((y + 0.5) * mask.height() / height));
    for (int x = 0; x < width; ++x) {
      const int sx = std::min(mask.width() - 1, static_cast<int>((x + 0.5) * mask.width() / width));
      if (mask.at(sx, sy)) out.set(x, y);
    }
  }
  return out;
}

Extraction extract_features(const RgbImage& image, const BinaryMask& flower,
                            const std::optional<BinaryMask>& lip, const ExtractOptions& options) {
  check_dims(image, flower, "flower");
  if (lip && !options.flower_only) check_dims(image, *lip, "lip");
  if (!options.flower_only && !lip) {
    throw Error(ErrorCode::EmptyMask, "lip mask is required unless running flower-only");
  }

  const RgbImage img = resize_to_limit(image);
  const bool resized = img.width() != image.width() || img.height() != image.height();

  Extraction out;
  const BinaryMask fm = resized ? resize_mask(flower, img.width(), img.height()) : flower;
  if (!fm.any()) throw Error(ErrorCode::EmptyMask, "flower mask is empty");
  out.flower = region_features(img, fm, options.cleanup_radius);
  if (!options.flower_only) {
    const BinaryMask lm = resized ? resize_mask(*lip, img.width(), img.height()) : *lip;
    if (!lm.any()) throw Error(ErrorCode::EmptyMask, "lip mask is empty");
    out.lip = region_features(img, lm, options.cleanup_radius);
  }
  out.vector = assemble_vector(out.flower, out.lip, out.flower.fractal);
  return out;
}

FeatureRow extract_entry(const DatasetEntry& entry, const ExtractOptions& options) {
  if (!entry.flower_mask) throw Error(ErrorCode::Io, "no flower mask for '" + entry.image_id + "'");
  if (!options.flower_only && !entry.lip_mask) {
    throw Error(ErrorCode::Io, "no lip mask for '" + entry.image_id + "'");
  }
  const RgbImage image = load_image(entry.image);
  const BinaryMask flower = load_mask(*entry.flower_mask);
  std::optional<BinaryMask> lip;
  if (!options.flower_only) lip = load_mask(*entry.lip_mask);
  const Extraction ex = extract_features(image, flower, lip, options);
  return {entry.image_id, entry.genus, entry.species, ex.vector.to_vector()};
}

DatasetExtraction extract_dataset(const DatasetIndex& index, DatasetRole role, const ExtractOptions& options,
                                  bool strict) {
  DatasetExtraction out;
  for (const DatasetEntry& e : index.entries) {
    if (e.role != role) continue;
    try {
      out.table.rows.push_back(extract_entry(e, options));
    } catch (const Error& err) {
      if (strict) throw;
      out.failures.push_back({e.image_id, err.what()});
    }
  }
  return out;
}

SegmentationOutput segment_two_stage(const RgbImage& image, const MarkerSet& flower_markers,
                                     const std::optional<MarkerSet>& lip_markers,
                                     const OversegmentParams& params, int cleanup_radius) {
  SegmentationOutput out;
  out.image = resize_to_limit(image);
  const int w = out.image.width(), h = out.image.height();
  auto rescale = [&](const MarkerSet& m) { return rescale_markers(m, image.width(), image.height(), w, h); };

  SegSession session(out.image, params, cleanup_radius);
  out.flower = session.segment(rescale(flower_markers));
  out.flower_image = apply_mask(out.image, out.flower);
  if (lip_markers) {
    session.advance();
    out.lip = session.segment(rescale(*lip_markers));
    out.lip_image = apply_mask(out.image, *out.lip);
  }
  return out;
}

}  // namespace orchid
