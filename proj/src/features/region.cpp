#include "orchid/error.hpp"
#include "orchid/features.hpp"

namespace orchid {

RegionFeatures extract_region_features(const RgbImage& obj_img, const BinaryMask& mask) {
  const BoundingBox box = bounding_box(mask);
  if (box.max_x < 0) throw Error(ErrorCode::EmptyMask, "region mask is empty");

  // Shape descriptors run in the region's own frame so that they do not
  // depend on where the region sits in the image.
  const BinaryMask local = crop(mask, box, 1);
  const Contour contour = trace_contour(local);
  const Centroid centroid = centroid_of(local);
  const RegionGeometry geom = region_geometry(local, contour);
  const ContourSignature sig = boundary_distances(contour.points, centroid);

  RegionFeatures f;
  f.sf1 = sf1(sig);
  f.sf2 = sf2(sig);
  f.roundness = roundness(geom);
  f.aspect_ratio = aspect_ratio(contour.points);
  f.hu = hu_moments(local);
  f.ccd = ccd36(contour.points, centroid);
  f.color = dominant_color_features(hs_histogram(obj_img, mask));
  f.fractal = fractal_dimension(contour.points);
  return f;
}

std::string_view to_string(Descriptor d) noexcept {
  switch (d) {
    case Descriptor::Sf1: return "SF1";
    case Descriptor::Sf2: return "SF2";
    case Descriptor::Roundness: return "Roundness";
    case Descriptor::Hu: return "MI";
    case Descriptor::Ccd: return "CCD";
    case Descriptor::Color: return "HSV";
    case Descriptor::Fractal: return "FD";
    case Descriptor::AspectRatio: return "AR";
  }
  return "?";
}

namespace {

// Per-region block f1..f46 (flower) and f47..f92 (lip).
FeatureSlot block_slot(int offset, RegionKind region) {
  if (offset == 0) return {Descriptor::Sf1, region, 0};
  if (offset == 1) return {Descriptor::Sf2, region, 0};
  if (offset == 2) return {Descriptor::Roundness, region, 0};
  if (offset < 10) return {Descriptor::Hu, region, offset - 3};
  return {Descriptor::Ccd, region, offset - 10};
}

}  // namespace

FeatureSlot slot_of(int f) {
  if (f < 1 || f > kFeatureCount) {
    throw Error(ErrorCode::InvalidArgument, "feature index out of range: " + std::to_string(f));
  }
  if (f <= 46) return block_slot(f - 1, RegionKind::Flower);
  if (f <= 92) return block_slot(f - 47, RegionKind::Lip);
  if (f <= 98) return {Descriptor::Color, RegionKind::Flower, f - 93};
  if (f <= 104) return {Descriptor::Color, RegionKind::Lip, f - 99};
  if (f <= 109) return {Descriptor::Fractal, RegionKind::Flower, f - 105};
  if (f == 110) return {Descriptor::AspectRatio, RegionKind::Flower, 0};
  return {Descriptor::AspectRatio, RegionKind::Lip, 0};
}

int feature_index(Descriptor d, RegionKind region, int component) {
  const int base = region == RegionKind::Flower ? 1 : 47;
  auto check = [&](int size) {
    if (component < 0 || component >= size) {
      throw Error(ErrorCode::InvalidArgument, "descriptor component out of range");
    }
  };
  switch (d) {
    case Descriptor::Sf1: check(1); return base;
    case Descriptor::Sf2: check(1); return base + 1;
    case Descriptor::Roundness: check(1); return base + 2;
    case Descriptor::Hu: check(7); return base + 3 + component;
    case Descriptor::Ccd: check(36); return base + 10 + component;
    case Descriptor::Color: check(6); return (region == RegionKind::Flower ? 93 : 99) + component;
    case Descriptor::Fractal:
      check(5);
      if (region != RegionKind::Flower) {
        throw Error(ErrorCode::InvalidArgument, "fractal dimension is a flower-region feature");
      }
      return 105 + component;
    case Descriptor::AspectRatio: check(1); return region == RegionKind::Flower ? 110 : 111;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown descriptor");
}

namespace {

void place_region(FeatureVector& v, const RegionFeatures& r, RegionKind kind) {
  v.f(feature_index(Descriptor::Sf1, kind, 0)) = r.sf1;
  v.f(feature_index(Descriptor::Sf2, kind, 0)) = r.sf2;
  v.f(feature_index(Descriptor::Roundness, kind, 0)) = r.roundness;
  for (int i = 0; i < 7; ++i) v.f(feature_index(Descriptor::Hu, kind, i)) = r.hu.log_scaled[i];
  for (int i = 0; i < 36; ++i) v.f(feature_index(Descriptor::Ccd, kind, i)) = r.ccd.values[i];
  const double color[6] = {r.color.dx2, r.color.dy2, r.color.p2, r.color.dx3, r.color.dy3, r.color.p3};
  for (int i = 0; i < 6; ++i) v.f(feature_index(Descriptor::Color, kind, i)) = color[i];
  v.f(feature_index(Descriptor::AspectRatio, kind, 0)) = r.aspect_ratio;
}

}  // namespace

FeatureVector assemble_vector(const RegionFeatures& flower, const std::optional<RegionFeatures>& lip,
                              const BoxCountSeries& flower_fd) {
  FeatureVector v;
  place_region(v, flower, RegionKind::Flower);
  if (lip) place_region(v, *lip, RegionKind::Lip);
  for (int i = 0; i < 4; ++i) {
    v.f(feature_index(Descriptor::Fractal, RegionKind::Flower, i)) = flower_fd.levels[i].dimension;
  }
  v.f(feature_index(Descriptor::Fractal, RegionKind::Flower, 4)) = flower_fd.mean_dimension;
  return v;
}

}  // namespace orchid
