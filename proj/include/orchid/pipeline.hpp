#pragma once

#include "orchid/dataset.hpp"
#include "orchid/features.hpp"
#include "orchid/segmentation.hpp"

#include <optional>
#include <string>
#include <vector>

namespace orchid {

struct ExtractOptions {
  bool flower_only = false;  // ablation mode: lip slots stay zero
  int cleanup_radius = 0;    // opening radius applied to the supplied masks
};

struct Extraction {
  FeatureVector vector;
  RegionFeatures flower;
  std::optional<RegionFeatures> lip;
};

/// Full extraction for one image. Images above 600x500 are downscaled first
/// and the masks follow with nearest-neighbour sampling.
Extraction extract_features(const RgbImage& image, const BinaryMask& flower,
                            const std::optional<BinaryMask>& lip, const ExtractOptions& options = {});

/// Loads an entry's image and mask sidecars and extracts its vector.
FeatureRow extract_entry(const DatasetEntry& entry, const ExtractOptions& options = {});

struct ExtractFailure {
  std::string image_id;
  std::string message;
};

struct DatasetExtraction {
  FeatureTable table;
  std::vector<ExtractFailure> failures;
};

/// Extracts every entry with the given role. Failures are collected, or
/// rethrown immediately when `strict`.
DatasetExtraction extract_dataset(const DatasetIndex& index, DatasetRole role,
                                  const ExtractOptions& options = {}, bool strict = false);

BinaryMask resize_mask(const BinaryMask& mask, int width, int height);

struct SegmentationOutput {
  RgbImage image;  // the (possibly resized) input
  BinaryMask flower;
  RgbImage flower_image;
  std::optional<BinaryMask> lip;
  std::optional<RgbImage> lip_image;
};

/// Batch two-stage segmentation driven by marker sets given in the
/// coordinates of `image` before resizing.
SegmentationOutput segment_two_stage(const RgbImage& image, const MarkerSet& flower_markers,
                                     const std::optional<MarkerSet>& lip_markers,
                                     const OversegmentParams& params = {}, int cleanup_radius = 2);

}  // namespace orchid
