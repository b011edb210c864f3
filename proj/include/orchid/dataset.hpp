#pragma once

#include "orchid/classifier.hpp"
#include "orchid/features.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace orchid {

// -- Directory ingestion --------------------------------------------------------

enum class DatasetRole { Train, Holdout };

std::string_view to_string(DatasetRole role) noexcept;

struct DatasetEntry {
  std::string image_id;  // file stem, unique across the tree
  std::string genus;
  std::string species;
  DatasetRole role = DatasetRole::Train;
  std::filesystem::path image;
  std::optional<std::filesystem::path> flower_markers;
  std::optional<std::filesystem::path> lip_markers;
  std::optional<std::filesystem::path> flower_mask;
  std::optional<std::filesystem::path> lip_mask;
};

struct DatasetIndex {
  std::vector<DatasetEntry> entries;  // sorted by image path

  std::size_t count(DatasetRole role) const noexcept;
};

/// Sidecar suffixes recognised next to `<stem>.<ext>`.
inline constexpr std::string_view kFlowerMarkerSuffix = ".markers.flower.png";
inline constexpr std::string_view kLipMarkerSuffix = ".markers.lip.png";
inline constexpr std::string_view kFlowerMaskSuffix = ".mask.flower.png";
inline constexpr std::string_view kLipMaskSuffix = ".mask.lip.png";

/// Reads root/<genus>/<species>/<images> plus the optional root/holdout/ subtree
/// of the same shape.
DatasetIndex ingest(const std::filesystem::path& root);

// -- Feature table -------------------------------------------------------------

struct FeatureRow {
  std::string image_id;
  std::string genus;
  std::string species;
  std::vector<double> values;  // f1..f111

  friend bool operator==(const FeatureRow&, const FeatureRow&) = default;
};

struct FeatureTable {
  std::vector<FeatureRow> rows;

  Matrix matrix() const;
  std::vector<std::string> species() const;
  /// Genus of every species label, parallel to the sorted class list.
  std::vector<std::string> genera_for(const std::vector<std::string>& class_labels) const;

  friend bool operator==(const FeatureTable&, const FeatureTable&) = default;
};

std::string features_to_csv(const FeatureTable& table);
FeatureTable features_from_csv(std::string_view text);
void save_features(const FeatureTable& table, const std::filesystem::path& path);
FeatureTable load_features(const std::filesystem::path& path);

// -- Feature groups ------------------------------------------------------------

/// Sorted 1-based feature indices of a registered group.
std::vector<int> resolve_group(std::string_view name);
/// Every registered name, in registry order.
std::vector<std::string> group_names();
/// Parses an explicit list such as "1-10,15,93-104" into sorted unique indices.
std::vector<int> parse_feature_list(std::string_view text, int max_index = kFeatureCount);
/// A group name, or an explicit list when the text starts with a digit.
std::vector<int> resolve_subset(std::string_view text);

// -- Synthetic corpus ------------------------------------------------------------

inline constexpr int kSyntheticTemplates = 10;
inline constexpr int kSyntheticMaxClasses = 30;

struct SyntheticSpec {
  int n_classes = 30;
  int per_class = 10;
  int holdout_per_class = 1;
  std::uint64_t seed = 7;
  int width = 480;
  int height = 400;
  bool markers = false;  // also write scribble marker PNGs
};

enum class LipShape { Ellipse, ThreeLobed, Slender };

struct SyntheticClass {
  int id = 0;
  std::string genus;
  std::string species;
  int petals = 0;
  double sharpness = 0.0;  // exponent of the petal profile
  double inner_ratio = 0.0;
  int petal_cell = 0;      // zero-based HS cell of the petal colour
  int disk_cell = 0;
  int lip_cell = 0;
  LipShape lip_shape = LipShape::Ellipse;
};

SyntheticClass synthetic_class(int id);

struct SyntheticSample {
  RgbImage image;
  BinaryMask flower;
  BinaryMask lip;
};

/// Renders one image; a pure function of (spec, class, role, index).
SyntheticSample render_synthetic(const SyntheticSpec& spec, int class_id, DatasetRole role, int index);

/// Marker image for one stage: green object scribbles, red background scribbles.
RgbImage synthetic_markers(const BinaryMask& object, const std::optional<BinaryMask>& within);

struct SyntheticSummary {
  std::size_t images = 0;
  std::size_t masks = 0;
};

/// Writes the rendered tree plus manifest.json under `root`.
SyntheticSummary generate_synthetic_corpus(const SyntheticSpec& spec, const std::filesystem::path& root);

}  // namespace orchid
