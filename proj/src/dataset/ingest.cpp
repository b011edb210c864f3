#include "orchid/dataset.hpp"
#include "orchid/error.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

namespace fs = std::filesystem;

namespace orchid {
namespace {

bool is_image_file(const fs::path& p) {
  const std::string name = p.filename().string();
  if (name.find(".mask.") != std::string::npos || name.find(".markers.") != std::string::npos ||
      name.find(".object.") != std::string::npos) {
    return false;
  }
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext == ".png" || ext == ".jpg" || ext == ".jpeg";
}

std::optional<fs::path> sidecar(const fs::path& image, std::string_view suffix) {
  fs::path p = image.parent_path() / (image.stem().string() + std::string(suffix));
  if (fs::is_regular_file(p)) return p;
  return std::nullopt;
}

std::vector<fs::path> sorted_children(const fs::path& dir, bool directories) {
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (directories ? e.is_directory() : e.is_regular_file()) out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

void collect(const fs::path& root, DatasetRole role, std::vector<DatasetEntry>& out) {
  for (const fs::path& genus_dir : sorted_children(root, true)) {
    const std::string genus = genus_dir.filename().string();
    if (role == DatasetRole::Train && genus == "holdout") continue;
    for (const fs::path& species_dir : sorted_children(genus_dir, true)) {
      for (const fs::path& file : sorted_children(species_dir, false)) {
        if (!is_image_file(file)) continue;
        DatasetEntry e;
        e.image_id = file.stem().string();
        e.genus = genus;
        e.species = species_dir.filename().string();
        e.role = role;
        e.image = file;
        e.flower_markers = sidecar(file, kFlowerMarkerSuffix);
        e.lip_markers = sidecar(file, kLipMarkerSuffix);
        e.flower_mask = sidecar(file, kFlowerMaskSuffix);
        e.lip_mask = sidecar(file, kLipMaskSuffix);
        out.push_back(std::move(e));
      }
    }
  }
}

}  // namespace

std::string_view to_string(DatasetRole role) noexcept {
  return role == DatasetRole::Train ? "train" : "holdout";
}

std::size_t DatasetIndex::count(DatasetRole role) const noexcept {
  return static_cast<std::size_t>(std::count_if(
      entries.begin(), entries.end(), [role](const DatasetEntry& e) { return e.role == role; }));
}

DatasetIndex ingest(const fs::path& root) {
  if (!fs::is_directory(root)) throw Error(ErrorCode::Io, "not a directory: " + root.string());
  DatasetIndex index;
  try {
    collect(root, DatasetRole::Train, index.entries);
    if (fs::is_directory(root / "holdout")) collect(root / "holdout", DatasetRole::Holdout, index.entries);
  } catch (const fs::filesystem_error& e) {
    throw Error(ErrorCode::Io, e.what());
  }
  if (index.entries.empty()) throw Error(ErrorCode::EmptyDataset, "no images under " + root.string());

  std::sort(index.entries.begin(), index.entries.end(),
            [](const DatasetEntry& a, const DatasetEntry& b) { return a.image < b.image; });

  std::set<std::string> ids;
  std::map<std::string, std::string> genus_of;
  for (const DatasetEntry& e : index.entries) {
    if (!ids.insert(e.image_id).second) {
      throw Error(ErrorCode::DuplicateImageId, "image id '" + e.image_id + "' appears twice");
    }
    auto [it, inserted] = genus_of.emplace(e.species, e.genus);
    if (!inserted && it->second != e.genus) {
      throw Error(ErrorCode::InconsistentTaxonomy, "species '" + e.species + "' listed under both '" +
                                                       it->second + "' and '" + e.genus + "'");
    }
  }
  return index;
}

}  // namespace orchid
