#include "orchid/dataset.hpp"
#include "orchid/error.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace orchid {
namespace {

constexpr std::size_t kColumns = 3 + kFeatureCount;

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

void check_text_field(const std::string& s, const char* what) {
  if (s.empty() || s.find_first_of(",\"\r\n") != std::string::npos) {
    throw Error(ErrorCode::Schema, std::string(what) + " '" + s + "' cannot be written to CSV");
  }
}

std::string header() {
  std::string h = "image_id,genus,species";
  for (int i = 1; i <= kFeatureCount; ++i) h += ",f" + std::to_string(i);
  return h;
}

}  // namespace

Matrix FeatureTable::matrix() const {
  Matrix m;
  m.reserve(rows.size());
  for (const FeatureRow& r : rows) m.push_back(r.values);
  return m;
}

std::vector<std::string> FeatureTable::species() const {
  std::vector<std::string> out;
  out.reserve(rows.size());
  for (const FeatureRow& r : rows) out.push_back(r.species);
  return out;
}

std::vector<std::string> FeatureTable::genera_for(const std::vector<std::string>& class_labels) const {
  std::map<std::string, std::string> genus_of;
  for (const FeatureRow& r : rows) genus_of.emplace(r.species, r.genus);
  std::vector<std::string> out;
  for (const std::string& label : class_labels) {
    auto it = genus_of.find(label);
    out.push_back(it == genus_of.end() ? std::string() : it->second);
  }
  return out;
}

std::string features_to_csv(const FeatureTable& table) {
  std::string out = header();
  out += '\n';
  char buf[64];
  for (const FeatureRow& r : table.rows) {
    if (r.values.size() != static_cast<std::size_t>(kFeatureCount)) {
      throw Error(ErrorCode::Schema, "row '" + r.image_id + "' has " + std::to_string(r.values.size()) +
                                         " features");
    }
    check_text_field(r.image_id, "image id");
    check_text_field(r.genus, "genus");
    check_text_field(r.species, "species");
    out += r.image_id;
    out += ',';
    out += r.genus;
    out += ',';
    out += r.species;
    for (double v : r.values) {
      // Shortest form that parses back to the identical double.
      auto res = std::to_chars(buf, buf + sizeof buf, v);
      out += ',';
      out.append(buf, res.ptr);
    }
    out += '\n';
  }
  return out;
}

FeatureTable features_from_csv(std::string_view text) {
  std::vector<std::string_view> lines = split(text, '\n');
  for (auto& l : lines) {
    if (!l.empty() && l.back() == '\r') l.remove_suffix(1);
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty()) throw Error(ErrorCode::Schema, "feature file is empty");

  const auto head = split(lines.front(), ',');
  if (head.size() != kColumns) {
    throw Error(ErrorCode::Schema, "header has " + std::to_string(head.size()) + " columns, expected " +
                                       std::to_string(kColumns));
  }
  if (lines.front() != header()) throw Error(ErrorCode::Schema, "unexpected header");

  FeatureTable table;
  std::set<std::string, std::less<>> ids;
  for (std::size_t ln = 1; ln < lines.size(); ++ln) {
    const auto cols = split(lines[ln], ',');
    const std::string where = "line " + std::to_string(ln + 1);
    if (cols.size() != kColumns) {
      throw Error(ErrorCode::Schema, where + " has " + std::to_string(cols.size()) + " columns, expected " +
                                         std::to_string(kColumns));
    }
    FeatureRow row;
    row.image_id = cols[0];
    row.genus = cols[1];
    row.species = cols[2];
    if (row.image_id.empty() || row.genus.empty() || row.species.empty()) {
      throw Error(ErrorCode::Schema, where + " has an empty label field");
    }
    if (!ids.insert(row.image_id).second) {
      throw Error(ErrorCode::DuplicateImageId, "image id '" + row.image_id + "' appears twice");
    }
    row.values.reserve(kFeatureCount);
    for (std::size_t c = 3; c < cols.size(); ++c) {
      double v = 0.0;
      const auto field = cols[c];
      auto res = std::from_chars(field.data(), field.data() + field.size(), v);
      if (res.ec != std::errc() || res.ptr != field.data() + field.size()) {
        throw Error(ErrorCode::Parse, where + ": bad number '" + std::string(field) + "'");
      }
      row.values.push_back(v);
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

void save_features(const FeatureTable& table, const std::filesystem::path& path) {
  const std::string text = features_to_csv(table);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

FeatureTable load_features(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return features_from_csv(buf.str());
}

}  // namespace orchid
