#include "orchid/dataset.hpp"
#include "orchid/error.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <initializer_list>
#include <utility>

namespace orchid {
namespace {

using IndexSet = std::vector<int>;

IndexSet range(int lo, int hi) {
  IndexSet out;
  for (int i = lo; i <= hi; ++i) out.push_back(i);
  return out;
}

IndexSet join(std::initializer_list<IndexSet> parts) {
  IndexSet out;
  for (const IndexSet& p : parts) out.insert(out.end(), p.begin(), p.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

const std::vector<std::pair<std::string, IndexSet>>& registry() {
  static const std::vector<std::pair<std::string, IndexSet>> groups = [] {
    const IndexSet ccd = join({range(11, 46), range(57, 92)});
    const IndexSet mi = join({range(4, 10), range(50, 56)});
    const IndexSet hsv = range(93, 104);
    const IndexSet sf1 = {1, 47};
    const IndexSet sf2 = {2, 48};
    const IndexSet round = {3, 49};
    const IndexSet ar = {110, 111};
    const IndexSet fd = range(105, 109);
    // Fractal dimension is computed on the flower region only, so it sits in FlowerOnly.
    const IndexSet flower = join({range(1, 46), range(93, 98), fd, IndexSet{110}});
    const IndexSet lip = join({range(47, 92), range(99, 104), IndexSet{111}});
    return std::vector<std::pair<std::string, IndexSet>>{
        {"CCD", ccd},
        {"MI", mi},
        {"HSV", hsv},
        {"SF1", sf1},
        {"SF2", sf2},
        {"Roundness", round},
        {"AR", ar},
        {"FD", fd},
        {"Group1", join({ccd, mi})},
        {"Group2", join({ccd, hsv})},
        {"Group3", join({mi, hsv})},
        {"Group4", join({ccd, mi, hsv})},
        {"Group5", join({sf1, sf2, round, hsv})},
        {"Group6", join({mi, fd})},
        {"All", range(1, kFeatureCount)},
        {"FlowerOnly", flower},
        {"LipOnly", lip},
    };
  }();
  return groups;
}

}  // namespace

std::vector<int> resolve_group(std::string_view name) {
  for (const auto& [n, set] : registry()) {
    if (n == name) return set;
  }
  throw Error(ErrorCode::UnknownGroup, "unknown feature group '" + std::string(name) + "'");
}

std::vector<std::string> group_names() {
  std::vector<std::string> out;
  for (const auto& entry : registry()) out.push_back(entry.first);
  return out;
}

std::vector<int> parse_feature_list(std::string_view text, int max_index) {
  auto parse_int = [&](std::string_view s) {
    int v = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size()) {
      throw Error(ErrorCode::InvalidArgument, "bad feature index '" + std::string(s) + "'");
    }
    if (v < 1 || v > max_index) {
      throw Error(ErrorCode::InvalidArgument, "feature index " + std::to_string(v) + " outside 1.." +
                                                  std::to_string(max_index));
    }
    return v;
  };
  std::vector<int> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find(',', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view item = text.substr(start, end - start);
    while (!item.empty() && std::isspace(static_cast<unsigned char>(item.front()))) item.remove_prefix(1);
    while (!item.empty() && std::isspace(static_cast<unsigned char>(item.back()))) item.remove_suffix(1);
    const std::size_t dash = item.find('-');
    if (dash == std::string_view::npos) {
      out.push_back(parse_int(item));
    } else {
      const int lo = parse_int(item.substr(0, dash));
      const int hi = parse_int(item.substr(dash + 1));
      if (hi < lo) throw Error(ErrorCode::InvalidArgument, "descending range '" + std::string(item) + "'");
      for (int i = lo; i <= hi; ++i) out.push_back(i);
    }
    start = end + 1;
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<int> resolve_subset(std::string_view text) {
  if (!text.empty() && std::isdigit(static_cast<unsigned char>(text.front()))) return parse_feature_list(text);
  return resolve_group(text);
}

}  // namespace orchid
