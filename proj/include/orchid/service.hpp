#pragma once

#include "orchid/classifier.hpp"
#include "orchid/segmentation.hpp"

#include <cstdint>
#include <filesystem>
#include <list>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace orchid {

std::string base64_encode(std::span<const std::uint8_t> bytes);
/// Throws Parse on characters outside the standard alphabet or bad padding.
std::vector<std::uint8_t> base64_decode(std::string_view text);

/// One live segmentation plus the lock that serializes its mutations.
struct SessionRecord {
  explicit SessionRecord(SegSession s) : session(std::move(s)) {}
  std::mutex mutex;
  SegSession session;
};

/// Bounded map of sessions with least-recently-used eviction.
class SessionStore {
 public:
  explicit SessionStore(std::size_t capacity = 64);

  /// Stores the session under a fresh 128-bit random id.
  std::string create(SegSession session);
  /// Returns the session and marks it most recently used; null when absent.
  std::shared_ptr<SessionRecord> find(const std::string& id);

  std::size_t size() const;
  std::size_t capacity() const noexcept { return capacity_; }

  static std::string new_id();

 private:
  struct Slot {
    std::shared_ptr<SessionRecord> record;
    std::list<std::string>::iterator position;
    std::uint64_t last_touched = 0;
  };

  std::size_t capacity_;
  mutable std::mutex mutex_;
  std::list<std::string> order_;  // front = most recently used
  std::unordered_map<std::string, Slot> slots_;
  std::uint64_t clock_ = 0;
};

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
  std::optional<std::filesystem::path> models_dir;
  std::optional<std::filesystem::path> static_dir;
  std::size_t session_capacity = 64;
  std::size_t max_upload_bytes = 10 * 1024 * 1024;
  OversegmentParams oversegment;
  int cleanup_radius = 2;
  int brush_width = 3;
};

/// Region boundaries of the current stage drawn over its image.
RgbImage region_overlay(const RgbImage& image, const RegionMap& regions);

class Service {
 public:
  explicit Service(ServiceConfig config);
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  /// Registers a model under `name` (files in models_dir load as their stem).
  void add_model(const std::string& name, TrainedModel model);
  std::vector<std::string> model_names() const;

  /// Binds the listening socket and returns the actual port.
  int bind();
  /// Serves until stop() is called. Requires bind().
  void run();
  void stop();

  SessionStore& sessions() noexcept;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace orchid
