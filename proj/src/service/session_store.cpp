#include "orchid/error.hpp"
#include "orchid/service.hpp"

#include <cstdio>
#include <random>

namespace orchid {

SessionStore::SessionStore(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw Error(ErrorCode::InvalidArgument, "session capacity must be positive");
}

std::string SessionStore::new_id() {
  static std::mutex device_mutex;
  static std::random_device device;
  std::uint32_t words[4];
  {
    std::lock_guard lock(device_mutex);
    for (auto& w : words) w = device();
  }
  char buf[33];
  std::snprintf(buf, sizeof buf, "%08x%08x%08x%08x", words[0], words[1], words[2], words[3]);
  return buf;
}

std::string SessionStore::create(SegSession session) {
  auto record = std::make_shared<SessionRecord>(std::move(session));
  std::lock_guard lock(mutex_);
  std::string id;
  do {
    id = new_id();
  } while (slots_.count(id) != 0);
  order_.push_front(id);
  slots_.emplace(id, Slot{std::move(record), order_.begin(), ++clock_});
  while (slots_.size() > capacity_) {
    slots_.erase(order_.back());
    order_.pop_back();
  }
  return id;
}

std::shared_ptr<SessionRecord> SessionStore::find(const std::string& id) {
  std::lock_guard lock(mutex_);
  auto it = slots_.find(id);
  if (it == slots_.end()) return nullptr;
  order_.splice(order_.begin(), order_, it->second.position);
  it->second.last_touched = ++clock_;
  return it->second.record;
}

std::size_t SessionStore::size() const {
  std::lock_guard lock(mutex_);
  return slots_.size();
}

}  // namespace orchid
