#include "orchid/error.hpp"
#include "orchid/pipeline.hpp"
#include "orchid/service.hpp"

#include "httplib.h"
#include "json.hpp"

#include <algorithm>
#include <shared_mutex>

namespace orchid {
namespace {

using Json = nlohmann::ordered_json;

void send_json(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& message) {
  send_json(res, status, Json{{"error", message}});
}

int status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidMarkers: return 422;
    case ErrorCode::Decode:
    case ErrorCode::Parse:
    case ErrorCode::InvalidArgument: return 400;
    case ErrorCode::EmptyResult:
    case ErrorCode::EmptyMask:
    case ErrorCode::DegenerateShape:
    case ErrorCode::TooFewBoundaryPoints:
    case ErrorCode::NoObject: return 422;
    default: return 500;
  }
}

// A stroke list is either one polyline [[x,y],...] or a list of them.
std::vector<std::vector<Point>> parse_strokes(const Json& j) {
  auto is_point = [](const Json& p) {
    return p.is_array() && p.size() == 2 && p[0].is_number() && p[1].is_number();
  };
  auto to_polyline = [&](const Json& line) {
    std::vector<Point> out;
    for (const Json& p : line) {
      if (!is_point(p)) throw Error(ErrorCode::Parse, "stroke points must be [x, y] pairs");
      out.push_back({static_cast<int>(std::floor(p[0].get<double>())),
                     static_cast<int>(std::floor(p[1].get<double>()))});
    }
    return out;
  };
  std::vector<std::vector<Point>> out;
  if (j.is_null()) return out;
  if (!j.is_array()) throw Error(ErrorCode::Parse, "strokes must be an array");
  if (j.empty()) return out;
  if (is_point(j[0])) {
    out.push_back(to_polyline(j));
  } else {
    for (const Json& line : j) {
      if (!line.is_array()) throw Error(ErrorCode::Parse, "strokes must be arrays of points");
      out.push_back(to_polyline(line));
    }
  }
  return out;
}

std::vector<Point> rasterize_all(const std::vector<std::vector<Point>>& lines, int brush, int w, int h) {
  std::vector<Point> out;
  for (const auto& line : lines) rasterize_stroke(line, brush, w, h, out);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::string_view stage_name(SegStage s) {
  switch (s) {
    case SegStage::Flower: return "flower";
    case SegStage::Lip: return "lip";
    case SegStage::Done: return "done";
  }
  return "flower";
}

Json stage_result(const SegSession& s, SegStage which) {
  const BinaryMask& mask = which == SegStage::Flower ? *s.flower_mask() : *s.lip_mask();
  const auto mask_png = encode_mask_png(mask);
  const auto masked_png = encode_png(apply_mask(s.image(), mask));
  return Json{{"stage", stage_name(s.stage())},
              {"mask_pixels", mask.count()},
              {"mask_png", base64_encode(mask_png)},
              {"masked_image_png", base64_encode(masked_png)}};
}

}  // namespace

RgbImage region_overlay(const RgbImage& image, const RegionMap& regions) {
  RgbImage out = image;
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      const int id = regions.at(x, y);
      const bool edge = (x + 1 < image.width() && regions.at(x + 1, y) != id) ||
                        (y + 1 < image.height() && regions.at(x, y + 1) != id);
      if (!edge) continue;
      Rgb& p = out.at(x, y);
      p = {static_cast<std::uint8_t>((p.r + 255) / 2), static_cast<std::uint8_t>((p.g + 255) / 2),
           static_cast<std::uint8_t>(p.b / 2)};
    }
  }
  return out;
}

struct Service::Impl {
  explicit Impl(ServiceConfig c) : config(std::move(c)), store(config.session_capacity) {}

  ServiceConfig config;
  SessionStore store;
  httplib::Server server;
  mutable std::shared_mutex models_mutex;
  std::map<std::string, std::shared_ptr<const TrainedModel>> models;

  std::shared_ptr<const TrainedModel> model(const std::string& name) const {
    std::shared_lock lock(models_mutex);
    auto it = models.find(name);
    return it == models.end() ? nullptr : it->second;
  }

  void routes();
  void upload(const httplib::Request& req, httplib::Response& res);
  void overlay(const httplib::Request& req, httplib::Response& res);
  void markers(const httplib::Request& req, httplib::Response& res);
  void predict(const httplib::Request& req, httplib::Response& res);
  void info(const httplib::Request& req, httplib::Response& res);
};

void Service::Impl::routes() {
  server.set_payload_max_length(config.max_upload_bytes);
  server.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
    try {
      std::rethrow_exception(ep);
    } catch (const Error& e) {
      send_error(res, status_for(e.code()), e.what());
    } catch (const std::exception& e) {
      send_error(res, 500, e.what());
    }
  });
  server.Post("/api/sessions", [this](const auto& req, auto& res) { upload(req, res); });
  server.Get(R"(/api/sessions/([0-9a-f]+))", [this](const auto& req, auto& res) { info(req, res); });
  server.Get(R"(/api/sessions/([0-9a-f]+)/regions)", [this](const auto& req, auto& res) { overlay(req, res); });
  server.Post(R"(/api/sessions/([0-9a-f]+)/markers)", [this](const auto& req, auto& res) { markers(req, res); });
  server.Post(R"(/api/sessions/([0-9a-f]+)/predict)", [this](const auto& req, auto& res) { predict(req, res); });
  server.Get("/api/models", [this](const auto&, auto& res) {
    Json names = Json::array();
    std::shared_lock lock(models_mutex);
    for (const auto& entry : models) names.push_back(entry.first);
    send_json(res, 200, Json{{"models", names}});
  });
  if (config.static_dir) server.set_mount_point("/", config.static_dir->string());
}

void Service::Impl::upload(const httplib::Request& req, httplib::Response& res) {
  std::string_view body = req.body;
  if (req.is_multipart_form_data()) {
    if (req.files.empty()) return send_error(res, 400, "multipart upload has no file part");
    auto it = req.files.find("image");
    body = (it != req.files.end() ? it->second : req.files.begin()->second).content;
  }
  if (body.size() > config.max_upload_bytes) return send_error(res, 413, "upload exceeds size limit");
  RgbImage image;
  try {
    image = decode_image({reinterpret_cast<const std::uint8_t*>(body.data()), body.size()});
  } catch (const Error& e) {
    return send_error(res, 400, e.what());
  }
  SegSession session(resize_to_limit(image), config.oversegment, config.cleanup_radius);
  const int w = session.image().width(), h = session.image().height();
  const std::string id = store.create(std::move(session));
  send_json(res, 201, Json{{"session_id", id}, {"width", w}, {"height", h}});
}

void Service::Impl::info(const httplib::Request& req, httplib::Response& res) {
  auto rec = store.find(req.matches[1]);
  if (!rec) return send_error(res, 404, "unknown session");
  std::lock_guard lock(rec->mutex);
  const SegSession& s = rec->session;
  send_json(res, 200,
            Json{{"session_id", std::string(req.matches[1])},
                 {"width", s.image().width()},
                 {"height", s.image().height()},
                 {"stage", stage_name(s.stage())},
                 {"has_flower", s.flower_mask().has_value()},
                 {"has_lip", s.lip_mask().has_value()}});
}

void Service::Impl::overlay(const httplib::Request& req, httplib::Response& res) {
  auto rec = store.find(req.matches[1]);
  if (!rec) return send_error(res, 404, "unknown session");
  std::vector<std::uint8_t> png;
  {
    std::lock_guard lock(rec->mutex);
    png = encode_png(region_overlay(rec->session.stage_image(), rec->session.regions()));
  }
  res.status = 200;
  res.set_content(reinterpret_cast<const char*>(png.data()), png.size(), "image/png");
}

void Service::Impl::markers(const httplib::Request& req, httplib::Response& res) {
  auto rec = store.find(req.matches[1]);
  if (!rec) return send_error(res, 404, "unknown session");

  Json body;
  try {
    body = Json::parse(req.body);
  } catch (const Json::parse_error& e) {
    return send_error(res, 400, std::string("request body is not JSON: ") + e.what());
  }
  if (!body.is_object()) return send_error(res, 400, "request body must be a JSON object");
  const std::string stage = body.value("stage", std::string());
  if (stage != "flower" && stage != "lip") return send_error(res, 400, "stage must be 'flower' or 'lip'");
  const SegStage requested = stage == "flower" ? SegStage::Flower : SegStage::Lip;
  const bool advance = body.value("advance", false);
  const auto object_lines = parse_strokes(body.contains("object_strokes") ? body["object_strokes"] : Json());
  const auto background_lines =
      parse_strokes(body.contains("background_strokes") ? body["background_strokes"] : Json());
  const bool has_strokes = !object_lines.empty() || !background_lines.empty();

  std::lock_guard lock(rec->mutex);
  SegSession& s = rec->session;
  if (s.stage() != requested) {
    return send_error(res, 409, "session is in the " + std::string(stage_name(s.stage())) +
                                    " stage, request targets " + stage);
  }
  if (has_strokes) {
    const int w = s.image().width(), h = s.image().height();
    MarkerSet m{rasterize_all(object_lines, config.brush_width, w, h),
                rasterize_all(background_lines, config.brush_width, w, h)};
    s.segment(m);
  } else if (!advance) {
    return send_error(res, 422, "InvalidMarkers: no strokes given");
  }
  if (advance) {
    const bool have = requested == SegStage::Flower ? s.flower_mask().has_value() : s.lip_mask().has_value();
    if (!have) return send_error(res, 409, "nothing to accept: the " + stage + " stage has no result");
    s.advance();
  }
  send_json(res, 200, stage_result(s, requested));
}

void Service::Impl::predict(const httplib::Request& req, httplib::Response& res) {
  auto rec = store.find(req.matches[1]);
  if (!rec) return send_error(res, 404, "unknown session");
  Json body;
  try {
    body = req.body.empty() ? Json::object() : Json::parse(req.body);
  } catch (const Json::parse_error& e) {
    return send_error(res, 400, std::string("request body is not JSON: ") + e.what());
  }
  if (!body.is_object()) return send_error(res, 400, "request body must be a JSON object");
  std::string name = body.value("model", std::string());
  if (name.empty()) {
    std::shared_lock lock(models_mutex);
    if (models.size() == 1) name = models.begin()->first;
  }
  auto m = model(name);
  if (!m) return send_error(res, 404, "unknown model '" + name + "'");

  Extraction ex;
  {
    std::lock_guard lock(rec->mutex);
    const SegSession& s = rec->session;
    if (!s.flower_mask() || !s.lip_mask()) {
      return send_error(res, 409, "segmentation incomplete: flower and lip results are both required");
    }
    ex = extract_features(s.image(), *s.flower_mask(), s.lip_mask());
  }
  const Prediction p = predict_ovo(*m, ex.vector.values());
  std::string genus;
  const auto pos = std::find(m->class_labels.begin(), m->class_labels.end(), p.label) - m->class_labels.begin();
  if (static_cast<std::size_t>(pos) < m->class_genera.size()) genus = m->class_genera[static_cast<std::size_t>(pos)];
  Json votes = Json::array();
  for (std::size_t i = 0; i < p.votes.size() && i < 5; ++i) votes.push_back({p.votes[i].first, p.votes[i].second});
  send_json(res, 200, Json{{"species", p.label}, {"genus", genus}, {"votes", votes}});
}

Service::Service(ServiceConfig config) : impl_(std::make_unique<Impl>(std::move(config))) {
  if (impl_->config.models_dir) {
    const auto& dir = *impl_->config.models_dir;
    if (!std::filesystem::is_directory(dir)) throw Error(ErrorCode::Io, "models dir not found: " + dir.string());
    std::vector<std::filesystem::path> files;
    for (const auto& e : std::filesystem::directory_iterator(dir)) {
      if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) add_model(f.stem().string(), load_model(f));
  }
  impl_->routes();
}

Service::~Service() { stop(); }

void Service::add_model(const std::string& name, TrainedModel model) {
  std::unique_lock lock(impl_->models_mutex);
  impl_->models[name] = std::make_shared<const TrainedModel>(std::move(model));
}

std::vector<std::string> Service::model_names() const {
  std::shared_lock lock(impl_->models_mutex);
  std::vector<std::string> out;
  for (const auto& entry : impl_->models) out.push_back(entry.first);
  return out;
}

int Service::bind() {
  const auto& c = impl_->config;
  if (c.port == 0) {
    const int port = impl_->server.bind_to_any_port(c.host);
    if (port < 0) throw Error(ErrorCode::Io, "cannot bind " + c.host);
    return port;
  }
  if (!impl_->server.bind_to_port(c.host, c.port)) {
    throw Error(ErrorCode::Io, "cannot bind " + c.host + ":" + std::to_string(c.port));
  }
  return c.port;
}

void Service::run() { impl_->server.listen_after_bind(); }

void Service::stop() {
  if (impl_->server.is_running()) impl_->server.stop();
}

SessionStore& Service::sessions() noexcept { return impl_->store; }

}  // namespace orchid
