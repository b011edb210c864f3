#include "doctest.h"

#include "orchid/classifier.hpp"
#include "orchid/dataset.hpp"
#include "orchid/error.hpp"
#include "orchid/pipeline.hpp"
#include "orchid/service.hpp"
#include "shapes.hpp"
#include "tempdir.hpp"

#include "httplib.h"
#include "json.hpp"

#include <random>
#include <set>
#include <thread>

using namespace orchid;
using namespace orchid::testing;
using Json = nlohmann::json;

namespace {

struct Server {
  Service service;
  int port;
  std::thread thread;
  httplib::Client client;

  explicit Server(ServiceConfig cfg = {}, std::optional<TrainedModel> model = std::nullopt)
      : service(with_any_port(std::move(cfg))), port(service.bind()), client("127.0.0.1", port) {
    if (model) service.add_model("demo", std::move(*model));
    thread = std::thread([this] { service.run(); });
    client.set_read_timeout(60, 0);
  }
  ~Server() {
    service.stop();
    thread.join();
  }

  static ServiceConfig with_any_port(ServiceConfig c) {
    c.port = 0;
    return c;
  }

  httplib::Result post_json(const std::string& path, const Json& body) {
    return client.Post(path, body.dump(), "application/json");
  }
};

std::string png_body(const RgbImage& img) {
  const auto bytes = encode_png(img);
  return {bytes.begin(), bytes.end()};
}

/// Horizontal runs of one marker colour as [[x0,y],[x1,y]] polylines.
Json strokes_of(const RgbImage& markers, Rgb colour) {
  Json lines = Json::array();
  for (int y = 0; y < markers.height(); ++y) {
    for (int x = 0; x < markers.width();) {
      if (!(markers.at(x, y) == colour)) {
        ++x;
        continue;
      }
      const int x0 = x;
      while (x < markers.width() && markers.at(x, y) == colour) ++x;
      lines.push_back(Json::array({Json::array({x0, y}), Json::array({x - 1, y})}));
    }
  }
  return lines;
}

Json stage_body(const std::string& stage, const RgbImage& markers, bool advance) {
  return Json{{"stage", stage},
              {"object_strokes", strokes_of(markers, {0, 255, 0})},
              {"background_strokes", strokes_of(markers, {255, 0, 0})},
              {"advance", advance}};
}

BinaryMask mask_from_base64(const std::string& b64) {
  const RgbImage img = decode_image(base64_decode(b64));
  BinaryMask m(img.width(), img.height());
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x) m.set(x, y, img.at(x, y).r != 0);
  return m;
}

double disagreement(const BinaryMask& a, const BinaryMask& b) {
  std::size_t diff = 0;
  for (int y = 0; y < a.height(); ++y)
    for (int x = 0; x < a.width(); ++x) diff += a.at(x, y) != b.at(x, y);
  return static_cast<double>(diff) / static_cast<double>(b.count());
}

TrainedModel small_model() {
  FeatureTable table;
  for (int cls = 0; cls < 3; ++cls) {
    for (int i = 0; i < 4; ++i) {
      const SyntheticSample s = render_synthetic({}, cls, DatasetRole::Train, i);
      const SyntheticClass c = synthetic_class(cls);
      table.rows.push_back({c.species + std::to_string(i), c.genus, c.species,
                            extract_features(s.image, s.flower, s.lip).vector.to_vector()});
    }
  }
  TrainedModel m = train_ovo(table.matrix(), table.species(), {KernelType::Linear, 1.0, 0.0, 0.0, 3},
                             all_features(kFeatureCount));
  m.class_genera = table.genera_for(m.class_labels);
  return m;
}

std::string create_session(Server& s, const RgbImage& img) {
  auto res = s.client.Post("/api/sessions", png_body(img), "image/png");
  REQUIRE(res);
  REQUIRE(res->status == 201);
  return Json::parse(res->body)["session_id"].get<std::string>();
}

}  // namespace

TEST_CASE("base64 round trips and rejects bad input") {
  CHECK(base64_encode(std::vector<std::uint8_t>{}) == "");
  const std::string hello = "hello";
  const std::vector<std::uint8_t> bytes(hello.begin(), hello.end());
  CHECK(base64_encode(bytes) == "aGVsbG8=");
  CHECK(base64_decode("aGVsbG8=") == bytes);
  CHECK(base64_encode(std::vector<std::uint8_t>{0xfb, 0xff}) == "+/8=");
  std::mt19937 rng(5);
  for (int n = 0; n < 200; ++n) {
    std::vector<std::uint8_t> v(static_cast<std::size_t>(n));
    for (auto& b : v) b = static_cast<std::uint8_t>(rng());
    const std::string enc = base64_encode(v);
    CHECK(enc.size() == (v.size() + 2) / 3 * 4);
    CHECK(base64_decode(enc) == v);
  }
  CHECK_THROWS_AS(base64_decode("aGVsbG8"), Error);
  CHECK_THROWS_AS(base64_decode("aGV*bG8="), Error);
  CHECK_THROWS_AS(base64_decode("a==="), Error);
}

TEST_CASE("session store evicts the least recently used") {
  SessionStore store(2);
  const std::string a = store.create(SegSession(paint(rect(40, 40, 10, 10, 20, 20), {200, 40, 40})));
  const std::string b = store.create(SegSession(paint(rect(40, 40, 5, 5, 20, 20), {40, 200, 40})));
  CHECK(a.size() == 32);
  CHECK(a != b);
  REQUIRE(store.find(a));  // a becomes most recent
  const std::string c = store.create(SegSession(paint(rect(40, 40, 0, 0, 20, 20), {40, 40, 200})));
  CHECK(store.size() == 2);
  CHECK(store.find(a) != nullptr);
  CHECK(store.find(b) == nullptr);
  CHECK(store.find(c) != nullptr);
  CHECK_THROWS_AS(SessionStore(0), Error);
}

TEST_CASE("session ids are distinct hex strings") {
  std::set<std::string> ids;
  for (int i = 0; i < 1000; ++i) {
    const std::string id = SessionStore::new_id();
    CHECK(id.find_first_not_of("0123456789abcdef") == std::string::npos);
    ids.insert(id);
  }
  CHECK(ids.size() == 1000);
}

TEST_CASE("uploads create sessions; bad images are rejected") {
  Server s;
  const SyntheticSample sample = render_synthetic({}, 2, DatasetRole::Train, 0);

  auto raw = s.client.Post("/api/sessions", png_body(sample.image), "image/png");
  REQUIRE(raw);
  CHECK(raw->status == 201);
  const Json created = Json::parse(raw->body);
  CHECK(created["width"] == 480);
  CHECK(created["height"] == 400);

  httplib::MultipartFormDataItems items{{"image", png_body(sample.image), "flower.png", "image/png"}};
  auto multi = s.client.Post("/api/sessions", items);
  REQUIRE(multi);
  CHECK(multi->status == 201);

  auto bad = s.client.Post("/api/sessions", "definitely not an image", "image/png");
  REQUIRE(bad);
  CHECK(bad->status == 400);
  CHECK(Json::parse(bad->body).contains("error"));

  auto info = s.client.Get("/api/sessions/" + created["session_id"].get<std::string>());
  REQUIRE(info);
  CHECK(info->status == 200);
  CHECK(Json::parse(info->body)["stage"] == "flower");

  auto missing = s.client.Get("/api/sessions/0123456789abcdef0123456789abcdef");
  REQUIRE(missing);
  CHECK(missing->status == 404);
  CHECK(s.client.Get("/api/sessions/0123456789abcdef0123456789abcdef/regions")->status == 404);
  CHECK(s.post_json("/api/sessions/0123456789abcdef0123456789abcdef/markers", Json::object())->status == 404);
}

TEST_CASE("large uploads are downscaled to the working size") {
  Server s;
  auto res = s.client.Post("/api/sessions", png_body(paint(rect(1200, 1000, 300, 300, 400, 300), {200, 40, 90})),
                           "image/png");
  REQUIRE(res);
  REQUIRE(res->status == 201);
  const Json j = Json::parse(res->body);
  CHECK(j["width"] == 600);
  CHECK(j["height"] == 500);
}

TEST_CASE("regions overlay is a PNG of the session size") {
  Server s;
  const SyntheticSample sample = render_synthetic({}, 4, DatasetRole::Train, 0);
  const std::string id = create_session(s, sample.image);
  auto res = s.client.Get("/api/sessions/" + id + "/regions");
  REQUIRE(res);
  CHECK(res->status == 200);
  CHECK(res->get_header_value("Content-Type") == "image/png");
  const RgbImage overlay = decode_image({reinterpret_cast<const std::uint8_t*>(res->body.data()), res->body.size()});
  CHECK(overlay.width() == sample.image.width());
  CHECK(overlay.height() == sample.image.height());
  CHECK(!(overlay == sample.image));
}

TEST_CASE("marker workflow, stage conflicts and prediction") {
  Server s({}, small_model());
  const SyntheticSample sample = render_synthetic({}, 1, DatasetRole::Holdout, 0);
  const std::string id = create_session(s, sample.image);
  const std::string base = "/api/sessions/" + id;
  const RgbImage flower_markers = synthetic_markers(sample.flower, std::nullopt);
  const RgbImage lip_markers = synthetic_markers(sample.lip, sample.flower);

  SUBCASE("malformed requests") {
    CHECK(s.client.Post(base + "/markers", "{not json", "application/json")->status == 400);
    CHECK(s.post_json(base + "/markers", Json{{"stage", "petal"}})->status == 400);
    CHECK(s.post_json(base + "/markers", Json{{"stage", "flower"}, {"object_strokes", "x"}})->status == 400);
    CHECK(s.post_json(base + "/markers", Json{{"stage", "flower"}})->status == 422);
    // Object strokes only: the merge has no background to grow from.
    CHECK(s.post_json(base + "/markers", Json{{"stage", "flower"}, {"object_strokes", Json::array({Json::array({10, 10})})}})
              ->status == 422);
    CHECK(s.post_json(base + "/markers", Json{{"stage", "flower"}, {"advance", true}})->status == 409);
    CHECK(s.post_json(base + "/markers", stage_body("lip", lip_markers, false))->status == 409);
    CHECK(s.post_json(base + "/predict", Json::object())->status == 409);
  }

  SUBCASE("full run") {
    auto flower = s.post_json(base + "/markers", stage_body("flower", flower_markers, true));
    REQUIRE(flower);
    REQUIRE(flower->status == 200);
    const Json fj = Json::parse(flower->body);
    CHECK(fj["stage"] == "lip");
    CHECK(disagreement(mask_from_base64(fj["mask_png"]), sample.flower) < 0.01);
    const RgbImage masked = decode_image(base64_decode(fj["masked_image_png"].get<std::string>()));
    CHECK(masked.width() == sample.image.width());

    CHECK(s.post_json(base + "/markers", stage_body("flower", flower_markers, false))->status == 409);
    CHECK(s.client.Get(base + "/regions")->status == 200);

    auto lip = s.post_json(base + "/markers", stage_body("lip", lip_markers, false));
    REQUIRE(lip);
    REQUIRE(lip->status == 200);
    CHECK(disagreement(mask_from_base64(Json::parse(lip->body)["mask_png"]), sample.lip) < 0.01);
    auto accept = s.post_json(base + "/markers", Json{{"stage", "lip"}, {"advance", true}});
    REQUIRE(accept->status == 200);
    CHECK(Json::parse(accept->body)["stage"] == "done");

    const Json info = Json::parse(s.client.Get(base)->body);
    CHECK(info["has_flower"] == true);
    CHECK(info["has_lip"] == true);

    auto pred = s.post_json(base + "/predict", Json::object());
    REQUIRE(pred);
    REQUIRE(pred->status == 200);
    const Json pj = Json::parse(pred->body);
    CHECK(pj["species"] == synthetic_class(1).species);
    CHECK(pj["genus"] == synthetic_class(1).genus);
    CHECK(pj["votes"].size() == 3);

    CHECK(s.post_json(base + "/predict", Json{{"model", "nope"}})->status == 404);
    CHECK(s.post_json(base + "/predict", Json{{"model", "demo"}})->status == 200);
  }
}

TEST_CASE("models endpoint lists registered and directory models") {
  TempDir dir;
  save_model(small_model(), dir / "orchids.json");
  ServiceConfig cfg;
  cfg.models_dir = dir.path();
  Server s(cfg);
  auto res = s.client.Get("/api/models");
  REQUIRE(res);
  CHECK(res->status == 200);
  CHECK(Json::parse(res->body)["models"] == Json::array({"orchids"}));

  ServiceConfig missing;
  missing.models_dir = dir / "nowhere";
  CHECK_THROWS_AS(Service{missing}, Error);
}
