// Copyright 2026 The EDX Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <filesystem>
#include <fstream>
#include <random>
#include <thread>

#include <gtest/gtest.h>

#include "edx/service.hpp"
#include "fixtures.hpp"

namespace edx {
namespace {

Dataset make_dataset(std::string name, Corpus corpus) {
  Dataset d;
  d.name = std::move(name);
  d.snapshot = make_snapshot(std::move(corpus));
  d.model = train_lexicon(d.snapshot.index);
  return d;
}

class ApiTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    std::mt19937 rng(9);
    Corpus random = testing::random_corpus(rng);
    while (build_index(random).totals.positive_triggers == 0) random = testing::random_corpus(rng);
    std::vector<Dataset> ds;
    ds.push_back(make_dataset("golden", testing::golden_corpus()));
    ds.push_back(make_dataset("random", random));
    api_ = new Api(std::move(ds), {"http://localhost:5173"});
  }
  static void TearDownTestSuite() { delete api_; }

  static ApiResponse get(const std::string &path, std::map<std::string, std::string> params = {}) {
    ApiRequest req;
    req.path = path;
    req.params = std::move(params);
    return api_->handle(req);
  }

  static ApiResponse post(const std::string &path, const std::string &body) {
    ApiRequest req;
    req.method = "POST";
    req.path = path;
    req.body = body;
    return api_->handle(req);
  }

  static nlohmann::json body(const ApiResponse &r) { return nlohmann::json::parse(r.body); }

  static void expect_error(const ApiResponse &r, int status, const std::string &code) {
    EXPECT_EQ(r.status, status) << r.body;
    auto j = body(r);
    EXPECT_EQ(j["code"], code);
    EXPECT_TRUE(j["message"].is_string());
  }

  static Api *api_;
};

Api *ApiTest::api_ = nullptr;

TEST_F(ApiTest, Datasets) {
  ApiResponse r = get("/api/v1/datasets");
  ASSERT_EQ(r.status, 200);
  const Dataset &t2 = api_->dataset("golden");
  const Dataset &rnd = api_->dataset("random");
  Json expected = Json::array();
  expected.push_back(dataset_json("golden", t2.snapshot.corpus, t2.snapshot.index));
  expected.push_back(dataset_json("random", rnd.snapshot.corpus, rnd.snapshot.index));
  EXPECT_EQ(r.body, expected.dump());
}

TEST_F(ApiTest, TriggerStorm) {
  ApiResponse r = get("/api/v1/datasets/golden/triggers/storm");
  ASSERT_EQ(r.status, 200);
  auto j = body(r);
  EXPECT_EQ(j["positive_total"], 947);
  EXPECT_EQ(j["negative_count"], 771);
  EXPECT_EQ(j["per_event_counts"]["Catastrophe"], 925);
  // Trigger path segments are normalized.
  EXPECT_EQ(get("/api/v1/datasets/golden/triggers/Storm").body, r.body);
}

TEST_F(ApiTest, TriggerInstancesFilter) {
  ApiResponse r = get("/api/v1/datasets/golden/triggers/storm/instances", {{"event", "Attack"}});
  ASSERT_EQ(r.status, 200);
  EXPECT_EQ(body(r)["total"], 14);
  EXPECT_EQ(r.headers.at("X-Total-Count"), "14");
  EXPECT_EQ(body(get("/api/v1/datasets/golden/triggers/storm/instances",
                     {{"event", "NEGATIVE"}}))["total"], 771);
  EXPECT_EQ(body(get("/api/v1/datasets/golden/triggers/storm/instances"))["total"], 1718);
  // Event names with spaces travel percent-encoded in paths.
  EXPECT_EQ(get("/api/v1/datasets/golden/events/" + url_segment("Self Motion") + "/instances")
                .headers.at("X-Total-Count"),
            "5");
}

TEST_F(ApiTest, NotFoundErrors) {
  expect_error(get("/api/v1/datasets/nope/overview"), 404, "not_found");
  expect_error(get("/api/v1/datasets/golden/events/Nope/triggers"), 404, "not_found");
  expect_error(get("/api/v1/datasets/golden/triggers/hail"), 404, "not_found");
  expect_error(get("/api/v1/datasets/golden/triggers/storm/instances", {{"event", "Nope"}}), 404,
               "not_found");
  expect_error(get("/api/v1/nothing"), 404, "not_found");
  expect_error(get("/elsewhere"), 404, "not_found");
  expect_error(post("/api/v1/annotate", R"({"text":"storm","dataset":"nope"})"), 404,
               "not_found");
}

TEST_F(ApiTest, BadParameters) {
  expect_error(get("/api/v1/datasets/golden/events", {{"page", "0"}}), 400, "invalid_argument");
  expect_error(get("/api/v1/datasets/golden/events", {{"size", "500"}}), 400, "invalid_argument");
  expect_error(get("/api/v1/datasets/golden/events", {{"size", "ten"}}), 400, "invalid_argument");
  expect_error(get("/api/v1/datasets/golden/events", {{"sort", "weird"}}), 400,
               "invalid_argument");
  expect_error(get("/api/v1/datasets/golden/stats/sparsity", {{"k", "0"}}), 400,
               "invalid_argument");
  expect_error(get("/api/v1/datasets/golden/stats/dominance", {{"ratio", "abc"}}), 400,
               "invalid_argument");
  expect_error(get("/api/v1/datasets/golden/review-candidates", {{"category", "X"}}), 400,
               "invalid_argument");
  expect_error(get("/api/v1/datasets/golden/events/Attack/triggers", {{"limit", "0"}}), 400,
               "invalid_argument");
  expect_error(post("/api/v1/annotate", "{not json"), 400, "invalid_argument");
  expect_error(post("/api/v1/annotate", R"({"dataset":"golden"})"), 400, "invalid_argument");
  expect_error(post("/api/v1/annotate", R"({"text":"x","dataset":"golden","tau_neg":2})"), 400,
               "invalid_argument");
  expect_error(get("/api/v1/annotate"), 405, "invalid_argument");
}

TEST_F(ApiTest, OutOfRangePageIsEmptyWithTotal) {
  auto j = body(get("/api/v1/datasets/golden/events/Attack/instances", {{"page", "99"}}));
  EXPECT_EQ(j["total"], 16);
  EXPECT_TRUE(j["items"].empty());
}

TEST_F(ApiTest, AnnotateThresholdsAndLinks) {
  auto abstain = body(post("/api/v1/annotate",
                           R"({"text":"The storm hits New York.","dataset":"golden","tau_neg":0.6})"));
  EXPECT_TRUE(abstain["sentences"][0]["spans"].empty());
  ApiResponse r = post("/api/v1/annotate",
                       R"({"text":"The storm hits New York.","dataset":"golden","tau_neg":0.5})");
  ASSERT_EQ(r.status, 200);
  auto span = body(r)["sentences"][0]["spans"][0];
  EXPECT_EQ(span["event"], "Catastrophe");
  EXPECT_NEAR(span["confidence"].get<double>(), 925.0 / 947.0, 1e-12);
  EXPECT_EQ(span["trigger_url"], "/d/golden/trigger/storm");
  EXPECT_EQ(span["event_url"], "/d/golden/event/Catastrophe");
  // Same as the module call.
  LexiconModel m = api_->dataset("golden").model;
  m.thresholds.tau_neg = 0.5;
  EXPECT_EQ(r.body, to_json(annotate(m, "The storm hits New York."), "golden").dump());
}

TEST_F(ApiTest, CorsHeaders) {
  ApiRequest req;
  req.path = "/api/v1/datasets";
  req.origin = "http://localhost:5173";
  EXPECT_EQ(api_->handle(req).headers.at("Access-Control-Allow-Origin"), "http://localhost:5173");
  req.origin = "http://evil.example";
  EXPECT_FALSE(api_->handle(req).headers.count("Access-Control-Allow-Origin"));
  req.method = "OPTIONS";
  req.origin = "http://localhost:5173";
  EXPECT_EQ(api_->handle(req).status, 204);
}

// Every endpoint's payload equals the serialized direct module call.
TEST_F(ApiTest, ContractEqualsModuleCalls) {
  for (const std::string name : {"golden", "random"}) {
    const Dataset &ds = api_->dataset(name);
    const TriggerIndex &index = ds.snapshot.index;
    const Corpus &corpus = ds.snapshot.corpus;
    const std::string base = "/api/v1/datasets/" + name;

    EXPECT_EQ(get(base + "/overview").body, to_json(overview(index, corpus)).dump());

    for (Count k : {1, 3, 20}) {
      AnalyticsConfig config;
      config.min_instances = k;
      config.dominance_ratio = Ratio::parse("2.5");
      EXPECT_EQ(get(base + "/stats/sparsity", {{"k", std::to_string(k)}}).body,
                to_json(sparsity(index, config)).dump());
      EXPECT_EQ(get(base + "/stats/dominance", {{"k", std::to_string(k)}, {"ratio", "2.5"}}).body,
                to_json(dominance(index, config)).dump());
      auto candidates = flag_review_candidates(index, corpus, config);
      EXPECT_EQ(get(base + "/review-candidates",
                    {{"k", std::to_string(k)}, {"ratio", "2.5"}, {"size", "7"}, {"page", "2"}})
                    .body,
                to_json(paginate(candidates, 2, 7)).dump());
    }
    auto all = flag_review_candidates(index, corpus);
    std::erase_if(all, [](const auto &c) { return c.category != ReviewCategory::kNegativeTrigger; });
    EXPECT_EQ(get(base + "/review-candidates", {{"category", "NEGATIVE_TRIGGER"}}).body,
              to_json(paginate(all, 1, 20)).dump());

    Count event_total = 0;
    for (const auto &[id, e] : index.by_event) {
      const std::string ev = url_segment(e.event.name);
      EXPECT_EQ(get(base + "/events/" + ev + "/triggers").body,
                top_triggers_json(e.event.name, 10, top_triggers(index, e.event.name, 10)).dump());
      EXPECT_EQ(get(base + "/events/" + ev + "/triggers", {{"limit", "1"}}).body,
                top_triggers_json(e.event.name, 1, top_triggers(index, e.event.name, 1)).dump());
      EXPECT_EQ(get(base + "/events/" + ev + "/instances", {{"page", "1"}, {"size", "3"}}).body,
                to_json(instances_for_event(index, corpus, e.event.name, 1, 3)).dump());
      EXPECT_EQ(get(base + "/events/" + ev).body,
                event_summary_json(summarize_event(index, e), true).dump());
      event_total += 1;
    }
    auto events = body(get(base + "/events", {{"sort", "name"}, {"size", "200"}}));
    EXPECT_EQ(events["total"], event_total);

    for (const auto &[word, entry] : index.by_trigger) {
      const std::string w = url_segment(word);
      EXPECT_EQ(get(base + "/triggers/" + w).body, trigger_json(index, entry).dump());
      EXPECT_EQ(get(base + "/triggers/" + w + "/instances", {{"size", "5"}}).body,
                to_json(instances_for_trigger(index, corpus, word, std::nullopt, 1, 5)).dump());
      for (const auto &[label, refs] : entry.instance_refs) {
        std::string filter = label == kNegative ? "NEGATIVE" : index.label_name(label);
        EXPECT_EQ(get(base + "/triggers/" + w + "/instances", {{"event", filter}}).body,
                  to_json(instances_for_trigger(index, corpus, word, filter, 1, 20)).dump());
      }
    }
  }
}

TEST_F(ApiTest, RepeatedGetsAreByteIdentical) {
  for (const char *path : {"/api/v1/datasets/golden/overview",
                           "/api/v1/datasets/golden/stats/dominance",
                           "/api/v1/datasets/golden/review-candidates"})
    EXPECT_EQ(get(path).body, get(path).body);
}

TEST_F(ApiTest, EventsSortedByCount) {
  auto j = body(get("/api/v1/datasets/golden/events", {{"size", "3"}}));
  EXPECT_EQ(j["total"], 8);
  ASSERT_EQ(j["items"].size(), 3u);
  EXPECT_EQ(j["items"][0]["name"], "Catastrophe");
  EXPECT_EQ(j["items"][1]["name"], "Damaging");
  EXPECT_EQ(j["items"][2]["name"], "Attack");
}

TEST(ServiceConfig, LoadsAndResolvesRelativePaths) {
  auto dir = std::filesystem::temp_directory_path() / "edx_cfg_test";
  std::filesystem::create_directories(dir);
  save_snapshot(make_snapshot(testing::golden_corpus()), dir / "t2.snap");
  {
    std::ofstream out(dir / "edx.json");
    out << R"({"listen":{"host":"127.0.0.1","port":0},
               "datasets":[{"name":"maven-like","snapshot":"t2.snap"}],
               "cors_origins":["*"]})";
  }
  ServiceConfig config = load_service_config(dir / "edx.json");
  ASSERT_EQ(config.datasets.size(), 1u);
  EXPECT_EQ(config.datasets[0].snapshot, dir / "t2.snap");
  auto datasets = load_datasets(config);
  ASSERT_EQ(datasets.size(), 1u);
  EXPECT_EQ(datasets[0].name, "maven-like");
  EXPECT_EQ(datasets[0].model.entries.size(), 3u);
  std::filesystem::remove_all(dir);
}

TEST(ServiceConfig, RejectsEmptyDatasetList) {
  auto path = std::filesystem::temp_directory_path() / "edx_cfg_empty.json";
  {
    std::ofstream out(path);
    out << R"({"datasets":[]})";
  }
  EXPECT_THROW(load_service_config(path), Error);
  std::filesystem::remove(path);
}

// End to end over a real socket.
TEST(HttpServer, ServesApi) {
  std::vector<Dataset> ds;
  ds.push_back(make_dataset("golden", testing::golden_corpus()));
  Api api(std::move(ds), {"*"});
  httplib::Server server;
  mount(server, api);
  int port = server.bind_to_any_port("127.0.0.1");
  ASSERT_GT(port, 0);
  std::thread thread([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  httplib::Client client("127.0.0.1", port);
  auto res = client.Get("/api/v1/datasets/golden/triggers/storm/instances?event=Attack&size=5");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  EXPECT_EQ(res->get_header_value("X-Total-Count"), "14");
  EXPECT_EQ(nlohmann::json::parse(res->body)["items"].size(), 5u);

  auto spaced = client.Get("/api/v1/datasets/golden/events/Self%20Motion/triggers");
  ASSERT_TRUE(spaced);
  EXPECT_EQ(spaced->status, 200);
  EXPECT_EQ(nlohmann::json::parse(spaced->body)["triggers"][0]["trigger"], "storm");

  auto missing = client.Get("/api/v1/datasets/none/overview");
  ASSERT_TRUE(missing);
  EXPECT_EQ(missing->status, 404);
  EXPECT_EQ(nlohmann::json::parse(missing->body)["code"], "not_found");

  auto annotated = client.Post("/api/v1/annotate",
                               R"({"text":"The storm hits New York.","dataset":"golden"})",
                               "application/json");
  ASSERT_TRUE(annotated);
  EXPECT_EQ(annotated->status, 200);
  EXPECT_EQ(nlohmann::json::parse(annotated->body)["sentences"][0]["spans"][0]["event"],
            "Catastrophe");

  server.stop();
  thread.join();
}

}  // namespace
}  // namespace edx
