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

// JSON-over-HTTP API. Api holds the datasets loaded at startup and maps a
// request to a response without touching the network; serve() binds it to
// an HTTP listener. Nothing is mutated after construction, so requests are
// handled concurrently without locking.
//
// Routes (all under /api/v1):
//   GET  /datasets
//   GET  /datasets/{ds}/overview
//   GET  /datasets/{ds}/events?sort=count|name&page&size
//   GET  /datasets/{ds}/events/{event}
//   GET  /datasets/{ds}/events/{event}/triggers?limit=10
//   GET  /datasets/{ds}/events/{event}/instances?page&size
//   GET  /datasets/{ds}/triggers/{word}
//   GET  /datasets/{ds}/triggers/{word}/instances?event=<name|NEGATIVE>&page&size
//   GET  /datasets/{ds}/stats/sparsity?k=
//   GET  /datasets/{ds}/stats/dominance?ratio=&k=
//   GET  /datasets/{ds}/review-candidates?category=&k=&ratio=&page&size
//   POST /annotate {text, dataset, tau_neg?, tau_event?}
//
// Paged responses carry {total, page, page_size, items} and the total in an
// X-Total-Count header. Errors are {code, message} with code one
// of not_found (404), invalid_argument (400, 405) or internal (500).

#ifndef EDX_SERVICE_HPP
#define EDX_SERVICE_HPP

#include <charconv>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "edx/analytics.hpp"
#include "edx/annotator.hpp"
#include "edx/error.hpp"
#include "edx/index.hpp"
#include "edx/serialize.hpp"
#include "edx/snapshot.hpp"

namespace edx {

inline constexpr std::string_view kApiPrefix = "/api/v1";

struct ApiRequest {
  std::string method = "GET";
  std::string path;  // raw target path, percent-encoded segments
  std::map<std::string, std::string> params;
  std::string body;
  std::string origin;
};

struct ApiResponse {
  int status = 200;
  std::string body;
  std::map<std::string, std::string> headers;
};

struct Dataset {
  std::string name;
  Snapshot snapshot;
  LexiconModel model;
};

struct DatasetConfig {
  std::string name;  // defaults to the corpus name
  std::filesystem::path snapshot;
  std::optional<std::filesystem::path> model;
};

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::vector<DatasetConfig> datasets;
  std::optional<std::filesystem::path> default_model;
  std::vector<std::string> cors_origins;
  std::optional<std::filesystem::path> static_dir;
};

// Reads the service config. Relative paths resolve against the config
// file's directory.
inline ServiceConfig load_service_config(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw_io("cannot open config " + path.string());
  auto base = path.parent_path();
  auto resolve = [&](const std::string &p) {
    std::filesystem::path fp(p);
    return fp.is_absolute() ? fp : base / fp;
  };
  ServiceConfig config;
  try {
    nlohmann::json j = nlohmann::json::parse(in);
    if (j.contains("listen")) {
      config.host = j["listen"].value("host", config.host);
      config.port = j["listen"].value("port", config.port);
    }
    for (const auto &d : j.at("datasets")) {
      DatasetConfig dc;
      dc.name = d.value("name", "");
      dc.snapshot = resolve(d.at("snapshot").get<std::string>());
      if (d.contains("model")) dc.model = resolve(d["model"].get<std::string>());
      config.datasets.push_back(std::move(dc));
    }
    if (j.contains("model")) config.default_model = resolve(j["model"].get<std::string>());
    if (j.contains("cors_origins"))
      config.cors_origins = j["cors_origins"].get<std::vector<std::string>>();
    if (j.contains("static_dir"))
      config.static_dir = resolve(j["static_dir"].get<std::string>());
  } catch (const nlohmann::json::exception &e) {
    throw_invalid("invalid config " + path.string() + ": " + e.what());
  }
  if (config.datasets.empty()) throw_invalid("config lists no datasets");
  if (config.port < 0 || config.port > 65535) throw_invalid("invalid listen port");
  return config;
}

inline std::vector<Dataset> load_datasets(const ServiceConfig &config) {
  std::optional<LexiconModel> fallback;
  if (config.default_model) fallback = load_model(*config.default_model);
  std::vector<Dataset> out;
  for (const auto &dc : config.datasets) {
    Dataset d;
    d.snapshot = load_snapshot(dc.snapshot);
    d.name = dc.name.empty() ? d.snapshot.corpus.name : dc.name;
    if (dc.model)
      d.model = load_model(*dc.model);
    else if (fallback)
      d.model = *fallback;
    else
      d.model = train_lexicon(d.snapshot.index);
    out.push_back(std::move(d));
  }
  return out;
}

namespace detail {

inline std::string percent_decode(std::string_view s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '%' && i + 2 < s.size()) {
      int v = 0;
      auto [p, ec] = std::from_chars(s.data() + i + 1, s.data() + i + 3, v, 16);
      if (ec == std::errc() && p == s.data() + i + 3) {
        out.push_back(static_cast<char>(v));
        i += 2;
        continue;
      }
    }
    out.push_back(s[i]);
  }
  return out;
}

inline std::vector<std::string> path_segments(std::string_view path) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= path.size()) {
    std::size_t next = path.find('/', pos);
    if (next == std::string_view::npos) next = path.size();
    if (next > pos) out.push_back(percent_decode(path.substr(pos, next - pos)));
    pos = next + 1;
  }
  return out;
}

}  // namespace detail

class Api {
 public:
  explicit Api(std::vector<Dataset> datasets, std::vector<std::string> cors_origins = {})
      : cors_origins_(cors_origins.begin(), cors_origins.end()) {
    for (auto &d : datasets) {
      std::string name = d.name;
      if (!datasets_.emplace(name, std::move(d)).second)
        throw_invalid("duplicate dataset name " + name);
    }
  }

  const Dataset &dataset(const std::string &name) const {
    auto it = datasets_.find(name);
    if (it == datasets_.end()) throw_not_found("unknown dataset: " + name);
    return it->second;
  }

  ApiResponse handle(const ApiRequest &req) const {
    ApiResponse res;
    try {
      if (req.method == "OPTIONS") {
        res.status = 204;
      } else {
        res = route(req);
      }
    } catch (const Error &e) {
      res = error_response(e.code(), e.what());
    } catch (const std::exception &e) {
      res = error_response(std::nullopt, e.what());
    }
    add_cors(req, res);
    return res;
  }

 private:
  static ApiResponse json_response(const Json &body, int status = 200) {
    ApiResponse res;
    res.status = status;
    res.body = body.dump();
    res.headers["Content-Type"] = "application/json";
    return res;
  }

  static ApiResponse paged(const Json &body) {
    ApiResponse res = json_response(body);
    res.headers["X-Total-Count"] = std::to_string(body.at("total").get<Count>());
    return res;
  }

  static ApiResponse error_response(std::optional<ErrorCode> code,
                                    const std::string &message,
                                    int status_override = 0) {
    int status = 500;
    std::string name = "internal";
    if (code == ErrorCode::kNotFound) {
      status = 404;
      name = "not_found";
    } else if (code == ErrorCode::kInvalidArgument) {
      status = 400;
      name = "invalid_argument";
    }
    if (status_override) status = status_override;
    return json_response({{"code", name}, {"message", message}}, status);
  }

  void add_cors(const ApiRequest &req, ApiResponse &res) const {
    if (req.origin.empty()) return;
    if (cors_origins_.count("*") || cors_origins_.count(req.origin)) {
      res.headers["Access-Control-Allow-Origin"] =
          cors_origins_.count("*") ? "*" : req.origin;
      res.headers["Access-Control-Allow-Methods"] = "GET, POST, OPTIONS";
      res.headers["Access-Control-Allow-Headers"] = "Content-Type";
      res.headers["Access-Control-Expose-Headers"] = "X-Total-Count";
    }
  }

  static std::optional<std::string> param(const ApiRequest &req, const char *key) {
    auto it = req.params.find(key);
    if (it == req.params.end()) return std::nullopt;
    return it->second;
  }

  static Count int_param(const ApiRequest &req, const char *key, Count fallback) {
    auto v = param(req, key);
    if (!v) return fallback;
    Count out = 0;
    auto [p, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
    if (v->empty() || ec != std::errc() || p != v->data() + v->size())
      throw_invalid(std::string("parameter '") + key + "' must be an integer");
    return out;
  }

  static AnalyticsConfig analytics_config(const ApiRequest &req) {
    AnalyticsConfig config;
    config.min_instances = int_param(req, "k", config.min_instances);
    if (auto r = param(req, "ratio")) config.dominance_ratio = Ratio::parse(*r);
    config.check();
    return config;
  }

  static std::pair<Count, Count> page_params(const ApiRequest &req) {
    Count page = int_param(req, "page", 1);
    Count size = int_param(req, "size", 20);
    check_page(page, size);
    return {page, size};
  }

  ApiResponse route(const ApiRequest &req) const {
    std::vector<std::string> seg = detail::path_segments(req.path);
    if (seg.size() < 2 || seg[0] != "api" || seg[1] != "v1")
      throw_not_found("no route for " + req.path);
    seg.erase(seg.begin(), seg.begin() + 2);

    if (seg.size() == 1 && seg[0] == "annotate") {
      if (req.method != "POST") return method_not_allowed();
      return annotate(req);
    }
    if (req.method != "GET" && req.method != "HEAD") {
      if (!seg.empty() && seg[0] == "datasets") return method_not_allowed();
      throw_not_found("no route for " + req.path);
    }
    if (seg.size() == 1 && seg[0] == "datasets") {
      Json list = Json::array();
      for (const auto &[name, d] : datasets_)
        list.push_back(dataset_json(name, d.snapshot.corpus, d.snapshot.index));
      return json_response(list);
    }
    if (seg.size() < 3 || seg[0] != "datasets") throw_not_found("no route for " + req.path);

    const Dataset &ds = dataset(seg[1]);
    const TriggerIndex &index = ds.snapshot.index;
    const Corpus &corpus = ds.snapshot.corpus;
    const std::string &what = seg[2];

    if (seg.size() == 3 && what == "overview")
      return json_response(to_json(overview(index, corpus)));
    if (seg.size() == 3 && what == "events") return events(req, index);
    if (seg.size() >= 4 && seg.size() <= 5 && what == "events") {
      const std::string &event = seg[3];
      if (seg.size() == 4)
        return json_response(event_summary_json(summarize_event(index, index.event(event)), true));
      if (seg[4] == "triggers") {
        Count limit = int_param(req, "limit", 10);
        return json_response(
            top_triggers_json(event, limit, top_triggers(index, event, limit)));
      }
      if (seg[4] == "instances") {
        auto [page, size] = page_params(req);
        return paged(to_json(instances_for_event(index, corpus, event, page, size)));
      }
    }
    if (seg.size() >= 4 && seg.size() <= 5 && what == "triggers") {
      std::string word = normalize_trigger(seg[3]);
      if (seg.size() == 4) return json_response(trigger_json(index, index.trigger(word)));
      if (seg[4] == "instances") {
        auto [page, size] = page_params(req);
        auto filter = param(req, "event");
        std::optional<std::string_view> event;
        if (filter && !filter->empty()) event = *filter;
        return paged(to_json(instances_for_trigger(index, corpus, word, event, page, size)));
      }
    }
    if (seg.size() == 4 && what == "stats") {
      if (seg[3] == "sparsity") return json_response(to_json(sparsity(index, analytics_config(req))));
      if (seg[3] == "dominance") return json_response(to_json(dominance(index, analytics_config(req))));
    }
    if (seg.size() == 3 && what == "review-candidates") return review(req, ds);
    throw_not_found("no route for " + req.path);
  }

  static ApiResponse method_not_allowed() {
    return error_response(ErrorCode::kInvalidArgument, "method not allowed", 405);
  }

  static ApiResponse events(const ApiRequest &req, const TriggerIndex &index) {
    std::string sort = param(req, "sort").value_or("count");
    if (sort != "count" && sort != "name")
      throw_invalid("sort must be 'count' or 'name'");
    auto [page, size] = page_params(req);
    std::vector<EventSummary> all;
    for (const auto &[id, e] : index.by_event) {
      EventSummary s;
      s.name = e.event.name;
      s.type_id = e.event.type_id;
      s.mention_count = e.mention_count;
      s.distinct_triggers = static_cast<Count>(e.trigger_counts.size());
      all.push_back(std::move(s));
    }
    std::sort(all.begin(), all.end(), [&](const EventSummary &a, const EventSummary &b) {
      if (sort == "count" && a.mention_count != b.mention_count)
        return a.mention_count > b.mention_count;
      return a.name < b.name;
    });
    Page<EventSummary> out = paginate(all, page, size);
    return paged(page_json(out, [](const EventSummary &e) {
      return event_summary_json(e, false);
    }));
  }

  static ApiResponse review(const ApiRequest &req, const Dataset &ds) {
    AnalyticsConfig config = analytics_config(req);
    auto [page, size] = page_params(req);
    std::optional<ReviewCategory> category;
    if (auto c = param(req, "category"); c && !c->empty())
      category = parse_review_category(*c);
    std::vector<ReviewCandidate> all =
        flag_review_candidates(ds.snapshot.index, ds.snapshot.corpus, config);
    if (category)
      std::erase_if(all, [&](const ReviewCandidate &c) { return c.category != *category; });
    return paged(to_json(paginate(all, page, size)));
  }

  ApiResponse annotate(const ApiRequest &req) const {
    nlohmann::json body;
    try {
      body = nlohmann::json::parse(req.body);
    } catch (const nlohmann::json::exception &) {
      throw_invalid("request body is not valid JSON");
    }
    if (!body.is_object()) throw_invalid("request body must be a JSON object");
    if (!body.contains("text") || !body["text"].is_string())
      throw_invalid("'text' must be a string");
    if (!body.contains("dataset") || !body["dataset"].is_string())
      throw_invalid("'dataset' must be a string");
    const Dataset &ds = dataset(body["dataset"].get<std::string>());
    LexiconModel model = ds.model;
    auto threshold = [&](const char *key, double &slot) {
      if (!body.contains(key) || body[key].is_null()) return;
      if (!body[key].is_number()) throw_invalid(std::string("'") + key + "' must be a number");
      slot = body[key].get<double>();
    };
    threshold("tau_neg", model.thresholds.tau_neg);
    threshold("tau_event", model.thresholds.tau_event);
    LexiconAnnotator annotator(std::move(model));
    return json_response(to_json(annotator.annotate(body["text"].get<std::string>()), ds.name));
  }

 private:
  std::map<std::string, Dataset> datasets_;
  std::set<std::string> cors_origins_;
};

inline ApiRequest to_api_request(const httplib::Request &req) {
  ApiRequest out;
  out.method = req.method;
  std::string_view target = req.target;
  out.path = std::string(target.substr(0, target.find('?')));
  for (const auto &[k, v] : req.params) out.params.emplace(k, v);
  out.body = req.body;
  out.origin = req.get_header_value("Origin");
  return out;
}

// Binds the API to an HTTP server. `server` must outlive the listener.
inline void mount(httplib::Server &server, const Api &api) {
  auto handler = [&api](const httplib::Request &req, httplib::Response &res) {
    ApiResponse out = api.handle(to_api_request(req));
    res.status = out.status;
    std::string type = "application/json";
    for (const auto &[k, v] : out.headers) {
      if (k == "Content-Type")
        type = v;
      else
        res.set_header(k, v);
    }
    if (!out.body.empty()) res.set_content(out.body, type);
  };
  server.Get(".*", handler);
  server.Post(".*", handler);
  server.Options(".*", handler);
  server.Put(".*", handler);
  server.Delete(".*", handler);
}

// Blocks serving `config` until the server is stopped.
inline void serve(const ServiceConfig &config) {
  Api api(load_datasets(config), config.cors_origins);
  httplib::Server server;
  if (config.static_dir && !server.set_mount_point("/", config.static_dir->string()))
    throw_io("cannot serve static directory " + config.static_dir->string());
  mount(server, api);
  if (!server.listen(config.host, config.port))
    throw_io("cannot listen on " + config.host + ":" + std::to_string(config.port));
}

}  // namespace edx

#endif  // EDX_SERVICE_HPP
