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

// edx: ingest event-detection corpora, report on them, and run the
// lexicon annotator and HTTP service.
//
// Exit status: 0 success, 1 data error, 2 usage error (bad flags or
// missing input files).

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "edx/analytics.hpp"
#include "edx/annotator.hpp"
#include "edx/ingest.hpp"
#include "edx/report_text.hpp"
#include "edx/serialize.hpp"
#include "edx/service.hpp"
#include "edx/snapshot.hpp"

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string utc_timestamp() {
  std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void require_file(const std::string &path, const char *flag) {
  if (!std::filesystem::is_regular_file(path))
    throw UsageError(std::string(flag) + ": file not found: " + path);
}

std::string read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw edx::Error(edx::ErrorCode::kIo, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit(const edx::Json &json) { std::cout << json.dump() << '\n'; }

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Event detection corpus explorer"};
  app.require_subcommand(1);

  // ingest
  std::string format, input, out;
  bool json = false;
  auto *ingest = app.add_subcommand("ingest", "Parse a dataset file into a snapshot");
  ingest->add_option("--format", format, "maven, rams, aldg or unified")
      ->required()
      ->check(CLI::IsMember({"maven", "rams", "aldg", "unified"}));
  ingest->add_option("--input", input, "Dataset file")->required();
  ingest->add_option("--out", out, "Snapshot file to write")->required();
  ingest->add_flag("--json", json, "Print ingest statistics as JSON");

  // stats
  std::string report, snapshot_path;
  edx::Count k = 20, below = 100;
  std::string ratio = "5";
  auto *stats = app.add_subcommand("stats", "Dataset statistics report");
  stats->add_option("report", report, "overview, sparsity or dominance")
      ->required()
      ->check(CLI::IsMember({"overview", "sparsity", "dominance"}));
  stats->add_option("--snapshot", snapshot_path)->required();
  stats->add_option("--k", k, "Minimum positive instances for the cohort");
  stats->add_option("--ratio", ratio, "Dominance ratio threshold");
  stats->add_option("--below", below, "Overview: list events with fewer mentions");
  stats->add_flag("--json", json);

  // audit
  std::string category;
  double theta = 0.5;
  edx::Count rare = 2;
  std::optional<edx::Count> limit;
  auto *audit = app.add_subcommand("audit", "List debatable-annotation review candidates");
  audit->add_option("--snapshot", snapshot_path)->required();
  audit->add_option("--category", category,
                    "NEGATIVE_TRIGGER, TRIGGER_WRONG_EVENT or EVENT_AMBIGUITY");
  audit->add_option("--k", k);
  audit->add_option("--ratio", ratio);
  audit->add_option("--theta", theta, "Positive-share floor for negative-trigger flags");
  audit->add_option("--rare-max", rare, "Largest minority count flagged as wrong event");
  audit->add_option("--limit", limit, "Print at most this many candidates");
  audit->add_flag("--json", json);

  // train
  double tau_neg = 0.5, tau_event = 0.5;
  auto *train = app.add_subcommand("train", "Train the lexicon annotator from a snapshot");
  train->add_option("--snapshot", snapshot_path)->required();
  train->add_option("--out", out, "Model file to write")->required();
  train->add_option("--tau-neg", tau_neg)->check(CLI::Range(0.0, 1.0));
  train->add_option("--tau-event", tau_event)->check(CLI::Range(0.0, 1.0));

  // annotate
  std::string model_path, text;
  auto *annotate = app.add_subcommand("annotate", "Annotate text with a lexicon model");
  annotate->add_option("--model", model_path)->required();
  auto *text_opt = annotate->add_option("--text", text);
  auto *input_opt = annotate->add_option("--input", input, "Text file");
  text_opt->excludes(input_opt);
  annotate->add_flag("--json", json);

  // evaluate
  auto *evaluate = app.add_subcommand("evaluate", "Score a model against a labeled snapshot");
  evaluate->add_option("--model", model_path)->required();
  evaluate->add_option("--snapshot", snapshot_path)->required();
  evaluate->add_flag("--json", json);

  // serve
  std::string config_path;
  auto *serve = app.add_subcommand("serve", "Run the HTTP API");
  serve->add_option("--config", config_path, "Service config (falls back to $EDX_CONFIG)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    edx::AnalyticsConfig config;
    config.min_instances = k;
    config.dominance_ratio = edx::Ratio::parse(ratio);
    config.events_below = below;
    config.negative_anomaly_share = theta;
    config.rare_event_max = rare;

    if (*ingest) {
      require_file(input, "--input");
      edx::IngestResult result = edx::ingest(input, edx::parse_format(format));
      edx::save_snapshot(edx::make_snapshot(std::move(result.corpus)), out);
      if (json)
        emit(edx::to_json(result.stats));
      else
        std::cout << edx::to_text(result.stats);
    } else if (*stats) {
      require_file(snapshot_path, "--snapshot");
      config.check();
      edx::Snapshot snap = edx::load_snapshot(snapshot_path);
      if (report == "sparsity") {
        auto r = edx::sparsity(snap.index, config);
        json ? emit(edx::to_json(r)) : void(std::cout << edx::to_text(r));
      } else if (report == "dominance") {
        auto r = edx::dominance(snap.index, config);
        json ? emit(edx::to_json(r)) : void(std::cout << edx::to_text(r));
      } else {
        auto r = edx::overview(snap.index, snap.corpus, config);
        json ? emit(edx::to_json(r)) : void(std::cout << edx::to_text(r));
      }
    } else if (*audit) {
      require_file(snapshot_path, "--snapshot");
      config.check();
      std::optional<edx::ReviewCategory> only;
      if (!category.empty()) only = edx::parse_review_category(category);
      edx::Snapshot snap = edx::load_snapshot(snapshot_path);
      auto candidates = edx::flag_review_candidates(snap.index, snap.corpus, config);
      if (only)
        std::erase_if(candidates, [&](const auto &c) { return c.category != *only; });
      if (limit && static_cast<std::size_t>(*limit) < candidates.size())
        candidates.resize(static_cast<std::size_t>(*limit));
      if (json) {
        edx::Json list = edx::Json::array();
        for (const auto &c : candidates) list.push_back(edx::to_json(c));
        emit(list);
      } else {
        std::cout << edx::to_text(candidates);
      }
    } else if (*train) {
      require_file(snapshot_path, "--snapshot");
      edx::Snapshot snap = edx::load_snapshot(snapshot_path);
      edx::LexiconModel model =
          edx::train_lexicon(snap.index, {tau_neg, tau_event}, utc_timestamp());
      edx::save_model(model, out);
      std::cout << "trained " << model.entries.size() << " lexicon entries from "
                << model.source_corpus << " -> " << out << '\n';
    } else if (*annotate) {
      require_file(model_path, "--model");
      if (*input_opt) {
        require_file(input, "--input");
        text = read_file(input);
      } else if (!*text_opt) {
        throw UsageError("annotate needs --text or --input");
      }
      edx::LexiconModel model = edx::load_model(model_path);
      edx::AnnotatedText result = edx::annotate(model, text);
      if (json)
        emit(edx::to_json(result, model.source_corpus));
      else
        std::cout << edx::to_text(result);
    } else if (*evaluate) {
      require_file(model_path, "--model");
      require_file(snapshot_path, "--snapshot");
      edx::Snapshot snap = edx::load_snapshot(snapshot_path);
      auto r = edx::evaluate(edx::load_model(model_path), snap.corpus);
      json ? emit(edx::to_json(r)) : void(std::cout << edx::to_text(r));
    } else if (*serve) {
      if (config_path.empty()) {
        const char *env = std::getenv("EDX_CONFIG");
        if (!env || !*env) throw UsageError("serve needs --config or EDX_CONFIG");
        config_path = env;
      }
      require_file(config_path, "--config");
      edx::ServiceConfig sc = edx::load_service_config(config_path);
      std::cerr << "edx: serving " << sc.datasets.size() << " dataset(s) on "
                << sc.host << ":" << sc.port << '\n';
      edx::serve(sc);
    }
  } catch (const UsageError &e) {
    std::cerr << "edx: " << e.what() << "\n\n" << app.help();
    return 2;
  } catch (const std::exception &e) {
    std::cerr << "edx: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
