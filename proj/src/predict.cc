// Copyright 2026 The Slotforge Authors.
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

#include "predict.h"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <optional>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "error.h"
#include "httplib.h"
#include "io.h"

namespace slotforge {
namespace {

using nlohmann::json;

struct Endpoint {
  std::string origin;  // scheme://host[:port]
  std::string path;    // <base>/generate
};

Endpoint parse_endpoint(const std::string& endpoint) {
  const std::string scheme = "http://";
  if (endpoint.rfind(scheme, 0) != 0) {
    throw usage_error("endpoint must start with http:// (got '" + endpoint + "')");
  }
  const size_t slash = endpoint.find('/', scheme.size());
  Endpoint out;
  out.origin = endpoint.substr(0, slash);
  std::string base = slash == std::string::npos ? "" : endpoint.substr(slash);
  while (!base.empty() && base.back() == '/') base.pop_back();
  out.path = base + "/generate";
  if (out.origin.size() == scheme.size()) {
    throw usage_error("endpoint has no host: '" + endpoint + "'");
  }
  return out;
}

bool is_transient(int status) {
  return status == 408 || status == 429 || status >= 500;
}

// Posts one batch; returns the predictions or throws a remote error.
std::vector<std::string> post_batch(httplib::Client& client,
                                    const Endpoint& endpoint,
                                    const FetchConfig& config,
                                    const std::vector<std::string>& sources,
                                    const std::string& where) {
  const std::string body = json{{"sources", sources}}.dump();
  httplib::Headers headers;
  if (!config.bearer_token.empty()) {
    headers.emplace("Authorization", "Bearer " + config.bearer_token);
  }
  std::string last_failure;
  for (int attempt = 0; attempt <= config.max_retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(config.initial_backoff * (1LL << (attempt - 1)));
    }
    auto res = client.Post(endpoint.path, headers, body, "application/json");
    if (!res) {
      last_failure = "connection failure (" + httplib::to_string(res.error()) + ")";
      continue;
    }
    if (res->status != 200) {
      last_failure = "status " + std::to_string(res->status);
      if (is_transient(res->status)) continue;
      throw remote_error(where + ": service answered " + last_failure);
    }
    json parsed;
    try {
      parsed = json::parse(res->body);
    } catch (const json::parse_error& e) {
      throw remote_error(where + ": response is not JSON (" + e.what() + ")");
    }
    auto it = parsed.find("predictions");
    if (!parsed.is_object() || it == parsed.end() || !it->is_array()) {
      throw remote_error(where + ": response lacks a 'predictions' array");
    }
    std::vector<std::string> out;
    for (const auto& p : *it) {
      if (!p.is_string()) throw remote_error(where + ": non-string prediction");
      out.push_back(p.get<std::string>());
    }
    if (out.size() != sources.size()) {
      throw remote_error(where + ": expected " + std::to_string(sources.size()) +
                         " predictions, got " + std::to_string(out.size()));
    }
    return out;
  }
  throw remote_error(where + ": giving up after " +
                     std::to_string(config.max_retries + 1) + " attempts, last " +
                     last_failure);
}

}  // namespace

std::vector<RawPrediction> parse_predictions(std::istream& in) {
  std::vector<RawPrediction> out;
  std::map<PredictionKey, size_t> first_line;
  for_each_record_line(in, [&](size_t line_number, const std::string& line) {
    const json record = parse_record(line_number, line);
    RawPrediction p;
    try {
      p.key.tweet_id = record.at("tweet_id").get<std::string>();
      p.key.slot = record.at("slot").get<std::string>();
      p.text = record.at("text").get<std::string>();
    } catch (const json::exception& e) {
      throw data_error("line " + std::to_string(line_number) +
                       ": malformed prediction record (" + e.what() + ")");
    }
    auto [it, inserted] = first_line.emplace(p.key, line_number);
    if (!inserted) {
      throw data_error("line " + std::to_string(line_number) +
                       ": duplicate prediction key " + describe(p.key) +
                       " (first on line " + std::to_string(it->second) + ")");
    }
    out.push_back(std::move(p));
  });
  return out;
}

std::vector<RawPrediction> load_predictions(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open predictions " + path.string());
  return parse_predictions(in);
}

void write_predictions(std::span<const RawPrediction> predictions,
                       std::ostream& out) {
  for (const auto& p : predictions) {
    out << dump_record({{"tweet_id", p.key.tweet_id},
                        {"slot", p.key.slot},
                        {"text", p.text}})
        << '\n';
  }
}

void save_predictions(std::span<const RawPrediction> predictions,
                      const std::filesystem::path& path) {
  std::ostringstream out;
  write_predictions(predictions, out);
  atomic_write(path, out.str());
}

json snapped_to_json(const SnappedPrediction& snapped) {
  json parts = json::array();
  for (const auto& r : snapped.parts) {
    parts.push_back({{"chosen", r.chosen},
                     {"chosen_index", r.chosen_index},
                     {"distance", r.distance},
                     {"normalized_distance", format_exact(r.normalized_distance)},
                     {"exact", r.exact}});
  }
  return {{"tweet_id", snapped.key.tweet_id},
          {"slot", snapped.key.slot},
          {"text", snapped.snapped},
          {"raw", snapped.raw},
          {"parts", std::move(parts)}};
}

std::string serialize_snapped(std::span<const SnappedPrediction> snapped) {
  std::string out;
  for (const auto& s : snapped) {
    out += dump_record(snapped_to_json(s));
    out += '\n';
  }
  return out;
}

Alignment align(std::span<const RawPrediction> predictions, const Corpus& corpus) {
  Alignment out;
  for (const auto& p : predictions) {
    if (corpus.find_slot(p.key.tweet_id, p.key.slot) == nullptr) {
      out.errors.push_back({p.key, "no slot " + describe(p.key) + " in corpus"});
      continue;
    }
    out.predictions.emplace(p.key, p.text);
  }
  for (const auto& tweet : corpus.tweets()) {
    for (const auto& slot : tweet.slots) {
      PredictionKey key{tweet.id, slot.name};
      if (!out.predictions.count(key)) out.missing.push_back(std::move(key));
    }
  }
  return out;
}

std::vector<RawPrediction> fetch_predictions(const FetchConfig& config,
                                             std::span<const Example> examples) {
  if (examples.empty()) return {};
  if (config.batch_size == 0) throw usage_error("batch size must be positive");
  for (const auto& ex : examples) {
    if (ex.key.kind != ExampleKind::kSlot || !ex.key.slot_name) {
      throw usage_error("only slot examples can be sent for generation (tweet '" +
                        ex.key.tweet_id + "')");
    }
  }
  const Endpoint endpoint = parse_endpoint(config.endpoint);

  const size_t batches = (examples.size() + config.batch_size - 1) / config.batch_size;
  std::vector<std::vector<std::string>> answers(batches);
  std::vector<std::optional<Error>> failures(batches);
  std::atomic<size_t> next{0};

  auto worker = [&] {
    httplib::Client client(endpoint.origin);
    const auto seconds = std::chrono::duration_cast<std::chrono::seconds>(config.timeout);
    const auto micros = std::chrono::duration_cast<std::chrono::microseconds>(
        config.timeout - seconds);
    client.set_connection_timeout(seconds.count(), micros.count());
    client.set_read_timeout(seconds.count(), micros.count());
    client.set_write_timeout(seconds.count(), micros.count());
    for (size_t b = next++; b < batches; b = next++) {
      const size_t begin = b * config.batch_size;
      const size_t end = std::min(examples.size(), begin + config.batch_size);
      std::vector<std::string> sources;
      for (size_t i = begin; i < end; ++i) sources.push_back(examples[i].source);
      try {
        const std::string where =
            "batch " + std::to_string(b) + " (" +
            describe({examples[begin].key.tweet_id, *examples[begin].key.slot_name}) +
            " .. " +
            describe({examples[end - 1].key.tweet_id, *examples[end - 1].key.slot_name}) +
            ")";
        answers[b] = post_batch(client, endpoint, config, sources, where);
      } catch (const Error& e) {
        failures[b] = e;
      }
    }
  };

  const size_t threads = std::clamp<size_t>(config.max_in_flight, 1, batches);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  size_t failed = 0;
  std::string message;
  for (const auto& f : failures) {
    if (!f) continue;
    message += (failed++ ? "; " : "") + std::string(f->what());
  }
  if (failed) {
    throw remote_error(std::to_string(failed) + " of " + std::to_string(batches) +
                       " batch(es) failed: " + message);
  }

  std::vector<RawPrediction> out;
  out.reserve(examples.size());
  for (size_t b = 0; b < batches; ++b) {
    for (size_t i = 0; i < answers[b].size(); ++i) {
      const Example& ex = examples[b * config.batch_size + i];
      out.push_back({{ex.key.tweet_id, *ex.key.slot_name}, std::move(answers[b][i])});
    }
  }
  return out;
}

}  // namespace slotforge
