// Copyright 2026 The emocolor Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// JSON-over-HTTP service: image indexing and tagging, KB inspection, and
// fuzzy-hedge emotion search. Handlers are plain member functions returning
// a Response so they can be exercised without a socket; install() wires them
// into a cpp-httplib server.

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "emocolor/corpus.hpp"
#include "emocolor/fetch.hpp"
#include "emocolor/hash.hpp"
#include "emocolor/image_io.hpp"
#include "emocolor/knowledge_base.hpp"
#include "emocolor/scoring.hpp"
#include "httplib.h"
#include "json.hpp"

namespace emocolor {

struct ServiceConfig {
  std::filesystem::path index_dir = "emocolor-index";
  std::string kb_path;  // loaded at startup when non-empty
  std::string cors_origin = "*";
  int thumbnail_side = 96;
  std::optional<std::filesystem::path> fetch_cache;  // enables POST /images by URL
};

struct Response {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";

  nlohmann::json json() const { return nlohmann::json::parse(body); }
};

struct IndexEntry {
  std::string id;
  std::string source;
  FuzzyPalette palette;
};

class Service {
 public:
  Service(ServiceConfig config, const FuzzyColorSpace& space, const BasicColorMapping& mapping,
          LinguisticVariable intensity = default_intensity_variable())
      : config_(std::move(config)),
        space_(space),
        intensity_(std::move(intensity)),
        fingerprint_(config_fingerprint(space, mapping)) {
    std::filesystem::create_directories(entries_dir());
    std::filesystem::create_directories(thumbnails_dir());
    load_index();
    if (!config_.kb_path.empty()) {
      kb_ = std::make_shared<const KnowledgeBase>(load_kb(config_.kb_path, fingerprint_));
    }
  }

  const std::string& fingerprint() const { return fingerprint_; }

  std::shared_ptr<const KnowledgeBase> snapshot() const {
    std::lock_guard lock(kb_mutex_);
    return kb_;
  }

  // Library-equivalent scores for an indexed palette under a given snapshot.
  static std::vector<EmotionScore> scores_for(const FuzzyPalette& palette,
                                              const KnowledgeBase& kb) {
    return score_emotions(palette, kb);
  }

  Response health() const {
    return ok({{"status", "ok"}, {"kb_loaded", snapshot() != nullptr}, {"fingerprint", fingerprint_}});
  }

  // Raw image bytes; the id defaults to a prefix of the bytes' SHA-256.
  Response post_image(const std::vector<std::uint8_t>& bytes, std::optional<std::string> id = {},
                      std::string source = "upload") {
    auto kb = snapshot();
    if (!kb) return error(503, "knowledge base not loaded");
    if (!id || id->empty()) id = sha256_hex(bytes).substr(0, 16);
    if (!valid_id(*id)) return error(400, "invalid image id '" + *id + "'");
    RgbImage normalized;
    try {
      normalized = preprocess(bytes);
    } catch (const InputError& e) {
      return error(400, e.what());
    }
    IndexEntry entry{*id, std::move(source), dominant_palette(normalized, space_, kb->params.k_image)};
    {
      std::lock_guard write(write_mutex_);
      {
        std::shared_lock read(index_mutex_);
        if (index_.count(entry.id)) return error(409, "image '" + entry.id + "' already indexed");
      }
      persist(entry, *kb);
      const auto thumb = resize(normalized, config_.thumbnail_side, config_.thumbnail_side,
                                Resampling::kArea);
      write_file_atomic(thumbnails_dir() / (entry.id + ".png"), encode_png(thumb));
      std::unique_lock w(index_mutex_);
      index_.emplace(entry.id, entry);
    }
    auto body = entry_json(entry, *kb);
    return {201, body.dump(), "application/json"};
  }

  Response post_image_url(const std::string& url, std::optional<std::string> id = {}) {
    if (!config_.fetch_cache) return error(400, "fetching by URL is disabled on this server");
    std::vector<std::uint8_t> bytes;
    try {
      FetchClient client(*config_.fetch_cache);
      bytes = client.fetch(url);
    } catch (const Error& e) {
      return error(400, e.what());
    }
    return post_image(bytes, std::move(id), url);
  }

  Response get_image(const std::string& id) const {
    auto kb = snapshot();
    if (!kb) return error(503, "knowledge base not loaded");
    std::shared_lock read(index_mutex_);
    auto it = index_.find(id);
    if (it == index_.end()) return error(404, "unknown image '" + id + "'");
    return ok(entry_json(it->second, *kb));
  }

  Response thumbnail(const std::string& id) const {
    if (!valid_id(id)) return error(404, "unknown image");
    const auto path = thumbnails_dir() / (id + ".png");
    if (!std::filesystem::exists(path)) return error(404, "no thumbnail for '" + id + "'");
    const auto bytes = read_file_bytes(path);
    return {200, std::string(bytes.begin(), bytes.end()), "image/png"};
  }

  Response list_emotions() const {
    nlohmann::json names = nlohmann::json::array();
    for (auto n : kEmotionNames) names.push_back(n);
    return ok({{"emotions", names}});
  }

  Response emotion_palette(const std::string& name) const {
    auto kb = snapshot();
    if (!kb) return error(503, "knowledge base not loaded");
    auto e = parse_emotion(name);
    if (!e) return error(404, "unknown emotion '" + name + "'");
    auto body = emotion_palette_json(kb->palette(*e), kb->basic_row(*e));
    body["fingerprint"] = kb->fingerprint;
    return ok(body);
  }

  // Parameters: q (full query text) or emotion/intensity/hedges; limit and
  // offset paginate the ranked list.
  Response search(const std::map<std::string, std::string>& params) const {
    auto kb = snapshot();
    if (!kb) return error(503, "knowledge base not loaded");
    auto get = [&](const std::string& k) {
      auto it = params.find(k);
      return it == params.end() ? std::string() : it->second;
    };
    Query q;
    std::size_t limit = 20, offset = 0;
    try {
      q = params.count("q") ? parse_query(get("q"), intensity_)
                            : make_query(get("emotion"), get("intensity"), get("hedges"), intensity_);
      if (params.count("limit")) limit = parse_count(get("limit"), "limit");
      if (params.count("offset")) offset = parse_count(get("offset"), "offset");
    } catch (const QueryError& e) {
      nlohmann::json body = {{"error", e.what()}, {"token", e.token()}};
      return {400, body.dump(), "application/json"};
    }
    std::vector<ScoredImage> scored;
    {
      std::shared_lock read(index_mutex_);
      scored.reserve(index_.size());
      for (const auto& [id, entry] : index_) scored.push_back({id, scores_for(entry.palette, *kb)});
    }
    const auto matches = match_query(q, scored, intensity_);
    nlohmann::json results = nlohmann::json::array();
    for (std::size_t i = offset; i < matches.size() && i < offset + limit; ++i) {
      results.push_back({{"id", matches[i].id},
                         {"degree", matches[i].degree},
                         {"jaccard", matches[i].jaccard},
                         {"thumbnail", "/thumbnails/" + matches[i].id + ".png"}});
    }
    return ok({{"query", q.to_string()},
               {"fingerprint", kb->fingerprint},
               {"total", matches.size()},
               {"offset", offset},
               {"results", results}});
  }

  // Swaps in a freshly loaded KB. Requests already holding the previous
  // snapshot finish on it.
  Response reload(std::optional<std::string> path = {}) {
    const std::string p = path && !path->empty() ? *path : config_.kb_path;
    if (p.empty()) return error(400, "no knowledge base path configured");
    std::shared_ptr<const KnowledgeBase> fresh;
    try {
      fresh = std::make_shared<const KnowledgeBase>(load_kb(p, fingerprint_));
    } catch (const FingerprintMismatch& e) {
      nlohmann::json body = {{"error", e.what()}, {"expected", e.expected()}, {"actual", e.actual()}};
      return {409, body.dump(), "application/json"};
    } catch (const KbError& e) {
      return error(400, e.what());
    }
    {
      std::lock_guard lock(kb_mutex_);
      kb_ = fresh;
      if (path && !path->empty()) config_.kb_path = *path;
    }
    return ok({{"status", "reloaded"}, {"fingerprint", fresh->fingerprint}, {"path", p}});
  }

  void install(httplib::Server& server) {
    server.set_default_headers({{"Access-Control-Allow-Origin", config_.cors_origin},
                                {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
                                {"Access-Control-Allow-Headers", "Content-Type"}});
    server.Options(".*", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
    server.Get("/health", [this](const auto&, auto& res) { send(res, health()); });
    server.Get("/emotions", [this](const auto&, auto& res) { send(res, list_emotions()); });
    server.Get(R"(/emotions/([^/]+)/palette)", [this](const httplib::Request& req, auto& res) {
      send(res, emotion_palette(req.matches[1]));
    });
    server.Get("/search", [this](const httplib::Request& req, auto& res) {
      std::map<std::string, std::string> params;
      for (const auto& [k, v] : req.params) params[k] = v;
      send(res, search(params));
    });
    server.Get(R"(/images/([^/]+))", [this](const httplib::Request& req, auto& res) {
      send(res, get_image(req.matches[1]));
    });
    server.Get(R"(/thumbnails/([^/]+)\.png)", [this](const httplib::Request& req, auto& res) {
      send(res, thumbnail(req.matches[1]));
    });
    server.Post("/images", [this](const httplib::Request& req, auto& res) {
      std::optional<std::string> id;
      if (req.has_param("id")) id = req.get_param_value("id");
      if (req.get_header_value("Content-Type").rfind("application/json", 0) == 0) {
        nlohmann::json body;
        try {
          body = nlohmann::json::parse(req.body);
        } catch (const nlohmann::json::exception&) {
          return send(res, error(400, "request body is not valid JSON"));
        }
        if (!body.contains("url") || !body["url"].is_string()) {
          return send(res, error(400, "JSON body needs a string 'url'"));
        }
        if (body.contains("id") && body["id"].is_string()) id = body["id"].get<std::string>();
        return send(res, post_image_url(body["url"].get<std::string>(), id));
      }
      send(res, post_image(std::vector<std::uint8_t>(req.body.begin(), req.body.end()), id));
    });
    server.Post("/kb/reload", [this](const httplib::Request& req, auto& res) {
      std::optional<std::string> path;
      if (!req.body.empty()) {
        try {
          auto body = nlohmann::json::parse(req.body);
          if (body.contains("path")) path = body["path"].get<std::string>();
        } catch (const nlohmann::json::exception&) {
          return send(res, error(400, "request body is not valid JSON"));
        }
      }
      send(res, reload(path));
    });
  }

 private:
  static Response ok(const nlohmann::json& body) { return {200, body.dump(), "application/json"}; }
  static Response error(int status, const std::string& message) {
    return {status, nlohmann::json{{"error", message}}.dump(), "application/json"};
  }
  static void send(httplib::Response& res, const Response& r) {
    res.status = r.status;
    res.set_content(r.body, r.content_type);
  }

  static bool valid_id(const std::string& id) {
    if (id.empty() || id.size() > 128) return false;
    for (char c : id) {
      if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.')) return false;
    }
    return id.front() != '.';
  }

  static std::size_t parse_count(const std::string& s, const std::string& what) {
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      throw QueryError("bad " + what + " '" + s + "'", s);
    }
    return v;
  }

  std::filesystem::path entries_dir() const { return config_.index_dir / "entries"; }
  std::filesystem::path thumbnails_dir() const { return config_.index_dir / "thumbnails"; }

  static nlohmann::json palette_json(const FuzzyPalette& p) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& e : p.entries) {
      out.push_back({{"hue", name_of(e.color.hue)},
                     {"saturation", name_of(e.color.saturation)},
                     {"intensity", name_of(e.color.intensity)},
                     {"proportion", e.proportion}});
    }
    return out;
  }

  nlohmann::json entry_json(const IndexEntry& entry, const KnowledgeBase& kb) const {
    nlohmann::json scores = nlohmann::json::array();
    const auto s = scores_for(entry.palette, kb);
    for (const auto& sc : s) scores.push_back({{"emotion", name_of(sc.emotion)}, {"jaccard", sc.jaccard}});
    return {{"id", entry.id},
            {"source", entry.source},
            {"palette", palette_json(entry.palette)},
            {"scores", scores},
            {"top_emotion", name_of(s.front().emotion)},
            {"fingerprint", kb.fingerprint},
            {"thumbnail", "/thumbnails/" + entry.id + ".png"}};
  }

  void persist(const IndexEntry& entry, const KnowledgeBase& kb) const {
    const auto text = entry_json(entry, kb).dump(2);
    write_file_atomic(entries_dir() / (entry.id + ".json"),
                      std::vector<std::uint8_t>(text.begin(), text.end()));
  }

  void load_index() {
    for (const auto& f : std::filesystem::directory_iterator(entries_dir())) {
      if (f.path().extension() != ".json") continue;
      try {
        const auto bytes = read_file_bytes(f.path());
        const auto j = nlohmann::json::parse(bytes.begin(), bytes.end());
        IndexEntry entry{j.at("id").get<std::string>(), j.value("source", ""), {}};
        for (const auto& p : j.at("palette")) {
          entry.palette.entries.push_back(
              {make_fuzzy_color(p.at("hue").get<std::string>(), p.at("saturation").get<std::string>(),
                                p.at("intensity").get<std::string>()),
               p.at("proportion").get<double>()});
        }
        index_.emplace(entry.id, std::move(entry));
      } catch (const std::exception& e) {
        throw InputError("corrupt index entry '" + f.path().string() + "': " + e.what());
      }
    }
  }

  ServiceConfig config_;
  const FuzzyColorSpace& space_;
  LinguisticVariable intensity_;
  std::string fingerprint_;

  mutable std::mutex kb_mutex_;
  std::shared_ptr<const KnowledgeBase> kb_;

  std::mutex write_mutex_;
  mutable std::shared_mutex index_mutex_;
  std::map<std::string, IndexEntry> index_;
};

}  // namespace emocolor
