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

// Ingestion of the WikiArt Emotions tab-separated annotation format. Only
// the image-only annotation columns are used.

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "emocolor/emotion.hpp"
#include "emocolor/error.hpp"

namespace emocolor {

using Thresholds = std::array<double, kEmotionCount>;

// 0.5 everywhere, 0.3 for shyness.
inline Thresholds default_thresholds() {
  Thresholds t;
  t.fill(0.5);
  t[std::size_t(Emotion::kShyness)] = 0.3;
  return t;
}

// Parses "emotion=fraction" and applies it to `t`.
inline void apply_threshold_override(Thresholds& t, std::string_view text) {
  const auto eq = text.find('=');
  if (eq == std::string_view::npos) {
    throw ConfigError("threshold override must look like emotion=fraction: '" +
                      std::string(text) + "'");
  }
  auto emotion = parse_emotion(text.substr(0, eq));
  if (!emotion) throw ConfigError("unknown emotion in threshold '" + std::string(text) + "'");
  const auto value = text.substr(eq + 1);
  double v = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw ConfigError("bad threshold value in '" + std::string(text) + "'");
  }
  t[std::size_t(*emotion)] = v;
}

struct AnnotationRecord {
  std::string id;
  std::string url;
  std::array<double, kEmotionCount> agreement{};  // image-only agreement fractions
};

struct AnnotationTable {
  std::vector<AnnotationRecord> records;
  std::size_t skipped_rows = 0;
  std::vector<std::string> warnings;
};

struct ImageRef {
  std::string id;
  std::string url;

  friend bool operator==(const ImageRef&, const ImageRef&) = default;
  friend auto operator<=>(const ImageRef&, const ImageRef&) = default;
};

using EmotionSelection = std::array<std::vector<ImageRef>, kEmotionCount>;

namespace detail {

inline std::string normalize_header(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
  }
  return out;
}

inline std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    out.push_back(line.substr(start, tab == std::string_view::npos ? line.npos : tab - start));
    if (tab == std::string_view::npos) break;
    start = tab + 1;
  }
  return out;
}

inline bool parse_fraction(std::string_view s, double& out) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && out >= 0.0 && out <= 1.0;
}

}  // namespace detail

// Recognized headers (case and punctuation insensitive): "ID", "Image URL",
// and one image-only column per emotion written either "ImageOnly: anger"
// or "Art (image only): anger".
inline AnnotationTable parse_annotations(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw SchemaError("annotation file is empty: missing header row");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = detail::split_tabs(line);

  std::size_t id_col = std::string::npos, url_col = std::string::npos;
  std::array<std::size_t, kEmotionCount> emotion_col;
  emotion_col.fill(std::string::npos);
  for (std::size_t c = 0; c < header.size(); ++c) {
    const auto colon = header[c].find(':');
    if (colon == std::string_view::npos) {
      const auto norm = detail::normalize_header(header[c]);
      if (norm == "id") id_col = c;
      if (norm == "imageurl") url_col = c;
      continue;
    }
    const auto prefix = detail::normalize_header(header[c].substr(0, colon));
    if (prefix != "imageonly" && prefix != "artimageonly") continue;
    if (auto e = parse_emotion(detail::normalize_header(header[c].substr(colon + 1)))) {
      emotion_col[std::size_t(*e)] = c;
    }
  }
  if (id_col == std::string::npos) throw SchemaError("annotation file: missing column 'ID'");
  if (url_col == std::string::npos) throw SchemaError("annotation file: missing column 'Image URL'");
  for (std::size_t e = 0; e < kEmotionCount; ++e) {
    if (emotion_col[e] == std::string::npos) {
      throw SchemaError("annotation file: missing column 'ImageOnly: " +
                        std::string(kEmotionNames[e]) + "'");
    }
  }
  const std::size_t needed =
      std::max({id_col, url_col, *std::max_element(emotion_col.begin(), emotion_col.end())}) + 1;

  AnnotationTable table;
  std::set<std::string, std::less<>> seen;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = detail::split_tabs(line);
    auto skip = [&](const std::string& why) {
      ++table.skipped_rows;
      table.warnings.push_back("line " + std::to_string(line_no) + ": " + why);
    };
    if (fields.size() < needed) {
      skip("expected at least " + std::to_string(needed) + " fields, found " +
           std::to_string(fields.size()));
      continue;
    }
    AnnotationRecord rec{std::string(fields[id_col]), std::string(fields[url_col]), {}};
    bool ok = !rec.id.empty();
    for (std::size_t e = 0; ok && e < kEmotionCount; ++e) {
      ok = detail::parse_fraction(fields[emotion_col[e]], rec.agreement[e]);
    }
    if (!ok) {
      skip("unreadable id or agreement value");
      continue;
    }
    if (!seen.insert(rec.id).second) {
      skip("duplicate image id '" + rec.id + "'");
      continue;
    }
    table.records.push_back(std::move(rec));
  }
  return table;
}

// Image selected for an emotion iff its agreement >= the threshold. Lists
// are sorted by id, so row order does not matter.
inline EmotionSelection select_images(const AnnotationTable& table, const Thresholds& thresholds) {
  EmotionSelection out;
  for (const auto& rec : table.records) {
    for (std::size_t e = 0; e < kEmotionCount; ++e) {
      if (rec.agreement[e] >= thresholds[e]) out[e].push_back({rec.id, rec.url});
    }
  }
  for (auto& list : out) std::sort(list.begin(), list.end());
  return out;
}

struct LoadedAnnotations {
  AnnotationTable table;
  EmotionSelection selection;
};

inline LoadedAnnotations load_annotations(const std::string& path,
                                          const Thresholds& thresholds = default_thresholds()) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open annotation file '" + path + "'");
  LoadedAnnotations out{parse_annotations(in), {}};
  out.selection = select_images(out.table, thresholds);
  return out;
}

}  // namespace emocolor
