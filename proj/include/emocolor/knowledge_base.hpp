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

// Per-emotion fuzzy palettes aggregated from image palettes, basic-color
// distributions, and the on-disk knowledge base.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <numeric>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "emocolor/color.hpp"
#include "emocolor/emotion.hpp"
#include "emocolor/error.hpp"
#include "emocolor/hash.hpp"
#include "emocolor/palette.hpp"
#include "json.hpp"

namespace emocolor {

struct KbParams {
  std::size_t k_image = kDefaultImagePaletteSize;
  std::size_t k_emotion = 15;
  double min_share = 0.035;

  friend bool operator==(const KbParams&, const KbParams&) = default;
};

struct EmotionPaletteEntry {
  FuzzyColor color;
  std::uint64_t frequency = 0;
  double share = 0.0;  // frequency / total frequency of the top-k_emotion

  friend bool operator==(const EmotionPaletteEntry&, const EmotionPaletteEntry&) = default;
};

struct EmotionPalette {
  Emotion emotion = Emotion::kGratitude;
  std::vector<EmotionPaletteEntry> entries;  // frequency desc, then color order
  std::size_t source_images = 0;
  std::size_t skipped_images = 0;

  std::vector<FuzzyColor> colors() const {
    std::vector<FuzzyColor> out;
    for (const auto& e : entries) out.push_back(e.color);
    return out;
  }
  friend bool operator==(const EmotionPalette&, const EmotionPalette&) = default;
};

// Running per-emotion frequency table. Tallies built on separate workers
// merge by addition.
struct EmotionTally {
  std::array<std::uint64_t, FuzzyColor::kCount> frequency{};
  std::size_t images = 0;
  std::size_t skipped = 0;

  // Each color of the image's palette counts once.
  void add(const FuzzyPalette& image_palette) {
    for (const auto& e : image_palette.entries) ++frequency[e.color.index()];
    ++images;
  }
  EmotionTally& operator+=(const EmotionTally& o) {
    for (std::size_t i = 0; i < frequency.size(); ++i) frequency[i] += o.frequency[i];
    images += o.images;
    skipped += o.skipped;
    return *this;
  }
  friend bool operator==(const EmotionTally&, const EmotionTally&) = default;
};

inline EmotionPalette finalize_emotion_palette(Emotion emotion, const EmotionTally& tally,
                                               const KbParams& params = {}) {
  if (tally.images == 0) {
    throw BuildError("no usable images for emotion '" + std::string(name_of(emotion)) + "'");
  }
  if (params.k_emotion == 0) throw DomainError("k_emotion must be positive");
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < FuzzyColor::kCount; ++i) {
    if (tally.frequency[i] > 0) order.push_back(i);
  }
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (tally.frequency[a] != tally.frequency[b]) return tally.frequency[a] > tally.frequency[b];
    return a < b;
  });
  order.resize(std::min(order.size(), params.k_emotion));
  std::uint64_t mass = 0;
  for (auto i : order) mass += tally.frequency[i];

  EmotionPalette out;
  out.emotion = emotion;
  out.source_images = tally.images;
  out.skipped_images = tally.skipped;
  for (auto i : order) {
    const double share = double(tally.frequency[i]) / double(mass);
    if (share < params.min_share) continue;
    out.entries.push_back({FuzzyColor::from_index(i), tally.frequency[i], share});
  }
  return out;
}

inline EmotionPalette build_emotion_palette(Emotion emotion,
                                            std::span<const FuzzyPalette> image_palettes,
                                            const KbParams& params = {}) {
  EmotionTally tally;
  for (const auto& p : image_palettes) {
    if (p.entries.size() > params.k_image) {
      FuzzyPalette head;
      head.entries.assign(p.entries.begin(), p.entries.begin() + params.k_image);
      tally.add(head);
    } else {
      tally.add(p);
    }
  }
  return finalize_emotion_palette(emotion, tally, params);
}

using BasicRow = std::array<double, kBasicColorCount>;  // percentages

// Frequencies accrue to each entry's basic color; percentages are taken
// over the retained frequency mass.
inline BasicRow basic_distribution(const EmotionPalette& palette,
                                   const BasicColorMapping& mapping) {
  BasicRow row{};
  std::uint64_t total = 0;
  std::array<std::uint64_t, kBasicColorCount> freq{};
  for (const auto& e : palette.entries) {
    freq[std::size_t(mapping(e.color))] += e.frequency;
    total += e.frequency;
  }
  if (total == 0) return row;
  for (std::size_t i = 0; i < kBasicColorCount; ++i) row[i] = 100.0 * double(freq[i]) / double(total);
  return row;
}

inline std::string config_fingerprint(const FuzzyColorSpace& space,
                                      const BasicColorMapping& mapping) {
  return sha256_hex(space.canonical() + "\n" + mapping.canonical());
}

struct KnowledgeBase {
  static constexpr int kVersion = 1;

  std::string fingerprint;
  KbParams params;
  std::array<EmotionPalette, kEmotionCount> palettes;
  std::array<BasicRow, kEmotionCount> basic{};

  const EmotionPalette& palette(Emotion e) const { return palettes[std::size_t(e)]; }
  const BasicRow& basic_row(Emotion e) const { return basic[std::size_t(e)]; }

  friend bool operator==(const KnowledgeBase&, const KnowledgeBase&) = default;
};

inline KnowledgeBase assemble_kb(const std::array<EmotionTally, kEmotionCount>& tallies,
                                 const FuzzyColorSpace& space, const BasicColorMapping& mapping,
                                 const KbParams& params = {}) {
  KnowledgeBase kb;
  kb.fingerprint = config_fingerprint(space, mapping);
  kb.params = params;
  for (auto e : kAllEmotions) {
    const auto i = std::size_t(e);
    kb.palettes[i] = finalize_emotion_palette(e, tallies[i], params);
    kb.basic[i] = basic_distribution(kb.palettes[i], mapping);
  }
  return kb;
}

// ---------------------------------------------------------------------------
// Serialization

inline nlohmann::json emotion_palette_json(const EmotionPalette& p, const BasicRow& row) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : p.entries) {
    entries.push_back({{"hue", name_of(e.color.hue)},
                       {"saturation", name_of(e.color.saturation)},
                       {"intensity", name_of(e.color.intensity)},
                       {"frequency", e.frequency},
                       {"share", e.share}});
  }
  nlohmann::json basic = nlohmann::json::object();
  for (std::size_t i = 0; i < kBasicColorCount; ++i) basic[std::string(kBasicColorNames[i])] = row[i];
  return {{"emotion", name_of(p.emotion)},
          {"source_images", p.source_images},
          {"skipped_images", p.skipped_images},
          {"entries", entries},
          {"basic_colors", basic}};
}

inline nlohmann::json to_json(const KnowledgeBase& kb) {
  nlohmann::json emotions = nlohmann::json::object();
  for (auto e : kAllEmotions) {
    emotions[std::string(name_of(e))] = emotion_palette_json(kb.palette(e), kb.basic_row(e));
  }
  return {{"format", "emocolor-kb"},
          {"version", KnowledgeBase::kVersion},
          {"fingerprint", kb.fingerprint},
          {"params",
           {{"k_image", kb.params.k_image},
            {"k_emotion", kb.params.k_emotion},
            {"min_share", kb.params.min_share}}},
          {"emotions", emotions}};
}

inline KnowledgeBase kb_from_json(const nlohmann::json& j,
                                  const std::optional<std::string>& expected_fingerprint = {}) {
  using Kind = KbError::Kind;
  KnowledgeBase kb;
  try {
    if (!j.is_object() || j.value("format", "") != "emocolor-kb") {
      throw KbError(Kind::kMalformed, "not an emocolor knowledge base");
    }
    const int version = j.at("version").get<int>();
    if (version != KnowledgeBase::kVersion) {
      throw KbError(Kind::kVersion, "unsupported knowledge base version " +
                                        std::to_string(version) + " (expected " +
                                        std::to_string(KnowledgeBase::kVersion) + ")");
    }
    kb.fingerprint = j.at("fingerprint").get<std::string>();
    if (expected_fingerprint && *expected_fingerprint != kb.fingerprint) {
      throw FingerprintMismatch(*expected_fingerprint, kb.fingerprint);
    }
    const auto& params = j.at("params");
    kb.params.k_image = params.at("k_image").get<std::size_t>();
    kb.params.k_emotion = params.at("k_emotion").get<std::size_t>();
    kb.params.min_share = params.at("min_share").get<double>();
    const auto& emotions = j.at("emotions");
    for (auto e : kAllEmotions) {
      const auto key = std::string(name_of(e));
      if (!emotions.contains(key)) {
        throw KbError(Kind::kMalformed, "knowledge base lacks emotion '" + key + "'");
      }
      const auto& ej = emotions.at(key);
      auto& p = kb.palettes[std::size_t(e)];
      p.emotion = e;
      p.source_images = ej.at("source_images").get<std::size_t>();
      p.skipped_images = ej.at("skipped_images").get<std::size_t>();
      for (const auto& entry : ej.at("entries")) {
        p.entries.push_back({make_fuzzy_color(entry.at("hue").get<std::string>(),
                                              entry.at("saturation").get<std::string>(),
                                              entry.at("intensity").get<std::string>()),
                             entry.at("frequency").get<std::uint64_t>(),
                             entry.at("share").get<double>()});
      }
      auto& row = kb.basic[std::size_t(e)];
      double sum = 0.0;
      for (std::size_t i = 0; i < kBasicColorCount; ++i) {
        row[i] = ej.at("basic_colors").at(std::string(kBasicColorNames[i])).get<double>();
        sum += row[i];
      }
      if (std::abs(sum - 100.0) > 0.5) {
        throw KbError(Kind::kMalformed, "basic color row for '" + key + "' sums to " +
                                            std::to_string(sum));
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw KbError(Kind::kMalformed, std::string("malformed knowledge base: ") + e.what());
  } catch (const InputError& e) {
    throw KbError(Kind::kMalformed, std::string("malformed knowledge base: ") + e.what());
  }
  return kb;
}

inline void save_kb(const KnowledgeBase& kb, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write knowledge base to '" + path + "'");
  out << to_json(kb).dump(2) << '\n';
  if (!out) throw Error("failed writing knowledge base to '" + path + "'");
}

inline KnowledgeBase parse_kb(std::string_view text,
                              const std::optional<std::string>& expected_fingerprint = {}) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw KbError(KbError::Kind::kMalformed, std::string("malformed knowledge base: ") + e.what());
  }
  return kb_from_json(j, expected_fingerprint);
}

inline KnowledgeBase load_kb(const std::string& path,
                             const std::optional<std::string>& expected_fingerprint = {}) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw KbError(KbError::Kind::kMalformed, "cannot open knowledge base '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_kb(buf.str(), expected_fingerprint);
}

}  // namespace emocolor
