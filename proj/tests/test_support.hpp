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

#include <filesystem>
#include <random>
#include <string>

#include "emocolor/knowledge_base.hpp"
#include "emocolor/palette.hpp"

namespace emocolor::testing {

inline RgbImage random_image(std::mt19937& rng, int w, int h) {
  std::uniform_int_distribution<int> d(0, 255);
  RgbImage img{w, h, {}};
  for (int i = 0; i < w * h; ++i) {
    img.pixels.push_back({std::uint8_t(d(rng)), std::uint8_t(d(rng)), std::uint8_t(d(rng))});
  }
  return img;
}

// Random image built from a few flat colors, so palettes are not all
// single-pixel bins.
inline RgbImage blocky_image(std::mt19937& rng, int w, int h, int colors = 6) {
  std::uniform_int_distribution<int> d(0, 255);
  std::vector<RgbPixel> pal;
  for (int c = 0; c < colors; ++c) {
    pal.push_back({std::uint8_t(d(rng)), std::uint8_t(d(rng)), std::uint8_t(d(rng))});
  }
  std::uniform_int_distribution<int> pick(0, colors - 1);
  RgbImage img{w, h, {}};
  const int block = 8;
  std::vector<int> cells((w / block + 1) * (h / block + 1));
  for (auto& c : cells) c = pick(rng);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) img.pixels.push_back(pal[cells[(y / block) * (w / block + 1) + x / block]]);
  }
  return img;
}

class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("emocolor-" + tag + "-" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

// A KB whose emotion palettes are given directly; unspecified emotions get
// a single far-away color so every row stays valid.
inline KnowledgeBase hand_kb(
    const std::map<Emotion, std::vector<std::pair<FuzzyColor, std::uint64_t>>>& palettes,
    const FuzzyColorSpace& space = FuzzyColorSpace::default_space(),
    const BasicColorMapping& mapping = BasicColorMapping::default_mapping()) {
  std::array<EmotionTally, kEmotionCount> tallies{};
  const FuzzyColor filler{HueTerm::kMagenta, SaturationTerm::kHigh, IntensityTerm::kLight};
  for (auto e : kAllEmotions) {
    auto& t = tallies[std::size_t(e)];
    t.images = 1;
    auto it = palettes.find(e);
    if (it == palettes.end()) {
      t.frequency[filler.index()] = 1;
    } else {
      for (const auto& [c, f] : it->second) t.frequency[c.index()] = f;
    }
  }
  KbParams params;
  params.min_share = 0.0;
  return assemble_kb(tallies, space, mapping, params);
}

}  // namespace emocolor::testing
