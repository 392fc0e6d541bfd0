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

// Fuzzy color histograms and dominant fuzzy palettes.

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdio>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "emocolor/color.hpp"

namespace emocolor {

inline constexpr int kNormalizedSide = 200;
inline constexpr std::size_t kDefaultImagePaletteSize = 5;

struct RgbImage {
  int width = 0;
  int height = 0;
  std::vector<RgbPixel> pixels;  // row-major

  RgbPixel& at(int x, int y) { return pixels[std::size_t(y) * width + x]; }
  const RgbPixel& at(int x, int y) const { return pixels[std::size_t(y) * width + x]; }

  static RgbImage filled(int w, int h, RgbPixel p) {
    return {w, h, std::vector<RgbPixel>(std::size_t(w) * h, p)};
  }
};

struct FuzzyHistogram {
  std::array<std::uint64_t, FuzzyColor::kCount> counts{};

  std::uint64_t operator[](FuzzyColor c) const { return counts[c.index()]; }
  std::uint64_t total() const {
    return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
  }
  FuzzyHistogram& operator+=(const FuzzyHistogram& o) {
    for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += o.counts[i];
    return *this;
  }
  friend bool operator==(const FuzzyHistogram&, const FuzzyHistogram&) = default;
};

struct PaletteEntry {
  FuzzyColor color;
  double proportion = 0.0;

  friend bool operator==(const PaletteEntry&, const PaletteEntry&) = default;
};

// Descending by proportion, ties by FuzzyColor order.
struct FuzzyPalette {
  std::vector<PaletteEntry> entries;

  std::vector<FuzzyColor> colors() const {
    std::vector<FuzzyColor> out;
    for (const auto& e : entries) out.push_back(e.color);
    return out;
  }
  friend bool operator==(const FuzzyPalette&, const FuzzyPalette&) = default;
};

// Each pixel adds one to the bin of its fuzzified color. With workers > 1
// the pixels are split into contiguous chunks and per-worker histograms are
// summed, which is exact.
inline FuzzyHistogram fuzzy_histogram(std::span<const RgbPixel> pixels,
                                      const FuzzyColorSpace& space,
                                      unsigned workers = 1) {
  auto count_range = [&](std::span<const RgbPixel> chunk) {
    FuzzyHistogram h;
    for (const auto& p : chunk) ++h.counts[space.fuzzify(p).index()];
    return h;
  };
  workers = std::max(1u, std::min<unsigned>(workers, unsigned(pixels.size() / 1024 + 1)));
  if (workers == 1) return count_range(pixels);

  std::vector<FuzzyHistogram> partial(workers);
  {
    std::vector<std::jthread> threads;
    const std::size_t chunk = (pixels.size() + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      const std::size_t begin = std::min(pixels.size(), w * chunk);
      const std::size_t end = std::min(pixels.size(), begin + chunk);
      threads.emplace_back([&, w, begin, end] {
        partial[w] = count_range(pixels.subspan(begin, end - begin));
      });
    }
  }
  FuzzyHistogram merged;
  for (const auto& h : partial) merged += h;
  return merged;
}

inline FuzzyHistogram fuzzy_histogram(const RgbImage& img, const FuzzyColorSpace& space,
                                      unsigned workers = 1) {
  return fuzzy_histogram(std::span<const RgbPixel>(img.pixels), space, workers);
}

inline FuzzyPalette dominant_palette(const FuzzyHistogram& hist,
                                     std::size_t k = kDefaultImagePaletteSize) {
  if (k == 0) throw DomainError("palette size k must be positive");
  const std::uint64_t total = hist.total();
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < FuzzyColor::kCount; ++i) {
    if (hist.counts[i] > 0) order.push_back(i);
  }
  const std::size_t n = std::min(k, order.size());
  std::partial_sort(order.begin(), order.begin() + n, order.end(),
                    [&](std::size_t a, std::size_t b) {
                      if (hist.counts[a] != hist.counts[b]) return hist.counts[a] > hist.counts[b];
                      return a < b;
                    });
  FuzzyPalette out;
  for (std::size_t i = 0; i < n; ++i) {
    out.entries.push_back({FuzzyColor::from_index(order[i]),
                           double(hist.counts[order[i]]) / double(total)});
  }
  return out;
}

inline FuzzyPalette dominant_palette(const RgbImage& img, const FuzzyColorSpace& space,
                                     std::size_t k = kDefaultImagePaletteSize,
                                     unsigned workers = 1) {
  return dominant_palette(fuzzy_histogram(img, space, workers), k);
}

// One record per entry: hue, saturation, intensity, proportion (6 dp),
// tab-separated.
inline std::string format_palette(const FuzzyPalette& palette) {
  std::string out;
  char buf[32];
  for (const auto& e : palette.entries) {
    std::snprintf(buf, sizeof buf, "%.6f", e.proportion);
    out += std::string(name_of(e.color.hue)) + '\t' + std::string(name_of(e.color.saturation)) +
           '\t' + std::string(name_of(e.color.intensity)) + '\t' + buf + '\n';
  }
  return out;
}

inline FuzzyPalette parse_palette(const std::string& text) {
  FuzzyPalette out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string h, s, i, p;
    if (!std::getline(row, h, '\t') || !std::getline(row, s, '\t') ||
        !std::getline(row, i, '\t') || !std::getline(row, p)) {
      throw InputError("palette record needs 4 tab-separated fields: '" + line + "'");
    }
    out.entries.push_back({make_fuzzy_color(h, s, i), std::stod(p)});
  }
  return out;
}

}  // namespace emocolor
