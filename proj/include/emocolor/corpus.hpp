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

// Corpus-level knowledge-base construction: palettes for every selected
// image (bounded worker pool), per-emotion tallies, and a build report.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "emocolor/annotations.hpp"
#include "emocolor/image_io.hpp"
#include "emocolor/knowledge_base.hpp"

namespace emocolor {

using ImageSource = std::function<std::vector<std::uint8_t>(const ImageRef&)>;

// Looks for <dir>/<id>.{png,jpg,jpeg,PNG,JPG,JPEG}.
inline ImageSource directory_source(std::filesystem::path dir) {
  return [dir = std::move(dir)](const ImageRef& ref) {
    for (const char* ext : {".png", ".jpg", ".jpeg", ".PNG", ".JPG", ".JPEG"}) {
      const auto path = dir / (ref.id + ext);
      if (std::filesystem::exists(path)) {
        std::ifstream in(path, std::ios::binary);
        return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in),
                                         std::istreambuf_iterator<char>());
      }
    }
    throw InputError("no image file for id '" + ref.id + "' in " + dir.string());
  };
}

struct CorpusOptions {
  KbParams params;
  unsigned workers = 1;
  // Build fails when more than this fraction of the unique images fail.
  double max_failure_fraction = 1.0;
  Resampling resampling = Resampling::kBilinear;
};

struct BuildReport {
  std::array<std::size_t, kEmotionCount> selected{};
  std::array<std::size_t, kEmotionCount> used{};
  std::array<std::size_t, kEmotionCount> palette_sizes{};
  std::size_t unique_images = 0;
  std::vector<std::string> failures;  // "id: reason", sorted by id
};

struct CorpusBuild {
  KnowledgeBase kb;
  BuildReport report;
};

inline FuzzyPalette image_palette(std::span<const std::uint8_t> bytes,
                                  const FuzzyColorSpace& space, std::size_t k,
                                  Resampling resampling = Resampling::kBilinear) {
  return dominant_palette(preprocess(bytes, resampling), space, k);
}

inline CorpusBuild build_kb(const EmotionSelection& selection, const ImageSource& source,
                            const FuzzyColorSpace& space, const BasicColorMapping& mapping,
                            const CorpusOptions& opt = {}) {
  std::map<std::string, ImageRef> unique;
  for (const auto& list : selection) {
    for (const auto& ref : list) unique.try_emplace(ref.id, ref);
  }
  std::vector<ImageRef> refs;
  for (auto& [id, ref] : unique) refs.push_back(ref);

  struct Outcome {
    std::optional<FuzzyPalette> palette;
    std::string error;
  };
  std::vector<Outcome> outcomes(refs.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < refs.size(); i = next++) {
      try {
        outcomes[i].palette = image_palette(source(refs[i]), space, opt.params.k_image, opt.resampling);
      } catch (const std::exception& e) {
        outcomes[i].error = e.what();
      }
    }
  };
  {
    const unsigned n = std::max(1u, std::min<unsigned>(opt.workers, unsigned(refs.size())));
    std::vector<std::jthread> pool;
    for (unsigned w = 1; w < n; ++w) pool.emplace_back(work);
    work();
  }

  CorpusBuild out;
  out.report.unique_images = refs.size();
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < refs.size(); ++i) {
    index[refs[i].id] = i;
    if (!outcomes[i].palette) out.report.failures.push_back(refs[i].id + ": " + outcomes[i].error);
  }
  if (!refs.empty() &&
      double(out.report.failures.size()) / double(refs.size()) > opt.max_failure_fraction) {
    throw BuildError(std::to_string(out.report.failures.size()) + " of " +
                     std::to_string(refs.size()) + " images failed, above the allowed fraction");
  }

  std::array<EmotionTally, kEmotionCount> tallies{};
  for (std::size_t e = 0; e < kEmotionCount; ++e) {
    out.report.selected[e] = selection[e].size();
    for (const auto& ref : selection[e]) {
      const auto& oc = outcomes[index.at(ref.id)];
      if (oc.palette) {
        tallies[e].add(*oc.palette);
      } else {
        ++tallies[e].skipped;
      }
    }
    out.report.used[e] = tallies[e].images;
  }
  out.kb = assemble_kb(tallies, space, mapping, opt.params);
  for (std::size_t e = 0; e < kEmotionCount; ++e) {
    out.report.palette_sizes[e] = out.kb.palettes[e].entries.size();
  }
  return out;
}

}  // namespace emocolor
