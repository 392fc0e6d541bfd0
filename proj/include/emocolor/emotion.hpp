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

#include <array>
#include <cctype>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace emocolor {

enum class Emotion : std::uint8_t {
  kGratitude, kHappiness, kAnger, kLove, kTrust, kFear, kSurprise, kSadness, kShame, kShyness
};

inline constexpr std::size_t kEmotionCount = 10;
inline constexpr std::array<std::string_view, kEmotionCount> kEmotionNames = {
    "gratitude", "happiness", "anger", "love", "trust",
    "fear", "surprise", "sadness", "shame", "shyness"};

inline constexpr std::array<Emotion, kEmotionCount> kAllEmotions = {
    Emotion::kGratitude, Emotion::kHappiness, Emotion::kAnger, Emotion::kLove,
    Emotion::kTrust, Emotion::kFear, Emotion::kSurprise, Emotion::kSadness,
    Emotion::kShame, Emotion::kShyness};

inline std::string_view name_of(Emotion e) { return kEmotionNames[std::size_t(e)]; }

// Case-insensitive.
inline std::optional<Emotion> parse_emotion(std::string_view name) {
  std::string lower(name);
  for (auto& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  for (std::size_t i = 0; i < kEmotionCount; ++i) {
    if (kEmotionNames[i] == lower) return kAllEmotions[i];
  }
  return std::nullopt;
}

}  // namespace emocolor
