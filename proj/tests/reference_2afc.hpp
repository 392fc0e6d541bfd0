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

// Published aggregate 2AFC result: per-emotion hits out of 173 analyzed
// participants and the model's intensity difference for each pair.

#include <array>
#include <cstdio>
#include <string>
#include <vector>

#include "emocolor/psychometrics.hpp"

namespace emocolor::testing {

inline constexpr std::size_t kReferenceParticipants = 173;

inline const std::array<AggregateRow, kEmotionCount>& reference_2afc_rows() {
  static const std::array<AggregateRow, kEmotionCount> rows{{
      {Emotion::kAnger, 165, 0.76},
      {Emotion::kShyness, 163, 0.37},
      {Emotion::kHappiness, 148, 0.05},
      {Emotion::kSadness, 97, 0.13},
      {Emotion::kGratitude, 146, 0.2},
      {Emotion::kShame, 146, 0.38},
      {Emotion::kFear, 156, 0.37},
      {Emotion::kTrust, 81, 0.12},
      {Emotion::kLove, 166, 0.05},
      {Emotion::kSurprise, 70, 0.27},
  }};
  return rows;
}

// Rates as printed, two decimals, same order.
inline constexpr std::array<double, kEmotionCount> kReferenceRates = {
    0.95, 0.94, 0.86, 0.56, 0.84, 0.84, 0.90, 0.47, 0.96, 0.40};

// A trial-level cohort consistent with the aggregate: 173 regular
// participants whose hits reproduce the published counts, 2 who fail the
// color test and 2 who always pick the minority option. Minority choices of
// regular participants are spread round-robin so nobody drops below 70%
// agreement.
inline std::vector<ParticipantRecord> reference_cohort() {
  const std::size_t n = kReferenceParticipants;
  std::vector<ParticipantRecord> people(n + 4);
  for (std::size_t k = 0; k < people.size(); ++k) {
    char id[16];
    std::snprintf(id, sizeof id, "p%03zu", k);
    people[k].id = id;
  }
  std::size_t cursor = 0;
  for (const auto& row : reference_2afc_rows()) {
    TrialRecord base;
    base.trial = "t-" + std::string(name_of(row.emotion));
    base.emotion = row.emotion;
    base.intensity_first = 0.1 + row.difference;  // first item is the correct pick
    base.intensity_second = 0.1;
    const bool first_is_majority = 2 * row.hits > n;
    const std::size_t minority = first_is_majority ? n - row.hits : row.hits;
    const int majority_choice = first_is_majority ? 0 : 1;
    std::vector<bool> in_minority(n, false);
    for (std::size_t m = 0; m < minority; ++m) in_minority[cursor++ % n] = true;
    for (std::size_t k = 0; k < n; ++k) {
      auto t = base;
      t.choice = in_minority[k] ? 1 - majority_choice : majority_choice;
      people[k].trials.push_back(t);
    }
    for (std::size_t k = n; k < n + 4; ++k) {
      auto t = base;
      t.choice = k < n + 2 ? 0 : 1 - majority_choice;
      people[k].trials.push_back(t);
    }
  }
  people[n].color_test_passed = false;
  people[n + 1].color_test_passed = false;
  return people;
}

}  // namespace emocolor::testing
