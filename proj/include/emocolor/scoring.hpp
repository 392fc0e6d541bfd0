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

// Palette similarity, ranked emotion scoring, and fuzzy-hedge retrieval
// queries over emotion scores.

#include <algorithm>
#include <bitset>
#include <cctype>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "emocolor/color.hpp"
#include "emocolor/emotion.hpp"
#include "emocolor/error.hpp"
#include "emocolor/fuzzy.hpp"
#include "emocolor/knowledge_base.hpp"
#include "emocolor/palette.hpp"

namespace emocolor {

using ColorSet = std::bitset<FuzzyColor::kCount>;

inline ColorSet to_color_set(std::span<const FuzzyColor> colors) {
  ColorSet s;
  for (auto c : colors) s.set(c.index());
  return s;
}

inline ColorSet to_color_set(const FuzzyPalette& p) { return to_color_set(p.colors()); }
inline ColorSet to_color_set(const EmotionPalette& p) { return to_color_set(p.colors()); }

// |E ∩ I| / |E ∪ I|, with 0/0 defined as 0.
inline double jaccard(const ColorSet& e, const ColorSet& i) {
  const auto uni = (e | i).count();
  if (uni == 0) return 0.0;
  return double((e & i).count()) / double(uni);
}

// Proportion-weighted variant: sum of minima over sum of maxima. Image
// entries use their pixel proportion, emotion entries their share.
inline double weighted_jaccard(const FuzzyPalette& image, const EmotionPalette& emotion) {
  std::array<double, FuzzyColor::kCount> a{}, b{};
  for (const auto& e : image.entries) a[e.color.index()] = e.proportion;
  for (const auto& e : emotion.entries) b[e.color.index()] = e.share;
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < FuzzyColor::kCount; ++k) {
    num += std::min(a[k], b[k]);
    den += std::max(a[k], b[k]);
  }
  return den == 0.0 ? 0.0 : num / den;
}

enum class SimilarityMode { kSet, kWeighted };

struct EmotionScore {
  Emotion emotion = Emotion::kGratitude;
  double jaccard = 0.0;

  friend bool operator==(const EmotionScore&, const EmotionScore&) = default;
};

// One score per emotion, descending; ties alphabetical by emotion name.
inline std::vector<EmotionScore> score_emotions(const FuzzyPalette& image_palette,
                                                const KnowledgeBase& kb,
                                                SimilarityMode mode = SimilarityMode::kSet) {
  const ColorSet img = to_color_set(image_palette);
  std::vector<EmotionScore> out;
  for (auto e : kAllEmotions) {
    const double s = mode == SimilarityMode::kSet
                         ? jaccard(to_color_set(kb.palette(e)), img)
                         : weighted_jaccard(image_palette, kb.palette(e));
    out.push_back({e, s});
  }
  std::sort(out.begin(), out.end(), [](const EmotionScore& a, const EmotionScore& b) {
    if (a.jaccard != b.jaccard) return a.jaccard > b.jaccard;
    return name_of(a.emotion) < name_of(b.emotion);
  });
  return out;
}

inline double score_of(std::span<const EmotionScore> scores, Emotion e) {
  for (const auto& s : scores) {
    if (s.emotion == e) return s.jaccard;
  }
  throw QueryError("no score for emotion", std::string(name_of(e)));
}

// ---------------------------------------------------------------------------
// Intensity queries

inline LinguisticVariable default_intensity_variable() {
  return LinguisticVariable(
      "EmotionIntensity", 0.0, 1.0,
      {{"low", MembershipFunction::trapezoidal(0.0, 0.0, 0.15, 0.35)},
       {"medium", MembershipFunction::trapezoidal(0.15, 0.35, 0.5, 0.7)},
       {"high", MembershipFunction::trapezoidal(0.5, 0.7, 1.0, 1.0)}});
}

struct Query {
  Emotion emotion = Emotion::kGratitude;
  std::vector<Hedge> hedges;  // written order
  std::string intensity;      // term name of the intensity variable

  std::string to_string() const {
    std::string out;
    for (auto h : hedges) out += std::string(hedge_name(h)) + " ";
    return out + intensity + " " + std::string(name_of(emotion));
  }
};

// Grammar: [not] [very|more-or-less]* {low|medium|high} {emotion}
inline Query parse_query(std::string_view text, const LinguisticVariable& intensity) {
  std::vector<std::string> tokens;
  {
    std::istringstream in{std::string(text)};
    std::string t;
    while (in >> t) {
      for (auto& c : t) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      tokens.push_back(t);
    }
  }
  if (tokens.size() < 2) throw QueryError("query needs an intensity term and an emotion", std::string(text));
  Query q;
  for (std::size_t k = 0; k + 2 < tokens.size(); ++k) {
    auto h = parse_hedge(tokens[k]);
    if (!h) throw QueryError("unknown hedge '" + tokens[k] + "'", tokens[k]);
    if (*h == Hedge::kNot && k != 0) {
      throw QueryError("'not' may only lead the query", tokens[k]);
    }
    q.hedges.push_back(*h);
  }
  const auto& term = tokens[tokens.size() - 2];
  if (!intensity.find(term)) throw QueryError("unknown intensity term '" + term + "'", term);
  q.intensity = term;
  auto e = parse_emotion(tokens.back());
  if (!e) throw QueryError("unknown emotion '" + tokens.back() + "'", tokens.back());
  q.emotion = *e;
  return q;
}

// Structured form used by the HTTP search endpoint; hedges comma-separated
// in written order.
inline Query make_query(std::string_view emotion, std::string_view intensity_term,
                        std::string_view hedges, const LinguisticVariable& intensity) {
  std::string text;
  std::size_t start = 0;
  while (start <= hedges.size() && !hedges.empty()) {
    const auto comma = hedges.find(',', start);
    const auto tok = hedges.substr(start, comma == hedges.npos ? hedges.npos : comma - start);
    if (tok.empty()) throw QueryError("empty hedge in list", std::string(hedges));
    text += std::string(tok) + " ";
    if (comma == hedges.npos) break;
    start = comma + 1;
  }
  if (intensity_term.empty()) throw QueryError("missing intensity term", "");
  if (emotion.empty()) throw QueryError("missing emotion", "");
  text += std::string(intensity_term) + " " + std::string(emotion);
  return parse_query(text, intensity);
}

inline double match_degree(const Query& q, double jaccard_score,
                           const LinguisticVariable& intensity) {
  const auto term = intensity.find(q.intensity);
  if (!term) throw QueryError("unknown intensity term '" + q.intensity + "'", q.intensity);
  const double mu = intensity.terms()[*term].mf(intensity.clamp_to_domain(jaccard_score));
  return apply_hedges(q.hedges, mu);
}

struct ScoredImage {
  std::string id;
  std::vector<EmotionScore> scores;
};

struct QueryMatch {
  std::string id;
  double degree = 0.0;
  double jaccard = 0.0;

  friend bool operator==(const QueryMatch&, const QueryMatch&) = default;
};

// Degree descending, ties by image id.
inline std::vector<QueryMatch> match_query(const Query& q, std::span<const ScoredImage> images,
                                           const LinguisticVariable& intensity) {
  std::vector<QueryMatch> out;
  out.reserve(images.size());
  for (const auto& img : images) {
    const double j = score_of(img.scores, q.emotion);
    out.push_back({img.id, match_degree(q, j, intensity), j});
  }
  std::sort(out.begin(), out.end(), [](const QueryMatch& a, const QueryMatch& b) {
    if (a.degree != b.degree) return a.degree > b.degree;
    return a.id < b.id;
  });
  return out;
}

}  // namespace emocolor
