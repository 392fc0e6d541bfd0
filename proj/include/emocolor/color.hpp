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

// Crisp RGB -> HSI conversion, the 120-color fuzzy HSI color space and the
// collapse of fuzzy colors onto 11 basic color names.

#include <array>
#include <cmath>
#include <compare>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "emocolor/error.hpp"
#include "emocolor/fuzzy.hpp"
#include "json.hpp"

namespace emocolor {

struct RgbPixel {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  friend bool operator==(const RgbPixel&, const RgbPixel&) = default;
};

struct HsiPixel {
  double h = 0.0;  // degrees in [0, 360); 0 when achromatic
  double s = 0.0;  // percent in [0, 100]
  double i = 0.0;  // level in [0, 255]
  bool achromatic = false;
};

inline HsiPixel rgb_to_hsi(RgbPixel p) {
  const int r = p.r, g = p.g, b = p.b;
  const int sum = r + g + b;
  const int lo = std::min({r, g, b});
  HsiPixel out;
  out.i = sum / 3.0;
  if (lo * 3 == sum) {  // r == g == b, including black
    out.achromatic = true;
    return out;
  }
  out.s = 100.0 * (1.0 - 3.0 * lo / sum);
  const double num = 0.5 * ((r - g) + (r - b));
  const double den = std::sqrt(double((r - g) * (r - g) + (r - b) * (g - b)));
  const double theta =
      std::acos(std::clamp(num / den, -1.0, 1.0)) * 180.0 / std::numbers::pi;
  out.h = b > g ? 360.0 - theta : theta;
  if (out.h >= 360.0) out.h -= 360.0;
  return out;
}

// Display-only inverse used for swatches. Not an exact inverse of
// rgb_to_hsi after 8-bit quantization.
inline RgbPixel hsi_to_rgb(const HsiPixel& p) {
  const double i = p.i / 255.0;
  const double s = p.s / 100.0;
  double h = std::fmod(p.h, 360.0);
  if (h < 0) h += 360.0;
  auto sector = [&](double hh) {
    const double rad = hh * std::numbers::pi / 180.0;
    const double x = i * (1 - s);
    const double y = i * (1 + s * std::cos(rad) / std::cos(std::numbers::pi / 3 - rad));
    const double z = 3 * i - (x + y);
    return std::array<double, 3>{x, y, z};
  };
  double r, g, b;
  if (h < 120) {
    auto [x, y, z] = sector(h);
    b = x, r = y, g = z;
  } else if (h < 240) {
    auto [x, y, z] = sector(h - 120);
    r = x, g = y, b = z;
  } else {
    auto [x, y, z] = sector(h - 240);
    g = x, b = y, r = z;
  }
  auto q = [](double v) {
    return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
  };
  return {q(r), q(g), q(b)};
}

// ---------------------------------------------------------------------------
// Fuzzy colors

enum class HueTerm : std::uint8_t { kRed, kOrange, kYellow, kGreen, kCyan, kBlue, kViolet, kMagenta };
enum class SaturationTerm : std::uint8_t { kLow, kMedium, kHigh };
enum class IntensityTerm : std::uint8_t { kDark, kDeep, kMedium, kPale, kLight };

inline constexpr std::array<std::string_view, 8> kHueTermNames = {
    "Red", "Orange", "Yellow", "Green", "Cyan", "Blue", "Violet", "Magenta"};
inline constexpr std::array<std::string_view, 3> kSaturationTermNames = {"Low", "Medium", "High"};
inline constexpr std::array<std::string_view, 5> kIntensityTermNames = {
    "Dark", "Deep", "Medium", "Pale", "Light"};

inline std::string_view name_of(HueTerm t) { return kHueTermNames[std::size_t(t)]; }
inline std::string_view name_of(SaturationTerm t) { return kSaturationTermNames[std::size_t(t)]; }
inline std::string_view name_of(IntensityTerm t) { return kIntensityTermNames[std::size_t(t)]; }

template <typename Enum, std::size_t N>
std::optional<Enum> parse_term(std::string_view name,
                               const std::array<std::string_view, N>& names) {
  for (std::size_t i = 0; i < N; ++i) {
    if (names[i] == name) return static_cast<Enum>(i);
  }
  return std::nullopt;
}

// Ordered intensity-major, then saturation, then hue.
struct FuzzyColor {
  HueTerm hue = HueTerm::kRed;
  SaturationTerm saturation = SaturationTerm::kLow;
  IntensityTerm intensity = IntensityTerm::kDark;

  static constexpr std::size_t kCount = 120;

  constexpr std::size_t index() const {
    return std::size_t(intensity) * 24 + std::size_t(saturation) * 8 + std::size_t(hue);
  }
  static constexpr FuzzyColor from_index(std::size_t idx) {
    return {static_cast<HueTerm>(idx % 8), static_cast<SaturationTerm>((idx / 8) % 3),
            static_cast<IntensityTerm>(idx / 24)};
  }

  std::string to_string() const {
    return std::string(name_of(hue)) + " " + std::string(name_of(saturation)) + " " +
           std::string(name_of(intensity));
  }

  friend constexpr bool operator==(const FuzzyColor& a, const FuzzyColor& b) {
    return a.index() == b.index();
  }
  friend constexpr std::strong_ordering operator<=>(const FuzzyColor& a, const FuzzyColor& b) {
    return a.index() <=> b.index();
  }
};

inline std::vector<FuzzyColor> all_fuzzy_colors() {
  std::vector<FuzzyColor> out;
  out.reserve(FuzzyColor::kCount);
  for (std::size_t i = 0; i < FuzzyColor::kCount; ++i) out.push_back(FuzzyColor::from_index(i));
  return out;
}

inline FuzzyColor make_fuzzy_color(std::string_view hue, std::string_view saturation,
                                   std::string_view intensity) {
  auto h = parse_term<HueTerm>(hue, kHueTermNames);
  auto s = parse_term<SaturationTerm>(saturation, kSaturationTermNames);
  auto i = parse_term<IntensityTerm>(intensity, kIntensityTermNames);
  if (!h) throw InputError("unknown hue term '" + std::string(hue) + "'");
  if (!s) throw InputError("unknown saturation term '" + std::string(saturation) + "'");
  if (!i) throw InputError("unknown intensity term '" + std::string(intensity) + "'");
  return {*h, *s, *i};
}

struct FuzzifiedPixel {
  FuzzyColor color;
  double hue_degree = 0.0;
  double saturation_degree = 0.0;
  double intensity_degree = 0.0;
};

// ---------------------------------------------------------------------------
// Partition configuration

// Hue kernels sit at the conventional color-wheel centers with plateaus;
// saturation and intensity are trapezoidal. All three are Ruspini
// partitions. The Red/Orange crossover is at 17.5 degrees and the
// Medium/Pale intensity crossover at 165.
inline constexpr std::string_view kDefaultPartitionConfig = R"({
  "format": "emocolor-partitions",
  "version": 1,
  "variables": [
    {
      "name": "Hue", "domain": [0, 360], "cyclic": true,
      "terms": [
        {"name": "Red",     "shape": "trapezoidal", "breakpoints": [310, 350, 10, 25]},
        {"name": "Orange",  "shape": "trapezoidal", "breakpoints": [10, 25, 35, 50]},
        {"name": "Yellow",  "shape": "trapezoidal", "breakpoints": [35, 50, 70, 100]},
        {"name": "Green",   "shape": "trapezoidal", "breakpoints": [70, 100, 140, 170]},
        {"name": "Cyan",    "shape": "trapezoidal", "breakpoints": [140, 170, 190, 220]},
        {"name": "Blue",    "shape": "trapezoidal", "breakpoints": [190, 220, 250, 262]},
        {"name": "Violet",  "shape": "trapezoidal", "breakpoints": [250, 262, 278, 290]},
        {"name": "Magenta", "shape": "trapezoidal", "breakpoints": [278, 290, 310, 350]}
      ]
    },
    {
      "name": "Saturation", "domain": [0, 100], "cyclic": false,
      "terms": [
        {"name": "Low",    "shape": "trapezoidal", "breakpoints": [0, 0, 10, 30]},
        {"name": "Medium", "shape": "trapezoidal", "breakpoints": [10, 30, 55, 75]},
        {"name": "High",   "shape": "trapezoidal", "breakpoints": [55, 75, 100, 100]}
      ]
    },
    {
      "name": "Intensity", "domain": [0, 255], "cyclic": false,
      "terms": [
        {"name": "Dark",   "shape": "trapezoidal", "breakpoints": [0, 0, 40, 80]},
        {"name": "Deep",   "shape": "trapezoidal", "breakpoints": [40, 80, 110, 150]},
        {"name": "Medium", "shape": "trapezoidal", "breakpoints": [110, 150, 155, 175]},
        {"name": "Pale",   "shape": "trapezoidal", "breakpoints": [155, 175, 220, 240]},
        {"name": "Light",  "shape": "trapezoidal", "breakpoints": [220, 240, 255, 255]}
      ]
    }
  ]
})";

namespace detail {

inline MembershipFunction parse_mf(const nlohmann::json& j, std::optional<double> period,
                                   const std::string& where) {
  const auto shape = j.at("shape").get<std::string>();
  const auto bp = j.at("breakpoints").get<std::vector<double>>();
  if (shape == "triangular") {
    if (bp.size() != 3) throw ConfigError(where + ": triangular needs 3 breakpoints");
    return MembershipFunction::triangular(bp[0], bp[1], bp[2], period);
  }
  if (shape == "trapezoidal") {
    if (bp.size() != 4) throw ConfigError(where + ": trapezoidal needs 4 breakpoints");
    return MembershipFunction::trapezoidal(bp[0], bp[1], bp[2], bp[3], period);
  }
  throw ConfigError(where + ": unknown shape '" + shape + "'");
}

template <std::size_t N>
LinguisticVariable parse_variable(const nlohmann::json& j, std::string_view expected_name,
                                  const std::array<std::string_view, N>& term_names) {
  const auto name = j.at("name").get<std::string>();
  if (name != expected_name) {
    throw ConfigError("expected variable '" + std::string(expected_name) + "', found '" +
                      name + "'");
  }
  const auto domain = j.at("domain").get<std::vector<double>>();
  if (domain.size() != 2) throw ConfigError(name + ": domain must be [lo, hi]");
  std::optional<double> period;
  if (j.value("cyclic", false)) period = domain[1] - domain[0];
  const auto& terms_json = j.at("terms");
  if (terms_json.size() != N) {
    throw ConfigError(name + ": expected " + std::to_string(N) + " terms");
  }
  std::vector<Term> terms;
  for (std::size_t k = 0; k < N; ++k) {
    const auto term_name = terms_json[k].at("name").get<std::string>();
    if (term_name != term_names[k]) {
      throw ConfigError(name + ": term " + std::to_string(k) + " must be '" +
                        std::string(term_names[k]) + "', found '" + term_name + "'");
    }
    terms.push_back({term_name, parse_mf(terms_json[k], period, name + "/" + term_name)});
  }
  return LinguisticVariable(name, domain[0], domain[1], std::move(terms));
}

}  // namespace detail

// The three linguistic variables whose term products form the 120 fuzzy
// colors. Term names and order are fixed; breakpoints come from config.
class FuzzyColorSpace {
 public:
  static FuzzyColorSpace from_json(const nlohmann::json& config) {
    try {
      if (config.value("format", "") != "emocolor-partitions") {
        throw ConfigError("partition config: missing format tag 'emocolor-partitions'");
      }
      if (config.value("version", 0) != 1) throw ConfigError("partition config: unsupported version");
      const auto& vars = config.at("variables");
      if (vars.size() != 3) throw ConfigError("partition config: expected 3 variables");
      return FuzzyColorSpace(detail::parse_variable(vars[0], "Hue", kHueTermNames),
                             detail::parse_variable(vars[1], "Saturation", kSaturationTermNames),
                             detail::parse_variable(vars[2], "Intensity", kIntensityTermNames),
                             config.dump());
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("partition config: ") + e.what());
    }
  }

  static FuzzyColorSpace from_text(std::string_view text) {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw ConfigError(std::string("partition config: ") + e.what());
    }
    return from_json(j);
  }

  static const FuzzyColorSpace& default_space() {
    static const FuzzyColorSpace space = from_text(kDefaultPartitionConfig);
    return space;
  }

  const LinguisticVariable& hue() const { return hue_; }
  const LinguisticVariable& saturation() const { return saturation_; }
  const LinguisticVariable& intensity() const { return intensity_; }

  // Compact JSON of the parsed configuration; feeds the KB fingerprint.
  const std::string& canonical() const { return canonical_; }

  FuzzifiedPixel fuzzify(const HsiPixel& p) const {
    // Achromatic pixels carry hue 0; Low saturation routes them to gray.
    const auto h = hue_.classify(p.achromatic ? 0.0 : p.h);
    const auto s = saturation_.classify(p.s);
    const auto i = intensity_.classify(p.i);
    return {FuzzyColor{static_cast<HueTerm>(h.index), static_cast<SaturationTerm>(s.index),
                       static_cast<IntensityTerm>(i.index)},
            h.degree, s.degree, i.degree};
  }

  FuzzyColor fuzzify(RgbPixel p) const { return fuzzify(rgb_to_hsi(p)).color; }

  // Kernel-center crisp point of a fuzzy color.
  HsiPixel representative(FuzzyColor c) const {
    return {hue_.terms()[std::size_t(c.hue)].mf.kernel_center(),
            saturation_.terms()[std::size_t(c.saturation)].mf.kernel_center(),
            intensity_.terms()[std::size_t(c.intensity)].mf.kernel_center(), false};
  }

 private:
  FuzzyColorSpace(LinguisticVariable h, LinguisticVariable s, LinguisticVariable i,
                  std::string canonical)
      : hue_(std::move(h)),
        saturation_(std::move(s)),
        intensity_(std::move(i)),
        canonical_(std::move(canonical)) {}

  LinguisticVariable hue_;
  LinguisticVariable saturation_;
  LinguisticVariable intensity_;
  std::string canonical_;
};

// ---------------------------------------------------------------------------
// Basic colors

enum class BasicColor : std::uint8_t {
  kRed, kOrange, kYellow, kGreen, kCyan, kBlue, kBlack, kBrown, kBeige, kPurple, kGray
};
inline constexpr std::size_t kBasicColorCount = 11;
inline constexpr std::array<std::string_view, kBasicColorCount> kBasicColorNames = {
    "red", "orange", "yellow", "green", "cyan", "blue",
    "black", "brown", "beige", "purple", "gray"};

inline std::string_view name_of(BasicColor c) { return kBasicColorNames[std::size_t(c)]; }

inline std::optional<BasicColor> parse_basic_color(std::string_view name) {
  return parse_term<BasicColor>(name, kBasicColorNames);
}

inline constexpr std::string_view kDefaultMappingTable = R"({
  "format": "emocolor-basic-mapping",
  "version": 1,
  "rules": [
    {"hues": ["Red", "Orange", "Yellow"], "saturations": ["Medium", "High"],
     "intensities": ["Deep", "Medium"], "basic": "brown"},
    {"hues": ["Orange", "Yellow"], "saturations": ["Medium"],
     "intensities": ["Pale", "Light"], "basic": "beige"}
  ]
})";

// Rule cascade: Dark intensity -> black, Low saturation -> gray,
// Violet/Magenta -> purple, then the configurable table (first match wins),
// then the hue's namesake.
class BasicColorMapping {
 public:
  struct Rule {
    std::vector<HueTerm> hues;
    std::vector<SaturationTerm> saturations;
    std::vector<IntensityTerm> intensities;
    BasicColor basic = BasicColor::kGray;
  };

  static BasicColorMapping from_json(const nlohmann::json& config) {
    try {
      if (config.value("format", "") != "emocolor-basic-mapping") {
        throw ConfigError("mapping table: missing format tag 'emocolor-basic-mapping'");
      }
      if (config.value("version", 0) != 1) throw ConfigError("mapping table: unsupported version");
      std::vector<Rule> rules;
      for (const auto& r : config.at("rules")) {
        Rule rule;
        rule.hues = parse_set<HueTerm>(r.at("hues"), kHueTermNames, "hue");
        rule.saturations =
            parse_set<SaturationTerm>(r.at("saturations"), kSaturationTermNames, "saturation");
        rule.intensities =
            parse_set<IntensityTerm>(r.at("intensities"), kIntensityTermNames, "intensity");
        const auto basic_name = r.at("basic").get<std::string>();
        auto basic = parse_basic_color(basic_name);
        if (!basic) throw ConfigError("mapping table: unknown basic color '" + basic_name + "'");
        rule.basic = *basic;
        rules.push_back(std::move(rule));
      }
      return BasicColorMapping(std::move(rules), config.dump());
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("mapping table: ") + e.what());
    }
  }

  static BasicColorMapping from_text(std::string_view text) {
    try {
      return from_json(nlohmann::json::parse(text));
    } catch (const nlohmann::json::parse_error& e) {
      throw ConfigError(std::string("mapping table: ") + e.what());
    }
  }

  static const BasicColorMapping& default_mapping() {
    static const BasicColorMapping m = from_text(kDefaultMappingTable);
    return m;
  }

  const std::vector<Rule>& rules() const { return rules_; }
  const std::string& canonical() const { return canonical_; }

  BasicColor operator()(FuzzyColor c) const { return table_[c.index()]; }

 private:
  BasicColorMapping(std::vector<Rule> rules, std::string canonical)
      : rules_(std::move(rules)), canonical_(std::move(canonical)) {
    for (std::size_t idx = 0; idx < FuzzyColor::kCount; ++idx) {
      table_[idx] = resolve(FuzzyColor::from_index(idx));
    }
  }

  template <typename Enum, std::size_t N>
  static std::vector<Enum> parse_set(const nlohmann::json& j,
                                     const std::array<std::string_view, N>& names,
                                     const char* what) {
    std::vector<Enum> out;
    for (const auto& v : j) {
      const auto s = v.get<std::string>();
      auto e = parse_term<Enum>(s, names);
      if (!e) throw ConfigError(std::string("mapping table: unknown ") + what + " term '" + s + "'");
      out.push_back(*e);
    }
    if (out.empty()) throw ConfigError(std::string("mapping table: empty ") + what + " set");
    return out;
  }

  template <typename T>
  static bool contains(const std::vector<T>& v, T x) {
    return std::find(v.begin(), v.end(), x) != v.end();
  }

  BasicColor resolve(FuzzyColor c) const {
    if (c.intensity == IntensityTerm::kDark) return BasicColor::kBlack;
    if (c.saturation == SaturationTerm::kLow) return BasicColor::kGray;
    if (c.hue == HueTerm::kViolet || c.hue == HueTerm::kMagenta) return BasicColor::kPurple;
    for (const auto& r : rules_) {
      if (contains(r.hues, c.hue) && contains(r.saturations, c.saturation) &&
          contains(r.intensities, c.intensity)) {
        return r.basic;
      }
    }
    switch (c.hue) {
      case HueTerm::kRed: return BasicColor::kRed;
      case HueTerm::kOrange: return BasicColor::kOrange;
      case HueTerm::kYellow: return BasicColor::kYellow;
      case HueTerm::kGreen: return BasicColor::kGreen;
      case HueTerm::kCyan: return BasicColor::kCyan;
      case HueTerm::kBlue: return BasicColor::kBlue;
      default: break;
    }
    throw ConfigError("mapping table: no basic color for " + c.to_string());
  }

  std::vector<Rule> rules_;
  std::string canonical_;
  std::array<BasicColor, FuzzyColor::kCount> table_{};
};

inline BasicColor defuzzify_to_basic(FuzzyColor c, const BasicColorMapping& mapping) {
  return mapping(c);
}

}  // namespace emocolor
