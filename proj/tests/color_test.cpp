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

#include "emocolor/color.hpp"

#include <gtest/gtest.h>

#include <random>
#include <set>

#include "oracles.hpp"

namespace emocolor {
namespace {

const FuzzyColorSpace& space() { return FuzzyColorSpace::default_space(); }
const BasicColorMapping& mapping() { return BasicColorMapping::default_mapping(); }

TEST(RgbToHsi, Salmon) {
  const auto p = rgb_to_hsi({255, 160, 122});
  EXPECT_NEAR(p.h, 17.0, 1.5);
  EXPECT_NEAR(p.s, 32.0, 1.0);
  EXPECT_EQ(p.i, 179.0);
  EXPECT_FALSE(p.achromatic);
}

TEST(RgbToHsi, PureRed) {
  const auto p = rgb_to_hsi({255, 0, 0});
  EXPECT_EQ(p.h, 0.0);
  EXPECT_EQ(p.s, 100.0);
  EXPECT_EQ(p.i, 85.0);
}

TEST(RgbToHsi, Gray) {
  const auto p = rgb_to_hsi({128, 128, 128});
  EXPECT_TRUE(p.achromatic);
  EXPECT_EQ(p.s, 0.0);
  EXPECT_EQ(p.i, 128.0);
  EXPECT_TRUE(rgb_to_hsi({0, 0, 0}).achromatic);
}

TEST(RgbToHsi, PrimaryAndSecondaryHues) {
  EXPECT_NEAR(rgb_to_hsi({0, 255, 0}).h, 120.0, 1e-9);
  EXPECT_NEAR(rgb_to_hsi({0, 0, 255}).h, 240.0, 1e-9);
  EXPECT_NEAR(rgb_to_hsi({255, 255, 0}).h, 60.0, 1e-9);
  EXPECT_NEAR(rgb_to_hsi({0, 255, 255}).h, 180.0, 1e-9);
  EXPECT_NEAR(rgb_to_hsi({255, 0, 255}).h, 300.0, 1e-9);
}

TEST(RgbToHsi, RangesOnRandomPixels) {
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> d(0, 255);
  for (int k = 0; k < 20000; ++k) {
    const RgbPixel px{std::uint8_t(d(rng)), std::uint8_t(d(rng)), std::uint8_t(d(rng))};
    const auto p = rgb_to_hsi(px);
    ASSERT_GE(p.h, 0.0);
    ASSERT_LT(p.h, 360.0);
    ASSERT_GE(p.s, 0.0);
    ASSERT_LE(p.s, 100.0);
    ASSERT_EQ(p.i * 3.0, double(px.r + px.g + px.b));
  }
}

// Integer multiples of a base pixel scale exactly, so I scales by the same
// factor and H is unchanged.
TEST(RgbToHsi, ScalingKeepsHueAndScalesIntensity) {
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> d(0, 15);
  for (int k = 0; k < 2000; ++k) {
    const int r = d(rng), g = d(rng), b = d(rng);
    if (r == g && g == b) continue;
    const auto top = rgb_to_hsi({std::uint8_t(16 * r), std::uint8_t(16 * g), std::uint8_t(16 * b)});
    for (int m = 1; m <= 16; ++m) {
      const auto p = rgb_to_hsi({std::uint8_t(m * r), std::uint8_t(m * g), std::uint8_t(m * b)});
      ASSERT_NEAR(p.h, top.h, 0.5);
      ASSERT_NEAR(p.i, top.i * m / 16.0, 1.0);
    }
  }
}

TEST(RgbToHsi, RoundedScalingKeepsIntensityWithinQuantization) {
  std::mt19937 rng(6);
  std::uniform_int_distribution<int> d(0, 255);
  std::uniform_real_distribution<double> t(0.01, 1.0);
  for (int k = 0; k < 5000; ++k) {
    const RgbPixel px{std::uint8_t(d(rng)), std::uint8_t(d(rng)), std::uint8_t(d(rng))};
    const double f = t(rng);
    auto sc = [&](std::uint8_t c) { return std::uint8_t(std::lround(c * f)); };
    const auto a = rgb_to_hsi(px), b = rgb_to_hsi({sc(px.r), sc(px.g), sc(px.b)});
    ASSERT_NEAR(b.i, a.i * f, 1.0);
  }
}

TEST(FuzzyColor, IndexOrderAndNames) {
  EXPECT_EQ(FuzzyColor::kCount, 120u);
  const auto all = all_fuzzy_colors();
  for (std::size_t i = 0; i < all.size(); ++i) {
    EXPECT_EQ(all[i].index(), i);
    EXPECT_EQ(FuzzyColor::from_index(i), all[i]);
    if (i) EXPECT_LT(all[i - 1], all[i]);
  }
  const auto c = make_fuzzy_color("Red", "Medium", "Pale");
  EXPECT_EQ(c.to_string(), "Red Medium Pale");
  EXPECT_THROW(make_fuzzy_color("Teal", "Medium", "Pale"), InputError);
}

TEST(Fuzzify, Salmon) {
  const FuzzyColor want{HueTerm::kRed, SaturationTerm::kMedium, IntensityTerm::kPale};
  EXPECT_EQ(space().fuzzify(RgbPixel{255, 160, 122}), want);
  EXPECT_EQ(space().fuzzify(HsiPixel{17, 32, 179, false}).color, want);
  const auto f = space().fuzzify(HsiPixel{17, 32, 179, false});
  EXPECT_GT(f.hue_degree, 0.5);
}

TEST(Fuzzify, Black) {
  const auto f = space().fuzzify(HsiPixel{0, 0, 0, true});
  EXPECT_EQ(f.color, (FuzzyColor{HueTerm::kRed, SaturationTerm::kLow, IntensityTerm::kDark}));
  EXPECT_EQ(f.intensity_degree, 1.0);
}

TEST(Fuzzify, MatchesExhaustiveOracle) {
  std::mt19937 rng(2024);
  std::uniform_int_distribution<int> d(0, 255);
  for (int k = 0; k < 1000; ++k) {
    const RgbPixel px{std::uint8_t(d(rng)), std::uint8_t(d(rng)), std::uint8_t(d(rng))};
    ASSERT_EQ(space().fuzzify(px), oracle::fuzzify_exhaustive(space(), px))
        << int(px.r) << "," << int(px.g) << "," << int(px.b);
  }
}

// Pixels sitting on partition crossovers exercise the tie rules.
TEST(Fuzzify, MatchesOracleOnGrid) {
  for (int r = 0; r < 256; r += 15) {
    for (int g = 0; g < 256; g += 15) {
      for (int b = 0; b < 256; b += 15) {
        const RgbPixel px{std::uint8_t(r), std::uint8_t(g), std::uint8_t(b)};
        ASSERT_EQ(space().fuzzify(px), oracle::fuzzify_exhaustive(space(), px));
      }
    }
  }
}

TEST(Fuzzify, RepresentativeFuzzifiesToItself) {
  for (const auto& c : all_fuzzy_colors()) {
    EXPECT_EQ(space().fuzzify(space().representative(c)).color, c) << c.to_string();
  }
}

TEST(Defuzzify, Examples) {
  auto basic = [](std::string_view h, std::string_view s, std::string_view i) {
    return defuzzify_to_basic(make_fuzzy_color(h, s, i), mapping());
  };
  EXPECT_EQ(basic("Blue", "High", "Dark"), BasicColor::kBlack);
  EXPECT_EQ(basic("Yellow", "Low", "Pale"), BasicColor::kGray);
  EXPECT_EQ(basic("Orange", "Medium", "Deep"), BasicColor::kBrown);
  EXPECT_EQ(basic("Yellow", "Medium", "Light"), BasicColor::kBeige);
  EXPECT_EQ(basic("Violet", "High", "Light"), BasicColor::kPurple);
  EXPECT_EQ(basic("Red", "High", "Light"), BasicColor::kRed);
  EXPECT_EQ(basic("Cyan", "Medium", "Deep"), BasicColor::kCyan);
}

TEST(Defuzzify, TotalWithPrecedence) {
  std::set<BasicColor> seen;
  int dark = 0, gray = 0;
  for (const auto& c : all_fuzzy_colors()) {
    const auto b = mapping()(c);
    EXPECT_LT(std::size_t(b), kBasicColorCount);
    seen.insert(b);
    if (c.intensity == IntensityTerm::kDark) {
      EXPECT_EQ(b, BasicColor::kBlack) << c.to_string();
      ++dark;
    } else if (c.saturation == SaturationTerm::kLow) {
      EXPECT_EQ(b, BasicColor::kGray) << c.to_string();
      ++gray;
    }
  }
  EXPECT_EQ(dark, 24);
  EXPECT_EQ(gray, 32);
  EXPECT_EQ(seen.size(), kBasicColorCount);
}

TEST(Config, DefaultsAreCanonicalAndRoundTrip) {
  const auto again = FuzzyColorSpace::from_text(space().canonical());
  EXPECT_EQ(again.canonical(), space().canonical());
  EXPECT_EQ(again.hue(), space().hue());
  const auto m = BasicColorMapping::from_text(mapping().canonical());
  EXPECT_EQ(m.canonical(), mapping().canonical());
}

TEST(Config, PartitionErrors) {
  auto j = nlohmann::json::parse(kDefaultPartitionConfig);
  auto bad = j;
  bad["variables"][0]["terms"][1]["name"] = "Amber";
  EXPECT_THROW(FuzzyColorSpace::from_json(bad), ConfigError);
  bad = j;
  bad["variables"][1]["terms"][1]["breakpoints"] = {40, 30, 55, 75};
  EXPECT_THROW(FuzzyColorSpace::from_json(bad), ConfigError);
  bad = j;
  bad["variables"][2]["terms"][2]["breakpoints"] = {130, 150, 152, 154};
  EXPECT_THROW(FuzzyColorSpace::from_json(bad), ConfigError);  // leaves a gap
  bad = j;
  bad["format"] = "other";
  EXPECT_THROW(FuzzyColorSpace::from_json(bad), ConfigError);
  bad = j;
  bad["variables"][0]["terms"][0]["shape"] = "gaussian";
  EXPECT_THROW(FuzzyColorSpace::from_json(bad), ConfigError);
  EXPECT_THROW(FuzzyColorSpace::from_text("{"), ConfigError);
}

TEST(Config, AlternativePartitionChangesResults) {
  auto j = nlohmann::json::parse(kDefaultPartitionConfig);
  // Push the Red/Orange crossover below the salmon hue.
  j["variables"][0]["terms"][0]["breakpoints"] = {310, 350, 5, 12};
  j["variables"][0]["terms"][1]["breakpoints"] = {5, 12, 35, 50};
  const auto alt = FuzzyColorSpace::from_json(j);
  EXPECT_EQ(alt.fuzzify(RgbPixel{255, 160, 122}).hue, HueTerm::kOrange);
  EXPECT_NE(alt.canonical(), space().canonical());
}

TEST(Config, MappingErrorsAndCustomRules) {
  EXPECT_THROW(BasicColorMapping::from_text(R"({"format":"emocolor-basic-mapping","version":1,
    "rules":[{"hues":["Red"],"saturations":["High"],"intensities":["Deep"],"basic":"maroon"}]})"),
               ConfigError);
  EXPECT_THROW(BasicColorMapping::from_text(R"({"format":"emocolor-basic-mapping","version":1,
    "rules":[{"hues":[],"saturations":["High"],"intensities":["Deep"],"basic":"red"}]})"),
               ConfigError);
  const auto m = BasicColorMapping::from_text(R"({"format":"emocolor-basic-mapping","version":1,
    "rules":[{"hues":["Green"],"saturations":["High"],"intensities":["Deep"],"basic":"brown"},
             {"hues":["Green"],"saturations":["High"],"intensities":["Deep"],"basic":"cyan"}]})");
  EXPECT_EQ(m(make_fuzzy_color("Green", "High", "Deep")), BasicColor::kBrown);
  EXPECT_EQ(m(make_fuzzy_color("Orange", "Medium", "Deep")), BasicColor::kOrange);
  EXPECT_EQ(m(make_fuzzy_color("Green", "High", "Dark")), BasicColor::kBlack);
}

}  // namespace
}  // namespace emocolor
