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

#include "emocolor/fuzzy.hpp"

#include <gtest/gtest.h>

#include <random>

#include "emocolor/color.hpp"
#include "emocolor/scoring.hpp"

namespace emocolor {
namespace {

TEST(Membership, TriangleExamples) {
  const auto t = MembershipFunction::triangular(0, 5, 10);
  EXPECT_DOUBLE_EQ(t(5), 1.0);
  EXPECT_DOUBLE_EQ(t(2.5), 0.5);
  EXPECT_DOUBLE_EQ(t(7.5), 0.5);
  EXPECT_DOUBLE_EQ(t(-1), 0.0);
  EXPECT_DOUBLE_EQ(t(10), 0.0);
}

TEST(Membership, TrapezoidExamples) {
  const auto t = MembershipFunction::trapezoidal(0, 2, 4, 6);
  EXPECT_DOUBLE_EQ(t(3), 1.0);
  EXPECT_DOUBLE_EQ(t(5), 0.5);
  EXPECT_DOUBLE_EQ(t(7), 0.0);
  EXPECT_DOUBLE_EQ(t(1), 0.5);
}

TEST(Membership, ShoulderWithZeroWidthEdge) {
  const auto t = MembershipFunction::trapezoidal(0, 0, 10, 30);
  EXPECT_DOUBLE_EQ(t(0), 1.0);
  EXPECT_DOUBLE_EQ(t(20), 0.5);
}

TEST(Membership, MalformedBreakpoints) {
  EXPECT_THROW(MembershipFunction::triangular(5, 0, 10), ConfigError);
  EXPECT_THROW(MembershipFunction::trapezoidal(0, 4, 2, 6), ConfigError);
  EXPECT_THROW(MembershipFunction::trapezoidal(0, 1, 2, std::nan("")), ConfigError);
  EXPECT_THROW(MembershipFunction::trapezoidal(0, 100, 300, 380, 360.0), ConfigError);
}

TEST(Membership, CyclicWrap) {
  const auto red = MembershipFunction::trapezoidal(310, 350, 10, 25, 360.0);
  EXPECT_DOUBLE_EQ(red(0), 1.0);
  EXPECT_DOUBLE_EQ(red(360), 1.0);
  EXPECT_DOUBLE_EQ(red(355), 1.0);
  EXPECT_DOUBLE_EQ(red(330), 0.5);
  EXPECT_DOUBLE_EQ(red(-30), 0.5);
  EXPECT_DOUBLE_EQ(red(17.5), 0.5);
  EXPECT_DOUBLE_EQ(red(180), 0.0);
  EXPECT_DOUBLE_EQ(red.kernel_center(), 0.0);
}

TEST(Hedge, Examples) {
  EXPECT_EQ(apply_hedge(Hedge::kVery, 0.5), 0.25);
  EXPECT_EQ(apply_hedge(Hedge::kMoreOrLess, 0.25), 0.5);
  EXPECT_DOUBLE_EQ(apply_hedge(Hedge::kNot, 0.3), 0.7);
  const std::vector<Hedge> not_very{Hedge::kNot, Hedge::kVery};
  EXPECT_DOUBLE_EQ(apply_hedges(not_very, 0.6), 0.64);
}

TEST(Hedge, WrittenOrderAppliesInnermostFirst) {
  // very not 0.6 = (1 - 0.6)^2, not very 0.6 = 1 - 0.36.
  const std::vector<Hedge> very_not{Hedge::kVery, Hedge::kNot};
  EXPECT_DOUBLE_EQ(apply_hedges(very_not, 0.6), 0.16);
}

TEST(Hedge, Identities) {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> d(0.0, 1.0);
  for (int i = 0; i < 10000; ++i) {
    const double u = d(rng);
    EXPECT_NEAR(apply_hedge(Hedge::kVery, apply_hedge(Hedge::kMoreOrLess, u)), u, 1e-12);
    EXPECT_EQ(apply_hedge(Hedge::kNot, apply_hedge(Hedge::kNot, u)), 1.0 - (1.0 - u));
  }
  EXPECT_EQ(apply_hedge(Hedge::kNot, apply_hedge(Hedge::kNot, 0.25)), 0.25);
}

TEST(Hedge, DomainErrors) {
  EXPECT_THROW(apply_hedge(Hedge::kVery, 1.5), DomainError);
  EXPECT_THROW(apply_hedge(Hedge::kNot, -0.1), DomainError);
  EXPECT_THROW(apply_hedges({}, std::nan("")), DomainError);
}

TEST(Hedge, Names) {
  EXPECT_EQ(parse_hedge("very"), Hedge::kVery);
  EXPECT_EQ(parse_hedge("more_or_less"), Hedge::kMoreOrLess);
  EXPECT_EQ(parse_hedge("more-or-less"), Hedge::kMoreOrLess);
  EXPECT_EQ(parse_hedge("somewhat"), std::nullopt);
  EXPECT_EQ(hedge_name(Hedge::kNot), "not");
}

TEST(AlphaCut, Threshold) {
  const std::map<std::string, double> m{{"a", 0.9}, {"b", 0.5}, {"c", 0.1}};
  EXPECT_EQ(alpha_cut(m, 0.5), (std::set<std::string>{"a", "b"}));
  const std::map<std::string, double> k{{"a", 1.0}, {"b", 0.999}, {"c", 1.0}};
  EXPECT_EQ(alpha_cut(k, 1.0), (std::set<std::string>{"a", "c"}));
  EXPECT_THROW(alpha_cut(m, 0.0), DomainError);
  EXPECT_THROW(alpha_cut(m, 1.01), DomainError);
}

TEST(AlphaCut, SampledSubset) {
  const auto t = MembershipFunction::triangular(0, 5, 10);
  std::vector<std::pair<double, double>> samples;
  for (int x = 0; x <= 10; ++x) samples.emplace_back(x, t(x));
  EXPECT_EQ(alpha_cut(samples, 0.6), (std::vector<double>{3, 4, 5, 6, 7}));
}

// Every fuzzy subset of a 4-element universe with degrees in {0, .25, ...,
// 1}, compared to element-wise max/min.
TEST(AlphaCut, DistributesOverUnionAndIntersection) {
  const std::array<double, 5> levels{0.0, 0.25, 0.5, 0.75, 1.0};
  const int n = 4;
  int combos = 1;
  for (int i = 0; i < n; ++i) combos *= 5;
  auto make = [&](int code) {
    std::map<int, double> m;
    for (int i = 0; i < n; ++i) {
      m[i] = levels[code % 5];
      code /= 5;
    }
    return m;
  };
  int checked = 0;
  for (int a = 0; a < combos; a += 3) {
    for (int b = 0; b < combos; b += 7) {
      const auto A = make(a), B = make(b);
      const auto U = fuzzy_union(A, B), I = fuzzy_intersection(A, B);
      for (int x = 0; x < n; ++x) {
        EXPECT_EQ(U.at(x), std::max(A.at(x), B.at(x)));
        EXPECT_EQ(I.at(x), std::min(A.at(x), B.at(x)));
      }
      for (double alpha : {0.25, 0.5, 0.75, 1.0}) {
        const auto Aa = alpha_cut(A, alpha), Ba = alpha_cut(B, alpha);
        std::set<int> u, i;
        std::set_union(Aa.begin(), Aa.end(), Ba.begin(), Ba.end(), std::inserter(u, u.end()));
        std::set_intersection(Aa.begin(), Aa.end(), Ba.begin(), Ba.end(),
                              std::inserter(i, i.end()));
        ASSERT_EQ(alpha_cut(U, alpha), u);
        ASSERT_EQ(alpha_cut(I, alpha), i);
        ++checked;
      }
    }
  }
  EXPECT_GT(checked, 1000);
}

TEST(Classify, Examples) {
  const auto& space = FuzzyColorSpace::default_space();
  const auto low = space.saturation().classify(0);
  EXPECT_EQ(low.name, "Low");
  EXPECT_EQ(low.degree, 1.0);
  const auto red = space.hue().classify(17);
  EXPECT_EQ(red.name, "Red");
  EXPECT_GT(red.degree, 0.5);
}

TEST(Classify, CrossoverGoesToEarlierTerm) {
  const auto& space = FuzzyColorSpace::default_space();
  const auto c = space.hue().classify(17.5);
  EXPECT_EQ(c.name, "Red");
  EXPECT_DOUBLE_EQ(c.degree, 0.5);
  const auto s = space.saturation().classify(20);
  EXPECT_EQ(s.name, "Low");
  EXPECT_DOUBLE_EQ(s.degree, 0.5);
}

TEST(Classify, DomainHandling) {
  const auto& sat = FuzzyColorSpace::default_space().saturation();
  EXPECT_EQ(sat.classify(100 + 5e-10).name, "High");
  EXPECT_EQ(sat.classify(-5e-10).name, "Low");
  EXPECT_THROW(sat.classify(100.1), DomainError);
  EXPECT_THROW(sat.classify(-1), DomainError);
  EXPECT_THROW(sat.classify(std::nan("")), DomainError);
}

TEST(Classify, Deterministic) {
  const auto& space = FuzzyColorSpace::default_space();
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> d(0, 255);
  for (int i = 0; i < 1000; ++i) {
    const double x = d(rng);
    const auto a = space.intensity().classify(x), b = space.intensity().classify(x);
    EXPECT_EQ(a.index, b.index);
    EXPECT_EQ(a.degree, b.degree);
  }
}

TEST(Variable, Validation) {
  const auto mf = MembershipFunction::trapezoidal(0, 0, 10, 10);
  EXPECT_THROW(LinguisticVariable("v", 0, 10, {}), ConfigError);
  EXPECT_THROW(LinguisticVariable("v", 10, 0, {{"a", mf}}), ConfigError);
  EXPECT_THROW(LinguisticVariable("v", 0, 10, {{"a", mf}, {"a", mf}}), ConfigError);
  // Gap between 4 and 6.
  EXPECT_THROW(LinguisticVariable("v", 0, 10,
                                  {{"a", MembershipFunction::trapezoidal(0, 0, 3, 4)},
                                   {"b", MembershipFunction::trapezoidal(6, 7, 10, 10)}}),
               ConfigError);
}

void expect_ruspini_sampled(const LinguisticVariable& v) {
  EXPECT_TRUE(v.is_ruspini_partition()) << v.name();
  for (int k = 0; k < 1000; ++k) {
    const double x = v.lo() + (v.hi() - v.lo()) * k / 999.0;
    double sum = 0.0;
    for (double m : v.memberships(x)) sum += m;
    ASSERT_NEAR(sum, 1.0, 1e-9) << v.name() << " at " << x;
  }
}

TEST(Variable, DefaultsAreRuspini) {
  const auto& space = FuzzyColorSpace::default_space();
  expect_ruspini_sampled(space.hue());
  expect_ruspini_sampled(space.saturation());
  expect_ruspini_sampled(space.intensity());
  expect_ruspini_sampled(default_intensity_variable());
}

TEST(Variable, NonRuspiniDetected) {
  const LinguisticVariable v("v", 0, 10,
                             {{"a", MembershipFunction::trapezoidal(0, 0, 6, 8)},
                              {"b", MembershipFunction::trapezoidal(4, 6, 10, 10)}});
  EXPECT_TRUE(v.covers_domain());
  EXPECT_FALSE(v.is_ruspini_partition());
}

}  // namespace
}  // namespace emocolor
