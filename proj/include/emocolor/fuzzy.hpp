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

// Fuzzy-set primitives: piecewise-linear membership functions, linguistic
// variables, hedges and alpha-cuts.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "emocolor/error.hpp"

namespace emocolor {

class MembershipFunction {
 public:
  enum class Shape { kTriangular, kTrapezoidal };

  // Breakpoints of cyclic functions may wrap past the period (for example
  // 310, 350, 10, 25 on a 360 degree hue circle); they are unwrapped so that
  // a <= b <= c <= d holds on the stored values.
  static MembershipFunction triangular(double a, double b, double c,
                                       std::optional<double> period = {}) {
    return MembershipFunction(Shape::kTriangular, {a, b, b, c}, period);
  }
  static MembershipFunction trapezoidal(double a, double b, double c, double d,
                                        std::optional<double> period = {}) {
    return MembershipFunction(Shape::kTrapezoidal, {a, b, c, d}, period);
  }

  Shape shape() const { return shape_; }
  bool cyclic() const { return period_.has_value(); }
  std::optional<double> period() const { return period_; }

  // Unwrapped breakpoints; triangular functions report b twice.
  const std::array<double, 4>& breakpoints() const { return bp_; }

  double operator()(double x) const {
    if (!period_) return eval_linear(x);
    const double p = *period_;
    double r = std::fmod(x, p);
    if (r < 0) r += p;
    // The unwrapped support may extend beyond [0, p] on either side.
    double best = 0.0;
    for (double shift = -p; shift <= p; shift += p) {
      best = std::max(best, eval_linear(r + shift));
    }
    return best;
  }

  // Peak-membership point (middle of the kernel), reduced into the period.
  double kernel_center() const {
    double c = 0.5 * (bp_[1] + bp_[2]);
    if (period_) {
      c = std::fmod(c, *period_);
      if (c < 0) c += *period_;
    }
    return c;
  }

  friend bool operator==(const MembershipFunction&,
                         const MembershipFunction&) = default;

 private:
  MembershipFunction(Shape shape, std::array<double, 4> bp,
                     std::optional<double> period)
      : shape_(shape), bp_(bp), period_(period) {
    for (double v : bp_) {
      if (!std::isfinite(v)) throw ConfigError("membership breakpoint is not finite");
    }
    if (period_) {
      if (!(*period_ > 0)) throw ConfigError("cyclic period must be positive");
      for (std::size_t i = 1; i < bp_.size(); ++i) {
        while (bp_[i] < bp_[i - 1]) bp_[i] += *period_;
      }
      if (shape_ == Shape::kTriangular) bp_[2] = bp_[1];
      if (bp_[3] - bp_[0] > *period_) {
        throw ConfigError("cyclic membership support exceeds one period");
      }
    }
    if (!(bp_[0] <= bp_[1] && bp_[1] <= bp_[2] && bp_[2] <= bp_[3])) {
      throw ConfigError("membership breakpoints must be non-decreasing");
    }
  }

  double eval_linear(double x) const {
    const auto [a, b, c, d] = bp_;
    if (x < a || x > d) return 0.0;
    if (x >= b && x <= c) return 1.0;
    if (x < b) return (x - a) / (b - a);
    return (d - x) / (d - c);
  }

  Shape shape_;
  std::array<double, 4> bp_;
  std::optional<double> period_;
};

struct Term {
  std::string name;
  MembershipFunction mf;

  friend bool operator==(const Term&, const Term&) = default;
};

struct Classification {
  std::size_t index = 0;
  std::string_view name;
  double degree = 0.0;
};

class LinguisticVariable {
 public:
  static constexpr double kBoundsSlack = 1e-9;

  LinguisticVariable(std::string name, double lo, double hi, std::vector<Term> terms)
      : name_(std::move(name)), lo_(lo), hi_(hi), terms_(std::move(terms)) {
    if (!(lo_ < hi_)) throw ConfigError(name_ + ": empty domain");
    if (terms_.empty()) throw ConfigError(name_ + ": no terms");
    std::set<std::string> seen;
    for (const auto& t : terms_) {
      if (!seen.insert(t.name).second) {
        throw ConfigError(name_ + ": duplicate term '" + t.name + "'");
      }
    }
    if (!covers_domain()) {
      throw ConfigError(name_ + ": terms leave part of the domain uncovered");
    }
  }

  const std::string& name() const { return name_; }
  double lo() const { return lo_; }
  double hi() const { return hi_; }
  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }

  std::optional<std::size_t> find(std::string_view term) const {
    for (std::size_t i = 0; i < terms_.size(); ++i) {
      if (terms_[i].name == term) return i;
    }
    return std::nullopt;
  }

  std::vector<double> memberships(double x) const {
    std::vector<double> out;
    out.reserve(terms_.size());
    for (const auto& t : terms_) out.push_back(t.mf(x));
    return out;
  }

  // Argmax term; ties go to the term declared first.
  Classification classify(double x) const {
    x = clamp_to_domain(x);
    Classification best{0, terms_[0].name, terms_[0].mf(x)};
    for (std::size_t i = 1; i < terms_.size(); ++i) {
      const double mu = terms_[i].mf(x);
      if (mu > best.degree) best = {i, terms_[i].name, mu};
    }
    return best;
  }

  double clamp_to_domain(double x) const {
    if (!std::isfinite(x) || x < lo_ - kBoundsSlack || x > hi_ + kBoundsSlack) {
      throw DomainError(name_ + ": value " + std::to_string(x) +
                        " outside domain [" + std::to_string(lo_) + ", " +
                        std::to_string(hi_) + "]");
    }
    return std::clamp(x, lo_, hi_);
  }

  // Every membership function is linear between consecutive breakpoints, so
  // evaluating at the breakpoints and the midpoints between them is exact.
  bool covers_domain() const {
    for (double x : probe_points()) {
      double m = 0.0;
      for (const auto& t : terms_) m = std::max(m, t.mf(x));
      if (!(m > 0.0)) return false;
    }
    return true;
  }

  bool is_ruspini_partition(double tolerance = 1e-9) const {
    for (double x : probe_points()) {
      double sum = 0.0;
      for (const auto& t : terms_) sum += t.mf(x);
      if (std::abs(sum - 1.0) > tolerance) return false;
    }
    return true;
  }

  friend bool operator==(const LinguisticVariable&,
                         const LinguisticVariable&) = default;

 private:
  std::vector<double> probe_points() const {
    std::vector<double> knots{lo_, hi_};
    for (const auto& t : terms_) {
      for (double v : t.mf.breakpoints()) {
        if (auto p = t.mf.period()) {
          v = std::fmod(v, *p);
          if (v < 0) v += *p;
        }
        if (v >= lo_ && v <= hi_) knots.push_back(v);
      }
    }
    std::sort(knots.begin(), knots.end());
    knots.erase(std::unique(knots.begin(), knots.end()), knots.end());
    std::vector<double> probes;
    for (std::size_t i = 0; i < knots.size(); ++i) {
      probes.push_back(knots[i]);
      if (i + 1 < knots.size()) probes.push_back(0.5 * (knots[i] + knots[i + 1]));
    }
    return probes;
  }

  std::string name_;
  double lo_;
  double hi_;
  std::vector<Term> terms_;
};

// ---------------------------------------------------------------------------
// Hedges

enum class Hedge { kVery, kMoreOrLess, kNot };

inline std::string_view hedge_name(Hedge h) {
  switch (h) {
    case Hedge::kVery: return "very";
    case Hedge::kMoreOrLess: return "more-or-less";
    case Hedge::kNot: return "not";
  }
  return "?";
}

inline std::optional<Hedge> parse_hedge(std::string_view token) {
  if (token == "very") return Hedge::kVery;
  if (token == "more-or-less" || token == "more_or_less") return Hedge::kMoreOrLess;
  if (token == "not") return Hedge::kNot;
  return std::nullopt;
}

inline double apply_hedge(Hedge h, double u) {
  if (!(u >= 0.0 && u <= 1.0)) {
    throw DomainError("hedge input " + std::to_string(u) + " outside [0, 1]");
  }
  switch (h) {
    case Hedge::kVery: return u * u;
    case Hedge::kMoreOrLess: return std::sqrt(u);
    case Hedge::kNot: return 1.0 - u;
  }
  return u;
}

// Hedges in written order: {not, very} means "not very", applied as
// not(very(u)).
inline double apply_hedges(std::span<const Hedge> written, double u) {
  if (!(u >= 0.0 && u <= 1.0)) {
    throw DomainError("hedge input " + std::to_string(u) + " outside [0, 1]");
  }
  for (auto it = written.rbegin(); it != written.rend(); ++it) u = apply_hedge(*it, u);
  return u;
}

// ---------------------------------------------------------------------------
// Alpha-cuts over discrete fuzzy subsets.

inline void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw DomainError("alpha " + std::to_string(alpha) + " outside (0, 1]");
  }
}

template <typename Key>
std::set<Key> alpha_cut(const std::map<Key, double>& memberships, double alpha) {
  check_alpha(alpha);
  std::set<Key> out;
  for (const auto& [k, mu] : memberships) {
    if (mu >= alpha) out.insert(k);
  }
  return out;
}

// Sampled subset given as (x, mu) pairs; returns the x values in input order.
inline std::vector<double> alpha_cut(std::span<const std::pair<double, double>> samples,
                                     double alpha) {
  check_alpha(alpha);
  std::vector<double> out;
  for (const auto& [x, mu] : samples) {
    if (mu >= alpha) out.push_back(x);
  }
  return out;
}

template <typename Key>
std::map<Key, double> fuzzy_union(const std::map<Key, double>& a,
                                  const std::map<Key, double>& b) {
  std::map<Key, double> out = a;
  for (const auto& [k, mu] : b) out[k] = std::max(out[k], mu);
  return out;
}

template <typename Key>
std::map<Key, double> fuzzy_intersection(const std::map<Key, double>& a,
                                         const std::map<Key, double>& b) {
  std::map<Key, double> out;
  for (const auto& [k, mu] : a) {
    auto it = b.find(k);
    out[k] = std::min(mu, it == b.end() ? 0.0 : it->second);
  }
  for (const auto& [k, mu] : b) out.try_emplace(k, 0.0);
  return out;
}

}  // namespace emocolor
