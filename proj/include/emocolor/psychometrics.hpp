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

// Analysis of two-alternative forced choice (2AFC) trial data: participant
// screening, hit rates, the Spearman-Kärber estimator and a logistic
// psychometric fit.

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "emocolor/emotion.hpp"
#include "emocolor/error.hpp"

namespace emocolor {

struct TrialRecord {
  std::string trial;
  Emotion emotion = Emotion::kGratitude;
  double intensity_first = 0.0;   // model's predicted intensity, item 1
  double intensity_second = 0.0;  // item 2
  int choice = 0;                 // 0 = first item, 1 = second item

  // Choosing the item with the strictly higher predicted intensity. Equal
  // intensities never count as a hit.
  bool hit() const {
    return choice == 0 ? intensity_first > intensity_second
                       : intensity_second > intensity_first;
  }
  double difference() const { return std::abs(intensity_first - intensity_second); }
};

struct ParticipantRecord {
  std::string id;
  bool color_test_passed = true;
  std::vector<TrialRecord> trials;
};

class FitError : public AnalysisError {
 public:
  FitError(const std::string& message, std::vector<double> residuals)
      : AnalysisError(message), residuals_(std::move(residuals)) {}
  const std::vector<double>& residuals() const { return residuals_; }

 private:
  std::vector<double> residuals_;
};

// ---------------------------------------------------------------------------
// Trial file

namespace detail {

inline std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string f;
  while (std::getline(ss, f, '\t')) out.push_back(f);
  if (!line.empty() && line.back() == '\t') out.emplace_back();
  return out;
}

inline std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

}  // namespace detail

// Columns: participant, trial, emotion, intensity1, intensity2, choice
// (1|2|first|second), color_test (pass|fail|1|0|true|false). The first line
// is a header. Participants are returned sorted by id.
inline std::vector<ParticipantRecord> parse_trials(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw SchemaError("trial file is empty: missing header row");
  static const std::array<std::string, 7> kColumns = {
      "participant", "trial", "emotion", "intensity1", "intensity2", "choice", "color_test"};
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = detail::split_fields(line);
  std::array<std::size_t, 7> col{};
  for (std::size_t k = 0; k < kColumns.size(); ++k) {
    auto it = std::find_if(header.begin(), header.end(),
                           [&](const std::string& h) { return detail::lower(h) == kColumns[k]; });
    if (it == header.end()) throw SchemaError("trial file: missing column '" + kColumns[k] + "'");
    col[k] = std::size_t(it - header.begin());
  }

  std::map<std::string, ParticipantRecord> by_id;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = detail::split_fields(line);
    auto fail = [&](const std::string& why) {
      throw InputError("trial file line " + std::to_string(line_no) + ": " + why);
    };
    if (f.size() < header.size()) fail("too few fields");
    TrialRecord t;
    t.trial = f[col[1]];
    auto e = parse_emotion(f[col[2]]);
    if (!e) fail("unknown emotion '" + f[col[2]] + "'");
    t.emotion = *e;
    try {
      t.intensity_first = std::stod(f[col[3]]);
      t.intensity_second = std::stod(f[col[4]]);
    } catch (const std::exception&) {
      fail("intensity is not a number");
    }
    for (double v : {t.intensity_first, t.intensity_second}) {
      if (!(v >= 0.0 && v <= 1.0)) fail("intensity outside [0, 1]");
    }
    const auto choice = detail::lower(f[col[5]]);
    if (choice == "1" || choice == "first") {
      t.choice = 0;
    } else if (choice == "2" || choice == "second") {
      t.choice = 1;
    } else {
      fail("choice must be 1, 2, first or second");
    }
    const auto flag = detail::lower(f[col[6]]);
    bool passed = true;
    if (flag == "pass" || flag == "1" || flag == "true") {
      passed = true;
    } else if (flag == "fail" || flag == "0" || flag == "false") {
      passed = false;
    } else {
      fail("color_test must be pass or fail");
    }
    const auto& pid = f[col[0]];
    auto [it, inserted] = by_id.try_emplace(pid, ParticipantRecord{pid, passed, {}});
    if (!inserted && it->second.color_test_passed != passed) {
      fail("inconsistent color_test flag for participant '" + pid + "'");
    }
    for (const auto& prev : it->second.trials) {
      if (prev.trial == t.trial) fail("duplicate response to trial '" + t.trial + "'");
    }
    it->second.trials.push_back(std::move(t));
  }
  std::vector<ParticipantRecord> out;
  for (auto& [id, p] : by_id) out.push_back(std::move(p));
  return out;
}

inline std::vector<ParticipantRecord> load_trials(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open trial file '" + path + "'");
  return parse_trials(in);
}

// ---------------------------------------------------------------------------
// Participant screening

struct Exclusion {
  std::string id;
  enum class Reason { kColorTest, kOutlier } reason;
  double agreement = 0.0;  // fraction of trials matching the majority (outliers)
};

struct ScreeningResult {
  std::vector<ParticipantRecord> kept;
  std::vector<Exclusion> excluded;

  std::size_t count(Exclusion::Reason r) const {
    return std::size_t(std::count_if(excluded.begin(), excluded.end(),
                                     [&](const Exclusion& e) { return e.reason == r; }));
  }
};

// Drops color-test failures, then participants agreeing with the per-trial
// majority on fewer than half of their trials. The majority is taken once
// over all test-passing participants; a tied vote has no majority and
// counts as agreement for everyone.
inline ScreeningResult exclude_invalid(std::span<const ParticipantRecord> participants,
                                       double min_agreement = 0.5) {
  if (participants.size() < 2) throw AnalysisError("screening needs at least 2 participants");
  ScreeningResult out;
  std::vector<const ParticipantRecord*> passing;
  for (const auto& p : participants) {
    if (p.color_test_passed) {
      passing.push_back(&p);
    } else {
      out.excluded.push_back({p.id, Exclusion::Reason::kColorTest, 0.0});
    }
  }
  std::map<std::string, std::array<std::size_t, 2>> votes;
  for (const auto* p : passing) {
    for (const auto& t : p->trials) ++votes[t.trial][std::size_t(t.choice)];
  }
  for (const auto* p : passing) {
    std::size_t agree = 0;
    for (const auto& t : p->trials) {
      const auto& v = votes[t.trial];
      if (v[0] == v[1] || v[std::size_t(t.choice)] > v[1 - std::size_t(t.choice)]) ++agree;
    }
    const double frac = p->trials.empty() ? 0.0 : double(agree) / double(p->trials.size());
    if (frac < min_agreement) {
      out.excluded.push_back({p->id, Exclusion::Reason::kOutlier, frac});
    } else {
      out.kept.push_back(*p);
    }
  }
  if (out.kept.empty()) throw AnalysisError("every participant was excluded");
  return out;
}

// ---------------------------------------------------------------------------
// Hit rates

struct EmotionHitRate {
  Emotion emotion = Emotion::kGratitude;
  std::size_t hits = 0;
  std::size_t responses = 0;
  double rate = 0.0;
  double difference = 0.0;  // mean stimulus difference of the emotion's trials
};

struct HitRateTable {
  std::vector<EmotionHitRate> rows;  // emotion declaration order
  std::size_t participants = 0;
  std::size_t total_hits = 0;
  std::size_t total_responses = 0;

  double average() const { return double(total_hits) / double(total_responses); }
};

// With one trial per emotion per participant, responses equals the number
// of participants, so rate = hits / participants.
inline HitRateTable hit_rates(std::span<const ParticipantRecord> participants) {
  if (participants.empty()) throw AnalysisError("hit rates need at least one participant");
  HitRateTable table;
  table.participants = participants.size();
  std::array<EmotionHitRate, kEmotionCount> acc{};
  std::array<double, kEmotionCount> diff_sum{};
  for (const auto& p : participants) {
    for (const auto& t : p.trials) {
      auto& a = acc[std::size_t(t.emotion)];
      a.hits += t.hit() ? 1 : 0;
      ++a.responses;
      diff_sum[std::size_t(t.emotion)] += t.difference();
    }
  }
  for (auto e : kAllEmotions) {
    auto a = acc[std::size_t(e)];
    if (a.responses == 0) continue;
    a.emotion = e;
    a.rate = double(a.hits) / double(a.responses);
    a.difference = diff_sum[std::size_t(e)] / double(a.responses);
    table.total_hits += a.hits;
    table.total_responses += a.responses;
    table.rows.push_back(a);
  }
  if (table.total_responses == 0) throw AnalysisError("no responses to analyze");
  return table;
}

// Aggregate form: per-emotion hit counts with the stimulus difference of
// each emotion's pair and a common number of participants.
struct AggregateRow {
  Emotion emotion;
  std::size_t hits;
  double difference;
};

inline HitRateTable hit_rates_from_counts(std::span<const AggregateRow> rows,
                                          std::size_t participants) {
  if (participants == 0) throw AnalysisError("hit rates need at least one participant");
  HitRateTable table;
  table.participants = participants;
  for (const auto& r : rows) {
    if (r.hits > participants) throw AnalysisError("more hits than participants");
    table.rows.push_back({r.emotion, r.hits, participants, double(r.hits) / double(participants),
                          r.difference});
    table.total_hits += r.hits;
    table.total_responses += participants;
  }
  return table;
}

// ---------------------------------------------------------------------------
// Psychometric points and the Spearman-Kärber estimator

struct PsychometricPoint {
  double x = 0.0;  // stimulus difference
  double g = 0.0;  // observed proportion correct
  std::size_t n = 0;

  friend bool operator==(const PsychometricPoint&, const PsychometricPoint&) = default;
};

// Chance-corrected probability 2g - 1, clamped to [0, 1].
inline double transform_probability(double g) {
  return std::clamp(2.0 * g - 1.0, 0.0, 1.0);
}

// Sorted by x; points sharing an x are merged with an n-weighted g.
inline std::vector<PsychometricPoint> merge_points(std::vector<PsychometricPoint> pts) {
  std::stable_sort(pts.begin(), pts.end(),
                   [](const auto& a, const auto& b) { return a.x < b.x; });
  std::vector<PsychometricPoint> out;
  for (const auto& p : pts) {
    if (!out.empty() && std::abs(out.back().x - p.x) <= 1e-12) {
      auto& q = out.back();
      const std::size_t n = q.n + p.n;
      q.g = (q.g * double(q.n) + p.g * double(p.n)) / double(n);
      q.n = n;
    } else {
      out.push_back(p);
    }
  }
  return out;
}

inline std::vector<PsychometricPoint> points_from(const HitRateTable& table) {
  std::vector<PsychometricPoint> pts;
  for (const auto& r : table.rows) pts.push_back({r.difference, r.rate, r.responses});
  return merge_points(std::move(pts));
}

// Pooled-adjacent-violators: the weighted least-squares nondecreasing fit.
inline std::vector<double> pool_adjacent_violators(std::span<const double> values,
                                                   std::span<const double> weights) {
  if (values.size() != weights.size()) throw AnalysisError("PAVA: size mismatch");
  struct Block {
    double value, weight;
    std::size_t count;
  };
  std::vector<Block> blocks;
  for (std::size_t i = 0; i < values.size(); ++i) {
    blocks.push_back({values[i], weights[i], 1});
    while (blocks.size() > 1 && blocks[blocks.size() - 2].value > blocks.back().value) {
      const Block b = blocks.back();
      blocks.pop_back();
      Block& a = blocks.back();
      const double w = a.weight + b.weight;
      a.value = (a.value * a.weight + b.value * b.weight) / w;
      a.weight = w;
      a.count += b.count;
    }
  }
  std::vector<double> out;
  for (const auto& b : blocks) out.insert(out.end(), b.count, b.value);
  return out;
}

// mu = 1/2 * sum_{i=1}^{k+1} (p_i - p_{i-1}) (x_i + x_{i-1}) with
// p_0 = 0 at x_first and p_{k+1} = 1 at x_last. `x` must be strictly
// increasing inside [x_first, x_last].
inline double spearman_karber_mean(std::span<const double> x, std::span<const double> p,
                                   double x_first, double x_last) {
  if (x.size() != p.size()) throw AnalysisError("Spearman-Karber: size mismatch");
  if (!(x_first < x_last)) throw AnalysisError("Spearman-Karber: x_first must be < x_last");
  double prev_x = x_first, prev_p = 0.0, sum = 0.0;
  for (std::size_t i = 0; i <= x.size(); ++i) {
    const double xi = i < x.size() ? x[i] : x_last;
    const double pi = i < x.size() ? p[i] : 1.0;
    if (i < x.size()) {
      if (!(xi > prev_x || (i == 0 && xi >= prev_x))) {
        throw AnalysisError("Spearman-Karber: stimulus values must be strictly increasing");
      }
      if (xi > x_last) throw AnalysisError("Spearman-Karber: stimulus beyond x_last");
      if (!(pi >= 0.0 && pi <= 1.0)) throw AnalysisError("Spearman-Karber: probability outside [0, 1]");
    }
    sum += (pi - prev_p) * (xi + prev_x);
    prev_x = xi;
    prev_p = pi;
  }
  return 0.5 * sum;
}

enum class ProbabilityScale { kObserved, kTransformed };
enum class Monotonization { kNone, kPava };

struct SpearmanKarberOptions {
  double x_first = 0.0;
  double x_last = 1.0;
  ProbabilityScale scale = ProbabilityScale::kObserved;
  Monotonization monotonize = Monotonization::kNone;
};

struct SpearmanKarberResult {
  double mean = 0.0;
  std::vector<double> x;              // stimulus values, without augmentation
  std::vector<double> p;              // sequence entering the sum
  std::vector<double> p_monotonized;  // PAVA of the scaled sequence, for audit
};

inline SpearmanKarberResult spearman_karber(std::span<const PsychometricPoint> points,
                                            const SpearmanKarberOptions& opt = {}) {
  SpearmanKarberResult r;
  std::vector<double> w;
  for (const auto& pt : points) {
    if (!(pt.g >= 0.0 && pt.g <= 1.0)) throw AnalysisError("proportion outside [0, 1]");
    r.x.push_back(pt.x);
    r.p.push_back(opt.scale == ProbabilityScale::kTransformed ? transform_probability(pt.g) : pt.g);
    w.push_back(double(std::max<std::size_t>(pt.n, 1)));
  }
  r.p_monotonized = pool_adjacent_violators(r.p, w);
  if (opt.monotonize == Monotonization::kPava) r.p = r.p_monotonized;
  r.mean = spearman_karber_mean(r.x, r.p, opt.x_first, opt.x_last);
  return r;
}

// SE = sqrt( sum_i g_i (1 - g_i) / (n_i - 1) * (x_{i+1} - x_{i-1})^2 ),
// with x_0 and x_{k+1} the augmentation values.
inline double spearman_karber_se(std::span<const PsychometricPoint> points, double x_first = 0.0,
                                 double x_last = 1.0) {
  double sum = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& pt = points[i];
    if (pt.n < 2) throw AnalysisError("standard error needs at least 2 observations per level");
    if (i > 0 && !(pt.x > points[i - 1].x)) {
      throw AnalysisError("standard error: stimulus values must be strictly increasing");
    }
    const double lo = i == 0 ? x_first : points[i - 1].x;
    const double hi = i + 1 == points.size() ? x_last : points[i + 1].x;
    sum += pt.g * (1.0 - pt.g) / double(pt.n - 1) * (hi - lo) * (hi - lo);
  }
  return std::sqrt(sum);
}

// ---------------------------------------------------------------------------
// Logistic psychometric function, floor 0.5 and ceiling 1.0

inline double logistic_2afc(double x, double threshold, double slope) {
  return 0.5 + 0.5 / (1.0 + std::exp(-slope * (x - threshold)));
}

struct LogisticFit {
  double threshold = 0.0;
  double slope = 0.0;
  double sse = 0.0;
  std::vector<double> residuals;  // observed - fitted, per point
  int iterations = 0;
  bool at_boundary = false;
  std::string diagnostic;

  double operator()(double x) const { return logistic_2afc(x, threshold, slope); }

  std::vector<std::pair<double, double>> samples(double lo = 0.0, double hi = 1.0,
                                                 int count = 101) const {
    std::vector<std::pair<double, double>> out;
    for (int k = 0; k < count; ++k) {
      const double x = lo + (hi - lo) * k / (count - 1);
      out.emplace_back(x, (*this)(x));
    }
    return out;
  }
};

struct LogisticFitOptions {
  int max_iterations = 500;
  double max_slope = 1000.0;
  double tolerance = 1e-12;
};

// Levenberg-Marquardt least squares from threshold = median x, slope = 10.
inline LogisticFit fit_logistic(std::span<const PsychometricPoint> points,
                                const LogisticFitOptions& opt = {}) {
  std::vector<double> xs;
  for (const auto& p : points) xs.push_back(p.x);
  std::vector<double> distinct = xs;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (distinct.size() < 3) throw AnalysisError("logistic fit needs at least 3 distinct x values");

  std::vector<double> sorted = xs;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t m = sorted.size();
  const double median = m % 2 ? sorted[m / 2] : 0.5 * (sorted[m / 2 - 1] + sorted[m / 2]);

  auto residuals = [&](double t, double s) {
    std::vector<double> r;
    for (const auto& p : points) r.push_back(p.g - logistic_2afc(p.x, t, s));
    return r;
  };
  auto sse_of = [](const std::vector<double>& r) {
    return std::inner_product(r.begin(), r.end(), r.begin(), 0.0);
  };

  LogisticFit fit;
  fit.threshold = median;
  fit.slope = 10.0;

  const bool constant = std::all_of(points.begin(), points.end(),
                                    [&](const auto& p) { return p.g == points[0].g; });
  if (constant) {
    fit.at_boundary = true;
    // Put the threshold just outside the data so the steep curve sits on
    // its floor or ceiling at every observed x.
    const double g = points[0].g, margin = 40.0 / opt.max_slope;
    fit.slope = g > 0.5 && g < 1.0 ? 0.0 : opt.max_slope;
    fit.threshold = g >= 1.0 ? distinct.front() - margin : distinct.back() + margin;
    fit.residuals = residuals(fit.threshold, fit.slope);
    fit.sse = sse_of(fit.residuals);
    fit.diagnostic = "constant response proportion; slope is not identifiable";
    return fit;
  }

  double lambda = 1e-3;
  auto r = residuals(fit.threshold, fit.slope);
  double sse = sse_of(r);
  bool converged = false;
  for (fit.iterations = 0; fit.iterations < opt.max_iterations; ++fit.iterations) {
    // Normal equations for the 2x2 system.
    double a11 = 0, a12 = 0, a22 = 0, b1 = 0, b2 = 0;
    for (std::size_t i = 0; i < points.size(); ++i) {
      const double x = points[i].x;
      const double sig = 1.0 / (1.0 + std::exp(-fit.slope * (x - fit.threshold)));
      const double d = 0.5 * sig * (1.0 - sig);
      const double jt = -fit.slope * d;
      const double js = (x - fit.threshold) * d;
      a11 += jt * jt;
      a12 += jt * js;
      a22 += js * js;
      b1 += jt * r[i];
      b2 += js * r[i];
    }
    if (std::hypot(b1, b2) < 1e-14) {
      converged = true;
      break;
    }
    bool improved = false;
    while (lambda < 1e12) {
      const double m11 = a11 * (1 + lambda) + 1e-300, m22 = a22 * (1 + lambda) + 1e-300;
      const double det = m11 * m22 - a12 * a12;
      const double dt = (b1 * m22 - b2 * a12) / det;
      const double ds = (m11 * b2 - a12 * b1) / det;
      const double t_new = fit.threshold + dt;
      const double s_new = std::clamp(fit.slope + ds, -opt.max_slope, opt.max_slope);
      auto r_new = residuals(t_new, s_new);
      const double sse_new = sse_of(r_new);
      if (sse_new <= sse) {
        const double step = std::abs(dt) + std::abs(s_new - fit.slope) / (1 + std::abs(fit.slope));
        const double gain = sse - sse_new;
        fit.threshold = t_new;
        fit.slope = s_new;
        r = std::move(r_new);
        sse = sse_new;
        lambda = std::max(lambda / 10, 1e-12);
        improved = true;
        if (step < 1e-12 || gain <= opt.tolerance * std::max(sse, 1e-300)) converged = step < 1e-9;
        break;
      }
      lambda *= 10;
    }
    if (!improved) {
      converged = true;  // no descent direction left at this resolution
      break;
    }
    if (converged) break;
  }
  fit.residuals = r;
  fit.sse = sse;
  if (std::abs(fit.slope) >= opt.max_slope) {
    fit.at_boundary = true;
    fit.diagnostic = "slope reached the bound; the data look like a step function";
    return fit;
  }
  if (!converged) {
    throw FitError("logistic fit did not converge in " + std::to_string(opt.max_iterations) +
                       " iterations",
                   fit.residuals);
  }
  return fit;
}

// ---------------------------------------------------------------------------
// Full analysis

struct TwoAfcOptions {
  SpearmanKarberOptions sk;
  double min_agreement = 0.5;
};

struct TwoAfcReport {
  std::size_t participants_total = 0;
  ScreeningResult screening;
  HitRateTable hits;
  std::vector<PsychometricPoint> points;
  SpearmanKarberResult sk;
  SpearmanKarberResult sk_transformed_pava;  // alternative estimator, reported for audit
  double se = 0.0;
  std::optional<LogisticFit> fit;
  std::string fit_error;
};

inline TwoAfcReport analyze_points(const HitRateTable& hits, const TwoAfcOptions& opt = {}) {
  TwoAfcReport rep;
  rep.hits = hits;
  rep.points = points_from(hits);
  rep.sk = spearman_karber(rep.points, opt.sk);
  auto alt = opt.sk;
  alt.scale = ProbabilityScale::kTransformed;
  alt.monotonize = Monotonization::kPava;
  rep.sk_transformed_pava = spearman_karber(rep.points, alt);
  rep.se = spearman_karber_se(rep.points, opt.sk.x_first, opt.sk.x_last);
  try {
    rep.fit = fit_logistic(rep.points);
  } catch (const AnalysisError& e) {
    rep.fit_error = e.what();
  }
  return rep;
}

inline TwoAfcReport analyze_2afc(std::span<const ParticipantRecord> participants,
                                 const TwoAfcOptions& opt = {}) {
  auto screening = exclude_invalid(participants, opt.min_agreement);
  auto rep = analyze_points(hit_rates(screening.kept), opt);
  rep.participants_total = participants.size();
  rep.screening = std::move(screening);
  return rep;
}

}  // namespace emocolor
