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

// Result artifacts: HSI attribute distributions, the emotion x basic-color
// matrix, heatmap and palette-strip images, and 2AFC analysis reports.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include "emocolor/color.hpp"
#include "emocolor/knowledge_base.hpp"
#include "emocolor/psychometrics.hpp"
#include "json.hpp"

namespace emocolor {

struct AttributeDistribution {
  std::array<double, 8> hue{};
  std::array<double, 3> saturation{};
  std::array<double, 5> intensity{};
};

// Percent of the palette's frequency mass carried by each term.
inline AttributeDistribution attribute_distribution(const EmotionPalette& p) {
  AttributeDistribution d;
  double total = 0;
  for (const auto& e : p.entries) {
    d.hue[std::size_t(e.color.hue)] += double(e.frequency);
    d.saturation[std::size_t(e.color.saturation)] += double(e.frequency);
    d.intensity[std::size_t(e.color.intensity)] += double(e.frequency);
    total += double(e.frequency);
  }
  if (total > 0) {
    for (auto& v : d.hue) v *= 100.0 / total;
    for (auto& v : d.saturation) v *= 100.0 / total;
    for (auto& v : d.intensity) v *= 100.0 / total;
  }
  return d;
}

inline std::string fmt(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

inline std::string attribute_distribution_tsv(const KnowledgeBase& kb) {
  std::string out = "emotion\tattribute\tterm\tpercent\n";
  for (auto e : kAllEmotions) {
    const auto d = attribute_distribution(kb.palette(e));
    const std::string name(name_of(e));
    for (std::size_t k = 0; k < d.hue.size(); ++k)
      out += name + "\tHue\t" + std::string(kHueTermNames[k]) + "\t" + fmt(d.hue[k], 2) + "\n";
    for (std::size_t k = 0; k < d.saturation.size(); ++k)
      out += name + "\tSaturation\t" + std::string(kSaturationTermNames[k]) + "\t" +
             fmt(d.saturation[k], 2) + "\n";
    for (std::size_t k = 0; k < d.intensity.size(); ++k)
      out += name + "\tIntensity\t" + std::string(kIntensityTermNames[k]) + "\t" +
             fmt(d.intensity[k], 2) + "\n";
  }
  return out;
}

// Rows are emotions, columns the 11 basic colors; values in percent.
inline std::string basic_matrix_tsv(const KnowledgeBase& kb, int decimals = 1) {
  std::string out = "emotion";
  for (auto n : kBasicColorNames) out += "\t" + std::string(n);
  out += "\n";
  for (auto e : kAllEmotions) {
    out += std::string(name_of(e));
    for (double v : kb.basic_row(e)) out += "\t" + fmt(v, decimals);
    out += "\n";
  }
  return out;
}

inline std::string emotion_palettes_tsv(const KnowledgeBase& kb) {
  std::string out = "emotion\trank\thue\tsaturation\tintensity\tfrequency\tshare\n";
  for (auto e : kAllEmotions) {
    std::size_t rank = 1;
    for (const auto& entry : kb.palette(e).entries) {
      out += std::string(name_of(e)) + "\t" + std::to_string(rank++) + "\t" +
             std::string(name_of(entry.color.hue)) + "\t" +
             std::string(name_of(entry.color.saturation)) + "\t" +
             std::string(name_of(entry.color.intensity)) + "\t" +
             std::to_string(entry.frequency) + "\t" + fmt(entry.share, 6) + "\n";
    }
  }
  return out;
}

namespace detail {

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

inline void write_png(const std::filesystem::path& path, const cv::Mat& bgr) {
  if (!cv::imwrite(path.string(), bgr)) throw Error("cannot write '" + path.string() + "'");
}

inline cv::Scalar bgr(RgbPixel p) { return cv::Scalar(p.b, p.g, p.r); }

}  // namespace detail

// White-to-dark-red scale, column maximum at 100 percent.
inline cv::Mat render_heatmap(const KnowledgeBase& kb) {
  const int label_w = 110, cell_w = 64, cell_h = 34, header_h = 40;
  cv::Mat img(header_h + cell_h * int(kEmotionCount), label_w + cell_w * int(kBasicColorCount),
              CV_8UC3, cv::Scalar(255, 255, 255));
  for (std::size_t c = 0; c < kBasicColorCount; ++c) {
    cv::putText(img, std::string(kBasicColorNames[c]), {label_w + int(c) * cell_w + 4, 26},
                cv::FONT_HERSHEY_SIMPLEX, 0.4, {0, 0, 0}, 1, cv::LINE_AA);
  }
  for (std::size_t r = 0; r < kEmotionCount; ++r) {
    const int y = header_h + int(r) * cell_h;
    cv::putText(img, std::string(kEmotionNames[r]), {6, y + 22}, cv::FONT_HERSHEY_SIMPLEX, 0.45,
                {0, 0, 0}, 1, cv::LINE_AA);
    for (std::size_t c = 0; c < kBasicColorCount; ++c) {
      const double v = std::clamp(kb.basic[r][c] / 100.0, 0.0, 1.0);
      const double t = std::sqrt(v);
      const cv::Scalar fill(255 * (1 - t), 255 * (1 - t), 255 - 115 * t);
      const cv::Rect cell(label_w + int(c) * cell_w, y, cell_w - 1, cell_h - 1);
      cv::rectangle(img, cell, fill, cv::FILLED);
      cv::putText(img, fmt(kb.basic[r][c], 1), {cell.x + 14, y + 22}, cv::FONT_HERSHEY_SIMPLEX,
                  0.4, t > 0.6 ? cv::Scalar(255, 255, 255) : cv::Scalar(0, 0, 0), 1, cv::LINE_AA);
    }
  }
  return img;
}

// One strip per emotion; swatch widths proportional to retained frequency,
// colored at each fuzzy color's kernel point.
inline cv::Mat render_palette_strips(const KnowledgeBase& kb, const FuzzyColorSpace& space) {
  const int label_w = 110, strip_w = 600, strip_h = 36;
  cv::Mat img(strip_h * int(kEmotionCount), label_w + strip_w, CV_8UC3, cv::Scalar(255, 255, 255));
  for (auto e : kAllEmotions) {
    const int y = int(e) * strip_h;
    cv::putText(img, std::string(name_of(e)), {6, y + 23}, cv::FONT_HERSHEY_SIMPLEX, 0.45,
                {0, 0, 0}, 1, cv::LINE_AA);
    const auto& p = kb.palette(e);
    double total = 0;
    for (const auto& entry : p.entries) total += double(entry.frequency);
    double x = label_w;
    for (const auto& entry : p.entries) {
      const double w = strip_w * double(entry.frequency) / total;
      const auto rgb = hsi_to_rgb(space.representative(entry.color));
      cv::rectangle(img, cv::Rect(int(x), y + 2, std::max(1, int(x + w) - int(x)), strip_h - 4),
                    detail::bgr(rgb), cv::FILLED);
      x += w;
    }
  }
  return img;
}

inline std::vector<std::filesystem::path> write_kb_report(const KnowledgeBase& kb,
                                                          const FuzzyColorSpace& space,
                                                          const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written = {
      dir / "hsi_distribution.tsv", dir / "basic_colors.tsv", dir / "emotion_palettes.tsv",
      dir / "heatmap.png", dir / "palette_strips.png"};
  detail::write_text(written[0], attribute_distribution_tsv(kb));
  detail::write_text(written[1], basic_matrix_tsv(kb));
  detail::write_text(written[2], emotion_palettes_tsv(kb));
  detail::write_png(written[3], render_heatmap(kb));
  detail::write_png(written[4], render_palette_strips(kb, space));
  return written;
}

// ---------------------------------------------------------------------------
// 2AFC

inline nlohmann::json to_json(const TwoAfcReport& r) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& h : r.hits.rows) {
    rows.push_back({{"emotion", name_of(h.emotion)},
                    {"hits", h.hits},
                    {"responses", h.responses},
                    {"rate", h.rate},
                    {"difference", h.difference}});
  }
  nlohmann::json excluded = nlohmann::json::array();
  for (const auto& x : r.screening.excluded) {
    excluded.push_back({{"participant", x.id},
                        {"reason", x.reason == Exclusion::Reason::kColorTest ? "color_test" : "outlier"},
                        {"agreement", x.agreement}});
  }
  nlohmann::json points = nlohmann::json::array();
  for (const auto& p : r.points) points.push_back({{"x", p.x}, {"g", p.g}, {"n", p.n}});
  nlohmann::json j = {
      {"participants_total", r.participants_total},
      {"participants_analyzed", r.hits.participants},
      {"excluded", excluded},
      {"emotions", rows},
      {"total_hits", r.hits.total_hits},
      {"total_responses", r.hits.total_responses},
      {"average_hit_rate", r.hits.average()},
      {"points", points},
      {"spearman_karber",
       {{"mean", r.sk.mean},
        {"x", r.sk.x},
        {"p", r.sk.p},
        {"p_monotonized", r.sk.p_monotonized},
        {"se", r.se},
        {"mean_transformed_pava", r.sk_transformed_pava.mean}}}};
  if (r.fit) {
    j["logistic"] = {{"threshold", r.fit->threshold},
                     {"slope", r.fit->slope},
                     {"sse", r.fit->sse},
                     {"residuals", r.fit->residuals},
                     {"at_boundary", r.fit->at_boundary},
                     {"diagnostic", r.fit->diagnostic}};
  } else {
    j["logistic"] = {{"error", r.fit_error}};
  }
  return j;
}

inline std::string format_sequence(const std::vector<double>& v, int decimals = 4) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? " " : "") + fmt(v[i], decimals);
  return out;
}

inline std::string to_text(const TwoAfcReport& r) {
  std::string out;
  if (r.participants_total) {
    out += "participants: " + std::to_string(r.participants_total) + " total, " +
           std::to_string(r.screening.count(Exclusion::Reason::kColorTest)) +
           " failed color test, " + std::to_string(r.screening.count(Exclusion::Reason::kOutlier)) +
           " outliers, " + std::to_string(r.hits.participants) + " analyzed\n";
  }
  out += "emotion\thits\thit rate\tdifference\n";
  for (const auto& h : r.hits.rows) {
    out += std::string(name_of(h.emotion)) + "\t" + std::to_string(h.hits) + "\t" + fmt(h.rate, 2) +
           "\t" + fmt(h.difference, 2) + "\n";
  }
  out += "average hit rate: " + fmt(r.hits.average(), 4) + " (" + std::to_string(r.hits.total_hits) +
         "/" + std::to_string(r.hits.total_responses) + ")\n";
  out += "stimulus levels x: " + format_sequence(r.sk.x) + "\n";
  out += "sequence used p: " + format_sequence(r.sk.p) + "\n";
  out += "PAVA-monotonized p: " + format_sequence(r.sk.p_monotonized) + "\n";
  out += "Spearman-Karber mean: " + fmt(r.sk.mean, 4) + "\n";
  out += "Spearman-Karber SE: " + fmt(r.se, 4) + "\n";
  out += "mean with 2g-1 transform and PAVA: " + fmt(r.sk_transformed_pava.mean, 4) + "\n";
  if (r.fit) {
    out += "logistic fit: threshold " + fmt(r.fit->threshold, 4) + ", slope " +
           fmt(r.fit->slope, 4) + ", sse " + fmt(r.fit->sse, 6);
    if (r.fit->at_boundary) out += " [boundary: " + r.fit->diagnostic + "]";
    out += "\n";
  } else {
    out += "logistic fit failed: " + r.fit_error + "\n";
  }
  return out;
}

inline std::string plot_data_tsv(const TwoAfcReport& r) {
  std::string out = "x\tobserved_g\tfitted_g\n";
  for (const auto& p : r.points) {
    out += fmt(p.x, 4) + "\t" + fmt(p.g, 6) + "\t" + (r.fit ? fmt((*r.fit)(p.x), 6) : "") + "\n";
  }
  return out;
}

inline cv::Mat render_psychometric_chart(const TwoAfcReport& r) {
  const int w = 640, h = 420, m = 50;
  cv::Mat img(h, w, CV_8UC3, cv::Scalar(255, 255, 255));
  auto px = [&](double x, double g) {
    return cv::Point(m + int((w - 2 * m) * x), h - m - int((h - 2 * m) * (g - 0.4) / 0.6));
  };
  cv::line(img, px(0, 0.4), px(1, 0.4), {0, 0, 0});
  cv::line(img, px(0, 0.4), px(0, 1.0), {0, 0, 0});
  for (double g : {0.5, 0.75, 1.0}) {
    cv::line(img, px(0, g), px(1, g), {220, 220, 220});
    cv::putText(img, fmt(g, 2), px(0, g) + cv::Point(-40, 4), cv::FONT_HERSHEY_SIMPLEX, 0.4,
                {0, 0, 0}, 1, cv::LINE_AA);
  }
  cv::putText(img, "stimulus difference", {w / 2 - 70, h - 12}, cv::FONT_HERSHEY_SIMPLEX, 0.45,
              {0, 0, 0}, 1, cv::LINE_AA);
  if (r.fit) {
    const auto s = r.fit->samples();
    for (std::size_t i = 1; i < s.size(); ++i) {
      cv::line(img, px(s[i - 1].first, std::max(0.4, s[i - 1].second)),
               px(s[i].first, std::max(0.4, s[i].second)), {200, 90, 30}, 2, cv::LINE_AA);
    }
  }
  for (const auto& p : r.points) {
    cv::circle(img, px(p.x, std::max(0.4, p.g)), 5, {30, 30, 200}, cv::FILLED, cv::LINE_AA);
  }
  const auto mu = px(std::clamp(r.sk.mean, 0.0, 1.0), 0.4);
  cv::line(img, mu, {mu.x, px(0, 1.0).y}, {0, 150, 0}, 1, cv::LINE_AA);
  cv::putText(img, "SK mean " + fmt(r.sk.mean, 3), {mu.x + 4, px(0, 1.0).y + 14},
              cv::FONT_HERSHEY_SIMPLEX, 0.4, {0, 120, 0}, 1, cv::LINE_AA);
  return img;
}

inline std::vector<std::filesystem::path> write_2afc_report(const TwoAfcReport& r,
                                                            const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written = {dir / "2afc_report.json", dir / "2afc_report.txt",
                                                dir / "psychometric.tsv", dir / "psychometric.png"};
  detail::write_text(written[0], to_json(r).dump(2) + "\n");
  detail::write_text(written[1], to_text(r));
  detail::write_text(written[2], plot_data_tsv(r));
  detail::write_png(written[3], render_psychometric_chart(r));
  return written;
}

}  // namespace emocolor
