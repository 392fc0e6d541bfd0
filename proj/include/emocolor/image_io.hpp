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

// Image decoding, normalization to the 200x200 working raster, and PNG
// encoding. Backed by OpenCV.

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include "emocolor/error.hpp"
#include "emocolor/palette.hpp"

namespace emocolor {

enum class Resampling { kBilinear, kNearest, kArea };

inline Resampling parse_resampling(std::string_view name) {
  if (name == "bilinear") return Resampling::kBilinear;
  if (name == "nearest") return Resampling::kNearest;
  if (name == "area") return Resampling::kArea;
  throw ConfigError("unknown resampling filter '" + std::string(name) + "'");
}

inline std::string_view sniff_container(std::span<const std::uint8_t> bytes) {
  auto starts = [&](std::initializer_list<std::uint8_t> magic) {
    if (bytes.size() < magic.size()) return false;
    return std::equal(magic.begin(), magic.end(), bytes.begin());
  };
  if (starts({0x89, 'P', 'N', 'G', 0x0D, 0x0A, 0x1A, 0x0A})) return "png";
  if (starts({0xFF, 0xD8, 0xFF})) return "jpeg";
  if (starts({'G', 'I', 'F', '8'})) return "gif";
  if (starts({'B', 'M'})) return "bmp";
  if (starts({'R', 'I', 'F', 'F'})) return "riff";
  return "unknown";
}

namespace detail {

inline cv::Mat to_rgb8(const cv::Mat& decoded) {
  cv::Mat m8;
  if (decoded.depth() == CV_8U) {
    m8 = decoded;
  } else if (decoded.depth() == CV_16U) {
    decoded.convertTo(m8, CV_8U, 1.0 / 257.0);
  } else {
    decoded.convertTo(m8, CV_8U);
  }
  const int ch = m8.channels();
  cv::Mat color;  // BGR or BGRA
  if (ch == 1) {
    cv::cvtColor(m8, color, cv::COLOR_GRAY2BGR);
  } else if (ch == 2) {
    std::vector<cv::Mat> planes;
    cv::split(m8, planes);
    cv::merge(std::vector<cv::Mat>{planes[0], planes[0], planes[0], planes[1]}, color);
  } else {
    color = m8;
  }
  cv::Mat rgb(color.rows, color.cols, CV_8UC3);
  for (int y = 0; y < color.rows; ++y) {
    auto* dst = rgb.ptr<cv::Vec3b>(y);
    if (color.channels() == 4) {
      const auto* src = color.ptr<cv::Vec4b>(y);
      for (int x = 0; x < color.cols; ++x) {
        const int a = src[x][3];
        for (int c = 0; c < 3; ++c) {
          // Composite over white; BGR -> RGB.
          dst[x][2 - c] = static_cast<std::uint8_t>((src[x][c] * a + 255 * (255 - a) + 127) / 255);
        }
      }
    } else {
      const auto* src = color.ptr<cv::Vec3b>(y);
      for (int x = 0; x < color.cols; ++x) dst[x] = {src[x][2], src[x][1], src[x][0]};
    }
  }
  return rgb;
}

inline RgbImage from_mat(const cv::Mat& rgb) {
  RgbImage img{rgb.cols, rgb.rows, {}};
  img.pixels.reserve(std::size_t(rgb.rows) * rgb.cols);
  for (int y = 0; y < rgb.rows; ++y) {
    const auto* row = rgb.ptr<cv::Vec3b>(y);
    for (int x = 0; x < rgb.cols; ++x) img.pixels.push_back({row[x][0], row[x][1], row[x][2]});
  }
  return img;
}

inline cv::Mat to_mat_bgr(const RgbImage& img) {
  cv::Mat m(img.height, img.width, CV_8UC3);
  for (int y = 0; y < img.height; ++y) {
    auto* row = m.ptr<cv::Vec3b>(y);
    for (int x = 0; x < img.width; ++x) {
      const auto& p = img.at(x, y);
      row[x] = {p.b, p.g, p.r};
    }
  }
  return m;
}

inline int interpolation(Resampling r) {
  switch (r) {
    case Resampling::kNearest: return cv::INTER_NEAREST;
    case Resampling::kArea: return cv::INTER_AREA;
    case Resampling::kBilinear: break;
  }
  return cv::INTER_LINEAR;
}

}  // namespace detail

// Decodes to 8-bit RGB, alpha composited over white, grayscale expanded.
inline RgbImage decode_image(std::span<const std::uint8_t> bytes) {
  const auto container = sniff_container(bytes);
  if (bytes.empty()) throw InputError("cannot decode image: empty input");
  cv::Mat decoded;
  try {
    const cv::Mat buf(1, int(bytes.size()), CV_8U, const_cast<std::uint8_t*>(bytes.data()));
    decoded = cv::imdecode(buf, cv::IMREAD_UNCHANGED);
  } catch (const cv::Exception& e) {
    throw InputError("cannot decode image (" + std::to_string(bytes.size()) +
                     " bytes, container " + std::string(container) + "): " + e.what());
  }
  if (decoded.empty()) {
    throw InputError("cannot decode image (" + std::to_string(bytes.size()) +
                     " bytes, container " + std::string(container) + ")");
  }
  if (decoded.rows == 0 || decoded.cols == 0) throw InputError("zero-dimension image");
  return detail::from_mat(detail::to_rgb8(decoded));
}

inline RgbImage resize(const RgbImage& img, int width, int height,
                       Resampling filter = Resampling::kBilinear) {
  if (img.width <= 0 || img.height <= 0) throw InputError("zero-dimension image");
  cv::Mat src = detail::to_mat_bgr(img);
  cv::Mat dst;
  cv::resize(src, dst, cv::Size(width, height), 0, 0, detail::interpolation(filter));
  cv::Mat rgb;
  cv::cvtColor(dst, rgb, cv::COLOR_BGR2RGB);
  return detail::from_mat(rgb);
}

// decode -> composite -> RGB -> resize to 200x200 (aspect not preserved).
inline RgbImage preprocess(std::span<const std::uint8_t> bytes,
                           Resampling filter = Resampling::kBilinear) {
  return resize(decode_image(bytes), kNormalizedSide, kNormalizedSide, filter);
}

inline std::vector<std::uint8_t> encode_png(const RgbImage& img) {
  std::vector<std::uint8_t> out;
  cv::imencode(".png", detail::to_mat_bgr(img), out);
  return out;
}

inline std::vector<std::uint8_t> encode_jpeg(const RgbImage& img, int quality = 95) {
  std::vector<std::uint8_t> out;
  cv::imencode(".jpg", detail::to_mat_bgr(img), out, {cv::IMWRITE_JPEG_QUALITY, quality});
  return out;
}

}  // namespace emocolor
