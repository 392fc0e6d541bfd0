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

// HTTP(S) image fetching with a content-addressed on-disk cache. Cached
// entries are reused, so interrupted corpus runs resume where they stopped.

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <optional>
#include <string>
#include <vector>

#include "emocolor/error.hpp"
#include "emocolor/hash.hpp"
#include "httplib.h"

namespace emocolor {

inline constexpr const char* kCacheDirEnv = "EMOCOLOR_CACHE_DIR";

class FetchError : public Error {
 public:
  using Error::Error;
};

inline std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_file_atomic(const std::filesystem::path& path,
                              const std::vector<std::uint8_t>& bytes) {
  auto tmp = path;
  tmp += ".part";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + tmp.string() + "'");
    out.write(reinterpret_cast<const char*>(bytes.data()), std::streamsize(bytes.size()));
    if (!out) throw Error("failed writing '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, path);
}

struct ParsedUrl {
  std::string origin;  // scheme://host[:port]
  std::string path;    // includes query
};

inline ParsedUrl parse_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw FetchError("not an absolute URL: '" + url + "'");
  const auto scheme = url.substr(0, scheme_end);
  if (scheme != "http" && scheme != "https") throw FetchError("unsupported URL scheme '" + scheme + "'");
  const auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

class FetchClient {
 public:
  // Empty cache_dir falls back to $EMOCOLOR_CACHE_DIR, then ".emocolor-cache".
  explicit FetchClient(std::filesystem::path cache_dir = {}) : cache_dir_(std::move(cache_dir)) {
    if (cache_dir_.empty()) {
      const char* env = std::getenv(kCacheDirEnv);
      cache_dir_ = env && *env ? env : ".emocolor-cache";
    }
    std::filesystem::create_directories(cache_dir_);
  }

  const std::filesystem::path& cache_dir() const { return cache_dir_; }

  std::filesystem::path cache_path(const std::string& url) const {
    return cache_dir_ / sha256_hex(url);
  }

  bool cached(const std::string& url) const { return std::filesystem::exists(cache_path(url)); }

  std::vector<std::uint8_t> fetch(const std::string& url) {
    const auto path = cache_path(url);
    if (std::filesystem::exists(path)) return read_file_bytes(path);
    const auto parsed = parse_url(url);
    httplib::Client client(parsed.origin);
    client.set_follow_location(true);
    client.set_connection_timeout(10);
    client.set_read_timeout(30);
    auto res = client.Get(parsed.path);
    if (!res) {
      throw FetchError("GET " + url + " failed: " + httplib::to_string(res.error()));
    }
    if (res->status != 200) {
      throw FetchError("GET " + url + " returned HTTP " + std::to_string(res->status));
    }
    std::vector<std::uint8_t> bytes(res->body.begin(), res->body.end());
    write_file_atomic(path, bytes);
    return bytes;
  }

 private:
  std::filesystem::path cache_dir_;
};

}  // namespace emocolor
